#include "dq/table.hpp"

#include <cctype>
#include <utility>

namespace dq {

std::optional<std::size_t> Table::column_index(std::string_view column) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == column) return i;
    return std::nullopt;
}

const Table* Dataset::find_table(std::string_view name) const {
    for (const auto& t : tables)
        if (t.name == name) return &t;
    return nullptr;
}

InferredType infer_cell_type(std::string_view raw) {
    if (parse_integer(raw)) {
        bool leading_zero = raw.size() > 1 && raw.front() == '0';
        return {ValueType::integer, leading_zero};
    }
    if (parse_float(raw)) return {ValueType::floating, false};
    if (parse_boolean(raw)) return {ValueType::boolean, false};
    if (parse_date(raw)) return {ValueType::date, false};
    return {ValueType::text, false};
}

namespace {

std::optional<Value> parse_id_list(std::string_view raw) {
    std::vector<std::string> elements;
    std::size_t start = 0;
    for (;;) {
        std::size_t sep = raw.find(';', start);
        std::string_view element =
            sep == std::string_view::npos ? raw.substr(start) : raw.substr(start, sep - start);
        if (element.empty()) return std::nullopt;  // malformed list
        elements.emplace_back(element);
        if (sep == std::string_view::npos) break;
        start = sep + 1;
    }
    return Value{std::move(elements)};
}

std::optional<Value> parse_declared(std::string_view raw, ValueType type) {
    switch (type) {
        case ValueType::integer:
            if (auto v = parse_integer(raw)) return Value{*v};
            return std::nullopt;
        case ValueType::floating:
            if (auto v = parse_float(raw)) return Value{*v};
            return std::nullopt;
        case ValueType::boolean:
            if (auto v = parse_boolean(raw)) return Value{*v};
            return std::nullopt;
        case ValueType::date:
            if (auto v = parse_date(raw)) return Value{*v};
            return std::nullopt;
        case ValueType::text:
            return Value{std::string(raw)};
        case ValueType::id_list:
            return parse_id_list(raw);
    }
    return std::nullopt;
}

Cell make_cell(std::string raw, const NullPolicy& nulls, const ColumnConstraint* col) {
    Cell cell;
    cell.raw = std::move(raw);
    if (nulls.is_null(cell.raw)) {
        cell.is_null = true;
        return cell;
    }
    InferredType inferred = infer_cell_type(cell.raw);
    cell.inferred_type = inferred.type;
    cell.leading_zero_numeric = inferred.leading_zero_numeric;
    if (col) {
        cell.parsed = parse_declared(cell.raw, col->declared_type);
        cell.parse_failed = !cell.parsed.has_value();
    } else {
        cell.parsed = parse_declared(cell.raw, inferred.type);  // total by construction
    }
    return cell;
}

// One CSV record; returns false at end of input with nothing consumed.
bool read_record(std::string_view text, std::size_t& at, std::vector<std::string>& fields) {
    fields.clear();
    if (at >= text.size()) return false;
    std::string field;
    for (;;) {
        field.clear();
        if (at < text.size() && text[at] == '"') {
            ++at;
            for (;;) {
                if (at >= text.size()) throw TableLoadError("unterminated quoted field");
                char c = text[at++];
                if (c == '"') {
                    if (at < text.size() && text[at] == '"') {
                        field.push_back('"');
                        ++at;
                    } else {
                        break;
                    }
                } else {
                    field.push_back(c);
                }
            }
            if (at < text.size() && text[at] != ',' && text[at] != '\n' && text[at] != '\r')
                throw TableLoadError("malformed quoted field: text after closing quote");
        } else {
            while (at < text.size() && text[at] != ',' && text[at] != '\n' && text[at] != '\r')
                field.push_back(text[at++]);
        }
        fields.push_back(std::move(field));
        if (at >= text.size()) return true;
        char c = text[at];
        if (c == ',') {
            ++at;
            continue;
        }
        if (c == '\r') {
            ++at;
            if (at < text.size() && text[at] == '\n') ++at;
            return true;
        }
        // '\n'
        ++at;
        return true;
    }
}

}  // namespace

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> records;
    std::size_t at = 0;
    std::vector<std::string> fields;
    while (read_record(text, at, fields)) records.push_back(fields);
    return records;
}

Table load_table(std::string_view csv_text, std::string name, const NullPolicy& nulls,
                 const TableConstraint* schema) {
    Table table;
    table.name = std::move(name);

    std::size_t at = 0;
    std::vector<std::string> fields;
    if (!read_record(csv_text, at, fields))
        throw TableLoadError("table \"" + table.name + "\": empty input, header row required");
    table.header = fields;

    if (schema) {
        std::vector<std::string> expected;
        for (const auto& col : schema->columns) expected.push_back(col.name);
        if (table.header != expected) {
            std::string msg = "table \"" + table.name + "\": header mismatch; expected [";
            for (std::size_t i = 0; i < expected.size(); ++i)
                msg += (i ? ", " : "") + expected[i];
            msg += "] got [";
            for (std::size_t i = 0; i < table.header.size(); ++i)
                msg += (i ? ", " : "") + table.header[i];
            msg += "]";
            throw TableLoadError(msg);
        }
    }

    while (read_record(csv_text, at, fields)) {
        if (fields.size() != table.header.size())
            throw TableLoadError("table \"" + table.name + "\": data row " +
                                 std::to_string(table.rows.size()) + " has " +
                                 std::to_string(fields.size()) + " fields, expected " +
                                 std::to_string(table.header.size()));
        std::vector<Cell> row;
        row.reserve(fields.size());
        for (std::size_t i = 0; i < fields.size(); ++i) {
            const ColumnConstraint* col = schema ? &schema->columns[i] : nullptr;
            row.push_back(make_cell(std::move(fields[i]), nulls, col));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

namespace {

bool needs_quoting(const std::string& field) {
    return field.find_first_of(",\"\r\n") != std::string::npos;
}

void append_field(std::string& out, const std::string& field) {
    if (!needs_quoting(field)) {
        out += field;
        return;
    }
    out.push_back('"');
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
}

}  // namespace

std::string serialize_table(const Table& table) {
    std::string out;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i) out.push_back(',');
        append_field(out, table.header[i]);
    }
    out.push_back('\n');
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out.push_back(',');
            append_field(out, row[i].raw);
        }
        out.push_back('\n');
    }
    return out;
}

}  // namespace dq
