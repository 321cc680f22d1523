#include "dq/schema.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

namespace dq {

using json = nlohmann::ordered_json;

std::string_view to_string(ValueType t) {
    switch (t) {
        case ValueType::integer: return "integer";
        case ValueType::floating: return "float";
        case ValueType::text: return "text";
        case ValueType::boolean: return "boolean";
        case ValueType::date: return "date";
        case ValueType::id_list: return "id_list";
    }
    return "?";
}

std::optional<ValueType> value_type_from_string(std::string_view s) {
    if (s == "integer") return ValueType::integer;
    if (s == "float") return ValueType::floating;
    if (s == "text") return ValueType::text;
    if (s == "boolean") return ValueType::boolean;
    if (s == "date") return ValueType::date;
    if (s == "id_list") return ValueType::id_list;
    return std::nullopt;
}

ExprType expr_type_of(ValueType t) {
    switch (t) {
        case ValueType::integer:
        case ValueType::floating: return ExprType::number;
        case ValueType::boolean: return ExprType::boolean;
        case ValueType::date: return ExprType::date;
        case ValueType::text:
        case ValueType::id_list: return ExprType::text;
    }
    return ExprType::text;
}

const ColumnConstraint* TableConstraint::find_column(std::string_view name) const {
    for (const auto& c : columns)
        if (c.name == name) return &c;
    return nullptr;
}

std::optional<std::size_t> TableConstraint::column_index(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i].name == name) return i;
    return std::nullopt;
}

bool TableConstraint::is_key_column(std::string_view name) const {
    return std::find(key.begin(), key.end(), name) != key.end();
}

bool NullPolicy::is_null(std::string_view raw) const {
    return std::find(tokens.begin(), tokens.end(), raw) != tokens.end();
}

NullPolicy NullPolicy::defaults() { return {{"", "NULL", "null", "NaN", "N/A"}}; }

const TableConstraint* ConstraintSchema::find_table(std::string_view name) const {
    for (const auto& t : tables)
        if (t.name == name) return &t;
    return nullptr;
}

namespace {

[[noreturn]] void fail(const std::string& msg) { throw SchemaError(msg); }

const json& expect(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(where + ": missing \"" + key + "\"");
    return *it;
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = std::any_of(allowed.begin(), allowed.end(),
                                 [&](const char* k) { return it.key() == k; });
        if (!known) fail(where + ": unknown key \"" + it.key() + "\"");
    }
}

std::string get_string(const json& v, const std::string& where) {
    if (!v.is_string()) fail(where + ": expected a string");
    return v.get<std::string>();
}

bool get_bool(const json& v, const std::string& where) {
    if (!v.is_boolean()) fail(where + ": expected a boolean");
    return v.get<bool>();
}

double get_number(const json& v, const std::string& where) {
    if (!v.is_number()) fail(where + ": expected a number");
    return v.get<double>();
}

std::vector<std::string> get_string_array(const json& v, const std::string& where) {
    if (!v.is_array()) fail(where + ": expected an array");
    std::vector<std::string> out;
    for (const auto& e : v) out.push_back(get_string(e, where + " element"));
    return out;
}

// Endpoint of a range: number for numeric columns, ISO date string for
// date columns.
Value parse_range_endpoint(const json& v, ValueType col_type, const std::string& where) {
    if (col_type == ValueType::date) {
        std::string s = get_string(v, where);
        auto d = parse_date(s);
        if (!d) fail(where + ": \"" + s + "\" is not an ISO date");
        return *d;
    }
    if (!v.is_number()) fail(where + ": expected a number");
    if (v.is_number_integer()) return v.get<std::int64_t>();
    return v.get<double>();
}

double endpoint_as_double(const Value& v) {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
    return std::get<double>(v);
}

std::string enum_entry_spelling(const json& v, const std::string& where) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
    if (v.is_number()) return format_double(v.get<double>());
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    fail(where + ": enum entries must be strings, numbers, or booleans");
}

ColumnConstraint parse_column(const std::string& name, const json& obj,
                              const std::string& where) {
    if (!obj.is_object()) fail(where + ": expected an object");
    reject_unknown(obj, {"type", "pattern", "range", "enum", "required", "label_like"}, where);
    ColumnConstraint col;
    col.name = name;
    std::string type_word = get_string(expect(obj, "type", where), where + ".type");
    auto vt = value_type_from_string(type_word);
    if (!vt) fail(where + ": unknown type \"" + type_word + "\"");
    col.declared_type = *vt;

    if (auto it = obj.find("pattern"); it != obj.end()) {
        col.pattern = get_string(*it, where + ".pattern");
        try {
            col.pattern_re.emplace(*col.pattern);
        } catch (const std::regex_error& e) {
            fail(where + ": invalid regular expression \"" + *col.pattern + "\": " + e.what());
        }
    }

    if (obj.contains("range") && obj.contains("enum"))
        fail(where + ": \"range\" and \"enum\" are mutually exclusive");

    if (auto it = obj.find("range"); it != obj.end()) {
        if (col.declared_type != ValueType::integer && col.declared_type != ValueType::floating &&
            col.declared_type != ValueType::date)
            fail(where + ": range constraints need a numeric or date column");
        if (!it->is_object()) fail(where + ".range: expected an object");
        reject_unknown(*it, {"min", "max", "min_inclusive", "max_inclusive"}, where + ".range");
        RangeConstraint range;
        if (auto m = it->find("min"); m != it->end())
            range.min = parse_range_endpoint(*m, col.declared_type, where + ".range.min");
        if (auto m = it->find("max"); m != it->end())
            range.max = parse_range_endpoint(*m, col.declared_type, where + ".range.max");
        if (auto m = it->find("min_inclusive"); m != it->end())
            range.min_inclusive = get_bool(*m, where + ".range.min_inclusive");
        if (auto m = it->find("max_inclusive"); m != it->end())
            range.max_inclusive = get_bool(*m, where + ".range.max_inclusive");
        if (!range.min && !range.max) fail(where + ".range: needs min or max");
        if (range.min && range.max) {
            bool ordered = col.declared_type == ValueType::date
                               ? std::get<Date>(*range.min) <= std::get<Date>(*range.max)
                               : endpoint_as_double(*range.min) <= endpoint_as_double(*range.max);
            if (!ordered) fail(where + ".range: min exceeds max");
        }
        col.range = std::move(range);
    }

    if (auto it = obj.find("enum"); it != obj.end()) {
        if (!it->is_array()) fail(where + ".enum: expected an array");
        std::vector<std::string> values;
        for (const auto& e : *it) values.push_back(enum_entry_spelling(e, where + ".enum"));
        if (values.empty()) fail(where + ".enum: empty enumeration");
        std::set<std::string> unique(values.begin(), values.end());
        if (unique.size() != values.size()) fail(where + ".enum: duplicate entries");
        col.enumeration = std::move(values);
    }

    if (auto it = obj.find("required"); it != obj.end())
        col.required = get_bool(*it, where + ".required");
    if (auto it = obj.find("label_like"); it != obj.end())
        col.label_like = get_bool(*it, where + ".label_like");
    return col;
}

double parse_tolerance(const json& obj, const std::string& where) {
    auto it = obj.find("tolerance");
    if (it == obj.end()) return 0.005;
    double tol = get_number(*it, where + ".tolerance");
    if (tol < 0) fail(where + ".tolerance: must be non-negative");
    return tol;
}

ExprPtr parse_checked_expr(const std::string& source, const ColumnTypeLookup& lookup,
                           const ResolveOptions& opts, const std::string& where) {
    try {
        ExprPtr expr = parse_rule_expr(source);
        ExprType t = resolve(*expr, lookup, opts);
        if (t != ExprType::boolean) fail(where + ": rule must be a boolean expression");
        return expr;
    } catch (const ExprError& e) {
        std::string at = e.position() == ExprError::npos
                             ? std::string{}
                             : " (offset " + std::to_string(e.position()) + ")";
        fail(where + ": " + e.what() + at);
    }
}

TableConstraint parse_table(const std::string& name, const json& obj) {
    const std::string where = "table \"" + name + "\"";
    if (!obj.is_object()) fail(where + ": expected an object");
    reject_unknown(obj, {"columns", "key", "rules", "baseline_columns", "expected_keys"}, where);

    TableConstraint table;
    table.name = name;

    const json& cols = expect(obj, "columns", where);
    if (!cols.is_object()) fail(where + ".columns: expected an object");
    for (auto it = cols.begin(); it != cols.end(); ++it) {
        table.columns.push_back(
            parse_column(it.key(), it.value(), where + " column \"" + it.key() + "\""));
    }
    if (table.columns.empty()) fail(where + ": no columns");

    if (auto it = obj.find("key"); it != obj.end()) {
        table.key = get_string_array(*it, where + ".key");
        for (const auto& k : table.key)
            if (!table.find_column(k)) fail(where + ".key: unknown column \"" + k + "\"");
    }

    if (auto it = obj.find("rules"); it != obj.end()) {
        if (!it->is_array()) fail(where + ".rules: expected an array");
        ColumnTypeLookup lookup = [&table](const ColumnRef& ref) -> std::optional<ExprType> {
            const ColumnConstraint* col = table.find_column(ref.column);
            if (!col) return std::nullopt;
            return expr_type_of(col->declared_type);
        };
        for (const auto& r : *it) {
            if (!r.is_object()) fail(where + ".rules: expected objects");
            std::string rid = get_string(expect(r, "id", where + ".rules"), where + ".rules.id");
            const std::string rwhere = where + " rule \"" + rid + "\"";
            reject_unknown(r, {"id", "expr", "tolerance"}, rwhere);
            for (const auto& existing : table.row_rules)
                if (existing.id == rid) fail(rwhere + ": duplicate rule id");
            RowRule rule;
            rule.id = std::move(rid);
            rule.source = get_string(expect(r, "expr", rwhere), rwhere + ".expr");
            rule.tolerance = parse_tolerance(r, rwhere);
            rule.expr = parse_checked_expr(rule.source, lookup,
                                           {.allow_aggregates = false, .qualified_names = false},
                                           rwhere);
            table.row_rules.push_back(std::move(rule));
        }
    }

    if (auto it = obj.find("baseline_columns"); it != obj.end())
        table.baseline_columns = get_string_array(*it, where + ".baseline_columns");

    if (auto it = obj.find("expected_keys"); it != obj.end())
        table.expected_keys = get_string(*it, where + ".expected_keys");

    return table;
}

// "table.column" or "table.column[*]".
CrossColumnRef parse_cross_ref(const std::string& text, bool allow_list,
                               const std::string& where) {
    CrossColumnRef ref;
    std::string body = text;
    if (body.size() >= 3 && body.ends_with("[*]")) {
        if (!allow_list) fail(where + ": \"[*]\" is only valid on the from-side");
        ref.element_of_list = true;
        body.resize(body.size() - 3);
    }
    auto dot = body.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == body.size())
        fail(where + ": expected \"table.column\", got \"" + text + "\"");
    ref.table = body.substr(0, dot);
    ref.column = body.substr(dot + 1);
    return ref;
}

const ColumnConstraint& require_column(const ConstraintSchema& schema, const CrossColumnRef& ref,
                                       const std::string& where) {
    const TableConstraint* table = schema.find_table(ref.table);
    if (!table) fail(where + ": unknown table \"" + ref.table + "\"");
    const ColumnConstraint* col = table->find_column(ref.column);
    if (!col) fail(where + ": unknown column \"" + ref.table + "." + ref.column + "\"");
    return *col;
}

void parse_cross_rules(ConstraintSchema& schema, const json& arr) {
    if (!arr.is_array()) fail("cross_table: expected an array");
    for (const auto& r : arr) {
        if (!r.is_object()) fail("cross_table: expected objects");
        std::string rid = get_string(expect(r, "id", "cross_table"), "cross_table.id");
        const std::string where = "cross rule \"" + rid + "\"";
        for (const auto& existing : schema.cross_table)
            if (existing.id == rid) fail(where + ": duplicate rule id");

        CrossTableRule rule;
        rule.id = std::move(rid);
        std::string kind = get_string(expect(r, "kind", where), where + ".kind");
        if (kind == "reference") {
            reject_unknown(r, {"id", "kind", "from", "to"}, where);
            rule.kind = CrossRuleKind::reference;
            rule.from = parse_cross_ref(get_string(expect(r, "from", where), where + ".from"),
                                        true, where + ".from");
            rule.to = parse_cross_ref(get_string(expect(r, "to", where), where + ".to"), false,
                                      where + ".to");
            const ColumnConstraint& from_col = require_column(schema, rule.from, where + ".from");
            require_column(schema, rule.to, where + ".to");
            const TableConstraint* to_table = schema.find_table(rule.to.table);
            if (!to_table->is_key_column(rule.to.column))
                fail(where + ": to-column \"" + rule.to.column + "\" is not a key column of \"" +
                     rule.to.table + "\"");
            bool is_list = from_col.declared_type == ValueType::id_list;
            if (is_list != rule.from.element_of_list)
                fail(where + (is_list ? ": id_list from-column needs \"[*]\""
                                      : ": \"[*]\" needs an id_list from-column"));
        } else if (kind == "expression") {
            reject_unknown(r, {"id", "kind", "expr", "tolerance"}, where);
            rule.kind = CrossRuleKind::expression;
            rule.source = get_string(expect(r, "expr", where), where + ".expr");
            rule.tolerance = parse_tolerance(r, where);
            ColumnTypeLookup lookup = [&schema](const ColumnRef& ref) -> std::optional<ExprType> {
                const TableConstraint* table = schema.find_table(ref.table);
                if (!table) return std::nullopt;
                const ColumnConstraint* col = table->find_column(ref.column);
                if (!col) return std::nullopt;
                return expr_type_of(col->declared_type);
            };
            rule.expr = parse_checked_expr(rule.source, lookup,
                                           {.allow_aggregates = true, .qualified_names = true},
                                           where);
        } else {
            fail(where + ": kind must be \"reference\" or \"expression\"");
        }
        schema.cross_table.push_back(std::move(rule));
    }
}

// Expression rules aggregate a second table; the join path must exist as
// a declared reference from the driver table. Checked after all cross
// rules are parsed so declaration order does not matter.
void validate_expression_joins(const ConstraintSchema& schema) {
    for (const auto& rule : schema.cross_table) {
        if (rule.kind != CrossRuleKind::expression) continue;
        const std::string where = "cross rule \"" + rule.id + "\"";
        std::vector<ColumnRef> plain, aggregated;
        collect_columns(*rule.expr, plain, aggregated);
        if (plain.empty()) fail(where + ": expression references no driver column");
        const std::string& driver = plain.front().table;
        for (const auto& ref : plain)
            if (ref.table != driver)
                fail(where + ": plain references span tables \"" + driver + "\" and \"" +
                     ref.table + "\"; only the aggregated side may differ");
        for (const auto& agg : aggregated) {
            if (agg.table == driver)
                fail(where + ": sum() must aggregate a table other than \"" + driver + "\"");
            bool joined = std::any_of(
                schema.cross_table.begin(), schema.cross_table.end(), [&](const auto& other) {
                    return other.kind == CrossRuleKind::reference &&
                           other.from.table == driver && other.to.table == agg.table;
                });
            if (!joined)
                fail(where + ": no reference joins \"" + driver + "\" to \"" + agg.table + "\"");
        }
    }
}

void validate_id_list_columns(const ConstraintSchema& schema) {
    for (const auto& table : schema.tables) {
        for (const auto& col : table.columns) {
            if (col.declared_type != ValueType::id_list) continue;
            bool referenced = std::any_of(
                schema.cross_table.begin(), schema.cross_table.end(), [&](const auto& rule) {
                    return rule.kind == CrossRuleKind::reference &&
                           rule.from.table == table.name && rule.from.column == col.name;
                });
            if (!referenced)
                fail("table \"" + table.name + "\" column \"" + col.name +
                     "\": id_list needs a cross-table reference from this column");
        }
    }
}

void parse_smell_params(SmellParams& params, const json& obj) {
    const std::string where = "smell_params";
    if (!obj.is_object()) fail(where + ": expected an object");
    reject_unknown(obj, {"iqr_k", "z_max", "freq_threshold", "min_n", "type_majority"}, where);
    if (auto it = obj.find("iqr_k"); it != obj.end()) {
        params.iqr_k = get_number(*it, where + ".iqr_k");
        if (params.iqr_k < 0) fail(where + ".iqr_k: must be non-negative");
    }
    if (auto it = obj.find("z_max"); it != obj.end()) {
        params.z_max = get_number(*it, where + ".z_max");
        if (params.z_max < 0) fail(where + ".z_max: must be non-negative");
    }
    if (auto it = obj.find("freq_threshold"); it != obj.end()) {
        params.freq_threshold = get_number(*it, where + ".freq_threshold");
        if (params.freq_threshold <= 0 || params.freq_threshold > 1)
            fail(where + ".freq_threshold: must be in (0, 1]");
    }
    if (auto it = obj.find("min_n"); it != obj.end()) {
        if (!it->is_number_integer()) fail(where + ".min_n: expected an integer");
        auto v = it->get<std::int64_t>();
        if (v < 2) fail(where + ".min_n: must be at least 2");
        params.min_n = static_cast<int>(v);
    }
    if (auto it = obj.find("type_majority"); it != obj.end()) {
        params.type_majority = get_number(*it, where + ".type_majority");
        if (params.type_majority <= 0.5 || params.type_majority > 1)
            fail(where + ".type_majority: must be in (0.5, 1]");
    }
}

}  // namespace

ConstraintSchema parse_schema(const std::string& schema_json) {
    json doc;
    try {
        doc = json::parse(schema_json);
    } catch (const json::parse_error& e) {
        fail(std::string("schema is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) fail("schema root must be an object");
    reject_unknown(doc, {"tables", "cross_table", "null_tokens", "smell_params"}, "schema");

    ConstraintSchema schema;

    if (auto it = doc.find("null_tokens"); it != doc.end()) {
        auto tokens = get_string_array(*it, "null_tokens");
        if (tokens.empty()) fail("null_tokens: must not be empty");
        std::set<std::string> unique(tokens.begin(), tokens.end());
        if (unique.size() != tokens.size()) fail("null_tokens: duplicate entries");
        schema.null_policy.tokens = std::move(tokens);
    }

    if (auto it = doc.find("smell_params"); it != doc.end())
        parse_smell_params(schema.smell_params, *it);

    if (auto it = doc.find("tables"); it != doc.end()) {
        if (!it->is_object()) fail("tables: expected an object");
        for (auto t = it->begin(); t != it->end(); ++t) {
            if (schema.find_table(t.key())) fail("duplicate table \"" + t.key() + "\"");
            schema.tables.push_back(parse_table(t.key(), t.value()));
        }
    }

    if (auto it = doc.find("cross_table"); it != doc.end()) parse_cross_rules(schema, *it);

    validate_expression_joins(schema);
    validate_id_list_columns(schema);
    return schema;
}

SmellParams parse_smell_params_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(std::string("smell params are not valid JSON: ") + e.what());
    }
    SmellParams params;
    parse_smell_params(params, doc);
    return params;
}

std::vector<std::string> load_key_baseline(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read expected-keys file: " + path);
    std::vector<std::string> keys;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) keys.push_back(line);
    }
    return keys;
}

}  // namespace dq
