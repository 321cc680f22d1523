#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dq/schema.hpp"
#include "dq/value.hpp"

namespace dq {

/// One CSV field as loaded. Exactly one of three states holds: is_null,
/// parsed present, or parse_failed (a wrong-typed value is data for the
/// invalid detector, not an I/O error).
struct Cell {
    std::string raw;
    bool is_null = false;
    std::optional<Value> parsed;
    ValueType inferred_type = ValueType::text;
    bool leading_zero_numeric = false;
    bool parse_failed = false;
};

struct Table {
    std::string name;
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;

    std::size_t row_count() const { return rows.size(); }
    std::optional<std::size_t> column_index(std::string_view column) const;
    const Cell& at(std::size_t row, std::size_t col) const { return rows[row][col]; }
};

struct Dataset {
    std::vector<Table> tables;

    const Table* find_table(std::string_view name) const;
};

class TableLoadError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct InferredType {
    ValueType type = ValueType::text;  // never id_list
    bool leading_zero_numeric = false;
};

/// Classification order: integer, float, boolean, date, text. The raw
/// text must not be a null token (callers gate on that).
InferredType infer_cell_type(std::string_view raw);

/// All records of an RFC-4180 document (quoted fields, doubled quotes,
/// LF or CRLF), header included. Throws TableLoadError on malformed
/// quoting.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

/// Parses RFC-4180 CSV (quoted fields, doubled quotes, LF or CRLF); the
/// first record is the header. When `schema` is given the header must
/// match its column names in order, and cells parse per declared type;
/// otherwise cells parse per inferred type. Raw text is preserved
/// verbatim. Throws TableLoadError on empty input, ragged rows, or
/// header mismatch.
Table load_table(std::string_view csv_text, std::string name, const NullPolicy& nulls,
                 const TableConstraint* schema = nullptr);

/// Emits the same CSV dialect (LF endings); loading the result yields
/// cell-for-cell identical raw values.
std::string serialize_table(const Table& table);

}  // namespace dq
