#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <string>
#include <vector>

#include "dq/detectors.hpp"
#include "dq/schema.hpp"
#include "dq/smells.hpp"
#include "dq/table.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace dq;

namespace {

struct Fixture {
    ConstraintSchema schema;
    Dataset dataset;

    const Table& table() const { return dataset.tables[0]; }
    const TableConstraint& tschema() const { return schema.tables[0]; }
};

Fixture make(const std::string& schema_json, const std::string& csv) {
    Fixture f;
    f.schema = parse_schema(schema_json);
    f.dataset.tables.push_back(
        load_table(csv, f.schema.tables[0].name, f.schema.null_policy, &f.schema.tables[0]));
    return f;
}

const char* kNumericSchema = R"({"tables": {"t": {"columns": {
  "k": {"type": "integer", "required": true},
  "x": {"type": "float"}
}, "key": ["k"]}}})";

std::string numeric_csv(const std::vector<std::string>& xs) {
    std::string csv = "k,x\n";
    for (std::size_t i = 0; i < xs.size(); ++i)
        csv += std::to_string(i) + "," + xs[i] + "\n";
    return csv;
}

}  // namespace

TEST_CASE("a far-out value is flagged against the IQR fences") {
    Fixture f = make(kNumericSchema,
                     numeric_csv({"1", "2", "3", "4", "5", "6", "7", "8", "100"}));
    auto smells = detect_believability(f.table(), f.tschema(), SmellParams{});
    REQUIRE(smells.size() == 1);
    CHECK(smells[0].kind == Attribute::believability);
    CHECK(smells[0].column == "x");
    CHECK(smells[0].rows == std::vector<std::size_t>{8});
    CHECK(smells[0].score == doctest::Approx(1.0));  // 87 past a 6-wide band, clamped
    CHECK(smells[0].evidence.find("outside") != std::string::npos);
}

TEST_CASE("the z-score check fires independently of the fences") {
    SmellParams params;
    params.iqr_k = 100.0;  // fences out of reach
    params.z_max = 2.0;
    Fixture f = make(kNumericSchema,
                     numeric_csv({"1", "2", "3", "4", "5", "6", "7", "8", "100"}));
    auto smells = detect_believability(f.table(), f.tschema(), params);
    REQUIRE(smells.size() == 1);
    CHECK(smells[0].rows == std::vector<std::size_t>{8});
    CHECK(smells[0].evidence.find("|z|") != std::string::npos);
    CHECK(smells[0].score > 0);
    CHECK(smells[0].score < 1.0);
}

TEST_CASE("columns below min_n stay silent, including the frequency check") {
    std::vector<std::string> seven(7, "5");
    Fixture f = make(kNumericSchema, numeric_csv(seven));
    CHECK(detect_believability(f.table(), f.tschema(), SmellParams{}).empty());

    SmellParams relaxed;
    relaxed.min_n = 5;
    auto smells = detect_believability(f.table(), f.tschema(), relaxed);
    REQUIRE(smells.size() == 1);  // all-identical: concentration at share 1.0
    CHECK(smells[0].score == doctest::Approx(1.0));
}

TEST_CASE("zero spread suppresses per-cell flags but not the frequency check") {
    std::vector<std::string> same(10, "5");
    Fixture f = make(kNumericSchema, numeric_csv(same));
    auto smells = detect_believability(f.table(), f.tschema(), SmellParams{});
    REQUIRE(smells.size() == 1);
    CHECK(smells[0].rows.size() == 10);
    CHECK(smells[0].score == doctest::Approx(1.0));
    CHECK(smells[0].evidence == "value 5 accounts for 10 of 10 values");
}

TEST_CASE("a value holding exactly the threshold share is reported") {
    Fixture f = make(kNumericSchema, numeric_csv({"4", "4", "4", "4", "1", "2", "3", "5"}));
    auto smells = detect_believability(f.table(), f.tschema(), SmellParams{});
    REQUIRE(smells.size() == 1);
    CHECK(smells[0].rows == std::vector<std::size_t>{0, 1, 2, 3});
    CHECK(smells[0].score == doctest::Approx(0.5));

    Fixture g = make(kNumericSchema, numeric_csv({"4", "4", "4", "1", "2", "3", "5", "6"}));
    CHECK(detect_believability(g.table(), g.tschema(), SmellParams{}).empty());
}

TEST_CASE("cells carrying integrity findings are excluded from the statistics") {
    const char* schema_json = R"({"tables": {"t": {"columns": {
      "k": {"type": "integer", "required": true},
      "x": {"type": "float", "range": {"min": 0}}
    }, "key": ["k"]}}})";
    // -50 breaks the declared range: it must not poison the distribution
    Fixture f = make(schema_json,
                     numeric_csv({"-50", "1", "2", "3", "4", "5", "6", "7", "8", "NULL"}));
    CHECK(detect_believability(f.table(), f.tschema(), SmellParams{}).empty());
}

TEST_CASE("distinct null spellings in one column are a consistency smell") {
    const char* schema_json = R"({"tables": {"t": {"columns": {
      "c": {"type": "integer"}}}}})";
    Fixture f = make(schema_json, "c\n1\nNULL\nNaN\n2\nNULL\n");
    auto smells = detect_consistency(f.table(), f.schema.null_policy, &f.tschema());
    REQUIRE(smells.size() == 1);
    CHECK(smells[0].kind == Attribute::consistency);
    CHECK(smells[0].rows == std::vector<std::size_t>{1, 2, 4});
    CHECK(smells[0].score == doctest::Approx(1.0 / 3.0));  // majority 2 of 3
    CHECK(smells[0].evidence == "absence spelled 2 ways: \"NULL\", \"NaN\"");

    // one spelling only: nothing to report
    Fixture g = make(schema_json, "c\n1\nNULL\nNULL\n");
    CHECK(detect_consistency(g.table(), g.schema.null_policy, &g.tschema()).empty());
}

TEST_CASE("required-column nulls already fired missing and are not smell evidence") {
    const char* schema_json = R"({"tables": {"t": {"columns": {
      "c": {"type": "integer", "required": true}}}}})";
    Fixture f = make(schema_json, "c\n1\nNULL\nNaN\n");
    CHECK(detect_consistency(f.table(), f.schema.null_policy, &f.tschema()).empty());
}

TEST_CASE("spellings that collapse under canonicalization are a consistency smell") {
    const char* schema_json = R"({"tables": {"t": {"columns": {
      "c": {"type": "text"}}}}})";
    Fixture f = make(schema_json, "c\nApple\napple\n\" APPLE \"\nBanana\n");
    auto smells = detect_consistency(f.table(), f.schema.null_policy, &f.tschema());
    REQUIRE(smells.size() == 1);
    CHECK(smells[0].rows == std::vector<std::size_t>{0, 1, 2});
    CHECK(smells[0].score == doctest::Approx(2.0 / 3.0));
    CHECK(smells[0].evidence.find("3 spellings of one value") == 0);

    // repeated identical raws are consistent
    Fixture g = make(schema_json, "c\nx\nx\ny\n");
    CHECK(detect_consistency(g.table(), g.schema.null_policy, &g.tschema()).empty());

    // internal whitespace squeezes before comparing
    Fixture h = make(schema_json, "c\nNew  York\nnew york\n");
    CHECK(detect_consistency(h.table(), h.schema.null_policy, &h.tschema()).size() == 1);
}

TEST_CASE("one label naming several keyed entities is a syntactic smell") {
    const char* schema_json = R"({"tables": {"t": {"columns": {
      "id": {"type": "integer", "required": true},
      "name": {"type": "text", "label_like": true}
    }, "key": ["id"]}}})";
    Fixture f = make(schema_json,
                     "id,name\n10,Apple\n11,Banana\n40,Apple\nNULL,Apple\n12,Cherry\n");
    auto smells = detect_syntactic(f.table(), f.tschema());
    REQUIRE(smells.size() == 1);
    CHECK(smells[0].kind == Attribute::syntactic);
    CHECK(smells[0].column == "name");
    CHECK(smells[0].rows == std::vector<std::size_t>{0, 2});  // the null-key row joins nothing
    CHECK(smells[0].score == doctest::Approx(0.5));
    CHECK(smells[0].evidence == "value \"Apple\" is shared by 2 distinct keys");
}

TEST_CASE("a repeated label on one entity is not a syntactic smell") {
    const char* schema_json = R"({"tables": {"t": {"columns": {
      "id": {"type": "integer", "required": true},
      "name": {"type": "text", "label_like": true}
    }, "key": ["id"]}}})";
    Fixture f = make(schema_json, "id,name\n10,Water\n10,Water\n");
    CHECK(detect_syntactic(f.table(), f.tschema()).empty());

    // without a declared key there is no entity identity to compare
    const char* keyless = R"({"tables": {"t": {"columns": {
      "id": {"type": "integer"},
      "name": {"type": "text", "label_like": true}}}}})";
    Fixture g = make(keyless, "id,name\n10,Apple\n11,Apple\n");
    CHECK(detect_syntactic(g.table(), g.tschema()).empty());
}

TEST_CASE("minority-typed cells in a typed column are encoding smells") {
    const char* schema_json = R"({"tables": {"t": {"columns": {
      "c": {"type": "text"}}}}})";
    std::string csv = "c\n";
    for (int i = 0; i < 10; ++i) csv += "word" + std::to_string(i) + "\n";
    csv += "0010010\n";
    Fixture f = make(schema_json, csv);
    auto smells = detect_encoding(f.table(), SmellParams{}, &f.tschema());
    REQUIRE(smells.size() == 1);
    CHECK(smells[0].kind == Attribute::encoding);
    CHECK(smells[0].rows == std::vector<std::size_t>{10});
    CHECK(smells[0].score == doctest::Approx(10.0 / 11.0));
    CHECK(smells[0].evidence ==
          "integer-typed value \"0010010\" in a text-majority column");

    // no dominant type, no finding
    Fixture g = make(schema_json, "c\nalpha\nbeta\ngamma\n12\n15\n");
    CHECK(detect_encoding(g.table(), SmellParams{}, &g.tschema()).empty());
}

TEST_CASE("leading-zero numerals in numeric-majority columns are encoding smells") {
    const char* schema_json = R"({"tables": {"t": {"columns": {
      "c": {"type": "text"}}}}})";
    Fixture f = make(schema_json, "c\n12\n15\n007\n99\n");
    auto smells = detect_encoding(f.table(), SmellParams{}, &f.tschema());
    REQUIRE(smells.size() == 1);
    CHECK(smells[0].rows == std::vector<std::size_t>{2});
    CHECK(smells[0].score == doctest::Approx(1.0));
    CHECK(smells[0].evidence ==
          "leading-zero numeral \"007\" would lose digits as a number");
}

TEST_CASE("the umbrella detector merges all four families sorted") {
    const char* schema_json = R"({"tables": {"t": {"columns": {
      "id": {"type": "integer", "required": true},
      "name": {"type": "text", "label_like": true},
      "x": {"type": "float"}
    }, "key": ["id"]}}})";
    std::string csv = "id,name,x\n";
    csv += "10,Apple,1\n11,Apple,2\n12,Candle,3\n13,Dish,4\n14,Eel,5\n";
    csv += "15,Fig,6\n16,Grape,7\n17,0012,100\n18,Hat,8\n19,Ice,9\n";
    Fixture f = make(schema_json, csv);
    auto smells = detect_smells(f.table(), f.tschema(), f.schema.null_policy, SmellParams{});
    CHECK(std::is_sorted(smells.begin(), smells.end(), smell_less));

    bool saw_believability = false, saw_syntactic = false, saw_encoding = false;
    for (const auto& s : smells) {
        if (s.kind == Attribute::believability) saw_believability = true;
        if (s.kind == Attribute::syntactic) saw_syntactic = true;
        if (s.kind == Attribute::encoding) saw_encoding = true;
    }
    CHECK(saw_believability);  // x = 100 against 1..7
    CHECK(saw_syntactic);      // Apple on keys 10 and 11
    CHECK(saw_encoding);       // 0012 in a text-majority name column
}

TEST_CASE("random numeric columns match the believability definition") {
    testgen::Rng rng(58008);
    for (int trial = 0; trial < 60; ++trial) {
        auto cc = testgen::random_numeric_column(rng);
        const Table& table = cc.dataset.tables[0];
        const TableConstraint& schema = cc.schema.tables[0];
        SmellParams params;

        auto values = oracle::usable_numeric(table, schema, "x");
        auto expected = oracle::expected_believability(values, params);
        auto got = detect_believability(table, schema, params);

        std::vector<std::vector<std::size_t>> want_rows, got_rows;
        for (const auto& [r, score] : expected.outlier_rows) want_rows.push_back({r});
        for (const auto& [rows, share] : expected.concentrations) want_rows.push_back(rows);
        for (const auto& s : got) got_rows.push_back(s.rows);
        std::sort(want_rows.begin(), want_rows.end());
        std::sort(got_rows.begin(), got_rows.end());
        CAPTURE(trial);
        REQUIRE(got_rows == want_rows);
    }
}
