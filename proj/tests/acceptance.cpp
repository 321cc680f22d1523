// Acceptance gate for the assembled product. Unlike the unit suites this
// drives the installed CLI binary against the shipped fixtures, prints
// one verdict line per criterion, and exits nonzero if any line fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <sys/wait.h>

#include "json.hpp"

#include "dq/classify.hpp"
#include "dq/detectors.hpp"
#include "dq/report.hpp"
#include "dq/rule_expr.hpp"
#include "dq/schema.hpp"
#include "dq/smells.hpp"
#include "dq/table.hpp"
#include "dq/triage.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using json = nlohmann::ordered_json;

namespace {

// Pinned gates. A miss here is a product bug, not test noise.
constexpr double kStatsTolerance = 1e-9;   // summarize vs naive re-summation
constexpr double kScoreTolerance = 1e-12;  // believability scores vs the definition
constexpr double kGoldenBudgetSeconds = 1.0;
constexpr double kOracleBudgetSeconds = 30.0;

struct CommandResult {
    std::string out;
    int exit_code = -1;
    double seconds = 0;
};

CommandResult run_command(const std::string& cmd) {
    CommandResult result;
    auto start = std::chrono::steady_clock::now();
    FILE* pipe = ::popen((cmd + " 2>/dev/null").c_str(), "r");
    if (!pipe) throw std::runtime_error("cannot run: " + cmd);
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) result.out.append(buf, n);
    int status = ::pclose(pipe);
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
    return result;
}

std::string classify_command() {
    return std::string(DQLINT_BIN) + " classify --schema " + FIXTURES_DIR +
           "/convenience_store/schema.json --data " + FIXTURES_DIR + "/convenience_store";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// ---------------------------------------------------------------------------
// 1. The store fixture yields exactly the thirteen expected findings,
//    with the right attribute/scope/outcome on every issue, in budget.

std::string check_golden_corpus() {
    CommandResult run = run_command(classify_command());
    if (run.exit_code != 1)
        return "expected exit code 1 (findings present), got " + std::to_string(run.exit_code);

    using Triple = std::array<std::string, 3>;
    std::vector<Triple> issues;
    std::vector<std::string> smells;
    std::istringstream lines(run.out);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        json obj = json::parse(line);
        if (obj.contains("scope"))
            issues.push_back({obj["attribute"].get<std::string>(),
                              obj["scope"].get<std::string>(),
                              obj["outcome"].get<std::string>()});
        else
            smells.push_back(obj["kind"].get<std::string>());
    }

    std::vector<Triple> want{
        {"missing", "cell", "range"},
        {"missing", "inter_row", "rule"},
        {"missing", "inter_table", "knowledge"},
        {"invalid", "cell", "pattern"},
        {"invalid", "cell", "range"},
        {"duplicate", "inter_row", "rule"},
        {"conflict", "inter_column", "rule"},
        {"conflict", "inter_row", "rule"},
        {"conflict", "inter_table", "knowledge"},
    };
    std::vector<std::string> want_smells{"believability", "consistency", "syntactic", "encoding"};
    std::sort(issues.begin(), issues.end());
    std::sort(want.begin(), want.end());
    std::sort(smells.begin(), smells.end());
    std::sort(want_smells.begin(), want_smells.end());

    if (issues.size() + smells.size() != 13)
        return "expected 13 findings, got " + std::to_string(issues.size() + smells.size());
    if (issues != want) {
        std::string got;
        for (const auto& t : issues) got += " " + t[0] + "/" + t[1] + "/" + t[2];
        return "issue triples differ:" + got;
    }
    if (smells != want_smells) {
        std::string got;
        for (const auto& s : smells) got += " " + s;
        return "smell kinds differ:" + got;
    }
    if (run.seconds >= kGoldenBudgetSeconds)
        return "run took " + std::to_string(run.seconds) + "s, budget 1s";
    return "";
}

// ---------------------------------------------------------------------------
// 2. Alignment is closed: over every legal attribute/scope combination it
//    reaches exactly the permitted pairs (the ninth, believability/none,
//    is the smell pair), rejects everything else, and a thousand random
//    datasets produce no pair outside the table.

struct LegalCombo {
    dq::Attribute attribute;
    dq::Scope scope;
    std::optional<dq::InvalidKind> kind;
    dq::Outcome outcome;
};

std::string describe(dq::Attribute a, dq::Scope s, std::optional<dq::InvalidKind> k) {
    std::string out = std::string(dq::to_string(a)) + "/" + std::string(dq::to_string(s));
    if (k) out += "/" + std::string(dq::to_string(*k));
    return out;
}

std::string check_alignment_closure() {
    using dq::Attribute;
    using dq::InvalidKind;
    using dq::Outcome;
    using dq::Scope;

    const std::vector<LegalCombo> legal{
        {Attribute::invalid, Scope::cell, InvalidKind::pattern, Outcome::pattern},
        {Attribute::invalid, Scope::cell, InvalidKind::type, Outcome::pattern},
        {Attribute::invalid, Scope::cell, InvalidKind::range, Outcome::range},
        {Attribute::missing, Scope::cell, std::nullopt, Outcome::range},
        {Attribute::missing, Scope::inter_row, std::nullopt, Outcome::rule},
        {Attribute::missing, Scope::inter_table, std::nullopt, Outcome::knowledge},
        {Attribute::duplicate, Scope::inter_row, std::nullopt, Outcome::rule},
        {Attribute::conflict, Scope::inter_column, std::nullopt, Outcome::rule},
        {Attribute::conflict, Scope::inter_row, std::nullopt, Outcome::rule},
        {Attribute::conflict, Scope::inter_table, std::nullopt, Outcome::knowledge},
    };

    const std::array<Attribute, 8> attrs{
        Attribute::missing,       Attribute::invalid,     Attribute::duplicate,
        Attribute::conflict,      Attribute::believability, Attribute::consistency,
        Attribute::syntactic,     Attribute::encoding,
    };
    const std::array<Scope, 4> scopes{Scope::cell, Scope::inter_row, Scope::inter_column,
                                      Scope::inter_table};
    const std::array<std::optional<InvalidKind>, 4> kinds{
        std::nullopt, InvalidKind::pattern, InvalidKind::type, InvalidKind::range};

    std::set<std::pair<int, int>> reached;
    std::size_t accepted = 0;
    for (Attribute a : attrs) {
        for (Scope s : scopes) {
            for (const auto& k : kinds) {
                std::optional<Outcome> got;
                try {
                    got = dq::align(a, s, k);
                } catch (const std::logic_error&) {
                }
                auto it = std::find_if(legal.begin(), legal.end(), [&](const LegalCombo& c) {
                    return c.attribute == a && c.scope == s && c.kind == k;
                });
                if (it == legal.end()) {
                    if (got) return "illegal combination accepted: " + describe(a, s, k);
                    continue;
                }
                if (!got) return "legal combination rejected: " + describe(a, s, k);
                if (*got != it->outcome)
                    return "wrong outcome for " + describe(a, s, k) + ": " +
                           std::string(dq::to_string(*got));
                reached.insert({static_cast<int>(a), static_cast<int>(*got)});
                ++accepted;
            }
        }
    }
    if (accepted != legal.size())
        return "accepted " + std::to_string(accepted) + " combinations, expected " +
               std::to_string(legal.size());

    // the one pair alignment cannot produce is the smell pair
    if (!dq::ticket_pair_valid(Attribute::believability, Outcome::none))
        return "smell pair believability/none not representable";
    reached.insert({static_cast<int>(Attribute::believability), static_cast<int>(Outcome::none)});

    if (reached.size() != dq::kPermittedPairs.size())
        return "reached " + std::to_string(reached.size()) + " pairs, permitted table has " +
               std::to_string(dq::kPermittedPairs.size());
    for (const auto& [a, o] : dq::kPermittedPairs)
        if (!reached.count({static_cast<int>(a), static_cast<int>(o)}))
            return "permitted pair unreachable: " + std::string(dq::to_string(a)) + "/" +
                   std::string(dq::to_string(o));

    testgen::Rng rng(987654321);
    std::size_t issues_checked = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        auto fc = testgen::random_fuzz_case(rng);
        auto labeled = dq::label_dataset(fc.dataset, fc.schema, fc.baselines);
        for (const auto& issue : labeled.issues) {
            if (!issue.outcome)
                return "trial " + std::to_string(trial) + ": issue " + issue.id + " unlabeled";
            if (!dq::pair_permitted(issue.attribute, *issue.outcome))
                return "trial " + std::to_string(trial) + ": pair outside the table: " +
                       std::string(dq::to_string(issue.attribute)) + "/" +
                       std::string(dq::to_string(*issue.outcome));
            if (*issue.outcome != dq::align(issue.attribute, issue.scope, issue.invalid_kind))
                return "trial " + std::to_string(trial) + ": outcome disagrees with alignment on " +
                       issue.id;
            ++issues_checked;
        }
        for (const auto& smell : labeled.smells)
            if (!dq::is_smell(smell.kind))
                return "trial " + std::to_string(trial) + ": integrity attribute in a smell";
    }
    // a quiet generator would make the sweep meaningless
    if (issues_checked < 1000)
        return "only " + std::to_string(issues_checked) + " issues across 1000 datasets";
    return "";
}

// ---------------------------------------------------------------------------
// 3. Duplicate and conflict grouping matches the brute-force oracle on
//    five hundred random keyed tables, inside the time budget.

std::string check_duplicate_conflict_oracle() {
    testgen::Rng rng(271828);
    auto start = std::chrono::steady_clock::now();
    std::size_t groups_seen = 0;
    for (int trial = 0; trial < 500; ++trial) {
        auto oc = testgen::random_oracle_case(rng);
        const dq::Table& table = oc.dataset.tables[0];
        const dq::TableConstraint& schema = oc.schema.tables[0];

        auto sort_rows = [](std::vector<std::vector<std::size_t>> v) {
            for (auto& rows : v) std::sort(rows.begin(), rows.end());
            std::sort(v.begin(), v.end());
            return v;
        };
        std::vector<std::vector<std::size_t>> got_dups;
        for (const auto& issue : dq::detect_duplicates(table, schema))
            got_dups.push_back(issue.rows);
        if (sort_rows(got_dups) != sort_rows(oracle::duplicate_classes(table, schema)))
            return "trial " + std::to_string(trial) + ": duplicate classes differ";

        std::vector<std::pair<std::vector<std::size_t>, std::vector<std::string>>> got_c, want_c;
        for (const auto& issue : dq::detect_conflicts(oc.dataset, oc.schema))
            got_c.emplace_back(issue.rows, issue.columns);
        for (const auto& group : oracle::conflict_groups(table, schema))
            want_c.emplace_back(group.rows, group.columns);
        std::sort(got_c.begin(), got_c.end());
        std::sort(want_c.begin(), want_c.end());
        if (got_c != want_c)
            return "trial " + std::to_string(trial) + ": conflict groups differ";
        groups_seen += got_dups.size() + got_c.size();
    }
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed >= kOracleBudgetSeconds)
        return "500 tables took " + std::to_string(elapsed) + "s, budget 30s";
    if (groups_seen < 100)
        return "only " + std::to_string(groups_seen) + " groups across 500 tables";
    return "";
}

// ---------------------------------------------------------------------------
// 4. The 94-ticket fixture reconciles: attribute margin (40,10,32,7,5),
//    outcome margin (3,13,55,18), crosstab sums matching both, no
//    alignment offenders; summaries match a naive re-summation.

std::string check_ticket_fixture() {
    auto tickets =
        dq::parse_tickets(read_file(std::string(FIXTURES_DIR) + "/tickets/tickets_94.csv"));
    if (tickets.size() != 94) return "expected 94 tickets, got " + std::to_string(tickets.size());

    auto count_of = [](const dq::Summary& s, const std::string& label) -> std::size_t {
        for (const auto& [name, n] : s.counts)
            if (name == label) return n;
        return 0;
    };

    auto attr = dq::summarize(tickets, dq::SummaryMode::attribute_dist);
    const std::vector<std::pair<std::string, std::size_t>> want_attr{
        {"missing", 40}, {"invalid", 10}, {"conflict", 32}, {"duplicate", 7}, {"believability", 5}};
    if (attr.counts.size() != want_attr.size())
        return "attribute margin has " + std::to_string(attr.counts.size()) + " categories";
    for (const auto& [label, n] : want_attr)
        if (count_of(attr, label) != n)
            return "attribute " + label + " count " + std::to_string(count_of(attr, label)) +
                   ", expected " + std::to_string(n);

    auto outcome = dq::summarize(tickets, dq::SummaryMode::outcome_dist);
    const std::vector<std::pair<std::string, std::size_t>> want_outcome{
        {"pattern", 3}, {"range", 13}, {"rule", 55}, {"knowledge", 18}};
    if (outcome.counts.size() != want_outcome.size())
        return "outcome margin has " + std::to_string(outcome.counts.size()) + " categories";
    for (const auto& [label, n] : want_outcome)
        if (count_of(outcome, label) != n)
            return "outcome " + label + " count " + std::to_string(count_of(outcome, label)) +
                   ", expected " + std::to_string(n);

    auto crosstab = dq::summarize(tickets, dq::SummaryMode::crosstab);
    std::size_t total = 0;
    for (std::size_t r = 0; r < crosstab.matrix.size(); ++r) {
        std::size_t row_sum = 0;
        for (std::size_t n : crosstab.matrix[r]) row_sum += n;
        total += row_sum;
        if (row_sum != count_of(attr, crosstab.row_labels[r]))
            return "crosstab row " + crosstab.row_labels[r] + " sums to " +
                   std::to_string(row_sum);
    }
    for (std::size_t c = 0; c < crosstab.col_labels.size(); ++c) {
        std::size_t col_sum = 0;
        for (const auto& row : crosstab.matrix) col_sum += row[c];
        if (col_sum != count_of(outcome, crosstab.col_labels[c]))
            return "crosstab column " + crosstab.col_labels[c] + " sums to " +
                   std::to_string(col_sum);
    }
    if (total != 89) return "crosstab totals " + std::to_string(total) + ", expected 89";

    auto offenders = dq::validate_ticket_alignment(tickets);
    if (!offenders.empty())
        return std::to_string(offenders.size()) + " misaligned tickets, first " + offenders[0];

    // independent re-summation on random tickets
    testgen::Rng rng(13577531);
    auto random = testgen::random_tickets(rng, 400);
    auto close = [](double a, double b) { return std::fabs(a - b) <= kStatsTolerance; };

    auto check_stats = [&](const dq::Summary& got,
                           const std::map<std::string, oracle::NaiveStats>& want,
                           const std::string& which) -> std::string {
        if (got.stats.size() != want.size())
            return which + " has " + std::to_string(got.stats.size()) + " categories, oracle " +
                   std::to_string(want.size());
        for (const auto& [label, stats] : got.stats) {
            auto it = want.find(label);
            if (it == want.end()) return which + " category " + label + " unknown to the oracle";
            const auto& naive = it->second;
            if (stats.count != naive.count || !close(stats.severity.mean, naive.severity_mean) ||
                !close(stats.severity.max, naive.severity_max) ||
                !close(stats.priority.mean, naive.priority_mean) ||
                !close(stats.priority.max, naive.priority_max) ||
                !close(stats.days_to_fix.mean, naive.days_mean) ||
                !close(stats.days_to_fix.max, naive.days_max) ||
                !close(stats.comment_number.mean, naive.comments_mean) ||
                !close(stats.comment_number.max, naive.comments_max))
                return which + " disagrees with the oracle on " + label;
        }
        return "";
    };

    std::string err = check_stats(
        dq::summarize(random, dq::SummaryMode::attribute_stats),
        oracle::naive_stats(random,
                            [](const dq::Ticket& t) {
                                return std::optional<std::string>(
                                    std::string(dq::to_string(t.attribute)));
                            }),
        "attribute_stats");
    if (!err.empty()) return err;

    err = check_stats(dq::summarize(random, dq::SummaryMode::outcome_stats),
                      oracle::naive_stats(random,
                                          [](const dq::Ticket& t) -> std::optional<std::string> {
                                              if (!dq::is_integrity(t.attribute))
                                                  return std::nullopt;
                                              return std::string(dq::to_string(t.outcome));
                                          }),
                      "outcome_stats");
    if (!err.empty()) return err;

    err = check_stats(dq::summarize(random, dq::SummaryMode::pair_stats),
                      oracle::naive_stats(random,
                                          [](const dq::Ticket& t) {
                                              return std::optional<std::string>(
                                                  std::string(dq::to_string(t.attribute)) + "/" +
                                                  std::string(dq::to_string(t.outcome)));
                                          }),
                      "pair_stats");
    if (!err.empty()) return err;

    auto random_x = dq::summarize(random, dq::SummaryMode::crosstab);
    auto naive_x = oracle::naive_crosstab(random);
    std::size_t grid_total = 0, naive_total = 0;
    for (std::size_t r = 0; r < random_x.matrix.size(); ++r)
        for (std::size_t c = 0; c < random_x.matrix[r].size(); ++c) {
            grid_total += random_x.matrix[r][c];
            auto it = naive_x.find({random_x.row_labels[r], random_x.col_labels[c]});
            std::size_t want = it == naive_x.end() ? 0 : it->second;
            if (random_x.matrix[r][c] != want)
                return "random crosstab cell " + random_x.row_labels[r] + "/" +
                       random_x.col_labels[c] + " disagrees with the oracle";
        }
    for (const auto& [pair, n] : naive_x) naive_total += n;
    if (grid_total != naive_total) return "random crosstab drops or invents tickets";
    return "";
}

// ---------------------------------------------------------------------------
// 5. The ordinal vocabularies are exact and closed.

std::string check_ordinal_vocabularies() {
    const std::vector<std::pair<std::string, int>> severities{
        {"Low", 0}, {"Medium", 1}, {"High", 2}, {"Critical", 3}};
    const std::vector<std::pair<std::string, int>> priorities{
        {"Lowest", 0}, {"Low", 1}, {"Medium", 2}, {"High", 3}, {"Highest", 4}};

    for (const auto& [word, level] : severities) {
        if (dq::severity_from_word(word) != level) return "severity " + word + " misencoded";
        if (dq::severity_word(level) != word) return "severity level " + std::to_string(level) +
                                                     " misspelled";
    }
    for (const auto& [word, level] : priorities) {
        if (dq::priority_from_word(word) != level) return "priority " + word + " misencoded";
        if (dq::priority_word(level) != word) return "priority level " + std::to_string(level) +
                                                     " misspelled";
    }

    const std::vector<std::string> bad_severities{"",     "low",   "CRITICAL", "Blocker",
                                                  "Highest", "Lowest", "2",        "Medium "};
    for (const auto& word : bad_severities)
        if (dq::severity_from_word(word)) return "severity accepts \"" + word + "\"";
    const std::vector<std::string> bad_priorities{"", "lowest", "Critical", "Urgent", "4", " High"};
    for (const auto& word : bad_priorities)
        if (dq::priority_from_word(word)) return "priority accepts \"" + word + "\"";
    return "";
}

// ---------------------------------------------------------------------------
// 6. Outlier and concentration flags equal the sort-based definition on
//    two hundred random numeric columns, and both flag sets shrink
//    monotonically as their threshold loosens.

std::string check_believability_oracle() {
    testgen::Rng rng(424242);
    const dq::SmellParams base;

    auto outlier_rows = [](const std::vector<dq::SmellFinding>& findings) {
        std::set<std::size_t> rows;
        for (const auto& f : findings)
            if (f.evidence.find("accounts for") == std::string::npos) rows.insert(f.rows.front());
        return rows;
    };
    auto concentration_groups = [](const std::vector<dq::SmellFinding>& findings) {
        std::set<std::vector<std::size_t>> groups;
        for (const auto& f : findings)
            if (f.evidence.find("accounts for") != std::string::npos) groups.insert(f.rows);
        return groups;
    };

    std::size_t findings_seen = 0;
    for (int trial = 0; trial < 200; ++trial) {
        auto cc = testgen::random_numeric_column(rng);
        const dq::Table& table = cc.dataset.tables[0];
        const dq::TableConstraint& schema = cc.schema.tables[0];

        auto values = oracle::usable_numeric(table, schema, "x");
        auto expected = oracle::expected_believability(values, base);
        auto got = dq::detect_believability(table, schema, base);
        findings_seen += got.size();

        std::vector<std::pair<std::vector<std::size_t>, double>> want_set, got_set;
        for (const auto& [row, score] : expected.outlier_rows)
            want_set.push_back({{row}, score});
        for (const auto& [rows, share] : expected.concentrations) want_set.push_back({rows, share});
        for (const auto& f : got) got_set.push_back({f.rows, f.score});
        auto by_rows = [](const auto& a, const auto& b) { return a.first < b.first; };
        std::sort(want_set.begin(), want_set.end(), by_rows);
        std::sort(got_set.begin(), got_set.end(), by_rows);
        if (got_set.size() != want_set.size())
            return "trial " + std::to_string(trial) + ": " + std::to_string(got_set.size()) +
                   " findings, oracle expects " + std::to_string(want_set.size());
        for (std::size_t i = 0; i < got_set.size(); ++i) {
            if (got_set[i].first != want_set[i].first)
                return "trial " + std::to_string(trial) + ": flagged rows differ";
            if (std::fabs(got_set[i].second - want_set[i].second) > kScoreTolerance)
                return "trial " + std::to_string(trial) + ": scores differ";
        }

        // wider fences may only unflag cells; the concentration set is
        // untouched by iqr_k
        dq::SmellParams wide = base;
        wide.iqr_k = base.iqr_k * 2;
        auto got_wide = dq::detect_believability(table, schema, wide);
        auto base_out = outlier_rows(got), wide_out = outlier_rows(got_wide);
        if (!std::includes(base_out.begin(), base_out.end(), wide_out.begin(), wide_out.end()))
            return "trial " + std::to_string(trial) + ": raising iqr_k flagged a new cell";
        if (concentration_groups(got_wide) != concentration_groups(got))
            return "trial " + std::to_string(trial) + ": iqr_k changed the concentration set";

        // a stricter share threshold may only drop concentrations
        dq::SmellParams strict = base;
        strict.freq_threshold = 0.75;
        auto got_strict = dq::detect_believability(table, schema, strict);
        auto base_conc = concentration_groups(got), strict_conc = concentration_groups(got_strict);
        if (!std::includes(base_conc.begin(), base_conc.end(), strict_conc.begin(),
                           strict_conc.end()))
            return "trial " + std::to_string(trial) +
                   ": raising freq_threshold flagged a new concentration";
        if (outlier_rows(got_strict) != base_out)
            return "trial " + std::to_string(trial) + ": freq_threshold changed the outlier set";
    }
    if (findings_seen < 50)
        return "only " + std::to_string(findings_seen) + " findings across 200 columns";
    return "";
}

// ---------------------------------------------------------------------------
// 7. Two hundred generated rule expressions survive print and reparse
//    with identical trees, the fully parenthesized form evaluates
//    identically, and a verdict is unknown exactly when some referenced
//    column is absent.

std::string check_expression_roundtrip() {
    testgen::Rng rng(192837);
    for (int trial = 0; trial < 200; ++trial) {
        auto expr = testgen::boolean_expr(rng, 4);

        std::string compact = dq::to_string(*expr);
        auto reparsed = dq::parse_rule_expr(compact);
        if (!dq::structurally_equal(*expr, *reparsed))
            return "trial " + std::to_string(trial) + ": minimal print reparses differently: " +
                   compact;

        std::string full = dq::to_string_parenthesized(*expr);
        auto reparsed_full = dq::parse_rule_expr(full);
        if (!dq::structurally_equal(*expr, *reparsed_full))
            return "trial " + std::to_string(trial) +
                   ": parenthesized print reparses differently: " + full;

        auto slots = testgen::random_slots(rng, 0.25);
        auto binding = testgen::pool_binding(slots);
        dq::TriState direct = dq::eval_rule(*expr, binding, 0.005);
        dq::TriState via_parens = dq::eval_rule(*reparsed_full, binding, 0.005);
        if (direct != via_parens)
            return "trial " + std::to_string(trial) + ": parenthesized form evaluates differently";

        std::vector<dq::ColumnRef> plain, aggregated;
        dq::collect_columns(*expr, plain, aggregated);
        bool any_absent = false;
        for (const auto& ref : plain)
            for (std::size_t i = 0; i < testgen::expr_columns().size(); ++i)
                if (testgen::expr_columns()[i] == ref.column && !slots[i]) any_absent = true;
        if (any_absent && direct != dq::TriState::unknown)
            return "trial " + std::to_string(trial) + ": absent reference but a known verdict on " +
                   compact;
        if (!any_absent && direct == dq::TriState::unknown)
            return "trial " + std::to_string(trial) + ": unknown verdict with every input bound on " +
                   compact;
    }
    return "";
}

// ---------------------------------------------------------------------------
// 8. Classification output is byte-deterministic across runs.

std::string check_deterministic_output() {
    CommandResult first = run_command(classify_command());
    CommandResult second = run_command(classify_command());
    if (first.out.empty()) return "no output captured";
    if (first.exit_code != second.exit_code)
        return "exit codes differ: " + std::to_string(first.exit_code) + " vs " +
               std::to_string(second.exit_code);
    if (first.out != second.out) return "stdout differs between identical runs";
    return "";
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::string (*check)();
    };
    const Criterion criteria[] = {
        {"golden corpus findings", check_golden_corpus},
        {"alignment closure", check_alignment_closure},
        {"duplicate and conflict oracle", check_duplicate_conflict_oracle},
        {"ticket fixture reconciliation", check_ticket_fixture},
        {"ordinal vocabularies", check_ordinal_vocabularies},
        {"believability oracle and monotonicity", check_believability_oracle},
        {"expression round-trip", check_expression_roundtrip},
        {"deterministic classify output", check_deterministic_output},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        std::string detail;
        try {
            detail = criterion.check();
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        if (detail.empty()) {
            std::cout << "PASS: " << criterion.name << "\n";
        } else {
            std::cout << "FAIL: " << criterion.name << " (" << detail << ")\n";
            ++failures;
        }
    }
    return failures ? 1 : 0;
}
