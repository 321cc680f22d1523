#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dq/classify.hpp"
#include "dq/report.hpp"
#include "dq/schema.hpp"
#include "dq/table.hpp"
#include "dq/triage.hpp"

namespace fs = std::filesystem;

namespace {

// exit codes: 0 clean, 1 findings, 2 usage/config, 3 load error
constexpr int kExitClean = 0;
constexpr int kExitFindings = 1;
constexpr int kExitUsage = 2;
constexpr int kExitLoad = 3;

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct Inputs {
    dq::ConstraintSchema schema;
    dq::Dataset dataset;
    dq::KeyBaselines baselines;
};

dq::Dataset load_dataset(const fs::path& data_path, const dq::ConstraintSchema& schema) {
    dq::Dataset dataset;
    if (fs::is_directory(data_path)) {
        for (const auto& table : schema.tables) {
            fs::path file = data_path / (table.name + ".csv");
            dataset.tables.push_back(
                dq::load_table(read_file(file), table.name, schema.null_policy, &table));
        }
        return dataset;
    }
    std::string stem = data_path.stem().string();
    const dq::TableConstraint* table = schema.find_table(stem);
    if (!table && schema.tables.size() == 1) table = &schema.tables.front();
    if (!table)
        throw std::runtime_error("no schema table named \"" + stem + "\" for file " +
                                 data_path.string());
    dataset.tables.push_back(
        dq::load_table(read_file(data_path), table->name, schema.null_policy, table));
    return dataset;
}

dq::KeyBaselines load_baselines(const dq::ConstraintSchema& schema, const fs::path& schema_dir,
                                const std::string& override_path) {
    dq::KeyBaselines baselines;
    bool any_declared = false;
    for (const auto& table : schema.tables) {
        if (!table.expected_keys) continue;
        any_declared = true;
        if (!override_path.empty()) {
            baselines[table.name] = dq::load_key_baseline(override_path);
        } else {
            fs::path path = *table.expected_keys;
            if (path.is_relative()) path = schema_dir / path;
            baselines[table.name] = dq::load_key_baseline(path.string());
        }
    }
    if (!override_path.empty() && !any_declared)
        std::cerr << "note: --expected-keys ignored, no table declares expected_keys\n";
    return baselines;
}

Inputs load_inputs(const std::string& schema_path, const std::string& data_path,
                   const std::string& expected_keys, const std::string& smell_params,
                   bool need_baselines = true) {
    Inputs inputs;
    inputs.schema = dq::parse_schema(read_file(schema_path));
    if (!smell_params.empty())
        inputs.schema.smell_params = dq::parse_smell_params_json(smell_params);
    inputs.dataset = load_dataset(data_path, inputs.schema);
    if (need_baselines)
        inputs.baselines =
            load_baselines(inputs.schema, fs::path(schema_path).parent_path(), expected_keys);
    return inputs;
}

int emit_findings(const std::vector<dq::Issue>& issues,
                  const std::vector<dq::SmellFinding>& smells) {
    for (const auto& issue : issues) std::cout << dq::issue_jsonl(issue) << "\n";
    for (const auto& smell : smells) std::cout << dq::smell_jsonl(smell) << "\n";
    std::cerr << dq::findings_summary(issues, smells);
    return issues.empty() && smells.empty() ? kExitClean : kExitFindings;
}

// ---------------------------------------------------------------------------
// wizard

struct Choice {
    std::string word;
    std::string description;
};

// Numbered menu on stderr; accepts the number or the word (case folded,
// hyphens as underscores). Returns nullopt on end of input.
std::optional<std::size_t> ask(std::istream& in, const std::string& question,
                               const std::vector<Choice>& choices) {
    for (;;) {
        std::cerr << question << "\n";
        for (std::size_t i = 0; i < choices.size(); ++i) {
            std::cerr << "  " << (i + 1) << ") " << choices[i].word;
            if (!choices[i].description.empty()) std::cerr << " - " << choices[i].description;
            std::cerr << "\n";
        }
        std::cerr << "> " << std::flush;
        std::string line;
        if (!std::getline(in, line)) return std::nullopt;
        std::string norm;
        for (char c : line) {
            if (c == ' ' || c == '\t') continue;
            norm.push_back(c == '-' ? '_' : static_cast<char>(std::tolower(
                                                static_cast<unsigned char>(c))));
        }
        if (norm.empty()) continue;
        for (std::size_t i = 0; i < choices.size(); ++i) {
            if (norm == choices[i].word || norm == std::to_string(i + 1)) return i;
        }
        std::cerr << "unrecognized answer \"" << line << "\"\n";
    }
}

int run_wizard(const std::string& id) {
    auto choose = [&](const std::string& question,
                      const std::vector<Choice>& choices) -> std::optional<std::size_t> {
        return ask(std::cin, question, choices);
    };

    auto q1 = choose("Does the issue break a declared integrity constraint?",
                     {{"yes", "a constraint in the schema is violated"},
                      {"no", "the data is legal but suspicious (a smell)"}});
    if (!q1) return kExitUsage;

    dq::Ticket ticket;
    ticket.id = id;

    if (*q1 == 0) {
        auto q2 = choose("Where does the issue live?",
                         {{"cell", "one value in one row"},
                          {"inter_row", "several rows of one table"},
                          {"inter_column", "several columns of one row"},
                          {"inter_table", "more than one table"}});
        if (!q2) return kExitUsage;
        dq::Scope scope = static_cast<dq::Scope>(*q2);

        std::vector<dq::Attribute> legal;
        switch (scope) {
            case dq::Scope::cell:
                legal = {dq::Attribute::missing, dq::Attribute::invalid};
                break;
            case dq::Scope::inter_row:
                legal = {dq::Attribute::missing, dq::Attribute::duplicate,
                         dq::Attribute::conflict};
                break;
            case dq::Scope::inter_column:
                legal = {dq::Attribute::conflict};
                break;
            case dq::Scope::inter_table:
                legal = {dq::Attribute::missing, dq::Attribute::conflict};
                break;
        }
        std::vector<Choice> menu;
        for (dq::Attribute a : legal) menu.push_back({std::string(dq::to_string(a)), ""});
        auto q3 = choose("What is the issue?", menu);
        if (!q3) return kExitUsage;
        ticket.attribute = legal[*q3];

        std::optional<dq::InvalidKind> kind;
        if (ticket.attribute == dq::Attribute::invalid) {
            auto q4 = choose("Which constraint does the value break?",
                             {{"pattern", "form or type of the value"},
                              {"range", "interval or allowed set"}});
            if (!q4) return kExitUsage;
            kind = *q4 == 0 ? dq::InvalidKind::pattern : dq::InvalidKind::range;
        }
        ticket.outcome = dq::align(ticket.attribute, scope, kind);
    } else {
        auto q2 = choose("Which smell is it?", {{"believability", "implausible but legal value"},
                                                {"consistency", "several spellings of one thing"},
                                                {"syntactic", "one label for several entities"},
                                                {"encoding", "wrong type or format affiliation"}});
        if (!q2) return kExitUsage;
        ticket.attribute = static_cast<dq::Attribute>(
            static_cast<int>(dq::Attribute::believability) + static_cast<int>(*q2));
        ticket.outcome = dq::Outcome::none;
    }

    std::cerr << "label: " << dq::to_string(ticket.attribute) << " / "
              << dq::to_string(ticket.outcome) << "\n";
    std::cout << dq::ticket_csv_line(ticket);
    return kExitClean;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"declarative data-quality linter for CSV tables"};
    app.require_subcommand(1);

    std::string schema_path, data_path, tickets_path, mode_word, expected_keys, smell_params;
    std::string format = "text";
    std::string wizard_id = "ticket-1";

    auto add_data_options = [&](CLI::App* cmd, bool with_keys, bool with_params) {
        cmd->add_option("--schema", schema_path, "schema JSON file")->required();
        cmd->add_option("--data", data_path, "CSV file or directory of <table>.csv")->required();
        if (with_keys)
            cmd->add_option("--expected-keys", expected_keys,
                            "expected-keys file overriding every declaring table");
        if (with_params)
            cmd->add_option("--smell-params", smell_params,
                            "smell thresholds as JSON, replacing schema values");
    };

    CLI::App* validate = app.add_subcommand("validate", "report integrity issues");
    add_data_options(validate, true, false);

    CLI::App* smells = app.add_subcommand("smells", "report data smells");
    add_data_options(smells, false, true);

    CLI::App* classify = app.add_subcommand("classify", "report issues and smells, labeled");
    add_data_options(classify, true, true);

    CLI::App* stats = app.add_subcommand("stats", "summarize labeled tickets");
    stats->add_option("--tickets", tickets_path, "ticket CSV or JSON-Lines file")->required();
    stats->add_option("--mode", mode_word, "summary mode")
        ->required()
        ->check(CLI::IsMember({"attribute_dist", "outcome_dist", "attribute_stats",
                               "outcome_stats", "crosstab", "pair_stats"}));
    stats->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "csv", "jsonl"}));

    CLI::App* wizard = app.add_subcommand("wizard", "interactively label one issue");
    wizard->add_option("--id", wizard_id, "ticket id for the emitted record");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (app.got_subcommand(validate)) {
            Inputs in = load_inputs(schema_path, data_path, expected_keys, smell_params);
            auto labeled = dq::label_dataset(in.dataset, in.schema, in.baselines);
            return emit_findings(labeled.issues, {});
        }
        if (app.got_subcommand(smells)) {
            Inputs in = load_inputs(schema_path, data_path, expected_keys, smell_params, false);
            auto labeled = dq::label_dataset(in.dataset, in.schema, in.baselines);
            return emit_findings({}, labeled.smells);
        }
        if (app.got_subcommand(classify)) {
            Inputs in = load_inputs(schema_path, data_path, expected_keys, smell_params);
            auto labeled = dq::label_dataset(in.dataset, in.schema, in.baselines);
            return emit_findings(labeled.issues, labeled.smells);
        }
        if (app.got_subcommand(stats)) {
            auto tickets = dq::parse_tickets(read_file(tickets_path));
            auto summary = dq::summarize(tickets, *dq::summary_mode_from_string(mode_word));
            if (format == "csv")
                std::cout << dq::render_summary_csv(summary);
            else if (format == "jsonl")
                std::cout << dq::render_summary_jsonl(summary);
            else
                std::cout << dq::render_summary_text(summary);
            return kExitClean;
        }
        if (app.got_subcommand(wizard)) return run_wizard(wizard_id);
    } catch (const dq::SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitLoad;
    } catch (const dq::TableLoadError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitLoad;
    } catch (const dq::TicketError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitLoad;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitLoad;
    }
    return kExitUsage;
}
