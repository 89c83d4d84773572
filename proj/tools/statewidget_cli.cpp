#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "statewidget/errors.hpp"
#include "statewidget/replay.hpp"

int main(int argc, char** argv) {
    using namespace statewidget;

    CLI::App app{"Validate graph files, print schemas and replay widget action logs"};
    app.require_subcommand(1);

    std::string graph_path;

    auto* validate = app.add_subcommand("validate", "Check that a graph file loads");
    validate->add_option("--graph", graph_path, "Graph JSON file")->required();

    auto* schema = app.add_subcommand("schema", "Print the schema summary of a graph as JSON");
    schema->add_option("--graph", graph_path, "Graph JSON file")->required();

    std::string log_path;
    std::string out_path;
    std::string widget = "explorer";
    std::string candidates_path;
    std::string journal_path;
    auto* replay_cmd = app.add_subcommand("replay", "Replay an action log and export the final state");
    replay_cmd->add_option("--graph", graph_path, "Graph JSON file")->required();
    replay_cmd->add_option("--log", log_path, "Newline-delimited action log")->required();
    replay_cmd->add_option("--out", out_path, "Where to write the export document")->required();
    replay_cmd->add_option("--widget", widget, "explorer or alignment")
        ->check(CLI::IsMember({"explorer", "alignment"}));
    replay_cmd->add_option("--candidates", candidates_path, "Candidates JSON (alignment only)");
    replay_cmd->add_option("--journal", journal_path, "Also write the replayed session's action log here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitInvalid;
    }

    if (*validate) {
        return cmd_validate(graph_path, std::cout, std::cerr);
    }
    if (*schema) {
        return cmd_schema(graph_path, std::cout, std::cerr);
    }

    ReplayOptions options;
    options.graph_path = graph_path;
    options.log_path = log_path;
    options.out_path = out_path;
    options.widget = parse_widget_kind(widget);
    if (!candidates_path.empty()) options.candidates_path = candidates_path;
    if (!journal_path.empty()) options.journal_path = journal_path;
    return cmd_replay(options, std::cout, std::cerr);
}
