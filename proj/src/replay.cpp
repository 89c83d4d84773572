#include "statewidget/replay.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "statewidget/alignment.hpp"
#include "statewidget/errors.hpp"
#include "statewidget/explorer.hpp"
#include "statewidget/property_graph.hpp"

namespace statewidget {

namespace {

constexpr const char* kMalformed = "malformed";
constexpr const char* kUnexpectedInit = "unexpected_init";
constexpr const char* kUdfNotReplayable = "udf_not_replayable";

struct LineFailure {
    std::string code;
    std::string message;
};

// Returns nothing on success.
std::optional<LineFailure> apply_line(Widget& widget, const std::string& line, bool first_line) {
    Value record;
    try {
        record = Value::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        return LineFailure{kMalformed, e.what()};
    }
    if (!record.is_object() || !record.contains("interaction_type") || !record["interaction_type"].is_string()) {
        return LineFailure{kMalformed, "line needs a string interaction_type"};
    }

    InteractionType type;
    try {
        type = parse_interaction_type(record["interaction_type"].get<std::string>());
    } catch (const ContractError& e) {
        return LineFailure{kMalformed, e.what()};
    }

    try {
        const Value params = record.value("params", Value::object());
        if (!params.is_object()) {
            return LineFailure{kMalformed, "params must be an object"};
        }
        switch (type) {
            case InteractionType::Init:
                // The widget is already initialized; a leading init line is the journal header.
                if (!first_line) {
                    return LineFailure{kUnexpectedInit, "init may only appear on the first line"};
                }
                return std::nullopt;
            case InteractionType::Restore: {
                auto it = params.find("restored_from");
                if (it == params.end() || !is_non_negative_integer(*it)) {
                    return LineFailure{kMalformed, "restore needs params.restored_from"};
                }
                widget.restore(StateId{it->get<std::uint64_t>()});
                return std::nullopt;
            }
            case InteractionType::Override:
                return LineFailure{kUdfNotReplayable, "user-defined overrides cannot be replayed from a log"};
            case InteractionType::ClearOverride: {
                auto it = params.find("name");
                if (it == params.end() || !it->is_string()) {
                    return LineFailure{kMalformed, "clear_override needs params.name"};
                }
                widget.clear_override(it->get<std::string>());
                return std::nullopt;
            }
            default: {
                ActionDispatch dispatch;
                try {
                    dispatch = dispatch_from_json(record);
                } catch (const ContractError& e) {
                    return LineFailure{kMalformed, e.what()};
                }
                widget.handle_action(dispatch);
                return std::nullopt;
            }
        }
    } catch (const Error& e) {
        return LineFailure{e.code(), e.what()};
    } catch (const nlohmann::json::exception& e) {
        return LineFailure{kMalformed, e.what()};
    }
}

std::unique_ptr<Widget> build_widget(const ReplayOptions& options) {
    auto graph = std::make_shared<const PropertyGraph>(load_graph(options.graph_path));
    if (options.widget == WidgetKind::Explorer) {
        ExplorerOptions explorer_options;
        explorer_options.clock = options.clock;
        return make_explorer(std::move(graph), explorer_options);
    }
    if (!options.candidates_path) {
        throw FormatError("--candidates is required for the alignment widget");
    }
    AlignmentOptions alignment_options;
    alignment_options.clock = options.clock;
    return make_alignment_widget(std::move(graph), load_candidates(*options.candidates_path), alignment_options);
}

template <typename Fn>
int run_reporting(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    }
}

} // namespace

WidgetKind parse_widget_kind(std::string_view text) {
    if (text == "explorer") return WidgetKind::Explorer;
    if (text == "alignment") return WidgetKind::Alignment;
    throw ContractError("unknown widget kind '" + std::string(text) + "'");
}

Value to_json(const ReplayReport& report) {
    Value errors = Value::array();
    for (const auto& error : report.errors) {
        errors.push_back(Value{{"line_no", error.line_no}, {"code", error.code}, {"message", error.message}});
    }
    return Value{{"actions_applied", report.actions_applied},
                 {"errors", std::move(errors)},
                 {"final_state_id", report.final_state_id.value},
                 {"final_export_path", report.final_export_path.string()}};
}

ReplayReport replay_log(Widget& widget, std::istream& log) {
    ReplayReport report;
    std::string line;
    std::size_t line_no = 0;
    bool first = true;
    while (std::getline(log, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        const std::size_t before = widget.history_size();
        if (auto failure = apply_line(widget, line, first)) {
            report.errors.push_back({line_no, failure->code, failure->message});
        } else if (widget.history_size() > before) {
            ++report.actions_applied;
        }
        first = false;
    }
    report.final_state_id = widget.current_state().state_id;
    return report;
}

ReplayReport replay(const ReplayOptions& options) {
    auto widget = build_widget(options);

    std::ifstream log(options.log_path);
    if (!log) {
        throw IoError("cannot open log " + options.log_path.string());
    }
    if (options.journal_path) {
        std::filesystem::remove(*options.journal_path);
        widget->attach_journal(*options.journal_path);
    }

    ReplayReport report = replay_log(*widget, log);

    std::ofstream out(options.out_path, std::ios::out | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write export " + options.out_path.string());
    }
    out << widget->export_data().dump(2) << '\n';
    if (!out) {
        throw IoError("failed writing export " + options.out_path.string());
    }
    report.final_export_path = options.out_path;
    return report;
}

int cmd_validate(const std::filesystem::path& graph_path, std::ostream& out, std::ostream& err) {
    return run_reporting(err, [&] {
        const PropertyGraph graph = load_graph(graph_path);
        out << "ok: " << graph.nodes().size() << " nodes, " << graph.edges().size() << " edges\n";
        return kExitOk;
    });
}

int cmd_schema(const std::filesystem::path& graph_path, std::ostream& out, std::ostream& err) {
    return run_reporting(err, [&] {
        out << to_json(compute_schema(load_graph(graph_path))).dump(2) << '\n';
        return kExitOk;
    });
}

int cmd_replay(const ReplayOptions& options, std::ostream& out, std::ostream& err) {
    return run_reporting(err, [&] {
        out << to_json(replay(options)).dump(2) << '\n';
        return kExitOk;
    });
}

} // namespace statewidget
