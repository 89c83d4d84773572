#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "statewidget/state_store.hpp"
#include "statewidget/widget.hpp"

namespace statewidget {

enum class WidgetKind { Explorer, Alignment };

WidgetKind parse_widget_kind(std::string_view text);

struct ReplayLineError {
    std::size_t line_no = 0; // 1-based
    std::string code;
    std::string message;
};

struct ReplayReport {
    std::size_t actions_applied = 0;
    std::vector<ReplayLineError> errors;
    StateId final_state_id;
    std::filesystem::path final_export_path;
};

Value to_json(const ReplayReport& report);

// Applies one action-log line per non-blank input line, FIFO, continuing
// past failures. Lines follow the action-log record layout; only
// interaction_type, component_id, element and params are read.
ReplayReport replay_log(Widget& widget, std::istream& log);

struct ReplayOptions {
    std::filesystem::path graph_path;
    std::filesystem::path log_path;
    std::filesystem::path out_path;
    WidgetKind widget = WidgetKind::Explorer;
    std::optional<std::filesystem::path> candidates_path;
    // When set, the replayed session's own action log is written here.
    std::optional<std::filesystem::path> journal_path;
    Clock clock = system_clock_ms;
};

// Builds the widget, replays the log and writes the final export document
// (pretty-printed, keys sorted) to out_path. Throws IoError / FormatError
// when inputs cannot be loaded.
ReplayReport replay(const ReplayOptions& options);

// Exit codes: 0 success, 1 invalid input, 2 I/O failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitIo = 2;

int cmd_validate(const std::filesystem::path& graph_path, std::ostream& out, std::ostream& err);
// Prints the schema as JSON with sorted keys.
int cmd_schema(const std::filesystem::path& graph_path, std::ostream& out, std::ostream& err);
// Prints the report as JSON.
int cmd_replay(const ReplayOptions& options, std::ostream& out, std::ostream& err);

} // namespace statewidget
