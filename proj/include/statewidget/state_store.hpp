#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "statewidget/interaction.hpp"

namespace statewidget {

struct StateId {
    std::uint64_t value = 0;

    friend auto operator<=>(StateId, StateId) = default;
};

using ActionId = std::uint64_t;

// Milliseconds since the Unix epoch, UTC.
using TimestampMs = std::int64_t;
using Clock = std::function<TimestampMs()>;

TimestampMs system_clock_ms();
// "2026-10-16T08:30:00.123Z"
std::string format_iso8601_utc(TimestampMs ms);

// What happened: the event context a frontend (or the kernel) reports.
struct ActionContext {
    InteractionType interaction_type = InteractionType::Init;
    std::string component_id;
    ElementDescriptor element;
    Value params = Value::object();
};

struct ActionRecord {
    ActionId action_id = 0;
    TimestampMs timestamp = 0;
    InteractionType interaction_type = InteractionType::Init;
    std::string component_id;
    ElementDescriptor element;
    Value params = Value::object();
    StateId result_state_id;
};

// Snapshot handed out to callers. The payload is a copy; the stored one
// cannot be reached through it.
struct DataState {
    StateId state_id;
    Value payload;
    TimestampMs created_at = 0;
    ActionId origin_action_id = 0;
};

struct ActionRange {
    ActionId from_action_id = 0;
    ActionId to_action_id = 0;
};

// Action-log line format. Field names are part of the on-disk contract.
Value to_json(const ActionRecord& record);
ActionRecord action_record_from_json(const Value& value);

// True for integers >= 0 regardless of signed/unsigned storage.
bool is_non_negative_integer(const Value& value);

// Throws PayloadError unless `payload` is an object the export format can
// carry losslessly (finite numbers, valid UTF-8, no discarded values).
void validate_payload(const Value& payload);

// Append-only Data States list plus action history for one widget.
//
// Mutations are serialized by an exclusive lock; readers share the lock and
// always observe a consistent prefix of both sequences.
class StateStore {
public:
    StateStore(std::string widget_id, std::string widget_type, Clock clock = system_clock_ms);

    StateStore(const StateStore&) = delete;
    StateStore& operator=(const StateStore&) = delete;

    const std::string& widget_id() const { return widget_id_; }
    const std::string& widget_type() const { return widget_type_; }

    // The first call must be an init action and init is accepted only there.
    std::pair<ActionRecord, DataState> record_action(const ActionContext& context, Value payload);

    DataState get_state(StateId state_id) const;

    // Appends a restore record and a new state carrying a copy of the
    // payload of `state_id`. History is never rewound.
    DataState restore(StateId state_id);

    // Export document for `state_id`, or the latest state when empty.
    Value export_state(std::optional<StateId> state_id = std::nullopt) const;

    // Inclusive range; the full history when no range is given.
    std::vector<ActionRecord> history_list(std::optional<ActionRange> range = std::nullopt) const;

    std::size_t history_size() const;
    std::size_t state_count() const;
    bool empty() const { return state_count() == 0; }

    // Latest state. Throws NotFoundError before the init action.
    DataState current_state() const;
    StateId current_state_id() const;

    // Appends each new record (existing ones first) as one JSON line.
    void attach_journal(const std::filesystem::path& path);

private:
    struct StoredState {
        StateId state_id;
        std::shared_ptr<const Value> payload;
        TimestampMs created_at = 0;
        ActionId origin_action_id = 0;
    };

    std::pair<ActionRecord, DataState> append_locked(const ActionContext& context,
                                                     std::shared_ptr<const Value> payload);
    const StoredState& find_locked(StateId state_id) const;
    static DataState snapshot(const StoredState& stored);

    std::string widget_id_;
    std::string widget_type_;
    Clock clock_;

    mutable std::shared_mutex mutex_;
    std::vector<StoredState> states_;
    std::vector<ActionRecord> records_;
    std::unique_ptr<std::ofstream> journal_;
};

} // namespace statewidget
