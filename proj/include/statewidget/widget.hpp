#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "statewidget/interaction.hpp"
#include "statewidget/shared_actions.hpp"
#include "statewidget/state_store.hpp"

namespace statewidget {

enum class ComponentKind { Graph, BarChart, Table, DecisionTable, TextPanel };

std::string_view to_string(ComponentKind kind);
ComponentKind parse_component_kind(std::string_view text);

struct ComponentSpec {
    std::string component_id;
    ComponentKind kind = ComponentKind::Table;
    std::string title;
    // interaction -> handler name
    std::map<InteractionType, std::string> bindings;
    // Key of DataState.payload this component renders.
    std::string data_key;
};

Value to_json(const ComponentSpec& component);

struct WidgetSpec {
    std::string widget_id;
    std::string widget_type;
    std::vector<ComponentSpec> components;
    std::vector<std::string> shared_actions;
    // Overrides supplied when the widget is instantiated.
    std::map<std::string, Udf> init_overrides;
};

// Body of an action_dispatch: an interaction reported by the frontend.
struct ActionDispatch {
    InteractionType interaction_type = InteractionType::Select;
    std::string component_id;
    ElementDescriptor element;
    Value params = Value::object();
};

Value to_json(const ActionDispatch& dispatch);
// Throws ContractError for a malformed body or a non-dispatchable type.
ActionDispatch dispatch_from_json(const Value& body);

// Computes the next payload for a dispatch from the current one.
using Handler =
    std::function<Value(const SharedActionRegistry& actions, const ActionDispatch& dispatch, const Value& current)>;

// What a concrete widget plugs into the base: its shared-action defaults,
// its handlers, and how to build / rebuild the payload from shared actions.
struct WidgetBehavior {
    std::vector<std::pair<std::string, SharedOp>> shared_actions;
    std::map<std::string, Handler> handlers;
    std::function<Value(const SharedActionRegistry& actions)> initial_payload;
    // Re-derives every shared-action-backed key of `current`; used after an
    // override is installed or cleared.
    std::function<Value(const SharedActionRegistry& actions, const Value& current)> recompute;
};

// Handlers every widget gets for free; they only touch payload["viewport"].
inline constexpr const char* kPanHandler = "pan_viewport";
inline constexpr const char* kZoomHandler = "zoom_viewport";

struct HistoryRow {
    ActionId action_id = 0;
    InteractionType interaction_type = InteractionType::Init;
    std::string component_id;
    std::string summary;
    StateId state_id;
    bool restorable = true;
};

Value to_json(const HistoryRow& row);

// A stateful widget: every interaction goes through one mutation lock, is
// recorded in the action history and produces a new Data State.
class Widget {
public:
    // Throws ContractError for an inconsistent spec, NotFoundError when an
    // init override names an unknown shared action, BackendError when the
    // initial payload cannot be computed.
    static std::unique_ptr<Widget> init(WidgetSpec spec, WidgetBehavior behavior, Clock clock = system_clock_ms);

    Widget(const Widget&) = delete;
    Widget& operator=(const Widget&) = delete;

    const std::string& widget_id() const { return spec_.widget_id; }
    const std::string& widget_type() const { return spec_.widget_type; }
    const WidgetSpec& spec() const { return spec_; }
    const ComponentSpec* find_component(std::string_view component_id) const;

    // {widget_type, components: [...]}
    Value render_spec() const;

    DataState handle_action(const ActionDispatch& dispatch);
    DataState restore(StateId state_id);

    DataState set_override(const std::string& name, Udf udf);
    DataState clear_override(const std::string& name);
    Value invoke(const std::string& name, const Value& params) const;

    std::vector<HistoryRow> history_view_model() const;
    Value export_data(std::optional<StateId> state_id = std::nullopt) const;

    DataState current_state() const { return store_.current_state(); }
    DataState get_state(StateId state_id) const { return store_.get_state(state_id); }
    std::vector<ActionRecord> history_list(std::optional<ActionRange> range = std::nullopt) const {
        return store_.history_list(range);
    }
    std::size_t history_size() const { return store_.history_size(); }

    // payload[data_key] of the current state.
    Value component_data(std::string_view component_id) const;

    void attach_journal(const std::filesystem::path& path) { store_.attach_journal(path); }

private:
    Widget(WidgetSpec spec, WidgetBehavior behavior, Clock clock);

    const Handler& handler_for(const std::string& name) const;
    DataState record_override_change(InteractionType type, const std::string& name, const Value& params);

    WidgetSpec spec_;
    WidgetBehavior behavior_;
    std::map<std::string, Handler> builtin_handlers_;
    SharedActionRegistry actions_;
    StateStore store_;
    mutable std::mutex mutation_mutex_;
};

// One-line description of a record for the history view.
std::string summarize(const ActionRecord& record);

} // namespace statewidget
