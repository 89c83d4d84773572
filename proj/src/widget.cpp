#include "statewidget/widget.hpp"

#include <array>
#include <set>

#include "statewidget/errors.hpp"

namespace statewidget {

namespace {

constexpr std::array<std::pair<ComponentKind, std::string_view>, 5> kKindNames{{
    {ComponentKind::Graph, "graph"},
    {ComponentKind::BarChart, "bar_chart"},
    {ComponentKind::Table, "table"},
    {ComponentKind::DecisionTable, "decision_table"},
    {ComponentKind::TextPanel, "text_panel"},
}};

double number_param(const Value& params, const char* key, double fallback) {
    auto it = params.find(key);
    if (it == params.end()) {
        return fallback;
    }
    if (!it->is_number()) {
        throw ContractError(std::string("param '") + key + "' must be a number");
    }
    return it->get<double>();
}

Value& viewport_of(Value& payload, const std::string& component_id) {
    Value& viewport = payload["viewport"][component_id];
    if (!viewport.is_object()) {
        viewport = Value{{"x", 0.0}, {"y", 0.0}, {"zoom", 1.0}};
    }
    return viewport;
}

Value pan_viewport(const SharedActionRegistry&, const ActionDispatch& dispatch, const Value& current) {
    Value next = current;
    Value& viewport = viewport_of(next, dispatch.component_id);
    const Value& p = dispatch.params;
    if (p.contains("x") || p.contains("y")) {
        viewport["x"] = number_param(p, "x", viewport["x"].get<double>());
        viewport["y"] = number_param(p, "y", viewport["y"].get<double>());
    } else {
        viewport["x"] = viewport["x"].get<double>() + number_param(p, "dx", 0.0);
        viewport["y"] = viewport["y"].get<double>() + number_param(p, "dy", 0.0);
    }
    return next;
}

Value zoom_viewport(const SharedActionRegistry&, const ActionDispatch& dispatch, const Value& current) {
    Value next = current;
    Value& viewport = viewport_of(next, dispatch.component_id);
    const Value& p = dispatch.params;
    double zoom = p.contains("zoom") ? number_param(p, "zoom", 1.0)
                                     : viewport["zoom"].get<double>() * number_param(p, "factor", 1.0);
    if (!(zoom > 0.0)) {
        throw ContractError("zoom must stay positive");
    }
    viewport["zoom"] = zoom;
    return next;
}

std::string compact(const Value& value) {
    if (value.is_string()) {
        return value.get<std::string>();
    }
    return value.dump();
}

} // namespace

std::string_view to_string(ComponentKind kind) {
    for (const auto& [value, name] : kKindNames) {
        if (value == kind) return name;
    }
    throw ContractError("component kind out of range");
}

ComponentKind parse_component_kind(std::string_view text) {
    for (const auto& [value, name] : kKindNames) {
        if (name == text) return value;
    }
    throw ContractError("unknown component kind '" + std::string(text) + "'");
}

Value to_json(const ComponentSpec& component) {
    Value bindings = Value::object();
    for (const auto& [type, handler] : component.bindings) {
        bindings[std::string(to_string(type))] = handler;
    }
    return Value{{"component_id", component.component_id},
                 {"kind", std::string(to_string(component.kind))},
                 {"title", component.title},
                 {"bindings", std::move(bindings)},
                 {"data_key", component.data_key}};
}

Value to_json(const ActionDispatch& dispatch) {
    return Value{{"interaction_type", std::string(to_string(dispatch.interaction_type))},
                 {"component_id", dispatch.component_id},
                 {"element", to_json(dispatch.element)},
                 {"params", dispatch.params}};
}

ActionDispatch dispatch_from_json(const Value& body) {
    if (!body.is_object()) {
        throw ContractError("dispatch body must be an object");
    }
    auto type = body.find("interaction_type");
    auto component = body.find("component_id");
    if (type == body.end() || !type->is_string()) {
        throw ContractError("dispatch needs a string interaction_type");
    }
    if (component == body.end() || !component->is_string()) {
        throw ContractError("dispatch needs a string component_id");
    }
    ActionDispatch dispatch;
    dispatch.interaction_type = parse_interaction_type(type->get<std::string>());
    if (!is_dispatchable(dispatch.interaction_type)) {
        throw ContractError("interaction_type '" + type->get<std::string>() + "' cannot be dispatched");
    }
    dispatch.component_id = component->get<std::string>();
    if (auto element = body.find("element"); element != body.end()) {
        dispatch.element = element_from_json(*element);
    }
    if (auto params = body.find("params"); params != body.end() && !params->is_null()) {
        if (!params->is_object()) {
            throw ContractError("dispatch params must be an object");
        }
        dispatch.params = *params;
    }
    return dispatch;
}

Value to_json(const HistoryRow& row) {
    return Value{{"action_id", row.action_id},
                 {"interaction_type", std::string(to_string(row.interaction_type))},
                 {"component_id", row.component_id},
                 {"summary", row.summary},
                 {"state_id", row.state_id.value},
                 {"restorable", row.restorable}};
}

std::string summarize(const ActionRecord& record) {
    const Value& p = record.params;
    switch (record.interaction_type) {
        case InteractionType::Init:
            return "init " + compact(p.value("widget_type", Value("widget")));
        case InteractionType::Restore:
            return "restore state " + compact(p.value("restored_from", Value(nullptr)));
        case InteractionType::Override:
            return "override " + compact(p.value("name", Value("")));
        case InteractionType::ClearOverride:
            return "clear override " + compact(p.value("name", Value("")));
        default:
            break;
    }
    std::string text = std::string(to_string(record.interaction_type)) + " on " + record.component_id;
    if (record.element.datum) {
        text += " " + compact(*record.element.datum);
    }
    if (p.is_object() && !p.empty()) {
        text += " " + p.dump();
    }
    return text;
}

Widget::Widget(WidgetSpec spec, WidgetBehavior behavior, Clock clock)
    : spec_(std::move(spec)),
      behavior_(std::move(behavior)),
      store_(spec_.widget_id, spec_.widget_type, std::move(clock)) {
    builtin_handlers_.emplace(kPanHandler, pan_viewport);
    builtin_handlers_.emplace(kZoomHandler, zoom_viewport);
}

std::unique_ptr<Widget> Widget::init(WidgetSpec spec, WidgetBehavior behavior, Clock clock) {
    if (!behavior.initial_payload || !behavior.recompute) {
        throw ContractError("widget behavior needs initial_payload and recompute");
    }
    std::unique_ptr<Widget> widget(new Widget(std::move(spec), std::move(behavior), std::move(clock)));
    const WidgetSpec& s = widget->spec_;

    std::set<std::string> ids;
    for (const auto& component : s.components) {
        if (!ids.insert(component.component_id).second) {
            throw ContractError("duplicate component id '" + component.component_id + "'");
        }
        for (const auto& [type, handler] : component.bindings) {
            if (!is_dispatchable(type)) {
                throw ContractError("component '" + component.component_id + "' binds a non-dispatchable interaction");
            }
            (void)widget->handler_for(handler);
        }
    }

    for (auto& [name, op] : widget->behavior_.shared_actions) {
        widget->actions_.register_default(name, op);
    }
    for (const auto& name : s.shared_actions) {
        if (!widget->actions_.contains(name)) {
            throw ContractError("shared action '" + name + "' is declared but never registered");
        }
    }

    Value overrides = Value::array();
    for (const auto& [name, udf] : s.init_overrides) {
        widget->actions_.set_override(name, udf);
        overrides.push_back(provenance_params(name, udf));
    }

    Value payload;
    try {
        payload = widget->behavior_.initial_payload(widget->actions_);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw BackendError(std::string("initial payload failed: ") + e.what());
    }
    if (!payload.contains("viewport")) {
        payload["viewport"] = Value::object();
    }
    for (const auto& component : s.components) {
        if (component.kind == ComponentKind::Graph) {
            (void)viewport_of(payload, component.component_id);
        }
    }

    ActionContext context;
    context.interaction_type = InteractionType::Init;
    context.component_id = s.widget_id;
    context.element.path = s.widget_id;
    context.params = Value{{"widget_type", s.widget_type}, {"overrides", std::move(overrides)}};
    widget->store_.record_action(context, std::move(payload));
    return widget;
}

const ComponentSpec* Widget::find_component(std::string_view component_id) const {
    for (const auto& component : spec_.components) {
        if (component.component_id == component_id) {
            return &component;
        }
    }
    return nullptr;
}

Value Widget::render_spec() const {
    Value components = Value::array();
    for (const auto& component : spec_.components) {
        components.push_back(to_json(component));
    }
    return Value{{"widget_type", spec_.widget_type}, {"components", std::move(components)}};
}

const Handler& Widget::handler_for(const std::string& name) const {
    if (auto it = behavior_.handlers.find(name); it != behavior_.handlers.end()) {
        return it->second;
    }
    if (auto it = builtin_handlers_.find(name); it != builtin_handlers_.end()) {
        return it->second;
    }
    throw ContractError("no handler named '" + name + "'");
}

DataState Widget::handle_action(const ActionDispatch& dispatch) {
    std::lock_guard lock(mutation_mutex_);
    if (!is_dispatchable(dispatch.interaction_type)) {
        throw ContractError("interaction_type '" + std::string(to_string(dispatch.interaction_type)) +
                            "' cannot be dispatched");
    }
    const ComponentSpec* component = find_component(dispatch.component_id);
    if (component == nullptr) {
        throw ContractError("unknown component '" + dispatch.component_id + "'");
    }
    auto binding = component->bindings.find(dispatch.interaction_type);
    if (binding == component->bindings.end()) {
        throw ContractError("component '" + dispatch.component_id + "' has no " +
                            std::string(to_string(dispatch.interaction_type)) + " binding");
    }
    const Handler& handler = handler_for(binding->second);

    const DataState current = store_.current_state();
    Value next;
    try {
        next = handler(actions_, dispatch, current.payload);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw ContractError("handler '" + binding->second + "' rejected the dispatch: " + e.what());
    }

    ActionContext context{dispatch.interaction_type, dispatch.component_id, dispatch.element, dispatch.params};
    return store_.record_action(context, std::move(next)).second;
}

DataState Widget::restore(StateId state_id) {
    std::lock_guard lock(mutation_mutex_);
    return store_.restore(state_id);
}

DataState Widget::record_override_change(InteractionType type, const std::string& name, const Value& params) {
    const DataState current = store_.current_state();
    Value next;
    try {
        next = behavior_.recompute(actions_, current.payload);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw BackendError(std::string("recompute failed: ") + e.what());
    }
    ActionContext context;
    context.interaction_type = type;
    context.component_id = spec_.widget_id;
    context.element.path = "shared_actions/" + name;
    context.params = params;
    return store_.record_action(context, std::move(next)).second;
}

DataState Widget::set_override(const std::string& name, Udf udf) {
    std::lock_guard lock(mutation_mutex_);
    const auto previous = actions_.entry(name).override_udf;
    Value params = provenance_params(name, udf);
    actions_.set_override(name, std::move(udf));
    try {
        return record_override_change(InteractionType::Override, name, params);
    } catch (...) {
        if (previous) {
            actions_.set_override(name, *previous);
        } else {
            actions_.clear_override(name);
        }
        throw;
    }
}

DataState Widget::clear_override(const std::string& name) {
    std::lock_guard lock(mutation_mutex_);
    const auto previous = actions_.entry(name).override_udf;
    actions_.clear_override(name);
    try {
        return record_override_change(InteractionType::ClearOverride, name, Value{{"name", name}});
    } catch (...) {
        if (previous) {
            actions_.set_override(name, *previous);
        }
        throw;
    }
}

Value Widget::invoke(const std::string& name, const Value& params) const {
    std::lock_guard lock(mutation_mutex_);
    return actions_.invoke(name, params);
}

std::vector<HistoryRow> Widget::history_view_model() const {
    std::vector<HistoryRow> rows;
    for (const auto& record : store_.history_list()) {
        rows.push_back(HistoryRow{record.action_id, record.interaction_type, record.component_id, summarize(record),
                                  record.result_state_id, true});
    }
    return rows;
}

Value Widget::export_data(std::optional<StateId> state_id) const {
    return store_.export_state(state_id);
}

Value Widget::component_data(std::string_view component_id) const {
    const ComponentSpec* component = find_component(component_id);
    if (component == nullptr) {
        throw NotFoundError("unknown component '" + std::string(component_id) + "'");
    }
    const Value payload = store_.current_state().payload;
    return payload.value(component->data_key, Value(nullptr));
}

} // namespace statewidget
