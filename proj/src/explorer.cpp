#include "statewidget/explorer.hpp"

#include <algorithm>

#include "statewidget/errors.hpp"

namespace statewidget {

namespace {

using namespace explorer;

std::optional<std::string> optional_string(const Value& object, const char* key) {
    if (!object.is_object()) {
        return std::nullopt;
    }
    auto it = object.find(key);
    if (it == object.end() || it->is_null()) {
        return std::nullopt;
    }
    if (!it->is_string()) {
        throw ContractError(std::string("'") + key + "' must be a string");
    }
    return it->get<std::string>();
}

// Looks in element.datum first, then params.
std::optional<std::string> dispatch_string(const ActionDispatch& dispatch, const char* key) {
    if (dispatch.element.datum) {
        if (auto value = optional_string(*dispatch.element.datum, key)) {
            return value;
        }
    }
    return optional_string(dispatch.params, key);
}

// Shape-checks a shared action result; a bad shape from an override is the
// user's fault, from a default it is ours.
Value checked_distribution(const SharedActionRegistry& actions, const std::string& name, Value value) {
    try {
        (void)distribution_entries_from_json(value);
    } catch (const ContractError& e) {
        if (actions.has_override(name)) {
            throw UdfError("override of '" + name + "' returned a malformed distribution: " + e.what());
        }
        throw;
    }
    return value;
}

Value checked_id_list(const SharedActionRegistry& actions, const std::string& name, Value value) {
    const bool ok = value.is_array() && std::all_of(value.begin(), value.end(), [](const Value& v) {
                        return v.is_string();
                    });
    if (!ok) {
        if (actions.has_override(name)) {
            throw UdfError("override of '" + name + "' must return a list of node ids");
        }
        throw ContractError("'" + name + "' returned a non-list");
    }
    return value;
}

struct Explorer {
    std::shared_ptr<const PropertyGraph> graph;

    Value get_schema(const Value&) const { return to_json(compute_schema(*graph)); }

    Value get_node_distribution(const Value& params) const {
        auto node_type = optional_string(params, "node_type");
        if (!node_type) {
            throw ContractError("get_node_distribution needs node_type");
        }
        auto direction = optional_string(params, "direction");
        return to_json(node_distribution(*graph, *node_type, optional_string(params, "rel_type"),
                                         direction ? std::optional(parse_direction(*direction)) : std::nullopt));
    }

    Value get_relation_distribution(const Value& params) const {
        auto node_type = optional_string(params, "node_type");
        if (!node_type) {
            throw ContractError("get_relation_distribution needs node_type");
        }
        Distribution merged;
        for (Direction direction : {Direction::In, Direction::Out}) {
            for (auto& entry : relation_distribution(*graph, *node_type, direction).entries) {
                merged.entries.push_back({directed_relation_label(entry.label, direction), entry.value});
            }
        }
        merged.sort(SortOrder::ValueDesc);
        return to_json(merged);
    }

    Value filter(const Value& params) const {
        auto rel_type = optional_string(params, "rel_type");
        if (!rel_type) {
            throw ContractError("filter_by_relation needs rel_type");
        }
        const Direction direction = parse_direction(optional_string(params, "direction").value_or("both"));
        if (auto node_id = optional_string(params, "node_id")) {
            return Value(neighbors(*graph, *node_id, rel_type, direction));
        }
        auto node_type = optional_string(params, "node_type");
        if (!node_type) {
            throw ContractError("filter_by_relation needs node_type or node_id");
        }
        return Value(filter_by_relation(*graph, *node_type, *rel_type, direction));
    }

    // Resolves a bar of the node distribution to a node id.
    std::string resolve_bar(const std::string& node_type, const ActionDispatch& dispatch) const {
        if (auto node_id = dispatch_string(dispatch, "node_id")) {
            const Node& node = graph->node(*node_id);
            if (node.node_type != node_type) {
                throw ContractError("node '" + *node_id + "' is not a " + node_type);
            }
            return *node_id;
        }
        auto label = dispatch_string(dispatch, "label");
        if (!label) {
            throw ContractError("bar selection needs node_id or label");
        }
        std::vector<std::string> matches;
        for (const auto& node : graph->nodes()) {
            if (node.node_type != node_type) continue;
            if (node.title == *label || node.title + " (" + node.id + ")" == *label) {
                matches.push_back(node.id);
            }
        }
        if (matches.empty()) {
            throw NotFoundError("no " + node_type + " bar labelled '" + *label + "'");
        }
        if (matches.size() > 1) {
            throw ContractError("bar label '" + *label + "' is ambiguous; pass node_id");
        }
        return matches.front();
    }

    // Rebuilds schema, charts and filter from the selection in `payload`.
    Value recompute(const SharedActionRegistry& actions, Value payload) const {
        payload["schema"] = actions.invoke(kGetSchema, Value::object());
        const Value& selection = payload["selection"];
        auto node_type = optional_string(selection, "node_type");
        if (!node_type) {
            payload["node_distribution"] = Value::array();
            payload["relation_distribution"] = Value::array();
            payload["filtered_nodes"] = nullptr;
            return payload;
        }
        payload["node_distribution"] = checked_distribution(
            actions, kGetNodeDistribution, actions.invoke(kGetNodeDistribution, Value{{"node_type", *node_type}}));
        payload["relation_distribution"] =
            checked_distribution(actions, kGetRelationDistribution,
                                 actions.invoke(kGetRelationDistribution, Value{{"node_type", *node_type}}));

        const Value& relation = selection["relation"];
        if (relation.is_object()) {
            Value params{{"node_type", *node_type}, {"rel_type", relation["rel_type"]},
                         {"direction", relation["direction"]}};
            if (auto node_id = optional_string(selection, "node_id")) {
                params["node_id"] = *node_id;
            }
            payload["filtered_nodes"] =
                checked_id_list(actions, kFilterByRelation, actions.invoke(kFilterByRelation, params));
        } else {
            payload["filtered_nodes"] = nullptr;
        }
        return payload;
    }

    static Value selection(std::optional<std::string> node_type) {
        Value s{{"node_id", nullptr}, {"relation", nullptr}};
        s["node_type"] = node_type ? Value(*node_type) : Value(nullptr);
        return s;
    }

    static Value relation_from(const ActionDispatch& dispatch, std::string rel_type) {
        const auto direction = dispatch_string(dispatch, "direction").value_or("both");
        // Parse before building: a throw inside a braced Value leaks on older GCC.
        std::string direction_name(to_string(parse_direction(direction)));
        return Value{{"rel_type", std::move(rel_type)}, {"direction", std::move(direction_name)}};
    }

    std::string selected_type(const Value& current) const {
        auto node_type = optional_string(current["selection"], "node_type");
        if (!node_type) {
            throw ContractError("no node type is selected");
        }
        return *node_type;
    }
};

WidgetBehavior explorer_behavior(std::shared_ptr<const PropertyGraph> graph, std::optional<std::string> initial_type) {
    auto self = std::make_shared<const Explorer>(Explorer{std::move(graph)});
    WidgetBehavior behavior;
    behavior.shared_actions = {
        {kGetSchema, [self](const Value& p) { return self->get_schema(p); }},
        {kGetNodeDistribution, [self](const Value& p) { return self->get_node_distribution(p); }},
        {kGetRelationDistribution, [self](const Value& p) { return self->get_relation_distribution(p); }},
        {kFilterByRelation, [self](const Value& p) { return self->filter(p); }},
    };

    behavior.initial_payload = [self, initial_type](const SharedActionRegistry& actions) {
        std::optional<std::string> node_type = initial_type;
        const SchemaGraph schema = compute_schema(*self->graph);
        if (node_type && !schema.type_nodes.contains(*node_type)) {
            throw NotFoundError("unknown node type '" + *node_type + "'");
        }
        if (!node_type && !schema.type_nodes.empty()) {
            node_type = schema.type_nodes.begin()->first;
        }
        Value payload{{"selection", Explorer::selection(node_type)}};
        return self->recompute(actions, std::move(payload));
    };
    behavior.recompute = [self](const SharedActionRegistry& actions, const Value& current) {
        return self->recompute(actions, current);
    };

    behavior.handlers["select_node_type"] = [self](const SharedActionRegistry& actions, const ActionDispatch& d,
                                                   const Value& current) {
        auto node_type = dispatch_string(d, "node_type");
        if (!node_type) {
            throw ContractError("select on the schema needs node_type");
        }
        if (!self->graph->has_node_type(*node_type)) {
            throw NotFoundError("unknown node type '" + *node_type + "'");
        }
        Value next = current;
        next["selection"] = Explorer::selection(node_type);
        return self->recompute(actions, std::move(next));
    };
    behavior.handlers["clear_node_type"] = [self](const SharedActionRegistry& actions, const ActionDispatch&,
                                                  const Value& current) {
        Value next = current;
        next["selection"] = Explorer::selection(std::nullopt);
        return self->recompute(actions, std::move(next));
    };
    behavior.handlers["select_bar"] = [self](const SharedActionRegistry& actions, const ActionDispatch& d,
                                             const Value& current) {
        const std::string node_type = self->selected_type(current);
        Value next = current;
        next["selection"]["node_id"] = self->resolve_bar(node_type, d);
        auto rel_type = dispatch_string(d, "rel_type");
        next["selection"]["relation"] = rel_type ? Explorer::relation_from(d, *rel_type) : Value(nullptr);
        return self->recompute(actions, std::move(next));
    };
    behavior.handlers["clear_bar"] = [self](const SharedActionRegistry& actions, const ActionDispatch&,
                                            const Value& current) {
        Value next = current;
        next["selection"]["node_id"] = nullptr;
        next["selection"]["relation"] = nullptr;
        return self->recompute(actions, std::move(next));
    };
    behavior.handlers["filter_relation"] = [self](const SharedActionRegistry& actions, const ActionDispatch& d,
                                                  const Value& current) {
        (void)self->selected_type(current);
        auto rel_type = dispatch_string(d, "rel_type");
        if (!rel_type) {
            throw ContractError("filter needs rel_type");
        }
        Value next = current;
        next["selection"]["relation"] = Explorer::relation_from(d, *rel_type);
        return self->recompute(actions, std::move(next));
    };
    // A relation bar ("requires(incoming)") filters the selected type by that relation.
    behavior.handlers["select_relation"] = [self](const SharedActionRegistry& actions, const ActionDispatch& d,
                                                  const Value& current) {
        (void)self->selected_type(current);
        Value relation;
        if (auto rel_type = dispatch_string(d, "rel_type")) {
            relation = Explorer::relation_from(d, *rel_type);
        } else if (auto label = dispatch_string(d, "label")) {
            for (Direction direction : {Direction::In, Direction::Out}) {
                const std::string suffix = directed_relation_label("", direction);
                if (label->size() > suffix.size() && label->ends_with(suffix)) {
                    relation = Value{{"rel_type", label->substr(0, label->size() - suffix.size())},
                                     {"direction", std::string(to_string(direction))}};
                }
            }
            if (relation.is_null()) {
                throw ContractError("relation bar label '" + *label + "' has no direction suffix");
            }
        } else {
            throw ContractError("relation selection needs rel_type or label");
        }
        Value next = current;
        next["selection"]["node_id"] = nullptr;
        next["selection"]["relation"] = std::move(relation);
        return self->recompute(actions, std::move(next));
    };
    return behavior;
}

WidgetSpec explorer_spec(const ExplorerOptions& options) {
    WidgetSpec spec;
    spec.widget_id = options.widget_id;
    spec.widget_type = kWidgetType;
    spec.components = {
        ComponentSpec{kSchemaGraph, ComponentKind::Graph, "Graph schema",
                      {{InteractionType::Select, "select_node_type"},
                       {InteractionType::Deselect, "clear_node_type"},
                       {InteractionType::Pan, kPanHandler},
                       {InteractionType::Zoom, kZoomHandler}},
                      "schema"},
        ComponentSpec{kNodeDist, ComponentKind::BarChart, "Node distribution",
                      {{InteractionType::Select, "select_bar"},
                       {InteractionType::Deselect, "clear_bar"},
                       {InteractionType::Filter, "filter_relation"}},
                      "node_distribution"},
        ComponentSpec{kRelDist, ComponentKind::BarChart, "Relation distribution",
                      {{InteractionType::Select, "select_relation"}},
                      "relation_distribution"},
    };
    spec.shared_actions = {kGetSchema, kGetNodeDistribution, kGetRelationDistribution, kFilterByRelation};
    spec.init_overrides = options.init_overrides;
    return spec;
}

} // namespace

std::string directed_relation_label(std::string_view rel_type, Direction direction) {
    return std::string(rel_type) + (direction == Direction::Out ? "(outgoing)" : "(incoming)");
}

std::unique_ptr<Widget> make_explorer(std::shared_ptr<const PropertyGraph> graph, ExplorerOptions options) {
    if (!graph) {
        throw BackendError("explorer needs a loaded graph");
    }
    return Widget::init(explorer_spec(options), explorer_behavior(std::move(graph), options.initial_node_type),
                        options.clock);
}

std::unique_ptr<Widget> make_explorer(const std::filesystem::path& graph_path, ExplorerOptions options) {
    std::shared_ptr<const PropertyGraph> graph;
    try {
        graph = std::make_shared<const PropertyGraph>(load_graph(graph_path));
    } catch (const Error& e) {
        throw BackendError(std::string("cannot load graph: ") + e.what());
    }
    return make_explorer(std::move(graph), std::move(options));
}

} // namespace statewidget
