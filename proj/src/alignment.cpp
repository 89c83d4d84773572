#include "statewidget/alignment.hpp"

#include <array>
#include <fstream>
#include <set>
#include <sstream>

#include "statewidget/errors.hpp"

namespace statewidget {

namespace {

using namespace alignment;

constexpr std::array<std::pair<Decision, std::string_view>, 4> kDecisionNames{{
    {Decision::Undecided, "undecided"},
    {Decision::Insert, "insert"},
    {Decision::Ignore, "ignore"},
    {Decision::Defer, "defer"},
}};

std::string candidate_id_of(const ActionDispatch& dispatch) {
    for (const Value* source : {dispatch.element.datum ? &*dispatch.element.datum : nullptr, &dispatch.params}) {
        if (source == nullptr || !source->is_object()) continue;
        if (auto it = source->find("candidate_id"); it != source->end() && it->is_string()) {
            return it->get<std::string>();
        }
    }
    throw ContractError("dispatch needs a candidate_id");
}

const Value& candidate_row(const Value& payload, const std::string& candidate_id) {
    const Value& rows = payload.at("candidates");
    auto it = rows.find(candidate_id);
    if (it == rows.end()) {
        throw NotFoundError("no candidate '" + candidate_id + "'");
    }
    return *it;
}

void check_subgraph_shape(const SharedActionRegistry& actions, const Value& value) {
    auto list_of_objects = [&](const char* key) {
        auto it = value.find(key);
        if (it == value.end() || !it->is_array()) return false;
        for (const auto& item : *it) {
            if (!item.is_object()) return false;
        }
        return true;
    };
    if (value.is_object() && list_of_objects("nodes") && list_of_objects("edges")) {
        return;
    }
    if (actions.has_override(kGetSubgraph)) {
        throw UdfError("override of 'get_subgraph' must return {nodes: [...], edges: [...]}");
    }
    throw ContractError("get_subgraph returned a malformed graph");
}

struct Alignment {
    std::shared_ptr<const PropertyGraph> graph;
    std::map<std::string, AlignmentCandidate> candidates;

    Value get_subgraph(const Value& params) const {
        if (!params.is_object() || !params.contains("node_id") || !params["node_id"].is_string()) {
            throw ContractError("get_subgraph needs a string node_id");
        }
        const Value hops = params.value("hops", Value(1));
        const Value direction = params.value("direction", Value("both"));
        if (!hops.is_number_integer() || !direction.is_string()) {
            throw ContractError("get_subgraph needs an integer hops and a string direction");
        }
        return subgraph(*graph, params["node_id"].get<std::string>(), hops.get<int>(),
                        parse_direction(direction.get<std::string>()))
            .to_json();
    }

    Value initial_payload() const {
        Value rows = Value::object();
        Value decisions = Value::object();
        for (const auto& [id, candidate] : candidates) {
            rows[id] = Value{{"corpus_term", candidate.corpus_term},
                             {"graph_entity_id", candidate.graph_entity_id},
                             {"graph_entity_title", graph->node(candidate.graph_entity_id).title},
                             {"decision", std::string(to_string(candidate.decision))}};
            decisions[id] = std::string(to_string(candidate.decision));
        }
        return Value{{"candidates", std::move(rows)},
                     {"decisions", std::move(decisions)},
                     {"selected_candidate", nullptr},
                     {"context", nullptr},
                     {"subgraph", nullptr}};
    }

    // Context and sub-graph follow the selected candidate.
    Value recompute(const SharedActionRegistry& actions, Value payload) const {
        const Value& selected = payload["selected_candidate"];
        if (!selected.is_string()) {
            payload["context"] = nullptr;
            payload["subgraph"] = nullptr;
            return payload;
        }
        const AlignmentCandidate& candidate = candidates.at(selected.get<std::string>());
        payload["context"] = Value{{"candidate_id", candidate.candidate_id},
                                   {"corpus_term", candidate.corpus_term},
                                   {"descriptions", candidate.corpus_descriptions}};
        Value sub = actions.invoke(kGetSubgraph, Value{{"node_id", candidate.graph_entity_id},
                                                       {"hops", 1},
                                                       {"direction", "both"}});
        check_subgraph_shape(actions, sub);
        payload["subgraph"] = std::move(sub);
        return payload;
    }
};

} // namespace

std::string_view to_string(Decision decision) {
    for (const auto& [value, name] : kDecisionNames) {
        if (value == decision) return name;
    }
    throw ContractError("decision out of range");
}

Decision parse_decision(std::string_view text) {
    for (const auto& [value, name] : kDecisionNames) {
        if (name == text) return value;
    }
    throw ContractError("unknown decision '" + std::string(text) + "'; expected insert, ignore, defer or undecided");
}

std::vector<AlignmentCandidate> candidates_from_json(const Value& document) {
    if (!document.is_array()) {
        throw FormatError("candidates document must be an array");
    }
    std::vector<AlignmentCandidate> out;
    for (std::size_t i = 0; i < document.size(); ++i) {
        const Value& item = document[i];
        const std::string where = "candidate #" + std::to_string(i);
        try {
            AlignmentCandidate candidate;
            candidate.candidate_id = item.at("candidate_id").get<std::string>();
            candidate.corpus_term = item.at("corpus_term").get<std::string>();
            candidate.corpus_descriptions = item.at("corpus_descriptions").get<std::vector<std::string>>();
            candidate.graph_entity_id = item.at("graph_entity_id").get<std::string>();
            if (auto it = item.find("decision"); it != item.end()) {
                candidate.decision = parse_decision(it->get<std::string>());
            }
            out.push_back(std::move(candidate));
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(where + ": " + e.what());
        } catch (const ContractError& e) {
            throw FormatError(where + ": " + e.what());
        }
    }
    return out;
}

std::vector<AlignmentCandidate> load_candidates(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open candidates file " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return candidates_from_json(Value::parse(buffer.str()));
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

std::unique_ptr<Widget> make_alignment_widget(std::shared_ptr<const PropertyGraph> graph,
                                              std::vector<AlignmentCandidate> candidates,
                                              AlignmentOptions options) {
    if (!graph) {
        throw BackendError("alignment widget needs a loaded graph");
    }
    auto self = std::make_shared<Alignment>(Alignment{std::move(graph), {}});
    for (auto& candidate : candidates) {
        if (!self->graph->index_of(candidate.graph_entity_id)) {
            throw FormatError("candidate '" + candidate.candidate_id + "' names missing graph entity '" +
                              candidate.graph_entity_id + "'");
        }
        const std::string id = candidate.candidate_id;
        if (!self->candidates.emplace(id, std::move(candidate)).second) {
            throw FormatError("duplicate candidate id '" + id + "'");
        }
    }
    std::shared_ptr<const Alignment> view = self;

    WidgetBehavior behavior;
    behavior.shared_actions = {{kGetSubgraph, [view](const Value& p) { return view->get_subgraph(p); }}};
    behavior.initial_payload = [view](const SharedActionRegistry&) { return view->initial_payload(); };
    behavior.recompute = [view](const SharedActionRegistry& actions, const Value& current) {
        return view->recompute(actions, current);
    };
    behavior.handlers["select_candidate"] = [view](const SharedActionRegistry& actions, const ActionDispatch& d,
                                                   const Value& current) {
        const std::string id = candidate_id_of(d);
        (void)candidate_row(current, id);
        Value next = current;
        next["selected_candidate"] = id;
        return view->recompute(actions, std::move(next));
    };
    behavior.handlers["clear_candidate"] = [view](const SharedActionRegistry& actions, const ActionDispatch&,
                                                  const Value& current) {
        Value next = current;
        next["selected_candidate"] = nullptr;
        return view->recompute(actions, std::move(next));
    };
    behavior.handlers["set_decision"] = [](const SharedActionRegistry&, const ActionDispatch& d, const Value& current) {
        const std::string id = candidate_id_of(d);
        (void)candidate_row(current, id);
        auto it = d.params.find("decision");
        if (it == d.params.end() || !it->is_string()) {
            throw ContractError("set_decision needs a string decision");
        }
        const std::string decision(to_string(parse_decision(it->get<std::string>())));
        Value next = current;
        next["candidates"][id]["decision"] = decision;
        next["decisions"][id] = decision;
        return next;
    };

    WidgetSpec spec;
    spec.widget_id = options.widget_id;
    spec.widget_type = kWidgetType;
    spec.components = {
        ComponentSpec{kCandidates, ComponentKind::DecisionTable, "Alignment candidates",
                      {{InteractionType::Select, "select_candidate"},
                       {InteractionType::Deselect, "clear_candidate"},
                       {InteractionType::SetDecision, "set_decision"}},
                      "candidates"},
        ComponentSpec{kContext, ComponentKind::Table, "Corpus context", {}, "context"},
        ComponentSpec{kSubgraph, ComponentKind::Graph, "Sub-graph",
                      {{InteractionType::Pan, kPanHandler}, {InteractionType::Zoom, kZoomHandler}},
                      "subgraph"},
    };
    spec.shared_actions = {kGetSubgraph};
    spec.init_overrides = std::move(options.init_overrides);
    return Widget::init(std::move(spec), std::move(behavior), std::move(options.clock));
}

DataState select_candidate(Widget& widget, const std::string& candidate_id) {
    ActionDispatch dispatch;
    dispatch.interaction_type = InteractionType::Select;
    dispatch.component_id = kCandidates;
    dispatch.element = ElementDescriptor{"candidates/" + candidate_id, Value{{"candidate_id", candidate_id}}};
    return widget.handle_action(dispatch);
}

DataState set_decision(Widget& widget, const std::string& candidate_id, std::string_view decision) {
    ActionDispatch dispatch;
    dispatch.interaction_type = InteractionType::SetDecision;
    dispatch.component_id = kCandidates;
    dispatch.element = ElementDescriptor{"candidates/" + candidate_id + "/decision", std::nullopt};
    dispatch.params = Value{{"candidate_id", candidate_id}, {"decision", std::string(decision)}};
    return widget.handle_action(dispatch);
}

DataState set_decision(Widget& widget, const std::string& candidate_id, Decision decision) {
    return set_decision(widget, candidate_id, to_string(decision));
}

} // namespace statewidget
