#include "statewidget/property_graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

#include "statewidget/errors.hpp"
#include "statewidget/state_store.hpp"

namespace statewidget {

namespace {

std::string require_string(const Value& object, const char* key, const std::string& where) {
    auto it = object.find(key);
    if (it == object.end() || !it->is_string()) {
        throw FormatError(where + ": missing string field '" + key + "'");
    }
    return it->get<std::string>();
}

Value optional_attrs(const Value& object, const std::string& where) {
    auto it = object.find("attrs");
    if (it == object.end() || it->is_null()) {
        return Value::object();
    }
    if (!it->is_object()) {
        throw FormatError(where + ": attrs must be an object");
    }
    return *it;
}

std::string describe(const Edge& edge, std::size_t index) {
    return "edge #" + std::to_string(index) + " (" + edge.src + " -" + edge.rel_type + "-> " + edge.dst + ")";
}

bool counts_as_incoming(Direction direction) { return direction != Direction::Out; }
bool counts_as_outgoing(Direction direction) { return direction != Direction::In; }

std::vector<std::size_t> instances_of(const PropertyGraph& graph, std::string_view node_type) {
    if (!graph.has_node_type(node_type)) {
        throw NotFoundError("unknown node type '" + std::string(node_type) + "'");
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < graph.nodes().size(); ++i) {
        if (graph.node_at(i).node_type == node_type) {
            out.push_back(i);
        }
    }
    return out;
}

} // namespace

std::string_view to_string(Direction direction) {
    switch (direction) {
        case Direction::In:
            return "in";
        case Direction::Out:
            return "out";
        case Direction::Both:
            return "both";
    }
    throw ContractError("direction out of range");
}

Direction parse_direction(std::string_view text) {
    if (text == "in") return Direction::In;
    if (text == "out") return Direction::Out;
    if (text == "both") return Direction::Both;
    throw ContractError("unknown direction '" + std::string(text) + "'");
}

PropertyGraph::PropertyGraph(std::vector<Node> nodes, std::vector<Edge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
    index_.reserve(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!index_.emplace(nodes_[i].id, i).second) {
            throw FormatError("duplicate node id '" + nodes_[i].id + "'");
        }
    }
    out_edges_.resize(nodes_.size());
    in_edges_.resize(nodes_.size());
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const Edge& edge = edges_[e];
        auto src = index_.find(edge.src);
        auto dst = index_.find(edge.dst);
        if (src == index_.end() || dst == index_.end()) {
            const std::string& missing = src == index_.end() ? edge.src : edge.dst;
            throw FormatError(describe(edge, e) + " references missing node '" + missing + "'");
        }
        out_edges_[src->second].push_back(e);
        in_edges_[dst->second].push_back(e);
    }
}

PropertyGraph PropertyGraph::from_json(const Value& document) {
    if (!document.is_object()) {
        throw FormatError("graph document must be an object");
    }
    auto nodes_it = document.find("nodes");
    auto edges_it = document.find("edges");
    if (nodes_it == document.end() || !nodes_it->is_array()) {
        throw FormatError("graph document needs a 'nodes' array");
    }
    if (edges_it == document.end() || !edges_it->is_array()) {
        throw FormatError("graph document needs an 'edges' array");
    }

    std::vector<Node> nodes;
    nodes.reserve(nodes_it->size());
    for (std::size_t i = 0; i < nodes_it->size(); ++i) {
        const Value& item = (*nodes_it)[i];
        const std::string where = "node #" + std::to_string(i);
        if (!item.is_object()) {
            throw FormatError(where + ": must be an object");
        }
        nodes.push_back(Node{require_string(item, "id", where), require_string(item, "type", where),
                             require_string(item, "title", where), optional_attrs(item, where)});
    }

    std::vector<Edge> edges;
    edges.reserve(edges_it->size());
    for (std::size_t i = 0; i < edges_it->size(); ++i) {
        const Value& item = (*edges_it)[i];
        const std::string where = "edge #" + std::to_string(i);
        if (!item.is_object()) {
            throw FormatError(where + ": must be an object");
        }
        edges.push_back(Edge{require_string(item, "src", where), require_string(item, "dst", where),
                             require_string(item, "type", where), optional_attrs(item, where)});
    }
    return PropertyGraph(std::move(nodes), std::move(edges));
}

Value PropertyGraph::to_json() const {
    Value nodes = Value::array();
    for (const auto& node : nodes_) {
        Value item{{"id", node.id}, {"type", node.node_type}, {"title", node.title}};
        if (!node.attrs.empty()) {
            item["attrs"] = node.attrs;
        }
        nodes.push_back(std::move(item));
    }
    Value edges = Value::array();
    for (const auto& edge : edges_) {
        Value item{{"src", edge.src}, {"dst", edge.dst}, {"type", edge.rel_type}};
        if (!edge.attrs.empty()) {
            item["attrs"] = edge.attrs;
        }
        edges.push_back(std::move(item));
    }
    return Value{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

std::optional<std::size_t> PropertyGraph::index_of(std::string_view node_id) const {
    auto it = index_.find(std::string(node_id));
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

const Node& PropertyGraph::node(std::string_view node_id) const {
    auto index = index_of(node_id);
    if (!index) {
        throw NotFoundError("unknown node '" + std::string(node_id) + "'");
    }
    return nodes_[*index];
}

bool PropertyGraph::has_node_type(std::string_view node_type) const {
    return std::any_of(nodes_.begin(), nodes_.end(), [&](const Node& n) { return n.node_type == node_type; });
}

PropertyGraph load_graph(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open graph file " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
        throw IoError("cannot read graph file " + path.string());
    }
    Value document;
    try {
        document = Value::parse(buffer.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    return PropertyGraph::from_json(document);
}

Value to_json(const SchemaGraph& schema) {
    Value type_nodes = Value::object();
    for (const auto& [type, count] : schema.type_nodes) {
        type_nodes[type] = count;
    }
    Value type_edges = Value::array();
    for (const auto& [key, count] : schema.type_edges) {
        type_edges.push_back(
            {{"src_type", key.src_type}, {"rel_type", key.rel_type}, {"dst_type", key.dst_type}, {"count", count}});
    }
    return Value{{"type_nodes", std::move(type_nodes)}, {"type_edges", std::move(type_edges)}};
}

void Distribution::sort(SortOrder order) {
    if (order == SortOrder::LabelAsc) {
        std::sort(entries.begin(), entries.end(),
                  [](const DistributionEntry& a, const DistributionEntry& b) { return a.label < b.label; });
    } else {
        std::sort(entries.begin(), entries.end(), [](const DistributionEntry& a, const DistributionEntry& b) {
            if (a.value != b.value) {
                return a.value > b.value;
            }
            return a.label < b.label;
        });
    }
    sort_order = order;
}

Value to_json(const Distribution& distribution) {
    Value out = Value::array();
    for (const auto& entry : distribution.entries) {
        out.push_back(Value::array({entry.label, entry.value}));
    }
    return out;
}

std::vector<DistributionEntry> distribution_entries_from_json(const Value& value) {
    if (!value.is_array()) {
        throw ContractError("distribution must be an array of [label, value] pairs");
    }
    std::vector<DistributionEntry> entries;
    entries.reserve(value.size());
    for (const auto& item : value) {
        if (!item.is_array() || item.size() != 2 || !item[0].is_string() || !is_non_negative_integer(item[1])) {
            throw ContractError("distribution entry must be [label, non-negative integer], got " + item.dump());
        }
        entries.push_back(DistributionEntry{item[0].get<std::string>(), item[1].get<std::uint64_t>()});
    }
    return entries;
}

SchemaGraph compute_schema(const PropertyGraph& graph) {
    SchemaGraph schema;
    for (const auto& node : graph.nodes()) {
        ++schema.type_nodes[node.node_type];
    }
    for (const auto& edge : graph.edges()) {
        ++schema.type_edges[TypeEdgeKey{graph.node(edge.src).node_type, edge.rel_type,
                                        graph.node(edge.dst).node_type}];
    }
    return schema;
}

Distribution node_distribution(const PropertyGraph& graph,
                               std::string_view node_type,
                               std::optional<std::string> rel_type,
                               std::optional<Direction> direction) {
    const auto instances = instances_of(graph, node_type);
    const Direction dir = direction.value_or(Direction::Both);
    auto matches = [&](std::size_t e) { return !rel_type || graph.edges()[e].rel_type == *rel_type; };

    std::map<std::string, std::size_t> title_uses;
    for (auto i : instances) {
        ++title_uses[graph.node_at(i).title];
    }

    Distribution distribution;
    distribution.entries.reserve(instances.size());
    for (auto i : instances) {
        std::uint64_t degree = 0;
        if (counts_as_incoming(dir)) {
            for (auto e : graph.in_edges(i)) degree += matches(e) ? 1 : 0;
        }
        if (counts_as_outgoing(dir)) {
            for (auto e : graph.out_edges(i)) degree += matches(e) ? 1 : 0;
        }
        const Node& node = graph.node_at(i);
        std::string label = title_uses[node.title] > 1 ? node.title + " (" + node.id + ")" : node.title;
        distribution.entries.push_back(DistributionEntry{std::move(label), degree});
    }
    distribution.sort(SortOrder::ValueDesc);
    return distribution;
}

Distribution relation_distribution(const PropertyGraph& graph, std::string_view node_type, Direction direction) {
    (void)instances_of(graph, node_type);
    std::map<std::string, std::uint64_t> counts;
    for (const auto& edge : graph.edges()) {
        const bool in = counts_as_incoming(direction) && graph.node(edge.dst).node_type == node_type;
        const bool out = counts_as_outgoing(direction) && graph.node(edge.src).node_type == node_type;
        if (in || out) {
            ++counts[edge.rel_type];
        }
    }
    Distribution distribution;
    for (auto& [rel, count] : counts) {
        distribution.entries.push_back(DistributionEntry{rel, count});
    }
    distribution.sort(SortOrder::ValueDesc);
    return distribution;
}

PropertyGraph subgraph(const PropertyGraph& graph, std::string_view node_id, int hops, Direction direction) {
    if (hops < 1) {
        throw ContractError("hops must be at least 1");
    }
    auto start = graph.index_of(node_id);
    if (!start) {
        throw NotFoundError("unknown node '" + std::string(node_id) + "'");
    }

    std::vector<int> depth(graph.nodes().size(), -1);
    std::deque<std::size_t> frontier{*start};
    depth[*start] = 0;
    while (!frontier.empty()) {
        const std::size_t current = frontier.front();
        frontier.pop_front();
        if (depth[current] == hops) {
            continue;
        }
        auto visit = [&](std::size_t next) {
            if (depth[next] < 0) {
                depth[next] = depth[current] + 1;
                frontier.push_back(next);
            }
        };
        if (counts_as_incoming(direction)) {
            for (auto e : graph.in_edges(current)) visit(*graph.index_of(graph.edges()[e].src));
        }
        if (counts_as_outgoing(direction)) {
            for (auto e : graph.out_edges(current)) visit(*graph.index_of(graph.edges()[e].dst));
        }
    }

    std::vector<Node> nodes;
    for (std::size_t i = 0; i < graph.nodes().size(); ++i) {
        if (depth[i] >= 0) {
            nodes.push_back(graph.node_at(i));
        }
    }
    std::vector<Edge> edges;
    for (const auto& edge : graph.edges()) {
        if (depth[*graph.index_of(edge.src)] >= 0 && depth[*graph.index_of(edge.dst)] >= 0) {
            edges.push_back(edge);
        }
    }
    return PropertyGraph(std::move(nodes), std::move(edges));
}

std::vector<std::string> filter_by_relation(const PropertyGraph& graph,
                                            std::string_view node_type,
                                            std::string_view rel_type,
                                            Direction direction) {
    std::vector<std::string> ids;
    for (auto i : instances_of(graph, node_type)) {
        auto has_rel = [&](std::span<const std::size_t> incident) {
            return std::any_of(incident.begin(), incident.end(),
                               [&](std::size_t e) { return graph.edges()[e].rel_type == rel_type; });
        };
        if ((counts_as_incoming(direction) && has_rel(graph.in_edges(i))) ||
            (counts_as_outgoing(direction) && has_rel(graph.out_edges(i)))) {
            ids.push_back(graph.node_at(i).id);
        }
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::vector<std::string> neighbors(const PropertyGraph& graph,
                                   std::string_view node_id,
                                   std::optional<std::string> rel_type,
                                   Direction direction) {
    auto index = graph.index_of(node_id);
    if (!index) {
        throw NotFoundError("unknown node '" + std::string(node_id) + "'");
    }
    std::set<std::string> out;
    auto matches = [&](std::size_t e) { return !rel_type || graph.edges()[e].rel_type == *rel_type; };
    if (counts_as_incoming(direction)) {
        for (auto e : graph.in_edges(*index)) {
            if (matches(e)) out.insert(graph.edges()[e].src);
        }
    }
    if (counts_as_outgoing(direction)) {
        for (auto e : graph.out_edges(*index)) {
            if (matches(e)) out.insert(graph.edges()[e].dst);
        }
    }
    return {out.begin(), out.end()};
}

} // namespace statewidget
