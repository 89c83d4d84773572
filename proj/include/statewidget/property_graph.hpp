#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "statewidget/interaction.hpp"

namespace statewidget {

enum class Direction { In, Out, Both };

std::string_view to_string(Direction direction);
// Accepts "in", "out", "both"; throws ContractError otherwise.
Direction parse_direction(std::string_view text);

struct Node {
    std::string id;
    std::string node_type;
    std::string title;
    Value attrs = Value::object();
};

struct Edge {
    std::string src;
    std::string dst;
    std::string rel_type;
    Value attrs = Value::object();
};

// Typed nodes and typed directed edges. Immutable once constructed; node ids
// are unique and every edge endpoint names an existing node.
class PropertyGraph {
public:
    PropertyGraph() = default;
    // Throws FormatError on duplicate node ids or dangling edge endpoints.
    PropertyGraph(std::vector<Node> nodes, std::vector<Edge> edges);

    // Parses the graph file document {"nodes": [...], "edges": [...]}.
    static PropertyGraph from_json(const Value& document);
    Value to_json() const;

    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Edge>& edges() const { return edges_; }

    std::optional<std::size_t> index_of(std::string_view node_id) const;
    const Node& node_at(std::size_t index) const { return nodes_[index]; }
    // Throws NotFoundError.
    const Node& node(std::string_view node_id) const;

    bool has_node_type(std::string_view node_type) const;

    // Edge indices incident to the node at `index`, in file order.
    std::span<const std::size_t> out_edges(std::size_t index) const { return out_edges_[index]; }
    std::span<const std::size_t> in_edges(std::size_t index) const { return in_edges_[index]; }

private:
    std::vector<Node> nodes_;
    std::vector<Edge> edges_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::vector<std::size_t>> out_edges_;
    std::vector<std::vector<std::size_t>> in_edges_;
};

// IoError when the file cannot be read, FormatError when it does not parse
// or breaks the graph invariants.
PropertyGraph load_graph(const std::filesystem::path& path);

struct TypeEdgeKey {
    std::string src_type;
    std::string rel_type;
    std::string dst_type;

    friend auto operator<=>(const TypeEdgeKey&, const TypeEdgeKey&) = default;
};

// Type-level summary: instance counts per node type and edge counts per
// (source type, relation, destination type).
struct SchemaGraph {
    std::map<std::string, std::uint64_t> type_nodes;
    std::map<TypeEdgeKey, std::uint64_t> type_edges;

    bool operator==(const SchemaGraph&) const = default;
};

Value to_json(const SchemaGraph& schema);

enum class SortOrder { ValueDesc, LabelAsc };

struct DistributionEntry {
    std::string label;
    std::uint64_t value = 0;

    bool operator==(const DistributionEntry&) const = default;
};

struct Distribution {
    std::vector<DistributionEntry> entries;
    SortOrder sort_order = SortOrder::ValueDesc;

    // ValueDesc breaks ties by label ascending.
    void sort(SortOrder order);
    bool operator==(const Distribution&) const = default;
};

// [[label, value], ...] in entry order.
Value to_json(const Distribution& distribution);
// Inverse of to_json; throws ContractError when the shape is wrong.
std::vector<DistributionEntry> distribution_entries_from_json(const Value& value);

SchemaGraph compute_schema(const PropertyGraph& graph);

// One entry per instance of `node_type`, labelled by title and valued by its
// degree. A rel_type and/or direction restricts which incident edges count;
// with neither the total degree is used (a self-loop counts twice). Titles
// shared by several instances get the node id appended to stay unique.
Distribution node_distribution(const PropertyGraph& graph,
                               std::string_view node_type,
                               std::optional<std::string> rel_type = std::nullopt,
                               std::optional<Direction> direction = std::nullopt);

// One entry per relation type incident to instances of `node_type` under
// `direction`, valued by the number of such edges (each edge counted once).
Distribution relation_distribution(const PropertyGraph& graph, std::string_view node_type, Direction direction);

// Nodes reachable from `node_id` within `hops` steps along `direction`, with
// every edge between them.
PropertyGraph subgraph(const PropertyGraph& graph, std::string_view node_id, int hops, Direction direction);

// Ids of `node_type` instances with at least one incident `rel_type` edge
// under `direction`, sorted.
std::vector<std::string> filter_by_relation(const PropertyGraph& graph,
                                            std::string_view node_type,
                                            std::string_view rel_type,
                                            Direction direction);

// Sorted, de-duplicated ids of nodes one `rel_type` edge away from `node_id`.
// `In` follows incoming edges back to their sources.
std::vector<std::string> neighbors(const PropertyGraph& graph,
                                   std::string_view node_id,
                                   std::optional<std::string> rel_type,
                                   Direction direction);

} // namespace statewidget
