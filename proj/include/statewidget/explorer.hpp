#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "statewidget/property_graph.hpp"
#include "statewidget/widget.hpp"

namespace statewidget {

// Explorer: schema graph plus node and relation distribution charts that
// follow the selected node type.
//
// Components (data key in parentheses):
//   schema-graph  graph      (schema)                 select, deselect, pan, zoom
//   node-dist     bar_chart  (node_distribution)      select, deselect, filter
//   rel-dist      bar_chart  (relation_distribution)  select
//
// Shared actions: get_schema, get_node_distribution,
// get_relation_distribution, filter_by_relation.
namespace explorer {
inline constexpr const char* kWidgetType = "explorer";
inline constexpr const char* kSchemaGraph = "schema-graph";
inline constexpr const char* kNodeDist = "node-dist";
inline constexpr const char* kRelDist = "rel-dist";

inline constexpr const char* kGetSchema = "get_schema";
inline constexpr const char* kGetNodeDistribution = "get_node_distribution";
inline constexpr const char* kGetRelationDistribution = "get_relation_distribution";
inline constexpr const char* kFilterByRelation = "filter_by_relation";
} // namespace explorer

struct ExplorerOptions {
    std::string widget_id = "explorer";
    // Node type selected in state 0; the alphabetically first type if unset.
    std::optional<std::string> initial_node_type;
    std::map<std::string, Udf> init_overrides;
    Clock clock = system_clock_ms;
};

std::unique_ptr<Widget> make_explorer(std::shared_ptr<const PropertyGraph> graph, ExplorerOptions options = {});
// Loads the graph first; any load failure is reported as BackendError.
std::unique_ptr<Widget> make_explorer(const std::filesystem::path& graph_path, ExplorerOptions options = {});

// "requires(incoming)" / "requires(outgoing)"
std::string directed_relation_label(std::string_view rel_type, Direction direction);

} // namespace statewidget
