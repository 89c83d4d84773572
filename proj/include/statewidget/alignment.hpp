#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "statewidget/property_graph.hpp"
#include "statewidget/widget.hpp"

namespace statewidget {

enum class Decision { Undecided, Insert, Ignore, Defer };

std::string_view to_string(Decision decision);
// Throws ContractError for anything outside the four decisions.
Decision parse_decision(std::string_view text);

// A corpus term paired with the graph entity it may be merged into.
struct AlignmentCandidate {
    std::string candidate_id;
    std::string corpus_term;
    std::vector<std::string> corpus_descriptions;
    std::string graph_entity_id;
    Decision decision = Decision::Undecided;
};

// Candidates file: [{candidate_id, corpus_term, corpus_descriptions,
// graph_entity_id}, ...]. FormatError on missing fields, IoError when the
// file cannot be read.
std::vector<AlignmentCandidate> candidates_from_json(const Value& document);
std::vector<AlignmentCandidate> load_candidates(const std::filesystem::path& path);

// Alignment verification: a decision table of candidates, the corpus context
// of the selected one, and the graph neighbourhood of its entity.
//
// Components (data key in parentheses):
//   candidates  decision_table  (candidates)  select, deselect, set_decision
//   context     table           (context)
//   subgraph    graph           (subgraph)    pan, zoom
//
// Shared action: get_subgraph {node_id, hops = 1, direction = "both"}.
namespace alignment {
inline constexpr const char* kWidgetType = "alignment";
inline constexpr const char* kCandidates = "candidates";
inline constexpr const char* kContext = "context";
inline constexpr const char* kSubgraph = "subgraph";
inline constexpr const char* kGetSubgraph = "get_subgraph";
} // namespace alignment

struct AlignmentOptions {
    std::string widget_id = "alignment";
    std::map<std::string, Udf> init_overrides;
    Clock clock = system_clock_ms;
};

// FormatError when a candidate names a missing entity or ids repeat.
std::unique_ptr<Widget> make_alignment_widget(std::shared_ptr<const PropertyGraph> graph,
                                              std::vector<AlignmentCandidate> candidates,
                                              AlignmentOptions options = {});

DataState select_candidate(Widget& widget, const std::string& candidate_id);

// NotFoundError for an unknown candidate, ContractError for a decision
// outside {undecided, insert, ignore, defer}.
DataState set_decision(Widget& widget, const std::string& candidate_id, std::string_view decision);
DataState set_decision(Widget& widget, const std::string& candidate_id, Decision decision);

} // namespace statewidget
