#pragma once

#include <optional>
#include <string>

#include "statewidget/shared_actions.hpp"

namespace statewidget {

// Ready-made overrides for the demo widgets, written the way a notebook
// user would write them: as wrappers around the default operation.

// Reorders a distribution by label, ascending.
Udf alphabetic_sort_wrapper();

// Keeps only the first `n` entries of a distribution.
Udf top_n_wrapper(std::size_t n);

// Reduces a sub-graph result to the focus node and its parents: the
// sources of its incoming edges, optionally only those of `rel_type`.
Udf parent_only_filter(std::optional<std::string> rel_type = std::nullopt);

} // namespace statewidget
