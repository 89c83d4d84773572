#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

namespace statewidget {

using Value = nlohmann::json;

enum class InteractionType {
    Init,
    Select,
    Deselect,
    Pan,
    Zoom,
    Filter,
    Sort,
    Input,
    SetDecision,
    Restore,
    Override,
    ClearOverride,
};

std::string_view to_string(InteractionType type);

// Throws ContractError for names outside the enum.
InteractionType parse_interaction_type(std::string_view name);

// Types a frontend may send in an action_dispatch. init, restore and the
// override pair are produced kernel-side only.
bool is_dispatchable(InteractionType type);

// Where an interaction happened inside a component.
struct ElementDescriptor {
    std::string path;
    std::optional<Value> datum;

    bool operator==(const ElementDescriptor&) const = default;
};

Value to_json(const ElementDescriptor& element);
// Throws ContractError when `value` is not {path: string, datum?: any}.
ElementDescriptor element_from_json(const Value& value);

} // namespace statewidget
