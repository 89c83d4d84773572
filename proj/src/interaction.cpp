#include "statewidget/interaction.hpp"

#include <array>
#include <utility>

#include "statewidget/errors.hpp"

namespace statewidget {

namespace {

constexpr std::array<std::pair<InteractionType, std::string_view>, 12> kNames{{
    {InteractionType::Init, "init"},
    {InteractionType::Select, "select"},
    {InteractionType::Deselect, "deselect"},
    {InteractionType::Pan, "pan"},
    {InteractionType::Zoom, "zoom"},
    {InteractionType::Filter, "filter"},
    {InteractionType::Sort, "sort"},
    {InteractionType::Input, "input"},
    {InteractionType::SetDecision, "set_decision"},
    {InteractionType::Restore, "restore"},
    {InteractionType::Override, "override"},
    {InteractionType::ClearOverride, "clear_override"},
}};

} // namespace

std::string_view to_string(InteractionType type) {
    for (const auto& [value, name] : kNames) {
        if (value == type) {
            return name;
        }
    }
    throw ContractError("interaction type out of range");
}

InteractionType parse_interaction_type(std::string_view name) {
    for (const auto& [value, text] : kNames) {
        if (text == name) {
            return value;
        }
    }
    throw ContractError("unknown interaction_type '" + std::string(name) + "'");
}

bool is_dispatchable(InteractionType type) {
    switch (type) {
        case InteractionType::Init:
        case InteractionType::Restore:
        case InteractionType::Override:
        case InteractionType::ClearOverride:
            return false;
        default:
            return true;
    }
}

Value to_json(const ElementDescriptor& element) {
    Value out = Value::object();
    out["path"] = element.path;
    if (element.datum) {
        out["datum"] = *element.datum;
    }
    return out;
}

ElementDescriptor element_from_json(const Value& value) {
    if (value.is_null()) {
        return {};
    }
    if (!value.is_object()) {
        throw ContractError("element must be an object");
    }
    ElementDescriptor element;
    if (auto it = value.find("path"); it != value.end()) {
        if (!it->is_string()) {
            throw ContractError("element.path must be a string");
        }
        element.path = it->get<std::string>();
    }
    if (auto it = value.find("datum"); it != value.end() && !it->is_null()) {
        element.datum = *it;
    }
    return element;
}

} // namespace statewidget
