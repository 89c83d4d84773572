#include "statewidget/shared_actions.hpp"

#include <exception>

#include "statewidget/errors.hpp"

namespace statewidget {

Value provenance_params(const std::string& action_name, const Udf& udf) {
    Value params{{"name", action_name}, {"function_name", udf.name}};
    params["source_text"] = udf.source_text.empty() ? Value(nullptr) : Value(udf.source_text);
    return params;
}

void SharedActionRegistry::register_default(std::string name, SharedOp default_op) {
    if (entries_.contains(name)) {
        throw ContractError("shared action '" + name + "' is already registered");
    }
    if (!default_op) {
        throw ContractError("shared action '" + name + "' needs a default implementation");
    }
    SharedActionEntry entry{name, std::move(default_op), std::nullopt};
    entries_.emplace(std::move(name), std::move(entry));
}

std::vector<std::string> SharedActionRegistry::names() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& [name, entry] : entries_) {
        out.push_back(name);
    }
    return out;
}

bool SharedActionRegistry::has_override(const std::string& name) const {
    return entry(name).override_udf.has_value();
}

const SharedActionEntry& SharedActionRegistry::entry(const std::string& name) const {
    auto it = entries_.find(name);
    if (it == entries_.end()) {
        throw NotFoundError("no shared action named '" + name + "'");
    }
    return it->second;
}

void SharedActionRegistry::set_override(const std::string& name, Udf udf) {
    auto it = entries_.find(name);
    if (it == entries_.end()) {
        throw NotFoundError("no shared action named '" + name + "'");
    }
    if (!udf.fn) {
        throw ContractError("override for '" + name + "' has no callable");
    }
    it->second.override_udf = std::move(udf);
}

void SharedActionRegistry::clear_override(const std::string& name) {
    auto it = entries_.find(name);
    if (it == entries_.end()) {
        throw NotFoundError("no shared action named '" + name + "'");
    }
    it->second.override_udf.reset();
}

Value SharedActionRegistry::invoke(const std::string& name, const Value& params) const {
    const SharedActionEntry& e = entry(name);
    if (!e.override_udf) {
        return e.default_op(params);
    }

    std::exception_ptr from_default;
    SharedOp guarded = [&](const Value& p) -> Value {
        try {
            return e.default_op(p);
        } catch (...) {
            from_default = std::current_exception();
            throw;
        }
    };

    try {
        return e.override_udf->fn(params, guarded);
    } catch (...) {
        auto current = std::current_exception();
        if (from_default && current == from_default) {
            throw;
        }
        try {
            throw;
        } catch (const std::exception& ex) {
            throw UdfError("override '" + e.override_udf->name + "' of '" + name + "' failed: " + ex.what());
        } catch (...) {
            throw UdfError("override '" + e.override_udf->name + "' of '" + name + "' failed");
        }
    }
}

Value SharedActionRegistry::invoke_default(const std::string& name, const Value& params) const {
    return entry(name).default_op(params);
}

} // namespace statewidget
