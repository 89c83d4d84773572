#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "statewidget/interaction.hpp"

namespace statewidget {

// A data operation: params in, structured result out.
using SharedOp = std::function<Value(const Value& params)>;

// User override. Receives the default implementation so it can wrap it
// (post-process its output) or ignore it and replace it outright.
using OverrideFn = std::function<Value(const Value& params, const SharedOp& default_op)>;

// A user-defined function plus whatever provenance the caller could supply.
struct Udf {
    std::string name;
    OverrideFn fn;
    // Source text of the function; empty when it could not be captured.
    std::string source_text;
};

// {name, source_text, function_name} as stored in override action params.
// source_text is null when it was not captured.
Value provenance_params(const std::string& action_name, const Udf& udf);

struct SharedActionEntry {
    std::string name;
    SharedOp default_op;
    std::optional<Udf> override_udf;
};

// Named data operations that end users may override. Not synchronized on
// its own; a Widget serializes access through its mutation lock.
class SharedActionRegistry {
public:
    // Throws ContractError when `name` is already registered.
    void register_default(std::string name, SharedOp default_op);

    bool contains(const std::string& name) const { return entries_.contains(name); }
    std::vector<std::string> names() const;
    bool has_override(const std::string& name) const;
    const SharedActionEntry& entry(const std::string& name) const;

    // Both throw NotFoundError for unregistered names. Clearing an action
    // without an override is a no-op.
    void set_override(const std::string& name, Udf udf);
    void clear_override(const std::string& name);

    // Runs the override when one is installed, the default otherwise.
    // Anything the user function throws surfaces as UdfError; errors raised
    // by the default implementation pass through unchanged.
    Value invoke(const std::string& name, const Value& params) const;
    Value invoke_default(const std::string& name, const Value& params) const;

private:
    std::map<std::string, SharedActionEntry> entries_;
};

} // namespace statewidget
