#include "statewidget/customizations.hpp"

#include <algorithm>
#include <set>

#include "statewidget/errors.hpp"

namespace statewidget {

Udf alphabetic_sort_wrapper() {
    return Udf{
        "alphabetic_sort",
        [](const Value& params, const SharedOp& default_op) {
            Value entries = default_op(params);
            std::stable_sort(entries.begin(), entries.end(),
                             [](const Value& a, const Value& b) { return a.at(0) < b.at(0); });
            return entries;
        },
        "def alphabetic_sort(params, default_op):\n"
        "    return sorted(default_op(params), key=lambda entry: entry[0])\n",
    };
}

Udf top_n_wrapper(std::size_t n) {
    return Udf{
        "top_" + std::to_string(n),
        [n](const Value& params, const SharedOp& default_op) {
            Value entries = default_op(params);
            Value head = Value::array();
            for (std::size_t i = 0; i < std::min(n, entries.size()); ++i) {
                head.push_back(entries[i]);
            }
            return head;
        },
        "def top_n(params, default_op):\n    return default_op(params)[:" + std::to_string(n) + "]\n",
    };
}

Udf parent_only_filter(std::optional<std::string> rel_type) {
    std::string source = "def parent_only(params, default_op):\n"
                         "    g = default_op(params)\n"
                         "    parents = {e['src'] for e in g['edges'] if e['dst'] == params['node_id']";
    source += rel_type ? " and e['type'] == '" + *rel_type + "'}\n" : "}\n";
    source += "    keep = parents | {params['node_id']}\n"
              "    return {'nodes': [n for n in g['nodes'] if n['id'] in keep],\n"
              "            'edges': [e for e in g['edges'] if e['dst'] == params['node_id'] and e['src'] in parents]}\n";
    return Udf{
        "parent_only",
        [rel_type](const Value& params, const SharedOp& default_op) {
            Value full = default_op(params);
            const std::string focus = params.at("node_id").get<std::string>();
            auto is_parent_edge = [&](const Value& edge) {
                return edge.at("dst") == focus && (!rel_type || edge.at("type") == *rel_type);
            };
            std::set<std::string> keep{focus};
            Value edges = Value::array();
            for (const auto& edge : full.at("edges")) {
                if (is_parent_edge(edge)) {
                    keep.insert(edge.at("src").get<std::string>());
                    edges.push_back(edge);
                }
            }
            Value nodes = Value::array();
            for (const auto& node : full.at("nodes")) {
                if (keep.contains(node.at("id").get<std::string>())) {
                    nodes.push_back(node);
                }
            }
            return Value{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
        },
        std::move(source),
    };
}

} // namespace statewidget
