// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "statewidget/alignment.hpp"
#include "statewidget/customizations.hpp"
#include "statewidget/errors.hpp"
#include "statewidget/explorer.hpp"
#include "statewidget/protocol.hpp"
#include "statewidget/replay.hpp"
#include "support/edge_scan_oracle.hpp"
#include "support/g0.hpp"
#include "support/random_actions.hpp"
#include "support/random_graph.hpp"
#include "support/random_value.hpp"
#include "support/temp_dir.hpp"

using namespace statewidget;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::string detail;
    std::string first_failure;

    void require(bool condition, const std::string& what) {
        if (!condition && pass) {
            pass = false;
            first_failure = what;
        }
    }
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::shared_ptr<const PropertyGraph> random_graph(std::mt19937_64& rng) {
    return std::make_shared<const PropertyGraph>(
        PropertyGraph::from_json(testing::random_graph_document(rng, testing::RandomGraphShape{})));
}

std::unique_ptr<Widget> explorer_on(std::shared_ptr<const PropertyGraph> graph, std::map<std::string, Udf> overrides = {}) {
    ExplorerOptions options;
    options.clock = testing::fixed_clock;
    options.init_overrides = std::move(overrides);
    return make_explorer(std::move(graph), options);
}

Udf identity_wrapper() {
    return Udf{"identity", [](const Value& params, const SharedOp& default_op) { return default_op(params); },
               "def identity(params, default):\n    return default(params)\n"};
}

// Checks ids and ordering of the whole history of `widget`.
void check_history_shape(Outcome& outcome, const Widget& widget, const std::string& where) {
    const auto records = widget.history_list();
    for (std::size_t i = 0; i < records.size(); ++i) {
        outcome.require(records[i].action_id == i, where + ": action ids not gap-free");
        outcome.require(records[i].result_state_id.value == i, where + ": state ids not gap-free");
        const DataState state = widget.get_state(StateId{i});
        outcome.require(state.origin_action_id == i, where + ": state origin does not match its action");
    }
    outcome.require(!records.empty() && records.front().interaction_type == InteractionType::Init,
                    where + ": history does not start with init");
}

Outcome history_integrity() {
    Outcome outcome;
    std::mt19937_64 rng(1001);
    const auto start = Clock::now();
    const int sequences = 1000;
    std::size_t steps = 0, rejected = 0;
    for (int seq = 0; seq < sequences; ++seq) {
        auto graph = seq % 2 == 0 ? testing::g0() : random_graph(rng);
        auto widget = explorer_on(graph);
        testing::ExplorerActionGenerator generator(*graph);
        const int length = 5 + static_cast<int>(rng() % 26);
        for (int i = 0; i < length; ++i, ++steps) {
            const std::size_t before_size = widget->history_size();
            const DataState before = widget->current_state();
            bool accepted = true;
            try {
                if (rng() % 6 == 0) {
                    widget->restore(StateId{rng() % (before_size + 3)});
                } else {
                    widget->handle_action(generator.next(rng));
                }
            } catch (const Error&) {
                accepted = false;
            }
            const std::size_t after_size = widget->history_size();
            const DataState after = widget->current_state();
            outcome.require(after_size >= before_size, "history length decreased");
            if (accepted) {
                outcome.require(after_size == before_size + 1, "accepted action did not append exactly one record");
                outcome.require(after.state_id.value == before.state_id.value + 1, "state id did not advance by one");
            } else {
                ++rejected;
                outcome.require(after_size == before_size, "failed action changed history");
                outcome.require(after.state_id == before.state_id && after.payload == before.payload,
                                "failed action changed the current state");
            }
        }
        check_history_shape(outcome, *widget, "sequence " + std::to_string(seq));
    }
    const double elapsed = seconds_since(start);
    outcome.require(elapsed < 60.0, "runtime over 60 s");
    std::ostringstream detail;
    detail << sequences << " sequences, " << steps << " actions (" << rejected << " rejected), " << elapsed << " s";
    outcome.detail = detail.str();
    return outcome;
}

Outcome restore_round_trip() {
    Outcome outcome;
    std::mt19937_64 rng(2002);
    int trials = 0;
    for (; trials < 200; ++trials) {
        auto graph = trials % 2 == 0 ? testing::g0() : random_graph(rng);
        auto widget = explorer_on(graph);
        testing::ExplorerActionGenerator generator(*graph);
        for (int i = 0; i < 15; ++i) {
            try {
                widget->handle_action(generator.next(rng));
            } catch (const Error&) {
            }
        }
        const std::uint64_t k = rng() % widget->history_size();
        const Value expected = widget->export_data(StateId{k}).at("payload");
        const std::size_t before = widget->history_size();
        widget->restore(StateId{k});
        outcome.require(widget->export_data().at("payload") == expected, "restored payload differs from export(k)");
        outcome.require(widget->history_size() == before + 1, "restore did not grow history by exactly one");
        const auto last = widget->history_list().back();
        outcome.require(last.interaction_type == InteractionType::Restore &&
                            last.params.at("restored_from") == k,
                        "restore record does not name its source state");
    }
    outcome.detail = std::to_string(trials) + " random restores, exact payload equality";
    return outcome;
}

std::string strip_exported_at(const std::string& text) {
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line)) {
        if (line.find("\"exported_at\":") == std::string::npos) out += line + "\n";
    }
    return out;
}

Outcome replay_determinism() {
    Outcome outcome;
    testing::TempDir dir;
    std::mt19937_64 rng(3003);
    auto graph = random_graph(rng);
    while (graph->nodes().size() < 150) graph = random_graph(rng);
    testing::write_file(dir / "graph.json", graph->to_json().dump());

    // 500 lines: dispatches from the generator plus restores to earlier states.
    testing::ExplorerActionGenerator generator(*graph);
    std::string log;
    for (int i = 0; i < 500; ++i) {
        if (i > 0 && rng() % 8 == 0) {
            log += Value{{"interaction_type", "restore"}, {"component_id", "history"},
                         {"element", {{"path", "history"}}}, {"params", {{"restored_from", rng() % i}}}}
                       .dump();
        } else {
            log += to_json(generator.next(rng)).dump();
        }
        log += '\n';
    }
    testing::write_file(dir / "log.ndjson", log);

    std::vector<std::string> exports;
    std::vector<Value> reports;
    double worst = 0;
    for (const char* name : {"a.json", "b.json"}) {
        ReplayOptions options;
        options.graph_path = dir / "graph.json";
        options.log_path = dir / "log.ndjson";
        options.out_path = dir / name;
        std::ostringstream out, err;
        const auto start = Clock::now();
        const int code = cmd_replay(options, out, err);
        worst = std::max(worst, seconds_since(start));
        outcome.require(code == kExitOk, "cmd_replay failed: " + err.str());
        reports.push_back(Value::parse(out.str()));
        reports.back().erase("final_export_path");
        exports.push_back(testing::read_file(dir / name));
    }
    outcome.require(exports[0].find("\"exported_at\":") != std::string::npos, "export has no exported_at");
    outcome.require(strip_exported_at(exports[0]) == strip_exported_at(exports[1]), "exports differ");
    outcome.require(reports[0] == reports[1], "replay reports differ");
    outcome.require(worst < 5.0, "replay slower than 5 s");
    std::ostringstream detail;
    detail << "500-line log on " << graph->nodes().size() << " nodes / " << graph->edges().size()
           << " edges, " << reports[0].at("actions_applied") << " applied, slowest run " << worst << " s";
    outcome.detail = detail.str();
    return outcome;
}

oracle::Pairs pairs(const Distribution& d) {
    oracle::Pairs out;
    for (const auto& e : d.entries) out.emplace_back(e.label, e.value);
    return out;
}

Outcome graph_oracle_equivalence() {
    Outcome outcome;
    std::mt19937_64 rng(4004);
    std::size_t comparisons = 0;
    const std::vector<std::string> directions{"in", "out", "both"};
    for (int trial = 0; trial < 100; ++trial) {
        const Value doc = testing::random_graph_document(rng);
        const PropertyGraph g = PropertyGraph::from_json(doc);
        const auto raw = oracle::from_document(doc);
        outcome.require(g.nodes().size() <= 200 && g.edges().size() <= 1000, "random graph over size bounds");

        const SchemaGraph schema = compute_schema(g);
        outcome.require(schema.type_nodes == oracle::type_nodes(raw), "schema type_nodes differ");
        const auto oracle_edges = oracle::type_edges(raw);
        outcome.require(schema.type_edges.size() == oracle_edges.size(), "schema type_edges size differs");
        for (const auto& [key, count] : schema.type_edges) {
            auto it = oracle_edges.find({key.src_type, key.rel_type, key.dst_type});
            outcome.require(it != oracle_edges.end() && it->second == count, "schema type_edges differ");
        }
        ++comparisons;

        std::set<std::string> rels;
        for (const auto& e : g.edges()) rels.insert(e.rel_type);
        std::uint64_t degree_total = 0;
        for (const auto& [type, count] : schema.type_nodes) {
            const Distribution d = node_distribution(g, type);
            outcome.require(pairs(d) == oracle::node_distribution(raw, type), "node_distribution differs");
            for (const auto& e : d.entries) degree_total += e.value;
            ++comparisons;
            for (const auto& dir : directions) {
                outcome.require(pairs(relation_distribution(g, type, parse_direction(dir))) ==
                                    oracle::relation_distribution(raw, type, dir),
                                "relation_distribution differs");
                ++comparisons;
                for (const auto& rel : rels) {
                    outcome.require(pairs(node_distribution(g, type, rel, parse_direction(dir))) ==
                                        oracle::node_distribution(raw, type, rel, dir),
                                    "node_distribution by relation differs");
                    outcome.require(filter_by_relation(g, type, rel, parse_direction(dir)) ==
                                        oracle::filter_by_relation(raw, type, rel, dir),
                                    "filter_by_relation differs");
                    comparisons += 2;
                }
            }
        }
        outcome.require(degree_total == 2 * g.edges().size(), "sum of degrees is not 2|E|");
    }
    outcome.detail = "100 graphs, " + std::to_string(comparisons) + " exact comparisons, degree conservation held";
    return outcome;
}

Outcome shared_action_laws() {
    Outcome outcome;
    std::mt19937_64 rng(5005);
    // The first three feed every recompute; filter_by_relation only runs once a relation is selected.
    const char* names[] = {explorer::kGetSchema, explorer::kGetNodeDistribution, explorer::kGetRelationDistribution,
                           explorer::kFilterByRelation};
    const char* directions[] = {"in", "out", "both"};

    // Identity wrapper against the default on random invocations.
    int invocations = 0;
    for (int trial = 0; trial < 10; ++trial) {
        auto graph = random_graph(rng);
        auto plain = explorer_on(graph);
        std::map<std::string, Udf> all_identity;
        for (const char* name : names) all_identity[name] = identity_wrapper();
        auto wrapped = explorer_on(graph, all_identity);
        outcome.require(plain->current_state().payload == wrapped->current_state().payload,
                        "identity-wrapped widget starts in a different state");
        std::vector<std::string> types;
        for (const auto& [type, count] : compute_schema(*graph).type_nodes) types.push_back(type);
        types.push_back("Missing");
        for (int i = 0; i < 10; ++i, ++invocations) {
            const std::string name = names[rng() % 4];
            Value params{{"node_type", types[rng() % types.size()]},
                         {"rel_type", "r" + std::to_string(rng() % 4)},
                         {"direction", directions[rng() % 3]}};
            std::string plain_result, wrapped_result;
            try {
                plain_result = plain->invoke(name, params).dump();
            } catch (const Error& e) {
                plain_result = std::string("error:") + e.code();
            }
            try {
                wrapped_result = wrapped->invoke(name, params).dump();
            } catch (const Error& e) {
                wrapped_result = std::string("error:") + e.code();
            }
            outcome.require(plain_result == wrapped_result, "identity wrapper differs from default for " + name);
        }
    }

    // Alphabetic override is a label-ascending permutation of the default.
    int permutations = 0;
    for (int trial = 0; trial < 50; ++trial, ++permutations) {
        auto graph = trial == 0 ? testing::g0() : random_graph(rng);
        auto widget = explorer_on(graph);
        const auto types = compute_schema(*graph).type_nodes;
        if (types.empty()) continue;
        auto it = types.begin();
        std::advance(it, static_cast<long>(rng() % types.size()));
        const Value params{{"node_type", trial == 0 ? std::string("Occupation") : it->first}};
        const auto before = distribution_entries_from_json(widget->invoke(explorer::kGetNodeDistribution, params));
        widget->set_override(explorer::kGetNodeDistribution, alphabetic_sort_wrapper());
        const auto after = distribution_entries_from_json(widget->invoke(explorer::kGetNodeDistribution, params));
        outcome.require(std::is_permutation(before.begin(), before.end(), after.begin(), after.end()),
                        "alphabetic output is not a permutation of the default");
        outcome.require(std::is_sorted(after.begin(), after.end(),
                                       [](const auto& a, const auto& b) { return a.label < b.label; }),
                        "alphabetic output is not label-ascending");
        if (trial == 0) {
            outcome.require(to_json(Distribution{after, SortOrder::LabelAsc}) ==
                                Value::parse(R"([["Baker",2],["Chef",1]])"),
                            "alphabetic output on G0 Occupation");
        }

        // Override and clear_override each land exactly once.
        widget->clear_override(explorer::kGetNodeDistribution);
        std::size_t overrides = 0, clears = 0;
        for (const auto& record : widget->history_list()) {
            overrides += record.interaction_type == InteractionType::Override;
            clears += record.interaction_type == InteractionType::ClearOverride;
        }
        outcome.require(overrides == 1 && clears == 1, "override/clear_override not recorded exactly once each");
        outcome.require(widget->invoke(explorer::kGetNodeDistribution, params) == to_json(Distribution{before}),
                        "clear_override did not restore the default");
    }

    // A raising user function leaves the widget untouched.
    int raising = 0;
    for (int trial = 0; trial < 20; ++trial, ++raising) {
        auto widget = explorer_on(testing::g0());
        const std::size_t size = widget->history_size();
        const Value payload = widget->current_state().payload;
        Udf boom{"boom", [](const Value&, const SharedOp&) -> Value { throw std::runtime_error("boom"); }, ""};
        bool udf_error = false;
        try {
            widget->set_override(names[trial % 3], boom);
        } catch (const UdfError&) {
            udf_error = true;
        }
        outcome.require(udf_error, "raising override did not surface as UdfError");
        outcome.require(widget->history_size() == size && widget->current_state().payload == payload,
                        "raising override changed state");

        // Installed cleanly, raising only once a Skill is selected.
        Udf picky{"picky",
                  [](const Value& params, const SharedOp& default_op) -> Value {
                      if (params.value("node_type", "") == "Skill") throw std::runtime_error("no skills");
                      return default_op(params);
                  },
                  ""};
        widget->set_override(explorer::kGetNodeDistribution, picky);
        const std::size_t size2 = widget->history_size();
        const Value payload2 = widget->current_state().payload;
        udf_error = false;
        try {
            widget->handle_action(ActionDispatch{InteractionType::Select, explorer::kSchemaGraph,
                                                 {"", Value{{"node_type", "Skill"}}}, Value::object()});
        } catch (const UdfError&) {
            udf_error = true;
        }
        outcome.require(udf_error, "override raising during dispatch did not surface as UdfError");
        outcome.require(widget->history_size() == size2 && widget->current_state().payload == payload2,
                        "override raising during dispatch changed state");
    }

    std::ostringstream detail;
    detail << invocations << " identity invocations, " << permutations << " alphabetic checks, " << raising * 2
           << " raising overrides";
    outcome.detail = detail.str();
    return outcome;
}

Outcome fixture_values() {
    Outcome outcome;
    const auto g = testing::g0();
    const auto raw = oracle::from_document(testing::g0_document());
    const oracle::Pairs skill{{"cooking", 2}, {"baking", 1}};
    const oracle::Pairs requires_in{{"requires", 3}};
    const std::set<std::string> sub_nodes{"n1", "n2", "n3"};
    const std::vector<std::string> filtered{"n1", "n2"};

    outcome.require(pairs(node_distribution(*g, "Skill")) == skill, "node_distribution(Skill)");
    outcome.require(oracle::node_distribution(raw, "Skill") == skill, "oracle node_distribution(Skill)");
    outcome.require(pairs(relation_distribution(*g, "Skill", Direction::In)) == requires_in,
                    "relation_distribution(Skill, in)");
    outcome.require(oracle::relation_distribution(raw, "Skill", "in") == requires_in,
                    "oracle relation_distribution(Skill, in)");

    std::set<std::string> got;
    const PropertyGraph sub = subgraph(*g, "n3", 1, Direction::In);
    for (const auto& node : sub.nodes()) got.insert(node.id);
    outcome.require(got == sub_nodes, "subgraph(n3, 1, in)");
    outcome.require(oracle::reachable(raw, "n3", 1, "in") == sub_nodes, "oracle subgraph(n3, 1, in)");

    outcome.require(filter_by_relation(*g, "Occupation", "requires", Direction::Out) == filtered,
                    "filter_by_relation(Occupation, requires, out)");
    outcome.require(oracle::filter_by_relation(raw, "Occupation", "requires", "out") == filtered,
                    "oracle filter_by_relation(Occupation, requires, out)");
    outcome.detail = "G0 distributions, sub-graph and filter match frozen values";
    return outcome;
}

Outcome alignment_workflow() {
    Outcome outcome;
    AlignmentOptions options;
    options.clock = testing::fixed_clock;
    auto widget = make_alignment_widget(testing::g0(), testing::g0_candidates(), options);
    const StateId pre = widget->current_state().state_id;
    select_candidate(*widget, "c1");
    set_decision(*widget, "c1", "insert");
    set_decision(*widget, "c2", "ignore");
    set_decision(*widget, "c3", "defer");

    const Value decisions = widget->export_data().at("payload").at("decisions");
    const std::set<std::string> allowed{"insert", "ignore", "defer"};
    outcome.require(decisions.size() == 3, "export does not carry three decisions");
    for (const auto& [id, value] : decisions.items()) {
        outcome.require(value.is_string() && allowed.contains(value.get<std::string>()),
                        "decision outside {insert, ignore, defer}");
    }

    const std::size_t before = widget->history_size();
    widget->restore(pre);
    outcome.require(widget->history_size() == before + 1, "restore did not append one record");
    const Value restored = widget->export_data();
    outcome.require(restored.at("payload").at("decisions").size() == 3, "restored export lost decisions");
    for (const auto& [id, value] : restored.at("payload").at("decisions").items()) {
        outcome.require(value == "undecided", "decision not undecided after restore");
    }
    outcome.detail = "3 decisions exported, restore to state " + std::to_string(pre.value) + " resets all";
    return outcome;
}

Outcome protocol_conformance() {
    Outcome outcome;
    std::mt19937_64 rng(8008);
    const MsgType types[] = {MsgType::Ready, MsgType::RenderSpec, MsgType::StateUpdate, MsgType::HistoryUpdate,
                             MsgType::ActionDispatch, MsgType::RestoreRequest, MsgType::Error};
    for (int i = 0; i < 1000; ++i) {
        Envelope e;
        e.widget_id = "w" + std::to_string(rng() % 10);
        e.seq = rng();
        e.msg_type = types[rng() % std::size(types)];
        e.body = rng() % 4 == 0 ? Value::object() : Value{{"data", testing::random_value(rng)}};
        const Flow flow = flow_of(e.msg_type);
        outcome.require(decode(encode(e, flow), flow) == e, "decode(encode(e)) != e");
        const Flow other = flow == Flow::FrontendToKernel ? Flow::KernelToFrontend : Flow::FrontendToKernel;
        bool rejected = false;
        try {
            (void)encode(e, other);
        } catch (const ProtocolError&) {
            rejected = true;
        }
        outcome.require(rejected, "encode accepted a message in the wrong direction");
    }

    int checks = 0;
    for (int trial = 0; trial < 100; ++trial) {
        auto widget = explorer_on(testing::g0());
        CommChannel channel(*widget);
        testing::ExplorerActionGenerator generator(*testing::g0());
        std::uint64_t seq = 0;
        for (int i = 0; i < 5; ++i) {
            seq += 1 + rng() % 3;
            channel.handle_inbound(
                Envelope{std::string(kProtocolVersion), widget->widget_id(), seq, MsgType::ActionDispatch,
                         to_json(generator.next(rng))});
        }
        auto expect_rejection = [&](const Envelope& inbound, const std::string& code) {
            const std::size_t size = widget->history_size();
            const Value payload = widget->current_state().payload;
            const auto replies = channel.handle_inbound(inbound);
            outcome.require(replies.size() == 1 && replies[0].msg_type == MsgType::Error &&
                                replies[0].body.at("code") == code,
                            "expected a single " + code + " error");
            outcome.require(widget->history_size() == size && widget->current_state().payload == payload,
                            code + " rejection changed state");
            ++checks;
        };
        const ActionDispatch valid{InteractionType::Select, explorer::kSchemaGraph,
                                   {"", Value{{"node_type", "Skill"}}}, Value::object()};
        const std::uint64_t stale = seq - rng() % (seq + 1);
        expect_rejection(Envelope{std::string(kProtocolVersion), widget->widget_id(), stale, MsgType::ActionDispatch,
                                  to_json(valid)},
                         error_code::kSeqOrder);
        const MsgType outbound[] = {MsgType::RenderSpec, MsgType::StateUpdate, MsgType::HistoryUpdate, MsgType::Error};
        expect_rejection(Envelope{std::string(kProtocolVersion), widget->widget_id(), ++seq,
                                  outbound[rng() % std::size(outbound)], Value::object()},
                         error_code::kBadDirection);
    }
    outcome.detail = "1000 envelopes round-tripped, " + std::to_string(checks) + " seq/direction rejections";
    return outcome;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"history integrity", history_integrity},
        {"restore round-trip", restore_round_trip},
        {"replay determinism", replay_determinism},
        {"graph oracle equivalence", graph_oracle_equivalence},
        {"shared-action laws", shared_action_laws},
        {"fixture values", fixture_values},
        {"alignment workflow", alignment_workflow},
        {"protocol conformance", protocol_conformance},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        Outcome outcome;
        try {
            outcome = run();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.first_failure = std::string("unexpected exception: ") + e.what();
        }
        if (outcome.pass) {
            std::cout << "PASS  " << name << ": " << outcome.detail << '\n';
        } else {
            ++failures;
            std::cout << "FAIL  " << name << ": " << outcome.first_failure << '\n';
        }
    }
    std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed\n";
    return failures == 0 ? 0 : 1;
}
