// Acceptance gate: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include "hcdht/experiment.hpp"
#include "hcdht/network.hpp"

#include "support/dao_model.hpp"
#include "support/fixtures.hpp"

#include <fmt/core.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

using namespace hcdht;

namespace {

constexpr std::uint16_t kWireBasePort = 22000;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double pin_mean(const ExperimentReport& rep, unsigned r, std::size_t objects) {
    return rep.cell(r, objects, Op::Pin).mean_hops;
}

double sup_mean(const ExperimentReport& rep, unsigned r, std::size_t objects) {
    return rep.cell(r, objects, Op::Superset).mean_hops;
}

Outcome pin_hop_law(const ExperimentReport& rep, double runtime) {
    Outcome out;
    for (const auto& c : rep.cells) {
        if (c.op != Op::Pin) continue;
        out.require(std::fabs(c.mean_hops - c.r / 2.0) <= 0.6,
                    fmt::format("r={} objects={} mean {:.2f} not within 0.6 of {:.1f}", c.r, c.objects,
                                c.mean_hops, c.r / 2.0));
        if (c.r == 7) {
            out.require(c.mean_hops >= 3.0 && c.mean_hops <= 4.0,
                        fmt::format("r=7 objects={} mean {:.2f} outside [3, 4]", c.objects, c.mean_hops));
        }
    }
    out.require(runtime < 30.0, fmt::format("runtime {:.2f}s", runtime));
    if (out.pass) {
        out.detail = fmt::format("r=7 means {:.2f}/{:.2f}/{:.2f}, grid in {:.2f}s", pin_mean(rep, 7, 10),
                                 pin_mean(rep, 7, 100), pin_mean(rep, 7, 1000), runtime);
    }
    return out;
}

Outcome pin_object_independence(const ExperimentReport& rep) {
    Outcome out;
    const double m[] = {pin_mean(rep, 7, 10), pin_mean(rep, 7, 100), pin_mean(rep, 7, 1000)};
    double worst = 0;
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) worst = std::max(worst, std::fabs(m[i] - m[j]));
    }
    out.require(worst < 0.8, fmt::format("largest difference {:.2f}", worst));
    if (out.pass) out.detail = fmt::format("largest pairwise difference {:.2f}", worst);
    return out;
}

Outcome superset_trends(const ExperimentReport& rep) {
    Outcome out;
    const double a = sup_mean(rep, 7, 10), b = sup_mean(rep, 7, 100), c = sup_mean(rep, 7, 1000);
    out.require(a > b && b > c, fmt::format("r=7 means {:.2f}/{:.2f}/{:.2f} not decreasing", a, b, c));
    std::string across;
    for (unsigned r = 3; r <= 7; ++r) {
        across += fmt::format("{}{:.2f}", r == 3 ? "" : "/", sup_mean(rep, r, 10));
        if (r > 3) {
            out.require(sup_mean(rep, r, 10) > sup_mean(rep, r - 1, 10),
                        fmt::format("10-object means {} not increasing", across));
        }
    }
    out.require(a >= 12.0 && a <= 28.0, fmt::format("(r=7, 10) mean {:.2f} outside [12, 28]", a));
    const double small = sup_mean(rep, 3, 1000);
    out.require(small >= 1.0 && small <= 2.5, fmt::format("(r=3, 1000) mean {:.2f} outside [1, 2.5]", small));
    if (out.pass) {
        out.detail = fmt::format("r=7 {:.2f} > {:.2f} > {:.2f}; 10 objects r=3..7 {}; (r=3, 1000) {:.2f}", a,
                                 b, c, across, small);
    }
    return out;
}

/// Criteria 1-3 on other seeds, reported for context only.
std::string seed_sensitivity(const ExperimentPlan& base, std::uint64_t seeds) {
    std::size_t pass[3] = {0, 0, 0}, all = 0;
    for (std::uint64_t s = 1; s <= seeds; ++s) {
        ExperimentPlan plan = base;
        plan.seed = s;
        const auto rep = run_experiment(plan);
        const bool ok[3] = {pin_hop_law(rep, 0).pass, pin_object_independence(rep).pass,
                            superset_trends(rep).pass};
        for (int i = 0; i < 3; ++i) pass[i] += ok[i];
        all += ok[0] && ok[1] && ok[2];
    }
    return fmt::format("seeds 1..{}: criterion 1 {}, 2 {}, 3 {}, all three {}", seeds, pass[0], pass[1],
                       pass[2], all);
}

Outcome oracle_equivalence() {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    std::size_t queries = 0, mismatches = 0;
    for (unsigned rv : {2U, 3U, 4U}) {
        NetworkConfig cfg;
        cfg.r = rv;
        Network net(cfg);
        net.populate(200, 1000 + rv);
        const testing::BruteForce oracle(net.snapshot());
        const Dimension r(rv);
        const SupersetLimit unlimited(1'000'000);
        std::uint64_t q = 0;
        for (const auto& k : testing::all_subsets(net.keyword_universe())) {
            if (k.empty()) continue;
            const NodeId start = NodeId::from_index(r, q++ % r.node_count());
            const auto want_pin = oracle.exact(testing::as_set(k));
            const auto want_sup = oracle.superset(testing::as_set(k));
            const auto pin = net.engine().pin_search(start, k);
            const auto sup = net.engine().superset_search(start, k, unlimited);
            if (testing::as_set(pin.cids) != want_pin || pin.cids.size() != want_pin.size()) ++mismatches;
            if (testing::as_set(sup.cids) != want_sup || sup.cids.size() != want_sup.size()) ++mismatches;
            queries += 2;
        }
    }
    const double runtime = seconds_since(t0);
    out.require(mismatches == 0, fmt::format("{} mismatches", mismatches));
    out.require(runtime < 10.0, fmt::format("runtime {:.2f}s", runtime));
    if (out.pass) out.detail = fmt::format("{} queries, 0 mismatches, {:.2f}s", queries, runtime);
    return out;
}

Outcome routing_exactness() {
    Outcome out;
    std::size_t pairs = 0, roots = 0;
    for (unsigned rv = 1; rv <= 4; ++rv) {
        NetworkConfig cfg;
        cfg.r = rv;
        Network net(cfg);
        const Dimension r(rv);
        for (std::uint64_t s = 0; s < r.node_count(); ++s) {
            for (std::uint64_t t = 0; t < r.node_count(); ++t) {
                const NodeId from = NodeId::from_index(r, s), to = NodeId::from_index(r, t);
                const auto res = net.engine().route(from, to);
                ++pairs;
                bool ok = res.hops == hamming(from, to) && res.nodes_visited.size() == res.hops + 1 &&
                          res.nodes_visited.front() == from && res.nodes_visited.back() == to;
                for (std::size_t i = 1; ok && i < res.nodes_visited.size(); ++i) {
                    ok = hamming(res.nodes_visited[i - 1], res.nodes_visited[i]) == 1;
                }
                out.require(ok, fmt::format("route {} -> {} took {} hops", from.str(), to.str(), res.hops));
            }
        }

        // Spanning tree of every region, rooted at every query node, against
        // the set of bit-supersets enumerated directly.
        for (std::uint64_t root = 0; root < r.node_count(); ++root) {
            const NodeId u = NodeId::from_index(r, root);
            std::multiset<std::uint64_t> reached;
            std::vector<NodeId> stack{u};
            while (!stack.empty()) {
                const NodeId v = stack.back();
                stack.pop_back();
                reached.insert(v.index());
                for (const auto& c : superset_children(v, u)) stack.push_back(c);
            }
            std::multiset<std::uint64_t> supersets;
            for (std::uint64_t v = 0; v < r.node_count(); ++v) {
                if ((v & root) == root) supersets.insert(v);
            }
            out.require(reached == supersets, fmt::format("tree of {} is not the superset region", u.str()));
            ++roots;
        }

        // The engine's traversal on an empty network walks the whole region once.
        const auto universe = net.keyword_universe();
        for (const auto& k : testing::all_subsets(std::vector<std::string>(universe.begin(),
                                                                           universe.begin() + 2 * rv))) {
            if (k.empty()) continue;
            const NodeId u = one(k, r, net.hasher());
            const auto res = net.engine().superset_search(NodeId::zero(r), k, SupersetLimit(1'000'000));
            const std::vector<NodeId> tree(res.nodes_visited.begin() + res.route_hops, res.nodes_visited.end());
            const std::set<NodeId> distinct(tree.begin(), tree.end());
            const std::uint64_t region = std::uint64_t{1} << (rv - u.popcount());
            bool ok = tree.size() == region && distinct.size() == region;
            for (const auto& v : tree) ok = ok && v.covers(u);
            out.require(ok, fmt::format("traversal for {} visited {} of {} nodes", u.str(), tree.size(), region));
        }
    }
    if (out.pass) out.detail = fmt::format("{} ordered pairs, {} spanning trees, r <= 4", pairs, roots);
    return out;
}

Outcome transport_equivalence() {
    Outcome out;
    NetworkConfig cfg;
    cfg.r = 4;
    cfg.base_port = kWireBasePort;
    Network local(cfg);
    cfg.transport = TransportKind::Wire;
    Network wire(cfg);
    local.populate(150, 42);
    wire.populate(150, 42);

    Rng rng(2024);
    const Dimension r(4);
    std::size_t differing = 0;
    for (int q = 0; q < 100; ++q) {
        const NodeId start = NodeId::from_index(r, rng.below(r.node_count()));
        const KeywordSet k = random_keyset(rng, local.keyword_universe(), r);
        QueryResult a, b;
        if (q % 2 == 0) {
            a = local.engine().pin_search(start, k);
            b = wire.engine().pin_search(start, k);
        } else {
            a = local.engine().superset_search(start, k, SupersetLimit(10));
            b = wire.engine().superset_search(start, k, SupersetLimit(10));
        }
        if (a.cids != b.cids || a.hops != b.hops) ++differing;
    }
    out.require(differing == 0, fmt::format("{} of 100 queries differ", differing));
    if (out.pass) out.detail = "100 queries (50 pin, 50 superset), identical cids and hops";
    return out;
}

Outcome governance() {
    Outcome out;
    const auto main = testing::run_dao_model(1, 10000);
    out.require(main.valid == 10000, fmt::format("only {} valid operations", main.valid));
    out.require(main.divergences == 0, "diverged: " + main.first_divergence);
    out.require(main.conservation_failures == 0,
                fmt::format("{} conservation failures", main.conservation_failures));

    std::size_t violations = main.temporal_violations, rejections = main.temporal_rejections;
    for (std::uint64_t seed = 2; seed <= 6; ++seed) {
        const auto extra = testing::run_dao_model(seed, 10000);
        violations += extra.temporal_violations + extra.divergences;
        rejections += extra.temporal_rejections;
    }
    out.require(violations == 0, fmt::format("{} temporal violations", violations));
    out.require(rejections > 0, "no early operation was attempted");

    dao::Dao d;
    d.mint("alice", 100);
    d.mint("bob", 50);
    d.lock_tokens("alice", 100, 500);
    d.lock_tokens("bob", 50, 500);
    const auto p = d.submit_proposal("alice", "lifecycle", 100);
    const auto heavy = d.submit_suggestion(p, "alice", "a");
    const auto light = d.submit_suggestion(p, "bob", "b");
    d.vote(p, light, "bob");
    d.vote(p, heavy, "alice");
    d.tick(100);
    const auto winner = d.execute_proposal(p);
    out.require(winner == heavy && d.proposal(p).suggestions[heavy - 1].total_weight() == 100,
                "lifecycle did not elect the 100-weight suggestion");
    if (out.pass) {
        out.detail = fmt::format("10000 valid ops, 0 divergences; {} timing rejections, 0 violations; "
                                 "winner weight 100",
                                 rejections);
    }
    return out;
}

Outcome determinism(const ExperimentPlan& plan, const ExperimentReport& first) {
    Outcome out;
    auto bytes = [](const ExperimentReport& rep) {
        std::ostringstream s;
        write_summary_csv(s, rep);
        write_raw_csv(s, rep);
        return s.str();
    };
    const std::string a = bytes(first);
    const std::string b = bytes(run_experiment(plan));
    const std::string c = bytes(run_experiment(plan));
    out.require(a == b && b == c, "CSV output differs between runs");
    if (out.pass) out.detail = fmt::format("3 runs, {} bytes each, identical", a.size());
    return out;
}

}  // namespace

int main() {
    const ExperimentPlan plan;
    const auto t0 = std::chrono::steady_clock::now();
    const ExperimentReport report = run_experiment(plan);
    const double grid_runtime = seconds_since(t0);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"pin search hop law", [&] { return pin_hop_law(report, grid_runtime); }},
        {"pin search object independence", [&] { return pin_object_independence(report); }},
        {"superset search trends", [&] { return superset_trends(report); }},
        {"oracle equivalence", oracle_equivalence},
        {"routing exactness", routing_exactness},
        {"transport equivalence", transport_equivalence},
        {"governance suite", governance},
        {"determinism", [&] { return determinism(plan, report); }},
    };

    fmt::print("experiment seed {}\n", plan.seed);
    int failed = 0;
    int n = 0;
    for (const auto& [name, run] : criteria) {
        ++n;
        Outcome outcome;
        try {
            outcome = run();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.detail = std::string("exception: ") + e.what();
        }
        failed += !outcome.pass;
        fmt::print("{} {}. {}: {}\n", outcome.pass ? "PASS" : "FAIL", n, name, outcome.detail);
    }
    fmt::print("info: criteria 1-3 across seeds ({})\n", seed_sensitivity(plan, 100));
    return failed == 0 ? 0 : 1;
}
