#include "hcdht/experiment.hpp"

#include "hcdht/errors.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <bit>
#include <ostream>

namespace hcdht {

const CellSummary& ExperimentReport::cell(unsigned r, std::size_t objects, Op op) const {
    for (const auto& c : cells) {
        if (c.r == r && c.objects == objects && c.op == op) return c;
    }
    throw Error(fmt::format("no cell r={} objects={} op={}", r, objects, to_string(op)));
}

std::uint64_t cell_seed(std::uint64_t plan_seed, unsigned r, std::size_t objects) {
    return splitmix64(splitmix64(plan_seed ^ (std::uint64_t{r} << 56)) ^ objects);
}

void validate(const ExperimentPlan& plan) {
    if (plan.node_counts.empty() || plan.object_counts.empty()) {
        throw ConfigError("experiment plan needs at least one node count and one object count");
    }
    for (auto n : plan.node_counts) {
        if (n < 2 || !std::has_single_bit(n) || n > (std::uint64_t{1} << kMaxNetworkDimension)) {
            throw ConfigError(fmt::format("node count {} is not a power of two in [2, 2^{}]", n,
                                          kMaxNetworkDimension));
        }
    }
    if (plan.queries_per_cell == 0) throw ConfigError("queries per cell must be positive");
    if (plan.superset_limit == 0) throw ConfigError("superset limit must be positive");
}

namespace {

void run_cell(const ExperimentPlan& plan, unsigned r, std::size_t objects, ExperimentReport& report) {
    NetworkConfig cfg;
    cfg.r = r;
    cfg.transport = plan.transport;
    cfg.host = plan.host;
    cfg.base_port = plan.base_port;
    cfg.seed = cell_seed(plan.seed, r, objects);
    Network net(cfg);

    Rng rng(cfg.seed);
    net.populate(objects, rng.next());

    const Dimension dim = net.dimension();
    const SupersetLimit limit(plan.superset_limit);
    for (Op op : {Op::Pin, Op::Superset}) {
        std::uint64_t total_hops = 0;
        for (std::size_t q = 0; q < plan.queries_per_cell; ++q) {
            const NodeId start = NodeId::from_index(dim, rng.below(dim.node_count()));
            KeywordSet keywords = random_keyset(rng, net.keyword_universe(), dim);
            QueryResult result = op == Op::Pin ? net.engine().pin_search(start, keywords)
                                               : net.engine().superset_search(start, keywords, limit);
            total_hops += result.hops;
            report.records.push_back(QueryRecord{r, objects, op, q, start.str(),
                                                 one(keywords, dim, net.hasher()).str(),
                                                 std::move(keywords), result.hops,
                                                 result.cids.size()});
        }
        report.cells.push_back(CellSummary{r, dim.node_count(), objects, op,
                                           static_cast<double>(total_hops) /
                                               static_cast<double>(plan.queries_per_cell),
                                           plan.queries_per_cell});
    }
}

}  // namespace

ExperimentReport run_experiment(const ExperimentPlan& plan) {
    validate(plan);
    ExperimentReport report;
    for (auto nodes : plan.node_counts) {
        const auto r = static_cast<unsigned>(std::countr_zero(nodes));
        for (auto objects : plan.object_counts) run_cell(plan, r, objects, report);
    }
    return report;
}

void write_summary_csv(std::ostream& out, const ExperimentReport& report) {
    out << "r,nodes,objects,op,mean_hops,queries\n";
    for (const auto& c : report.cells) {
        fmt::print(out, "{},{},{},{},{:.4f},{}\n", c.r, c.nodes, c.objects, to_string(c.op),
                   c.mean_hops, c.queries);
    }
}

void write_raw_csv(std::ostream& out, const ExperimentReport& report) {
    out << "r,nodes,objects,op,query,start,target,keywords,hops,results\n";
    for (const auto& q : report.records) {
        fmt::print(out, "{},{},{},{},{},{},{},{},{},{}\n", q.r, std::uint64_t{1} << q.r, q.objects,
                   to_string(q.op), q.index, q.start, q.target, q.keywords.join(';'), q.hops,
                   q.results);
    }
}

void write_summary_table(std::ostream& out, const ExperimentReport& report) {
    fmt::print(out, "{:>3} {:>6} {:>8} {:>9} {:>10} {:>8}\n", "r", "nodes", "objects", "op",
               "mean_hops", "queries");
    for (const auto& c : report.cells) {
        fmt::print(out, "{:>3} {:>6} {:>8} {:>9} {:>10.4f} {:>8}\n", c.r, c.nodes, c.objects,
                   to_string(c.op), c.mean_hops, c.queries);
    }
}

}  // namespace hcdht
