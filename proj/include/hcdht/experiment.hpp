#pragma once

#include "hcdht/network.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hcdht {

/// Grid of hop-count experiments. Defaults:
/// 8..128 nodes, 10/100/1000 objects, 50 queries per operation, limit 10.
struct ExperimentPlan {
    std::vector<std::uint64_t> node_counts{8, 16, 32, 64, 128};
    std::vector<std::size_t> object_counts{10, 100, 1000};
    std::size_t queries_per_cell = 50;
    std::size_t superset_limit = 10;
    std::uint64_t seed = 3;
    TransportKind transport = TransportKind::InProcess;
    std::string host = "127.0.0.1";
    std::uint16_t base_port = 9000;
};

struct QueryRecord {
    unsigned r = 0;
    std::size_t objects = 0;
    Op op = Op::Pin;
    std::size_t index = 0;
    std::string start;
    std::string target;
    KeywordSet keywords;
    std::uint32_t hops = 0;
    std::size_t results = 0;
};

struct CellSummary {
    unsigned r = 0;
    std::uint64_t nodes = 0;
    std::size_t objects = 0;
    Op op = Op::Pin;
    double mean_hops = 0.0;
    std::size_t queries = 0;
};

struct ExperimentReport {
    std::vector<CellSummary> cells;
    std::vector<QueryRecord> records;

    /// Throws when no such cell exists.
    const CellSummary& cell(unsigned r, std::size_t objects, Op op) const;
};

/// Seed of one (r, objects) cell, derived from the plan seed.
std::uint64_t cell_seed(std::uint64_t plan_seed, unsigned r, std::size_t objects);

/// Validates the plan. Node counts must be powers of two in [2, 2^16].
void validate(const ExperimentPlan& plan);

/// For every (nodes, objects) cell: builds a fresh network, populates it, then
/// issues the pin queries followed by the superset queries, each from a
/// uniformly random start with a random keyset. Pure function of the plan.
ExperimentReport run_experiment(const ExperimentPlan& plan);

/// `r,nodes,objects,op,mean_hops,queries`
void write_summary_csv(std::ostream& out, const ExperimentReport& report);
/// `r,nodes,objects,op,query,start,target,keywords,hops,results`; keywords joined by ';'.
void write_raw_csv(std::ostream& out, const ExperimentReport& report);
/// Fixed-width table, one row per cell.
void write_summary_table(std::ostream& out, const ExperimentReport& report);

}  // namespace hcdht
