#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "crowds/graph.hpp"

namespace crowds {

/// Grid for the scaling benchmark: every (n, p) cell runs `repetitions`
/// times. Cells run sequentially unless parallel_cells is set; worker counts
/// apply inside each cell's batch-S computation and are recorded per row.
struct BenchPlan {
    std::vector<int> node_counts;
    std::vector<double> edge_probabilities;
    std::uint64_t seed = 0;
    int repetitions = 1;
    int workers = 1;
    bool parallel_cells = false;
    /// Reps of a cell after one exceeding this budget are skipped.
    std::optional<double> per_cell_budget_seconds;

    void validate() const;
};

/// G(n, p) digraph: every ordered pair (u,v), u != v, is an edge with
/// probability p, drawn from a mersenne-twister (mt19937_64) stream seeded
/// with `seed`; pairs are scanned in row-major node order, so the same
/// (n, p, seed) yields the same graph on every platform. Node ids are the
/// decimal strings "0" .. "n-1".
TestimonialGraph random_digraph(int n, double p, std::uint64_t seed);

struct BenchRow {
    int n = 0;
    double p = 0.0;
    int rep = 0;
    int workers = 1;
    double seconds = 0.0;
};

/// Times batch s_value over all nodes of a fresh random digraph per row
/// (graph generation is excluded from the measurement). Row order is the
/// plan's (n, p, rep) order regardless of cell parallelism.
std::vector<BenchRow> run_scaling_benchmark(const BenchPlan& plan,
                                            std::ostream* log = nullptr);

/// CSV with header `n,p,rep,workers,seconds`.
std::string write_timing_csv(std::span<const BenchRow> rows);

} // namespace crowds
