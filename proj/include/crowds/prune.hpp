#pragma once

#include <optional>

#include "crowds/graph.hpp"

namespace crowds {

/// Thresholds for the iterative reduction. Defaults: drop nodes with
/// indegree+outdegree <= 1, no edge culling.
struct PruneConfig {
    int degree_threshold = 1;
    std::optional<double> weight_threshold;

    /// Throws ValidationError if degree_threshold < 0 or the weight
    /// threshold is negative/non-finite.
    void validate() const;
};

/// Repeats (1) delete edges with weight < weight_threshold, (2) delete
/// nodes with degree <= degree_threshold, (3) keep the largest weakly
/// connected component, until a fixpoint. Ties on component size go to the
/// component containing the smallest node id. Attributes of surviving nodes
/// are preserved. The empty graph is a valid result.
TestimonialGraph iteratively_prune(const TestimonialGraph& graph,
                                   const PruneConfig& config = {});

} // namespace crowds
