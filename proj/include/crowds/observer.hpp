#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "crowds/distance.hpp"
#include "crowds/graph.hpp"

namespace crowds {

/// Per-node epistemic profile: S (source independence), D (source
/// diversity), pi = S*D (epistemic position) and the h-measure.
struct NodeProfile {
    NodeId node;
    int S = 0;
    int D = 0;
    int pi = 0;
    int h = 0;

    bool operator==(const NodeProfile&) const = default;
};

/// Ordered collection of profiles (node id ascending) plus run metadata.
/// The metadata never reaches the CSV/SVG serializations, so identical rows
/// render identically regardless of it.
struct ProfileTable {
    std::vector<NodeProfile> rows;
    std::string graph_name;
    ObserverParams params;
    std::string timestamp;
};

/// Progress callback for batch profiling: (nodes done, nodes total).
using ProgressFn = std::function<void(std::size_t, std::size_t)>;

/// Metric engine over one immutable graph with fixed search bounds.
/// All metric calls on the same Crowd are mutually consistent and safe to
/// issue from multiple threads.
class Crowd {
public:
    explicit Crowd(TestimonialGraph graph, ObserverParams params = {});

    const TestimonialGraph& graph() const { return *graph_; }
    /// Bounds with the direction resolved against the graph.
    const ObserverParams& params() const { return params_; }
    Direction direction() const { return *params_.direction; }

    /// True iff n receives information from at least k distinct sources that
    /// are pairwise at least m steps apart in the graph without n (both
    /// directions on digraphs). Exact: a negative answer is certified by
    /// exhaustive search over the far graph. k = 1 only asks for a source.
    bool is_mk_observer(std::string_view n, int m, int k) const;

    /// Largest m*k over 1 <= m <= m_max, 2 <= k <= k_max with n an
    /// m,k-observer; 0 when there is none (0 or 1 sources included).
    int s_value(std::string_view n) const;

    /// Number of distinct attribute tokens across n's sources.
    int d_value(std::string_view n) const;

    /// s_value(n) * d_value(n).
    int pi_value(std::string_view n) const;

    /// Largest h in [1, max_h] with n an h,h-observer, else 0.
    /// max_h defaults to min(m_max, k_max).
    int h_measure(std::string_view n) const;
    int h_measure(std::string_view n, int max_h) const;

    NodeProfile profile(std::string_view n) const;

    /// Profiles every node (or the given subset) and returns rows ordered by
    /// node id ascending. Output is identical for any worker count.
    ProfileTable profile_all(int workers = 1, const ProgressFn& progress = {}) const;
    ProfileTable profile_all(std::span<const NodeId> subset, int workers = 1,
                             const ProgressFn& progress = {}) const;

    /// S for every node, id-ascending order; the batch the benchmark times.
    std::vector<int> batch_s(int workers = 1) const;

    /// Entries currently held by the shared single-call cache.
    std::size_t cache_size() const;

private:
    struct Separations;

    NodeProfile profile_index(NodeIndex n, DistanceCache& cache) const;
    int s_from_separations(const Separations& sep) const;
    int h_from_separations(const Separations& sep, int max_h) const;
    int d_index(NodeIndex n) const;
    Separations separations_for(NodeIndex n, DistanceCache& cache, int depth) const;
    bool is_mk_index(NodeIndex n, int m, int k, DistanceCache& cache) const;

    std::shared_ptr<const TestimonialGraph> graph_;
    ObserverParams params_;
    mutable std::mutex cache_mutex_;
    mutable DistanceCache cache_;
};

namespace detail {

/// Dense undirected adjacency over a small vertex set (the "far graph" on a
/// node's sources), bitset rows.
class FarGraph {
public:
    explicit FarGraph(int n);

    int size() const { return n_; }
    void add_edge(int i, int j);
    bool adjacent(int i, int j) const;
    int degree(int i) const;
    /// Bitset adjacency row, words() 64-bit words wide.
    std::span<const std::uint64_t> row(int i) const;
    std::size_t words() const { return words_; }

private:
    int n_;
    std::size_t words_;
    std::vector<std::uint64_t> bits_;
};

/// Exact k-clique decision: complete branch-and-bound search, so a false
/// answer is a certificate of absence. k <= 0 is vacuously true.
bool has_k_clique(const FarGraph& g, int k);

} // namespace detail

} // namespace crowds
