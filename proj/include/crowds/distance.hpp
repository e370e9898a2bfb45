#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "crowds/graph.hpp"

namespace crowds {

/// Edge orientation a breadth-first search follows.
enum class Traversal : std::uint8_t { out_edges, in_edges, undirected };

/// Natural traversal for path queries on this graph.
inline Traversal traversal_for(const TestimonialGraph& g) {
    return g.directed() ? Traversal::out_edges : Traversal::undirected;
}

/// Value stored for "not reached within the truncation depth".
inline constexpr std::uint8_t kUnreached = 0xFF;

/// Memo for truncated single-source distance rows, keyed by
/// (excluded node, origin, traversal). Entries are immutable once computed;
/// presence or absence of a cache entry never changes any query result.
/// Not thread-safe: use one instance per worker or synchronize externally.
class DistanceCache {
public:
    /// max_entries == 0 means unbounded. The default ceiling comes from the
    /// CROWDS_CACHE_LIMIT environment variable (entries), else 1<<20.
    DistanceCache();
    explicit DistanceCache(std::size_t max_entries);

    /// Distance row from `origin` in the vertex-induced subgraph without
    /// `excluded`, exact up to `depth` hops, kUnreached beyond. Rows are
    /// recomputed (and replaced) when a deeper truncation is requested.
    std::shared_ptr<const std::vector<std::uint8_t>> row(
        const TestimonialGraph& g, NodeIndex excluded, NodeIndex origin,
        Traversal traversal, int depth);

    void clear();
    std::size_t size() const { return entries_.size(); }
    std::size_t hits() const { return hits_; }
    std::size_t misses() const { return misses_; }

private:
    struct Key {
        NodeIndex excluded;
        NodeIndex origin;
        Traversal traversal;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const;
    };
    struct Entry {
        int depth;
        std::shared_ptr<const std::vector<std::uint8_t>> row;
    };

    std::size_t max_entries_;
    std::unordered_map<Key, Entry, KeyHash> entries_;
    std::size_t hits_ = 0;
    std::size_t misses_ = 0;
};

/// Single truncated BFS, no caching. Exposed for tests and one-off queries.
std::shared_ptr<const std::vector<std::uint8_t>> bfs_row(
    const TestimonialGraph& g, NodeIndex excluded, NodeIndex origin,
    Traversal traversal, int depth);

/// Hop count of the shortest path from `from` to `to` in the graph without
/// `excluded`, following the graph's natural edge direction. Returns the
/// exact distance if it is < limit, std::nullopt for "at least limit"
/// (covering both long paths and unreachability). Edge weights are ignored.
/// Throws NotFoundError for unknown nodes, ValidationError if limit < 1,
/// limit > 255, or from/to equals excluded.
std::optional<int> truncated_distance(const TestimonialGraph& g,
                                      NodeIndex excluded, NodeIndex from,
                                      NodeIndex to, int limit,
                                      DistanceCache* cache = nullptr);
std::optional<int> truncated_distance(const TestimonialGraph& g,
                                      std::string_view excluded,
                                      std::string_view from, std::string_view to,
                                      int limit, DistanceCache* cache = nullptr);

/// Pairwise source separation: min(d(u,v), d(v,u)) in the graph without
/// `excluded`, saturated at `cap` (cap therefore means "at least cap,
/// possibly infinite"). Symmetric in u and v; 0 iff u == v. For undirected
/// graphs the two directions coincide.
int separation(const TestimonialGraph& g, NodeIndex excluded, NodeIndex u,
               NodeIndex v, int cap, DistanceCache* cache = nullptr);
int separation(const TestimonialGraph& g, std::string_view excluded,
               std::string_view u, std::string_view v, int cap,
               DistanceCache* cache = nullptr);

} // namespace crowds
