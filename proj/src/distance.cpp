#include "crowds/distance.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <string_view>

namespace crowds {

namespace {

std::size_t default_cache_limit() {
    if (const char* env = std::getenv("CROWDS_CACHE_LIMIT")) {
        std::string_view s(env);
        std::size_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec == std::errc{} && ptr == s.data() + s.size()) return v;
    }
    return std::size_t{1} << 20;
}

std::span<const NodeIndex> step(const TestimonialGraph& g, NodeIndex u, Traversal t) {
    switch (t) {
    case Traversal::out_edges: return g.out_neighbors(u);
    case Traversal::in_edges: return g.in_neighbors(u);
    case Traversal::undirected: return g.neighbors(u);
    }
    return g.out_neighbors(u);
}

} // namespace

std::shared_ptr<const std::vector<std::uint8_t>> bfs_row(
    const TestimonialGraph& g, NodeIndex excluded, NodeIndex origin,
    Traversal traversal, int depth) {
    auto row = std::make_shared<std::vector<std::uint8_t>>(g.node_count(), kUnreached);
    auto& dist = *row;
    if (origin == excluded) return row;
    dist[origin] = 0;
    depth = std::min(depth, 254);

    std::vector<NodeIndex> frontier{origin}, next;
    for (int d = 1; d <= depth && !frontier.empty(); ++d) {
        next.clear();
        for (NodeIndex u : frontier) {
            for (NodeIndex v : step(g, u, traversal)) {
                if (v == excluded || dist[v] != kUnreached) continue;
                dist[v] = static_cast<std::uint8_t>(d);
                next.push_back(v);
            }
        }
        frontier.swap(next);
    }
    return row;
}

DistanceCache::DistanceCache() : max_entries_(default_cache_limit()) {}

DistanceCache::DistanceCache(std::size_t max_entries) : max_entries_(max_entries) {}

std::size_t DistanceCache::KeyHash::operator()(const Key& k) const {
    std::uint64_t h = (static_cast<std::uint64_t>(k.excluded) << 32) ^
                      (static_cast<std::uint64_t>(k.origin) << 2) ^
                      static_cast<std::uint64_t>(k.traversal);
    h ^= h >> 30;
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 27;
    h *= 0x94d049bb133111ebULL;
    h ^= h >> 31;
    return static_cast<std::size_t>(h);
}

std::shared_ptr<const std::vector<std::uint8_t>> DistanceCache::row(
    const TestimonialGraph& g, NodeIndex excluded, NodeIndex origin,
    Traversal traversal, int depth) {
    const Key key{excluded, origin, traversal};
    auto it = entries_.find(key);
    if (it != entries_.end() && it->second.depth >= depth) {
        ++hits_;
        return it->second.row;
    }
    ++misses_;
    auto fresh = bfs_row(g, excluded, origin, traversal, depth);
    if (it != entries_.end())
        it->second = Entry{depth, fresh};
    else if (max_entries_ == 0 || entries_.size() < max_entries_)
        entries_.emplace(key, Entry{depth, fresh});
    return fresh;
}

void DistanceCache::clear() {
    entries_.clear();
    hits_ = 0;
    misses_ = 0;
}

std::optional<int> truncated_distance(const TestimonialGraph& g, NodeIndex excluded,
                                      NodeIndex from, NodeIndex to, int limit,
                                      DistanceCache* cache) {
    if (limit < 1) throw ValidationError("limit must be at least 1");
    if (limit > 255) throw ValidationError("limit above 255 is not supported");
    const auto n = static_cast<NodeIndex>(g.node_count());
    if (excluded >= n || from >= n || to >= n)
        throw NotFoundError("node index out of range");
    if (from == excluded || to == excluded)
        throw ValidationError("endpoint equals the excluded node");
    if (from == to) return 0;

    const Traversal t = traversal_for(g);
    const int depth = limit - 1;
    auto row = cache ? cache->row(g, excluded, from, t, depth)
                     : bfs_row(g, excluded, from, t, depth);
    const std::uint8_t d = (*row)[to];
    if (d == kUnreached || static_cast<int>(d) >= limit) return std::nullopt;
    return static_cast<int>(d);
}

std::optional<int> truncated_distance(const TestimonialGraph& g, std::string_view excluded,
                                      std::string_view from, std::string_view to,
                                      int limit, DistanceCache* cache) {
    return truncated_distance(g, g.require(excluded), g.require(from), g.require(to),
                              limit, cache);
}

int separation(const TestimonialGraph& g, NodeIndex excluded, NodeIndex u, NodeIndex v,
               int cap, DistanceCache* cache) {
    if (cap < 1) throw ValidationError("cap must be at least 1");
    if (u == v) return 0;
    const auto duv = truncated_distance(g, excluded, u, v, cap, cache);
    int best = duv.value_or(cap);
    if (!g.directed()) return best;
    const auto dvu = truncated_distance(g, excluded, v, u, cap, cache);
    return std::min(best, dvu.value_or(cap));
}

int separation(const TestimonialGraph& g, std::string_view excluded, std::string_view u,
               std::string_view v, int cap, DistanceCache* cache) {
    return separation(g, g.require(excluded), g.require(u), g.require(v), cap, cache);
}

} // namespace crowds
