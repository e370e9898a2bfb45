#include "crowds/prune.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace crowds {

void PruneConfig::validate() const {
    if (degree_threshold < 0)
        throw ValidationError("degree_threshold must be non-negative");
    if (weight_threshold && (!std::isfinite(*weight_threshold) || *weight_threshold < 0.0))
        throw ValidationError("weight_threshold must be a non-negative finite number");
}

TestimonialGraph iteratively_prune(const TestimonialGraph& graph, const PruneConfig& config) {
    config.validate();
    const auto edges = graph.edges();
    const std::size_t n = graph.node_count();
    std::vector<char> node_alive(n, 1), edge_alive(edges.size(), 1);

    auto drop_detached_edges = [&] {
        for (std::size_t e = 0; e < edges.size(); ++e)
            if (edge_alive[e] && (!node_alive[edges[e].from] || !node_alive[edges[e].to]))
                edge_alive[e] = 0;
    };

    bool changed = true;
    while (changed) {
        changed = false;

        if (config.weight_threshold) {
            for (std::size_t e = 0; e < edges.size(); ++e) {
                if (edge_alive[e] && edges[e].weight < *config.weight_threshold) {
                    edge_alive[e] = 0;
                    changed = true;
                }
            }
        }

        std::vector<int> deg(n, 0);
        for (std::size_t e = 0; e < edges.size(); ++e) {
            if (!edge_alive[e]) continue;
            ++deg[edges[e].from];
            ++deg[edges[e].to];
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (node_alive[i] && deg[i] <= config.degree_threshold) {
                node_alive[i] = 0;
                changed = true;
            }
        }
        drop_detached_edges();

        // largest weakly connected component; ties keep the component whose
        // smallest node index is lowest (ids ascend with indices)
        std::vector<std::vector<NodeIndex>> adj(n);
        for (std::size_t e = 0; e < edges.size(); ++e) {
            if (!edge_alive[e] || edges[e].from == edges[e].to) continue;
            adj[edges[e].from].push_back(edges[e].to);
            adj[edges[e].to].push_back(edges[e].from);
        }
        std::vector<std::uint32_t> comp(n, 0);
        std::uint32_t comp_count = 0;
        std::uint32_t best_comp = 0;
        std::size_t best_size = 0;
        std::vector<NodeIndex> queue;
        for (std::size_t i = 0; i < n; ++i) {
            if (!node_alive[i] || comp[i] != 0) continue;
            const std::uint32_t id = ++comp_count;
            comp[i] = id;
            queue.assign(1, static_cast<NodeIndex>(i));
            std::size_t size = 0;
            while (!queue.empty()) {
                const NodeIndex u = queue.back();
                queue.pop_back();
                ++size;
                for (NodeIndex v : adj[u]) {
                    if (comp[v] == 0) {
                        comp[v] = id;
                        queue.push_back(v);
                    }
                }
            }
            if (size > best_size) {
                best_size = size;
                best_comp = id;
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (node_alive[i] && comp[i] != best_comp) {
                node_alive[i] = 0;
                changed = true;
            }
        }
        drop_detached_edges();
    }

    GraphBuilder builder(graph.directed());
    for (NodeIndex i = 0; i < n; ++i) {
        if (!node_alive[i]) continue;
        builder.add_node(graph.id_of(i));
        auto attrs = graph.attributes(i);
        if (!attrs.empty())
            builder.set_attributes(graph.id_of(i), {attrs.begin(), attrs.end()});
    }
    for (std::size_t e = 0; e < edges.size(); ++e)
        if (edge_alive[e])
            builder.add_edge(graph.id_of(edges[e].from), graph.id_of(edges[e].to),
                             edges[e].weight);
    return builder.build();
}

} // namespace crowds
