#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "crowds/errors.hpp"

namespace crowds {

/// Opaque node identifier. Integer datasets keep their decimal spelling;
/// ordering throughout the library is plain lexicographic string order.
using NodeId = std::string;

/// Dense internal index assigned after loading (ids sorted ascending).
using NodeIndex = std::uint32_t;

/// Which neighbors of a node count as its information sources.
/// `predecessors` reads an edge u->v as "v receives from u".
enum class Direction { predecessors, successors, neighbors };

std::string_view to_string(Direction d);

/// Search bounds for the m,k-observer scan.
struct ObserverParams {
    int m_max = 5;
    int k_max = 5;
    /// Unset means: predecessors on directed graphs, neighbors on undirected.
    std::optional<Direction> direction;

    /// Throws ValidationError unless 1 <= m_max and 2 <= k_max.
    void validate() const;
};

struct Edge {
    NodeIndex from = 0;
    NodeIndex to = 0;
    double weight = 1.0;

    bool operator==(const Edge&) const = default;
};

/// A weighted (di)graph of who-receives-from-whom, plus per-node attribute
/// sets. Immutable after construction: safe for unsynchronized concurrent
/// reads. Self-loops and weights are stored faithfully but all distance and
/// observer metrics ignore them; weights matter to pruning only.
class TestimonialGraph {
public:
    TestimonialGraph() = default;

    bool directed() const { return directed_; }
    std::size_t node_count() const { return ids_.size(); }
    /// Stored edges after parallel-edge collapse, self-loops included.
    std::size_t edge_count() const { return edges_.size(); }

    /// All node ids, ascending; index i here is NodeIndex i.
    std::span<const NodeId> node_ids() const { return ids_; }
    std::optional<NodeIndex> find(std::string_view id) const;
    /// Like find() but throws NotFoundError on a miss.
    NodeIndex require(std::string_view id) const;
    const NodeId& id_of(NodeIndex i) const { return ids_[i]; }

    /// Collapsed edges, sorted by (from, to). Undirected graphs store each
    /// edge once with from <= to.
    std::span<const Edge> edges() const { return edges_; }
    double total_weight(NodeIndex u, NodeIndex v) const;

    /// Metric-facing adjacency (self-loops stripped, sorted, deduplicated).
    std::span<const NodeIndex> out_neighbors(NodeIndex i) const;
    std::span<const NodeIndex> in_neighbors(NodeIndex i) const;
    /// Union of in- and out-neighborhoods.
    std::span<const NodeIndex> neighbors(NodeIndex i) const;

    /// Attribute tokens of a node, sorted, unique. Empty set by default.
    std::span<const std::string> attributes(NodeIndex i) const;
    std::span<const std::string> attributes(std::string_view id) const;
    /// Interned attribute tokens (indexes into attribute_vocabulary()).
    std::span<const std::uint32_t> attribute_ids(NodeIndex i) const;
    std::span<const std::string> attribute_vocabulary() const { return attr_vocab_; }

    /// The nodes n receives information from; never contains n itself.
    std::span<const NodeIndex> sources_of(NodeIndex n, Direction d) const;
    std::vector<NodeId> sources_of(std::string_view n, Direction d) const;

    /// indegree + outdegree over stored edges; a self-loop contributes 2.
    int degree(NodeIndex i) const;

    /// Structural equality: directedness, ids, collapsed edges (weights
    /// included) and attributes.
    bool operator==(const TestimonialGraph& other) const;

private:
    friend class GraphBuilder;

    static const std::vector<std::string> kNoAttrs;

    bool directed_ = true;
    std::vector<NodeId> ids_;                    // ascending
    std::vector<Edge> edges_;                    // sorted by (from, to)
    // CSR adjacency, self-loops removed
    std::vector<std::uint32_t> out_off_, in_off_, und_off_;
    std::vector<NodeIndex> out_nbr_, in_nbr_, und_nbr_;
    std::vector<int> degree_;                    // includes self-loops
    std::vector<std::vector<std::string>> attrs_;
    std::vector<std::vector<std::uint32_t>> attr_ids_;
    std::vector<std::string> attr_vocab_;

    void rebuild_attr_ids();
};

/// Accumulates nodes/edges and produces an immutable TestimonialGraph.
/// Parallel edge entries (and, for undirected graphs, the two orientations
/// of the same pair) collapse to a single edge whose weight is the sum.
class GraphBuilder {
public:
    explicit GraphBuilder(bool directed = true) : directed_(directed) {}

    GraphBuilder& add_node(std::string id);
    GraphBuilder& add_edge(std::string u, std::string v, double weight = 1.0);
    /// Replaces the node's attribute set (tokens deduplicated on build).
    GraphBuilder& set_attributes(std::string id, std::vector<std::string> attrs);

    TestimonialGraph build();

private:
    bool directed_;
    std::vector<std::string> pending_nodes_;
    std::vector<std::tuple<std::string, std::string, double>> pending_edges_;
    std::vector<std::pair<std::string, std::vector<std::string>>> pending_attrs_;
};

/// Parses an edge-list stream: one edge per line, `u v` or `u v w`, fields
/// separated by whitespace and/or commas, `#` starts a comment line.
/// Duplicate (u,v) lines sum their weights; unweighted lines weigh 1.
/// With weighted=false any third column is ignored and every line weighs 1.
/// Throws ParseError (malformed line) or ValidationError (negative weight),
/// both naming the 1-based line number.
TestimonialGraph load_edge_list(std::istream& text, bool directed = true,
                                bool weighted = true);

/// Applies a node-attribute stream to a copy of `graph`. Line formats:
///   node,attr1;attr2;...      or      node attr
/// A single token yields the singleton set. Lines for nodes not in the
/// graph are skipped and reported through `warnings` (if non-null).
/// Repeated lines for one node union their sets. Empty attribute tokens
/// throw ValidationError.
TestimonialGraph load_attributes(const TestimonialGraph& graph, std::istream& text,
                                 std::vector<std::string>* warnings = nullptr);

/// Writes the collapsed edge list back out (`u v` when weight == 1,
/// `u v w` otherwise). Isolated nodes are not representable in this format;
/// they are dropped with a note through `warnings`.
void write_edge_list(const TestimonialGraph& graph, std::ostream& out,
                     std::vector<std::string>* warnings = nullptr);

} // namespace crowds
