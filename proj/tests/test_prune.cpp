#include <sstream>

#include "doctest.h"

#include "crowds/prune.hpp"

using namespace crowds;

namespace {

TestimonialGraph from_text(const std::string& text, bool directed = true) {
    std::istringstream in(text);
    return load_edge_list(in, directed);
}

bool is_subgraph(const TestimonialGraph& sub, const TestimonialGraph& super) {
    for (const NodeId& id : sub.node_ids())
        if (!super.find(id)) return false;
    // pruning reindexes survivors, so edges compare by node id
    for (const Edge& e : sub.edges()) {
        const auto from = super.find(sub.id_of(e.from));
        const auto to = super.find(sub.id_of(e.to));
        if (!from || !to) return false;
        if (super.total_weight(*from, *to) != e.weight) return false;
    }
    return true;
}

} // namespace

TEST_CASE("pruning a bare chain removes everything") {
    const auto g = from_text("a b\nb c\n");
    const auto pruned = iteratively_prune(g);
    CHECK(pruned.node_count() == 0);
    CHECK(pruned.edge_count() == 0);
    CHECK(pruned.directed());
}

TEST_CASE("a directed cycle survives untouched") {
    const auto g = from_text("a b\nb c\nc a\n");
    const auto pruned = iteratively_prune(g);
    CHECK(pruned == g);
}

TEST_CASE("pruning is idempotent") {
    const auto g = from_text("a b\nb c\nc a\na d\nd e\ne a\nx y\n");
    PruneConfig cfg;
    cfg.degree_threshold = 1;
    const auto once = iteratively_prune(g, cfg);
    const auto twice = iteratively_prune(once, cfg);
    CHECK(once == twice);
    CHECK(is_subgraph(once, g));
}

TEST_CASE("weight culling is strict: threshold 3 keeps weight-3 edges") {
    const auto g = from_text("a b 3\nb c 3\nc a 3\n");
    PruneConfig cfg;
    cfg.degree_threshold = 1;
    cfg.weight_threshold = 3.0;
    const auto pruned = iteratively_prune(g, cfg);
    CHECK(pruned == g);

    cfg.weight_threshold = 3.5;
    CHECK(iteratively_prune(g, cfg).node_count() == 0);
}

TEST_CASE("weight culling cascades into degree culling") {
    // cycle plus a weak chord: dropping the chord leaves the cycle intact,
    // but if the cycle edges themselves are weak everything unravels
    const auto g = from_text("a b 5\nb c 5\nc a 5\na d 1\nd a 1\n");
    PruneConfig cfg;
    cfg.degree_threshold = 1;
    cfg.weight_threshold = 2.0;
    const auto pruned = iteratively_prune(g, cfg);
    CHECK(pruned.node_count() == 3);
    CHECK_FALSE(pruned.find("d"));
}

TEST_CASE("largest component wins, ties go to the smallest node id") {
    // two disjoint 3-cycles, equal size
    const auto g = from_text("p q\nq r\nr p\na b\nb c\nc a\n");
    const auto pruned = iteratively_prune(g);
    CHECK(pruned.node_count() == 3);
    CHECK(pruned.find("a"));
    CHECK_FALSE(pruned.find("p"));

    // unequal sizes: the larger one survives regardless of ids
    const auto g2 = from_text("a b\nb a\np q\nq r\nr s\ns p\np r\n");
    const auto pruned2 = iteratively_prune(g2);
    CHECK(pruned2.node_count() == 4);
    CHECK(pruned2.find("p"));
    CHECK_FALSE(pruned2.find("a"));
}

TEST_CASE("attributes survive pruning") {
    auto g = from_text("a b\nb c\nc a\nx y\n");
    std::istringstream attrs("a,red;blue\nx,doomed\n");
    g = load_attributes(g, attrs);
    const auto pruned = iteratively_prune(g);
    REQUIRE(pruned.find("a"));
    const auto got = pruned.attributes("a");
    CHECK(std::vector<std::string>(got.begin(), got.end()) ==
          std::vector<std::string>{"blue", "red"});
    CHECK_FALSE(pruned.find("x"));
}

TEST_CASE("degree threshold 0: self-loop keeps a node alive") {
    // a self-loop contributes 2 to degree, so 'solo' beats threshold 0;
    // 'island' has degree 0 and dies
    const auto g = from_text("solo solo\n");
    PruneConfig cfg;
    cfg.degree_threshold = 0;
    const auto pruned = iteratively_prune(g, cfg);
    CHECK(pruned.node_count() == 1);
    CHECK(pruned.edge_count() == 1);

    GraphBuilder b(true);
    b.add_node("island");
    const auto lone = iteratively_prune(b.build(), cfg);
    CHECK(lone.node_count() == 0);
}

TEST_CASE("raising thresholds never grows the result") {
    const auto g = from_text(
        "a b 4\nb c 4\nc a 4\nc d 2\nd e 2\ne c 2\nb e 1\n");
    std::size_t prev_nodes = g.node_count() + 1;
    for (int t = 0; t <= 3; ++t) {
        PruneConfig cfg;
        cfg.degree_threshold = t;
        const auto pruned = iteratively_prune(g, cfg);
        CHECK(pruned.node_count() <= prev_nodes);
        CHECK(is_subgraph(pruned, g));
        prev_nodes = pruned.node_count();
    }
}

TEST_CASE("undirected graphs prune as undirected") {
    const auto g = from_text("a b\nb c\nc a\nc d\n", false);
    const auto pruned = iteratively_prune(g);
    CHECK_FALSE(pruned.directed());
    CHECK(pruned.node_count() == 3);
    CHECK_FALSE(pruned.find("d"));
}

TEST_CASE("empty input and validation") {
    const auto empty = GraphBuilder(true).build();
    CHECK(iteratively_prune(empty).node_count() == 0);

    PruneConfig bad;
    bad.degree_threshold = -1;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    PruneConfig bad_w;
    bad_w.weight_threshold = -0.5;
    CHECK_THROWS_AS(bad_w.validate(), ValidationError);
}
