#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "spx/communities.hpp"
#include "test_support.hpp"

using namespace spx;

namespace {

Partition make_partition(std::vector<int> assignment) {
    Partition p;
    p.community_count = 0;
    for (int c : assignment) p.community_count = std::max(p.community_count, c + 1);
    p.assignment = std::move(assignment);
    return p;
}

std::set<std::set<int>> community_sets(const Partition& p) {
    std::set<std::set<int>> sets;
    std::vector<std::set<int>> by_comm(p.community_count);
    for (std::size_t u = 0; u < p.assignment.size(); ++u) by_comm[p.assignment[u]].insert(int(u));
    for (auto& s : by_comm) sets.insert(s);
    return sets;
}

void check_dense(const Partition& p) {
    std::vector<bool> seen(p.community_count, false);
    for (int c : p.assignment) {
        REQUIRE(c >= 0);
        REQUIRE(c < p.community_count);
        seen[c] = true;
    }
    for (bool s : seen) CHECK(s);
}

WeightedGraph glue_components(const WeightedGraph& a, const WeightedGraph& b) {
    GraphBuilder builder(a.node_count() + b.node_count());
    for (int u = 0; u < a.node_count(); ++u)
        for (const Link& l : a.links(u))
            if (u < l.to) builder.add_edge(u, l.to, l.weight);
    for (int u = 0; u < b.node_count(); ++u)
        for (const Link& l : b.links(u))
            if (u < l.to) builder.add_edge(a.node_count() + u, a.node_count() + l.to, l.weight);
    return builder.build();
}

}  // namespace

// ---------------------------------------------------------------------------
// Label Propagation

TEST_CASE("label propagation separates two disjoint triangles") {
    const WeightedGraph g = support::two_triangles();
    const auto result = label_propagation(g, 5);
    CHECK(result.converged);
    check_dense(result.partition);
    CHECK(result.partition.community_count == 2);
    CHECK(community_sets(result.partition) == std::set<std::set<int>>{{0, 1, 2}, {3, 4, 5}});
    CHECK(oracle::is_lp_fixed_point(g, result.partition.assignment));
}

TEST_CASE("label propagation on a single node") {
    GraphBuilder b(1);
    const WeightedGraph g = b.build();
    const auto result = label_propagation(g, 1);
    CHECK(result.converged);
    CHECK(result.partition.community_count == 1);
}

TEST_CASE("label propagation is deterministic under a fixed seed") {
    support::TestRng rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const WeightedGraph g = support::random_graph(rng, 12);
        const auto a = label_propagation(g, 33);
        const auto b = label_propagation(g, 33);
        CHECK(a.partition.assignment == b.partition.assignment);
        CHECK(a.converged == b.converged);
    }
}

TEST_CASE("converged label propagation always sits at a fixed point") {
    support::TestRng rng(29);
    for (int trial = 0; trial < 30; ++trial) {
        const WeightedGraph g = support::random_graph(rng, 10);
        const auto result = label_propagation(g, rng.next());
        check_dense(result.partition);
        if (result.converged) {
            CHECK(oracle::is_lp_fixed_point(g, result.partition.assignment));
        }
    }
}

TEST_CASE("unweighted label propagation mode reaches an unweighted fixed point") {
    support::TestRng rng(41);
    LabelPropagationOptions opts;
    opts.weighted = false;
    for (int trial = 0; trial < 10; ++trial) {
        const WeightedGraph g = support::random_graph(rng, 8);
        const auto result = label_propagation(g, rng.next(), opts);
        if (result.converged) {
            CHECK(oracle::is_lp_fixed_point(g, result.partition.assignment, false));
        }
    }
}

// ---------------------------------------------------------------------------
// Modularity

TEST_CASE("modularity anchors") {
    SUBCASE("all nodes in one community gives exactly zero") {
        const WeightedGraph g = support::two_triangles();
        CHECK(modularity(g, make_partition({0, 0, 0, 0, 0, 0})) == 0.0);
    }
    SUBCASE("two disjoint 5-cliques, one community each: Q = 0.5") {
        const WeightedGraph g = support::cliques(2, 5, false);
        const Partition p = make_partition({0, 0, 0, 0, 0, 1, 1, 1, 1, 1});
        CHECK(std::abs(modularity(g, p) - 0.5) < 1e-12);
        CHECK(std::abs(oracle::modularity(g, p.assignment) - 0.5) < 1e-12);
    }
    SUBCASE("singleton partition of a single unit edge: Q = -0.5") {
        const WeightedGraph g = support::from_edges(2, {{0, 1, 1.0}});
        CHECK(std::abs(modularity(g, make_partition({0, 1})) + 0.5) < 1e-12);
    }
    SUBCASE("zero-weight graph is rejected") {
        GraphBuilder b(2);
        CHECK_THROWS_AS(modularity(b.build(), make_partition({0, 1})), std::invalid_argument);
    }
}

TEST_CASE("modularity matches the brute-force oracle on random partitions") {
    support::TestRng rng(53);
    for (int trial = 0; trial < 30; ++trial) {
        const WeightedGraph g = support::random_graph(rng, 9);
        std::vector<int> assignment(g.node_count());
        for (int& c : assignment) c = rng.below(3);
        const Partition p = make_partition(assignment);
        CHECK(std::abs(modularity(g, p) - oracle::modularity(g, p.assignment)) < 1e-12);
    }
}

// ---------------------------------------------------------------------------
// Louvain

TEST_CASE("louvain recovers two disjoint 5-cliques") {
    const WeightedGraph g = support::cliques(2, 5, false);
    const auto result = louvain(g, 3);
    check_dense(result.partition);
    CHECK(result.partition.community_count == 2);
    CHECK(std::abs(modularity(g, result.partition) - 0.5) < 1e-12);
    CHECK(community_sets(result.partition) ==
          std::set<std::set<int>>{{0, 1, 2, 3, 4}, {5, 6, 7, 8, 9}});
}

TEST_CASE("louvain puts a complete graph into one community") {
    const WeightedGraph g = support::cliques(1, 5, false);
    const auto result = louvain(g, 7);
    CHECK(result.partition.community_count == 1);
    CHECK(modularity(g, result.partition) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("louvain recovers a ring of four 5-cliques joined by bridges") {
    const WeightedGraph g = support::cliques(4, 5, true);
    const auto result = louvain(g, 19);
    CHECK(result.partition.community_count == 4);
    std::set<std::set<int>> expected;
    for (int c = 0; c < 4; ++c) {
        std::set<int> clique;
        for (int i = 0; i < 5; ++i) clique.insert(c * 5 + i);
        expected.insert(clique);
    }
    CHECK(community_sets(result.partition) == expected);
}

TEST_CASE("louvain quality trace is non-decreasing and lands on the true Q") {
    support::TestRng rng(61);
    LouvainOptions opts;
    opts.trace_quality = true;
    for (int trial = 0; trial < 25; ++trial) {
        const WeightedGraph g = support::random_graph(rng, 10);
        const auto result = louvain(g, rng.next(), opts);
        REQUIRE(!result.quality_trace.empty());
        for (std::size_t i = 1; i < result.quality_trace.size(); ++i) {
            CHECK(result.quality_trace[i] >= result.quality_trace[i - 1]);
        }
        CHECK(std::abs(result.quality_trace.back() - modularity(g, result.partition)) < 1e-9);
    }
}

TEST_CASE("no algorithm returns a community spanning two components") {
    support::TestRng rng(67);
    for (int trial = 0; trial < 10; ++trial) {
        const WeightedGraph g =
            glue_components(support::random_graph(rng, 6), support::random_graph(rng, 6));
        const auto comp = connected_components(g);

        const auto check_partition = [&](const Partition& p) {
            std::vector<int> comm_comp(p.community_count, -1);
            for (int u = 0; u < g.node_count(); ++u) {
                const int c = p.assignment[u];
                if (comm_comp[c] < 0) comm_comp[c] = comp[u];
                CHECK(comm_comp[c] == comp[u]);
            }
        };
        check_partition(louvain(g, rng.next()).partition);
        check_partition(infomap(g, rng.next()).partition);
        check_partition(label_propagation(g, rng.next()).partition);
    }
}

// ---------------------------------------------------------------------------
// Map equation

TEST_CASE("map equation anchors on two disjoint triangles") {
    const WeightedGraph g = support::two_triangles();
    const Partition two = make_partition({0, 0, 0, 1, 1, 1});
    const Partition one = make_partition({0, 0, 0, 0, 0, 0});
    CHECK(std::abs(map_equation(g, two) - std::log2(3.0)) < 1e-9);
    CHECK(std::abs(map_equation(g, one) - std::log2(6.0)) < 1e-9);
    CHECK(std::abs(oracle::map_equation(g, two.assignment) - std::log2(3.0)) < 1e-9);
    CHECK(std::abs(oracle::map_equation(g, one.assignment) - std::log2(6.0)) < 1e-9);
}

TEST_CASE("partition into connected components has no exit contribution") {
    support::TestRng rng(71);
    const WeightedGraph g =
        glue_components(support::random_graph(rng, 6), support::random_graph(rng, 6));
    const auto comp = connected_components(g);
    const Partition p = make_partition(comp);

    // with q = 0 the codelength reduces to the weighted module entropies
    const double two_w = g.strength_sum();
    double expected = 0.0;
    for (int m = 0; m < p.community_count; ++m) {
        double p_m = 0.0, h = 0.0;
        for (int u = 0; u < g.node_count(); ++u)
            if (comp[u] == m) p_m += g.strength(u) / two_w;
        for (int u = 0; u < g.node_count(); ++u) {
            if (comp[u] != m) continue;
            const double x = (g.strength(u) / two_w) / p_m;
            if (x > 0) h -= x * std::log2(x);
        }
        expected += p_m * h;
    }
    CHECK(std::abs(map_equation(g, p) - expected) < 1e-9);
}

TEST_CASE("map equation matches the oracle on random partitions") {
    support::TestRng rng(73);
    for (int trial = 0; trial < 30; ++trial) {
        const WeightedGraph g = support::random_graph(rng, 9);
        std::vector<int> assignment(g.node_count());
        for (int& c : assignment) c = rng.below(3);
        const Partition p = make_partition(assignment);
        CHECK(std::abs(map_equation(g, p) - oracle::map_equation(g, p.assignment)) < 1e-12);
    }
}

// ---------------------------------------------------------------------------
// Infomap

TEST_CASE("infomap finds the two-module partition of two triangles") {
    const WeightedGraph g = support::two_triangles();
    const auto result = infomap(g, 13);
    check_dense(result.partition);
    CHECK(community_sets(result.partition) == std::set<std::set<int>>{{0, 1, 2}, {3, 4, 5}});
    CHECK(std::abs(map_equation(g, result.partition) - std::log2(3.0)) < 1e-9);
}

TEST_CASE("infomap on a single edgeless node returns the singleton partition") {
    GraphBuilder b(1);
    const auto result = infomap(b.build(), 0);
    CHECK(result.partition.community_count == 1);
    CHECK(result.partition.assignment == std::vector<int>{0});
}

TEST_CASE("infomap separates two bridged 5-cliques") {
    GraphBuilder b(10);
    for (int c = 0; c < 2; ++c)
        for (int i = 0; i < 5; ++i)
            for (int j = i + 1; j < 5; ++j) b.add_edge(c * 5 + i, c * 5 + j, 1.0);
    b.add_edge(4, 5, 1.0);  // single unit bridge
    const WeightedGraph g = b.build();
    const auto result = infomap(g, 2);
    CHECK(community_sets(result.partition) ==
          std::set<std::set<int>>{{0, 1, 2, 3, 4}, {5, 6, 7, 8, 9}});
}

TEST_CASE("infomap never does worse than the singleton or all-in-one partition") {
    support::TestRng rng(79);
    for (int trial = 0; trial < 25; ++trial) {
        const WeightedGraph g = support::random_graph(rng, 10);
        const auto result = infomap(g, rng.next());
        check_dense(result.partition);
        const double l = map_equation(g, result.partition);

        std::vector<int> singleton(g.node_count());
        for (int u = 0; u < g.node_count(); ++u) singleton[u] = u;
        CHECK(l <= map_equation(g, make_partition(singleton)) + 1e-9);
        CHECK(l <= map_equation(g, make_partition(std::vector<int>(g.node_count(), 0))) + 1e-9);
    }
}

TEST_CASE("infomap codelength trace is non-increasing and lands on the true L") {
    support::TestRng rng(83);
    InfomapOptions opts;
    opts.trace_quality = true;
    for (int trial = 0; trial < 25; ++trial) {
        const WeightedGraph g = support::random_graph(rng, 10);
        const auto result = infomap(g, rng.next(), opts);
        REQUIRE(!result.codelength_trace.empty());
        for (std::size_t i = 1; i < result.codelength_trace.size(); ++i) {
            CHECK(result.codelength_trace[i] <= result.codelength_trace[i - 1] + 1e-9);
        }
        CHECK(std::abs(result.codelength_trace.back() - map_equation(g, result.partition)) < 1e-9);
    }
}

TEST_CASE("louvain and infomap are deterministic under a fixed seed") {
    support::TestRng rng(89);
    for (int trial = 0; trial < 10; ++trial) {
        const WeightedGraph g = support::random_graph(rng, 12);
        const std::uint64_t seed = rng.next();
        CHECK(louvain(g, seed).partition.assignment == louvain(g, seed).partition.assignment);
        CHECK(infomap(g, seed).partition.assignment == infomap(g, seed).partition.assignment);
    }
}

// ---------------------------------------------------------------------------
// Batch statistics

TEST_CASE("community statistics") {
    SUBCASE("single partition with sizes {3,1}") {
        const Partition p = make_partition({0, 0, 0, 1});
        const PartitionSummary s = summarize_partition(p);
        CHECK(s.community_count == 2);
        CHECK(s.max_size == 3);
        CHECK(s.min_size == 1);
        const PartitionSummary batch[] = {s};
        const CommunityStats stats = community_stats(batch);
        CHECK(stats.count_mean == 2.0);
        CHECK(stats.count_std == 0.0);
        CHECK(stats.max_size_std == 0.0);
        CHECK(stats.min_size_std == 0.0);
    }
    SUBCASE("two identical partitions have zero std everywhere") {
        const PartitionSummary s{4, 10, 1};
        const PartitionSummary batch[] = {s, s};
        const CommunityStats stats = community_stats(batch);
        CHECK(stats.count_std == 0.0);
        CHECK(stats.max_size_std == 0.0);
        CHECK(stats.min_size_std == 0.0);
    }
    SUBCASE("counts {4, 6} give mean 5 and population std 1") {
        const PartitionSummary batch[] = {{4, 2, 1}, {6, 2, 1}};
        const CommunityStats stats = community_stats(batch);
        CHECK(stats.count_mean == 5.0);
        CHECK(stats.count_std == 1.0);
    }
    SUBCASE("empty batch is rejected") {
        CHECK_THROWS_AS(community_stats({}), std::invalid_argument);
    }
}
