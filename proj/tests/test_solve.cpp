#include <gtest/gtest.h>

#include "hypermatch/construct.hpp"
#include "hypermatch/rng.hpp"
#include "hypermatch/solve.hpp"
#include "oracles.hpp"

using namespace hypermatch;

namespace {

Hypergraph random_graph(Vertex n, std::uint64_t num, std::uint64_t den, std::uint64_t seed)
{
    Rng rng(seed);
    std::vector<Edge> edges;
    for (Vertex a = 0; a < n; ++a)
        for (Vertex b = a + 1; b < n; ++b)
            for (Vertex c = b + 1; c < n; ++c)
                for (Vertex d = c + 1; d < n; ++d)
                    if (rng.bernoulli(num, den))
                        edges.push_back({a, b, c, d});
    return Hypergraph(4, n, std::move(edges));
}

Hypergraph link_as_3graph(LinkGraph g)
{
    std::vector<Edge> edges;
    for (Vertex i = 0; i < 4; ++i)
        for (Vertex j = 0; j < 4; ++j)
            for (Vertex k = 0; k < 4; ++k)
                if (g.test(i, j, k))
                    edges.push_back({i, 4 + j, 8 + k});
    return Hypergraph(3, 12, std::move(edges));
}

}  // namespace

TEST(MaxMatchingExact, Examples)
{
    auto r = max_matching_exact(extremal_construction(8), 0);
    EXPECT_EQ(r.matching.size(), 1u);
    EXPECT_TRUE(r.optimal);
    EXPECT_FALSE(r.timed_out);
    EXPECT_EQ(max_matching_exact(Hypergraph::complete(4, 8), 0).matching.size(), 2u);
    auto [h, m] = planted_pm_instance(12, Rational(0), 1);
    EXPECT_EQ(max_matching_exact(h, 0).matching.size(), 3u);
}

TEST(MaxMatchingExact, BudgetExhaustionIsReported)
{
    auto r = max_matching_exact(extremal_construction(20), 5);
    EXPECT_TRUE(r.timed_out);
    EXPECT_FALSE(r.optimal);
    EXPECT_TRUE(validate_matching(extremal_construction(20), r.matching).valid);
}

TEST(MaxMatchingExact, AgreesWithEnumerationOracle)
{
    for (std::uint64_t seed = 0; seed < 400; ++seed) {
        const Vertex n = static_cast<Vertex>(4 + seed % 9);
        auto h = random_graph(n, 1 + seed % 7, 10, seed);
        std::vector<oracle::Edge4> edges;
        for (const auto& e : h.edge_list())
            edges.push_back({e[0], e[1], e[2], e[3]});
        auto r = max_matching_exact(h, 0);
        ASSERT_TRUE(r.optimal);
        EXPECT_TRUE(validate_matching(h, r.matching).valid);
        EXPECT_EQ(r.matching.size(), oracle::max_matching(edges)) << "seed " << seed;
    }
}

TEST(MaxMatchingExact, TooLarge)
{
    try {
        max_matching_exact(Hypergraph(4, 65, {}), 0);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::TooLarge);
    }
}

TEST(HasPerfectMatching, Examples)
{
    auto k8 = Hypergraph::complete(4, 8);
    auto m = has_perfect_matching(k8);
    ASSERT_TRUE(m);
    EXPECT_TRUE(validate_matching(k8, *m).perfect);
    EXPECT_FALSE(has_perfect_matching(extremal_construction(8)));
    EXPECT_FALSE(has_perfect_matching(Hypergraph(4, 8, {})));
    try {
        has_perfect_matching(Hypergraph(4, 9, {}));
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::Indivisible);
    }
    for (Vertex n = 8; n <= 20; n += 4) {
        EXPECT_FALSE(has_perfect_matching(extremal_construction(n))) << n;
        auto rep = extremal_repaired(n);
        auto pm = has_perfect_matching(rep);
        ASSERT_TRUE(pm) << n;
        EXPECT_TRUE(validate_matching(rep, *pm).perfect);
    }
}

TEST(PerfectMatchingOn, Subsets)
{
    auto k12 = Hypergraph::complete(4, 12);
    VertexSet u{1, 3, 4, 6, 8, 9, 10, 11};
    auto m = perfect_matching_on(k12, u);
    ASSERT_TRUE(m);
    EXPECT_EQ(m->vertices(), u);
    EXPECT_FALSE(perfect_matching_on(extremal_construction(12), extremal_b(12)));
}

TEST(TripartitePm, Examples)
{
    EXPECT_TRUE(tripartite_pm_444(LinkGraph{~std::uint64_t{0}}));
    LinkGraph diag;
    for (unsigned i = 0; i < 4; ++i)
        diag.set(i, i, i);
    auto d = tripartite_pm_444(diag);
    ASSERT_TRUE(d);
    for (const auto& t : *d)
        EXPECT_TRUE(diag.test(t[0], t[1], t[2]));
    EXPECT_FALSE(tripartite_pm_444(h_ext_canonical()));
}

TEST(TripartitePm, AgreesWithOracleAndExactSolver)
{
    Rng rng(42);
    for (int t = 0; t < 3000; ++t) {
        LinkGraph g{rng.next() & rng.next() | (t % 3 == 0 ? rng.next() : 0)};
        const bool found = tripartite_pm_444(g).has_value();
        EXPECT_EQ(found, oracle::tripartite_pm(g.mask)) << to_hex(g);
        if (t < 300)
            EXPECT_EQ(found, max_matching_exact(link_as_3graph(g), 0).matching.size() == 4) << to_hex(g);
    }
}

TEST(HallMatching, Examples)
{
    BipartiteGraph complete{3, {{0, 1, 2}, {0, 1, 2}, {0, 1, 2}}};
    auto a = hall_matching(complete);
    ASSERT_TRUE(a.assignment);
    EXPECT_FALSE(a.violator);

    BipartiteGraph tight{2, {{0}, {0}}};
    auto b = hall_matching(tight);
    EXPECT_FALSE(b.assignment);
    ASSERT_TRUE(b.violator);
    EXPECT_EQ(*b.violator, (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(neighborhood(tight, *b.violator).size(), 1u);
}

TEST(HallMatching, PlantedAndViolatorsRecount)
{
    Rng rng(7);
    for (int t = 0; t < 300; ++t) {
        const std::size_t k = 2 + rng.below(10);
        std::vector<std::size_t> planted(k);
        for (std::size_t i = 0; i < k; ++i)
            planted[i] = i;
        rng.shuffle(planted);
        BipartiteGraph g{k, std::vector<std::vector<std::size_t>>(k)};
        for (std::size_t r = 0; r < k; ++r) {
            if (t % 2 == 0)
                g.right_adj[r].push_back(planted[r]);
            for (std::size_t l = 0; l < k; ++l)
                if (rng.bernoulli(1, 4) && (g.right_adj[r].empty() || g.right_adj[r][0] != l))
                    g.right_adj[r].push_back(l);
            std::sort(g.right_adj[r].begin(), g.right_adj[r].end());
        }
        auto out = hall_matching(g);
        ASSERT_NE(out.assignment.has_value(), out.violator.has_value());
        if (t % 2 == 0)
            ASSERT_TRUE(out.assignment);
        if (out.assignment) {
            std::vector<char> used(k, 0);
            for (std::size_t r = 0; r < k; ++r) {
                const auto l = (*out.assignment)[r];
                EXPECT_TRUE(std::binary_search(g.right_adj[r].begin(), g.right_adj[r].end(), l));
                EXPECT_FALSE(used[l]);
                used[l] = 1;
            }
        } else {
            EXPECT_LT(neighborhood(g, *out.violator).size(), out.violator->size());
        }
    }
}

TEST(GreedyMatching, Examples)
{
    Hypergraph disjoint_edges(4, 12, {{0, 1, 2, 3}, {4, 5, 6, 7}, {8, 9, 10, 11}});
    EXPECT_EQ(greedy_matching(disjoint_edges).size(), 3u);
    auto k8 = greedy_matching(Hypergraph::complete(4, 8));
    EXPECT_EQ(k8.edges, (std::vector<Edge>{{0, 1, 2, 3}, {4, 5, 6, 7}}));
}

TEST(GreedyMatching, MaximalAndFolkloreBound)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto h = random_graph(14, 1, 5, seed);
        auto m = greedy_matching(h);
        EXPECT_TRUE(validate_matching(h, m).valid);
        const auto used = m.vertices();
        for (const auto& e : h.edge_list()) {
            bool free = true;
            for (Vertex v : e)
                free = free && !std::binary_search(used.begin(), used.end(), v);
            EXPECT_FALSE(free);
        }
    }
    // 3-graphs with delta_1 >= eta C(n,3) / n have a matching of size >= eta n / 24.
    Rng rng(3);
    for (int t = 0; t < 20; ++t) {
        const Vertex n = 15;
        std::vector<Edge> edges;
        for (Vertex a = 0; a < n; ++a)
            for (Vertex b = a + 1; b < n; ++b)
                for (Vertex c = b + 1; c < n; ++c)
                    if (rng.bernoulli(1, 3))
                        edges.push_back({a, b, c});
        Hypergraph h(3, n, std::move(edges));
        const Rational eta = Rational(static_cast<std::int64_t>(min_degree(h, 1)) * n,
                                      static_cast<std::int64_t>(binomial(n, 3)));
        EXPECT_GE(Rational(static_cast<std::int64_t>(greedy_matching(h).size())), eta * n / 24);
    }
}

TEST(MinDegreePeel, Examples)
{
    Hypergraph path(2, 3, {{0, 1}, {1, 2}});
    auto p = min_degree_peel(path);
    EXPECT_EQ(p.kept, (VertexSet{0, 1, 2}));
    EXPECT_GE(min_degree(p.graph, 1), 1u);

    auto k8 = Hypergraph::complete(4, 8);
    auto q = min_degree_peel(k8);
    EXPECT_EQ(q.graph, k8);
    EXPECT_EQ(min_degree(q.graph, 1), 35u);

    // Center 0 in every edge; leaves 1..12 each in exactly one edge.
    Hypergraph star(4, 13, {{0, 1, 2, 3}, {0, 4, 5, 6}, {0, 7, 8, 9}, {0, 10, 11, 12}});
    auto s = min_degree_peel(star);
    const Rational theta(4, 13);
    EXPECT_GT(s.graph.num_vertices(), 0u);
    for (Vertex v = 0; v < s.graph.num_vertices(); ++v)
        EXPECT_GE(Rational(static_cast<std::int64_t>(s.graph.vertex_degree(v))), theta);

    try {
        min_degree_peel(Hypergraph(4, 5, {}));
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::EmptyInput);
    }
}

TEST(MinDegreePeel, BoundHoldsOnRandomGraphs)
{
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        auto h = random_graph(12, 1, 8, seed);
        if (h.num_edges() == 0)
            continue;
        auto p = min_degree_peel(h);
        const Rational theta(static_cast<std::int64_t>(h.num_edges()), 12);
        ASSERT_GT(p.graph.num_edges(), 0u);
        for (Vertex v = 0; v < p.graph.num_vertices(); ++v)
            EXPECT_GE(Rational(static_cast<std::int64_t>(p.graph.vertex_degree(v))), theta);
    }
}
