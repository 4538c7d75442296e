#include <gtest/gtest.h>

#include "hypermatch/construct.hpp"
#include "hypermatch/link.hpp"
#include "hypermatch/solve.hpp"
#include "oracles.hpp"

using namespace hypermatch;

namespace {

std::vector<oracle::Edge4> as_edges(const Hypergraph& h)
{
    std::vector<oracle::Edge4> out;
    for (const auto& e : h.edge_list())
        out.push_back({e[0], e[1], e[2], e[3]});
    return out;
}

}  // namespace

TEST(Threshold, FrozenValues)
{
    EXPECT_EQ(threshold(8), 16u);
    EXPECT_EQ(threshold(12), 82u);
    EXPECT_EQ(threshold(16), 236u);
    EXPECT_EQ(threshold(20), 515u);
    EXPECT_EQ(threshold(32), 2472u);
    EXPECT_EQ(threshold(40), 5080u);
}

TEST(Threshold, AgreesWithBigIntegerFormula)
{
    for (std::uint32_t n = 8; n <= 200; n += 4) {
        const auto expected = oracle::big_binomial(n - 1, 3) - oracle::big_binomial(3 * n / 4, 3) + oracle::BigUInt(1);
        EXPECT_EQ(std::to_string(threshold(n)), expected.str()) << n;
    }
}

TEST(Threshold, Errors)
{
    try {
        threshold(10);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::Indivisible);
    }
    EXPECT_THROW(threshold(4), Error);
}

TEST(ExtremalConstruction, Shape)
{
    EXPECT_EQ(extremal_a(16), (VertexSet{0, 1, 2}));
    EXPECT_EQ(extremal_b(8).size(), 7u);
    // Edge counts from C(n,4) - C(|B|,4), recomputed with big integers.
    for (std::uint32_t n = 8; n <= 24; n += 4) {
        const auto expected = oracle::big_binomial(n, 4) - oracle::big_binomial(n - (n / 4 - 1), 4);
        EXPECT_EQ(std::to_string(extremal_construction(n).num_edges()), expected.str());
    }
    EXPECT_EQ(extremal_construction(8).num_edges(), 35u);
    EXPECT_EQ(extremal_construction(16).num_edges(), 1105u);
}

TEST(ExtremalConstruction, DegreeAndMatchingByOracle)
{
    for (std::uint32_t n : {8u, 12u}) {
        auto h = extremal_construction(n);
        auto edges = as_edges(h);
        EXPECT_EQ(oracle::min_degree(n, edges, 1) + 1, threshold(n));
        EXPECT_EQ(oracle::max_matching(edges), n / 4 - 1);
    }
}

TEST(ExtremalConstruction, MinDegreeOneBelowThreshold)
{
    for (Vertex n = 8; n <= 40; n += 4)
        EXPECT_EQ(min_degree(extremal_construction(n), 1) + 1, threshold(n)) << n;
}

TEST(ExtremalRepaired, ReachesThresholdWithFewEdges)
{
    for (Vertex n = 8; n <= 40; n += 4) {
        auto h = extremal_repaired(n);
        const auto b = extremal_b(n);
        EXPECT_EQ(min_degree(h, 1), threshold(n)) << n;
        EXPECT_EQ(h.num_edges() - extremal_construction(n).num_edges(), (b.size() + 3) / 4) << n;
    }
    for (std::uint32_t n : {8u, 12u})
        EXPECT_EQ(oracle::max_matching(as_edges(extremal_repaired(n))), n / 4);
}

TEST(HExt, Canonical)
{
    const auto g = h_ext_canonical();
    EXPECT_EQ(g.popcount(), 37u);
    EXPECT_FALSE(oracle::tripartite_pm(g.mask));
    EXPECT_TRUE(oracle::covered_by_transversal(g.mask));
    for (unsigned i = 0; i < 4; ++i)
        for (unsigned j = 0; j < 4; ++j)
            for (unsigned k = 0; k < 4; ++k)
                EXPECT_EQ(g.test(i, j, k), i == 0 || j == 0 || k == 0);
    EXPECT_EQ(canonical_form(g), oracle::canonical(g.mask));
}

TEST(PatternWitness, Examples)
{
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        EXPECT_TRUE(detect_pattern(pattern_witness(PatternKind::H432, seed), PatternKind::H432));
        EXPECT_TRUE(detect_pattern(pattern_witness(PatternKind::H4221, seed, Fill::Full), PatternKind::H4221));
        const auto zero = pattern_witness(PatternKind::H3321, seed, Fill::Zero);
        EXPECT_EQ(zero.popcount(), 9u);
        EXPECT_TRUE(detect_pattern(zero, PatternKind::H3321));
        EXPECT_EQ(pattern_witness(PatternKind::H432, seed, Fill::Zero).popcount(), 9u);
        EXPECT_EQ(pattern_witness(PatternKind::H4221, seed, Fill::Zero).popcount(), 9u);
    }
    EXPECT_EQ(pattern_witness(PatternKind::H432, 7), pattern_witness(PatternKind::H432, 7));
}

TEST(RandomDense, Examples)
{
    EXPECT_EQ(random_dense_hypergraph(9, binomial(8, 3), 1), Hypergraph::complete(4, 9));
    EXPECT_GE(min_degree(random_dense_hypergraph(10, 0, 1), 1), 0u);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto h = random_dense_hypergraph(16, threshold(16), seed);
        EXPECT_GE(min_degree(h, 1), 236u);
        EXPECT_EQ(h, random_dense_hypergraph(16, threshold(16), seed));
    }
    EXPECT_NE(random_dense_hypergraph(16, 236, 1), random_dense_hypergraph(16, 236, 2));
    try {
        random_dense_hypergraph(8, 36, 0);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::Infeasible);
    }
}

TEST(PlantedPm, Examples)
{
    auto [h0, m0] = planted_pm_instance(16, Rational(0), 3);
    EXPECT_EQ(h0.num_edges(), 4u);
    EXPECT_TRUE(validate_matching(h0, m0).perfect);
    EXPECT_EQ(oracle::max_matching(as_edges(h0)), 4u);

    auto [h1, m1] = planted_pm_instance(12, Rational(1), 3);
    EXPECT_EQ(h1, Hypergraph::complete(4, 12));
    EXPECT_TRUE(validate_matching(h1, m1).perfect);

    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto [h, m] = planted_pm_instance(24, Rational(1, 10), seed);
        EXPECT_TRUE(validate_matching(h, m).perfect);
    }
}

TEST(RandomLinkGraph, Examples)
{
    EXPECT_EQ(random_link_graph(64, 5).mask, ~std::uint64_t{0});
    for (std::uint64_t seed = 0; seed < 200; ++seed)
        EXPECT_GE(random_link_graph(37, seed).popcount(), 37u);
    EXPECT_EQ(random_link_graph(37, 11), random_link_graph(37, 11));
}
