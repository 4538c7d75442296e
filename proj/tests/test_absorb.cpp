#include <gtest/gtest.h>

#include "hypermatch/absorb.hpp"
#include "hypermatch/construct.hpp"
#include "hypermatch/solve.hpp"

#include <algorithm>

using namespace hypermatch;

namespace {

// Greedy matching on `rest`, reported in original ids.
Matching greedy_on(const Hypergraph& h, const VertexSet& rest)
{
    Matching m;
    for (const auto& e : greedy_matching(induce(h, rest)).edges) {
        Edge mapped;
        for (Vertex v : e)
            mapped.push_back(rest[v]);
        m.edges.push_back(mapped);
    }
    return m;
}

VertexSet outside_of(const AbsorbingMatching& am, Vertex n)
{
    const auto base = am.base.vertices();
    VertexSet out;
    for (Vertex v = 0; v < n; ++v)
        if (!std::binary_search(base.begin(), base.end(), v))
            out.push_back(v);
    return out;
}

}  // namespace

TEST(IsAbsorbingSet, Examples)
{
    const auto k16 = Hypergraph::complete(4, 16);
    const VertexSet s{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
    EXPECT_TRUE(is_absorbing_set(k16, s, {12, 13, 14, 15}));
    EXPECT_FALSE(is_absorbing_set(Hypergraph(4, 16, {}), s, {12, 13, 14, 15}));
    const auto ext = extremal_construction(16);
    const auto b = extremal_b(16);  // 13 vertices
    EXPECT_FALSE(is_absorbing_set(ext, VertexSet(b.begin(), b.begin() + 8), VertexSet(b.begin() + 8, b.begin() + 12)));
    try {
        is_absorbing_set(k16, s, {11, 12, 13, 14});
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NotDisjoint);
    }
}

TEST(BuildAbsorbingMatching, CompleteGraphRegistersEverything)
{
    const auto k24 = Hypergraph::complete(4, 24);
    AbsorberParams p;
    p.trials = 50;
    auto am = build_absorbing_matching(k24, p, 1);
    EXPECT_EQ(am.sampled, 50u);
    EXPECT_EQ(am.registered, 50u);
    EXPECT_EQ(am.success_rate(), Rational(1));
    EXPECT_LE(am.base.size(), p.max_edges);
    EXPECT_TRUE(validate_matching(k24, am.base).valid);
    for (const auto& [w, absorber] : am.absorbers) {
        VertexSet expected = w;
        for (auto idx : am.blocks[absorber.block])
            expected = set_union(expected, am.base.edges[idx]);
        EXPECT_EQ(absorber.replacement.vertices(), expected);
        EXPECT_TRUE(validate_matching(k24, absorber.replacement).valid);
    }
}

TEST(BuildAbsorbingMatching, EdgelessGraph)
{
    auto am = build_absorbing_matching(Hypergraph(4, 20, {}), AbsorberParams{}, 3);
    EXPECT_EQ(am.base.size(), 0u);
    EXPECT_EQ(am.registered, 0u);
    EXPECT_EQ(am.success_rate(), Rational(0));
}

TEST(BuildAbsorbingMatching, Deterministic)
{
    const auto h = random_dense_hypergraph(24, threshold(24), 5);
    auto a = build_absorbing_matching(h, AbsorberParams{}, 9);
    auto b = build_absorbing_matching(h, AbsorberParams{}, 9);
    EXPECT_EQ(a.base, b.base);
    EXPECT_EQ(a.blocks, b.blocks);
    EXPECT_EQ(a.registered, b.registered);
    EXPECT_EQ(a.absorbers.size(), b.absorbers.size());
}

TEST(Absorb, CompleteGraphLeftoverOfFour)
{
    const auto k24 = Hypergraph::complete(4, 24);
    AbsorberParams p;
    p.max_edges = 3;
    auto am = build_absorbing_matching(k24, p, 2);
    ASSERT_EQ(am.base.size(), 3u);
    auto outside = outside_of(am, 24);
    const VertexSet w(outside.end() - 4, outside.end());
    const VertexSet rest(outside.begin(), outside.end() - 4);
    auto partial = greedy_on(k24, rest);
    auto m = absorb(k24, am, partial, w);
    EXPECT_TRUE(validate_matching(k24, m).perfect);
}

TEST(Absorb, EmptyLeftoverIsIdentity)
{
    const auto k16 = Hypergraph::complete(4, 16);
    auto am = build_absorbing_matching(k16, AbsorberParams{}, 2);
    auto outside = outside_of(am, 16);
    auto partial = greedy_on(k16, outside);
    auto m = absorb(k16, am, partial, {});
    EXPECT_EQ(m.vertices(), set_union(am.base.vertices(), partial.vertices()));
}

TEST(Absorb, DenseInstanceLeftoverOfEight)
{
    const auto h = random_dense_hypergraph(40, 5484, 12);
    auto am = build_absorbing_matching(h, AbsorberParams{}, 12);
    auto outside = outside_of(am, 40);
    const VertexSet w(outside.end() - 8, outside.end());
    const VertexSet rest(outside.begin(), outside.end() - 8);
    auto partial = greedy_on(h, rest);
    auto m = absorb(h, am, partial, w);
    EXPECT_TRUE(validate_matching(h, m).valid);
    EXPECT_EQ(m.vertices(), set_union(set_union(am.base.vertices(), partial.vertices()), w));
}

TEST(Absorb, Errors)
{
    const auto k16 = Hypergraph::complete(4, 16);
    auto am = build_absorbing_matching(k16, AbsorberParams{}, 2);
    const auto base = am.base.vertices();
    ASSERT_FALSE(base.empty());
    try {
        absorb(k16, am, {}, {base[0], base[1], base[2], base[3]});
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NotDisjoint);
    }
    auto outside = outside_of(am, 16);
    try {
        absorb(k16, am, {}, {outside[0], outside[1]});
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::Indivisible);
    }
    // Nothing absorbs a 4-set of B in the extremal construction.
    const auto ext = extremal_construction(16);
    auto am2 = build_absorbing_matching(ext, AbsorberParams{}, 4);
    auto out2 = outside_of(am2, 16);
    VertexSet bw;
    for (Vertex v : out2)
        if (v >= 3 && bw.size() < 4)
            bw.push_back(v);
    ASSERT_EQ(bw.size(), 4u);
    try {
        absorb(ext, am2, {}, bw);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::AbsorptionFailed);
    }
}
