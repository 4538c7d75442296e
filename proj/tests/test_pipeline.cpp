#include <gtest/gtest.h>

#include "hypermatch/construct.hpp"
#include "hypermatch/pipeline.hpp"
#include "hypermatch/solve.hpp"

#include "planted.hpp"

using namespace hypermatch;

namespace {

MultipartiteWitness singleton_block(Vertex first)
{
    MultipartiteWitness w;
    for (Vertex i = 0; i < 4; ++i)
        w.classes.push_back({first + i});
    w.roles.assign(4, 'V');
    return w;
}

// Blocks {4b, ..., 4b+3} for b < blocks, everything else left over.
Cover singleton_cover(Vertex n, unsigned blocks)
{
    Cover c;
    c.m = 1;
    for (unsigned b = 0; b < blocks; ++b)
        c.blocks.push_back(singleton_block(4 * b));
    for (Vertex v = 4 * blocks; v < n; ++v)
        c.leftover.push_back(v);
    return c;
}

void expect_consistent(const Hypergraph& h, const Cover& before, const ExtendResult& r)
{
    EXPECT_TRUE(cover_valid(h, r.cover));
    EXPECT_EQ(r.cover.covered(), before.covered() + r.gain);
    EXPECT_EQ(r.cover.covered() + r.cover.leftover.size(), h.num_vertices());
}

}  // namespace

TEST(DetectExtremal, Examples)
{
    const auto ext = extremal_construction(16);
    auto b = detect_extremal(ext, Rational(1, 10));
    ASSERT_TRUE(b.has_value());
    EXPECT_EQ(b->size(), 11u);  // ceil((3/4 - 1/10) * 16)
    EXPECT_EQ(density(ext, *b), Rational(0));
    EXPECT_FALSE(detect_extremal(Hypergraph::complete(4, 16), Rational(1, 10)).has_value());

    // A few edges inside B keep it sparse.
    auto edges = ext.edge_list();
    edges.push_back({3, 4, 5, 6});
    edges.push_back({7, 8, 9, 10});
    const Hypergraph noisy(4, 16, edges);
    auto nb = detect_extremal(noisy, Rational(1, 10));
    ASSERT_TRUE(nb.has_value());
    EXPECT_LT(density(noisy, *nb), Rational(1, 10));
}

TEST(InitialCover, Examples)
{
    PipelineConfig cfg;
    const auto k16 = Hypergraph::complete(4, 16);
    auto c = build_initial_cover(k16, cfg);
    EXPECT_TRUE(cover_valid(k16, c));
    EXPECT_EQ(c.leftover.size(), 0u);
    EXPECT_EQ(c.blocks.size(), 4u);

    auto empty = build_initial_cover(Hypergraph(4, 16, {}), cfg);
    EXPECT_TRUE(empty.blocks.empty());
    EXPECT_EQ(empty.leftover.size(), 16u);

    cfg.l = 2;
    auto inst = planted::complete_block(2, 1);
    auto c2 = build_initial_cover(inst.h, cfg);
    EXPECT_TRUE(cover_valid(inst.h, c2));
    EXPECT_EQ(c2.m, 2u);
    EXPECT_GE(c2.blocks.size(), 1u);
}

TEST(InitialCover, RespectsDomain)
{
    PipelineConfig cfg;
    const auto k16 = Hypergraph::complete(4, 16);
    const VertexSet domain{1, 3, 5, 7, 9, 11, 13, 15};
    auto c = build_initial_cover(k16, domain, cfg);
    EXPECT_EQ(c.blocks.size(), 2u);
    for (const auto& b : c.blocks)
        for (const auto& cls : b.classes)
            for (Vertex v : cls)
                EXPECT_EQ(v % 2, 1u);
}

TEST(ValidateConfig, RejectsBadValues)
{
    PipelineConfig cfg;
    cfg.gamma = Rational(1, 4);
    cfg.alpha = Rational(1, 5);
    EXPECT_THROW(validate_config(cfg), Error);
    cfg = PipelineConfig{};
    cfg.l = 0;
    EXPECT_THROW(validate_config(cfg), Error);
    EXPECT_NO_THROW(validate_config(PipelineConfig{}));
}

TEST(ExtendCover, TwoClassesGrowsOnCompleteGraph)
{
    const auto k16 = Hypergraph::complete(4, 16);
    auto c = singleton_cover(16, 1);
    auto r = extend_cover_two_classes(k16, c, PipelineConfig{});
    expect_consistent(k16, c, r);
    EXPECT_GT(r.gain, 0u);
}

TEST(ExtendCover, NineSidedGrowsOnCompleteGraph)
{
    const auto k16 = Hypergraph::complete(4, 16);
    auto c = singleton_cover(16, 2);
    auto r = extend_cover_nine_sided(k16, c, PipelineConfig{});
    expect_consistent(k16, c, r);
    EXPECT_GT(r.gain, 0u);
}

TEST(ExtendCover, TriplesGrowOnCompleteGraph)
{
    const auto k16 = Hypergraph::complete(4, 16);
    auto c = singleton_cover(16, 3);
    auto r = extend_cover_triples(k16, c, PipelineConfig{});
    expect_consistent(k16, c, r);
    EXPECT_GT(r.gain, 0u);
    EXPECT_EQ(r.verdicts[to_string(Verdict::PerfectMatching)], 1u);
}

TEST(ExtendCover, NoGainWithoutEdges)
{
    // Only the block edges exist, so nothing reaches the leftover.
    const Hypergraph h(4, 16, {{0, 1, 2, 3}, {4, 5, 6, 7}, {8, 9, 10, 11}});
    auto c = singleton_cover(16, 3);
    for (auto* op : {&extend_cover_two_classes, &extend_cover_nine_sided, &extend_cover_triples}) {
        auto r = (*op)(h, c, PipelineConfig{});
        EXPECT_EQ(r.gain, 0u);
        EXPECT_EQ(r.cover.covered(), c.covered());
        EXPECT_TRUE(cover_valid(h, r.cover));
    }
}

TEST(SplitBlocks, DiscardsRemainder)
{
    const auto k16 = Hypergraph::complete(4, 16);
    Cover c;
    c.m = 3;
    MultipartiteWitness w;
    w.classes = {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}, {9, 10, 11}};
    w.roles.assign(4, 'V');
    c.blocks.push_back(w);
    c.leftover = {12, 13, 14, 15};
    auto s = split_blocks(c, 2);
    EXPECT_EQ(s.m, 2u);
    ASSERT_EQ(s.blocks.size(), 1u);
    EXPECT_EQ(s.blocks[0].classes[0], (VertexSet{0, 1}));
    EXPECT_EQ(s.leftover, (VertexSet{2, 5, 8, 11, 12, 13, 14, 15}));
    auto s1 = split_blocks(c, 1);
    EXPECT_EQ(s1.blocks.size(), 3u);
    EXPECT_TRUE(s1.leftover == c.leftover);

    auto m = cover_to_matching(s1);
    EXPECT_EQ(m.size(), 3u);
    EXPECT_TRUE(validate_matching(k16, m).valid);
    EXPECT_EQ(m.edges[0], (Edge{0, 3, 6, 9}));
}

TEST(ExtremalMatcher, Examples)
{
    for (Vertex n : {16u, 20u}) {
        const auto h = extremal_repaired(n);
        auto m = extremal_matcher(h, extremal_b(n), Rational(1, 5), 1);
        ASSERT_TRUE(m.has_value()) << n;
        EXPECT_TRUE(validate_matching(h, *m).perfect);
    }
    EXPECT_FALSE(extremal_matcher(extremal_construction(16), extremal_b(16), Rational(1, 5), 1).has_value());

    // An isolated vertex rules out any perfect matching.
    auto edges = Hypergraph::complete(4, 16).edge_list();
    std::erase_if(edges, [](const Edge& e) { return e[0] == 0; });
    const Hypergraph iso(4, 16, edges);
    VertexSet b;
    for (Vertex v = 4; v < 16; ++v)
        b.push_back(v);
    EXPECT_FALSE(extremal_matcher(iso, b, Rational(1, 5), 1).has_value());
}

TEST(SolvePipeline, CompleteGraphNonExtremal)
{
    const auto k24 = Hypergraph::complete(4, 24);
    auto [m, rep] = solve_pipeline(k24, PipelineConfig{});
    ASSERT_TRUE(m.has_value());
    EXPECT_TRUE(validate_matching(k24, *m).perfect);
    EXPECT_EQ(rep.path, "non-extremal");
    EXPECT_FALSE(rep.fallback_used);
    EXPECT_TRUE(rep.found);
}

TEST(SolvePipeline, AgreesWithExactOnExtremalFamily)
{
    for (Vertex n : {16u, 20u, 24u}) {
        const auto h = extremal_repaired(n);
        auto [m, rep] = solve_pipeline(h, PipelineConfig{});
        auto exact = has_perfect_matching(h);
        EXPECT_EQ(m.has_value(), exact.has_value()) << n;
        if (m)
            EXPECT_TRUE(validate_matching(h, *m).perfect);
        EXPECT_EQ(rep.path, "extremal") << n;
    }
}

TEST(SolvePipeline, ErrorsAndDeterminism)
{
    EXPECT_THROW(solve_pipeline(Hypergraph::complete(4, 18), PipelineConfig{}), Error);
    EXPECT_THROW(solve_pipeline(Hypergraph::complete(3, 9), PipelineConfig{}), Error);

    const auto h = random_dense_hypergraph(24, threshold(24), 4);
    PipelineConfig cfg;
    cfg.seed = 11;
    auto a = solve_pipeline(h, cfg);
    auto b = solve_pipeline(h, cfg);
    EXPECT_EQ(to_json(a.second, false).dump(), to_json(b.second, false).dump());
    EXPECT_EQ(a.first, b.first);
    auto j = to_json(a.second, true);
    EXPECT_TRUE(j["stages"][0].contains("seconds"));
    EXPECT_FALSE(to_json(a.second, false)["stages"][0].contains("seconds"));
}

TEST(FilteredDensity, CountsOnlySpreadFourSets)
{
    // Four groups of two: 16 spread 4-sets out of C(8, 4) = 70.
    const PartiteSpec groups{{{0, 1}, {2, 3}, {4, 5}, {6, 7}}};
    EXPECT_EQ(filtered_density(Hypergraph::complete(4, 8), groups), Rational(1));
    const Hypergraph h(4, 8, {{0, 2, 4, 6}, {0, 1, 2, 3}, {1, 3, 5, 7}});
    EXPECT_EQ(filtered_density(h, groups), Rational(2, 16));
    EXPECT_EQ(density(h, VertexSet{0, 1, 2, 3, 4, 5, 6, 7}), Rational(3, 70));
    try {
        filtered_density(h, PartiteSpec{{{0, 1}, {2, 3}, {4, 5}}});
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::TooSmall);
    }
    EXPECT_THROW(filtered_density(h, PartiteSpec{{{0, 1}, {1, 3}, {4}, {5}}}), Error);
}
