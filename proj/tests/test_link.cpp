#include <gtest/gtest.h>

#include "hypermatch/construct.hpp"
#include "hypermatch/link.hpp"
#include "hypermatch/rng.hpp"
#include "hypermatch/solve.hpp"
#include "oracles.hpp"

using namespace hypermatch;

namespace {

constexpr std::uint64_t kFull = ~std::uint64_t{0};

LinkSymmetry random_symmetry(Rng& rng)
{
    LinkSymmetry s;
    std::vector<std::uint8_t> cls{0, 1, 2};
    rng.shuffle(cls);
    std::copy(cls.begin(), cls.end(), s.class_perm.begin());
    for (auto& l : s.labels) {
        std::vector<std::uint8_t> p{0, 1, 2, 3};
        rng.shuffle(p);
        std::copy(p.begin(), p.end(), l.begin());
    }
    return s;
}

Block singleton_classes(Vertex first)
{
    Block b;
    for (Vertex v = first; v < first + 4; ++v)
        b.classes.push_back({v});
    return b;
}

}  // namespace

TEST(HexFormat, RoundTripAndErrors)
{
    const auto g = h_ext_canonical();
    EXPECT_EQ(link_from_hex(to_hex(g)), g);
    EXPECT_EQ(to_hex(LinkGraph{1}), "0000000000000001");
    EXPECT_EQ(link_from_hex("0xFFFFFFFFFFFFFFFF").mask, kFull);
    EXPECT_EQ(link_from_hex("00000000000000aB").mask, 0xabu);
    for (const char* bad : {"", "123", "000000000000000g", "00000000000000000", "0x000000000000000"}) {
        try {
            link_from_hex(bad);
            ADD_FAILURE() << bad;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), Errc::Parse);
        }
    }
}

TEST(PairDegree, Examples)
{
    EXPECT_EQ(pair_degree(LinkGraph{kFull}, Side::Q01, 2, 3), 4u);
    const auto h = h_ext_canonical();
    EXPECT_EQ(pair_degree(h, Side::Q12, 0, 0), 4u);
    EXPECT_EQ(pair_degree(h, Side::Q12, 1, 1), 1u);
}

TEST(CrossingDegreeSum, Examples)
{
    EXPECT_EQ(crossing_degree_sum(LinkGraph{kFull}, Side::Q01, {0, 1}, {2, 3}), 8u);
    EXPECT_EQ(crossing_degree_sum(LinkGraph{0}, Side::Q02, {0, 1}, {2, 3}), 0u);
    EXPECT_EQ(crossing_degree_sum(h_ext_canonical(), Side::Q12, {0, 0}, {1, 1}), 8u);
    try {
        crossing_degree_sum(LinkGraph{kFull}, Side::Q01, {0, 1}, {0, 2});
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NotDisjoint);
    }
}

TEST(DetectPattern, Examples)
{
    for (auto kind : {PatternKind::H432, PatternKind::H4221, PatternKind::H3321}) {
        EXPECT_FALSE(detect_pattern(LinkGraph{0}, kind));
        auto full = detect_pattern(LinkGraph{kFull}, kind);
        ASSERT_TRUE(full);
        EXPECT_TRUE(verify_pair_system(LinkGraph{kFull}, kind, *full));
        for (std::uint64_t seed = 0; seed < 30; ++seed) {
            const auto g = pattern_witness(kind, seed);
            auto w = detect_pattern(g, kind);
            ASSERT_TRUE(w);
            EXPECT_TRUE(verify_pair_system(g, kind, *w));
        }
    }
    // First witness in scan order on the full mask.
    auto w = detect_pattern(LinkGraph{kFull}, PatternKind::H432);
    EXPECT_EQ(w->side, Side::Q01);
    EXPECT_EQ(w->pairs, (std::vector<VertexPair>{{0, 0}, {1, 1}, {2, 2}}));
}

TEST(DetectPattern, MonotoneUnderAddition)
{
    Rng rng(17);
    for (int t = 0; t < 2000; ++t) {
        LinkGraph g{rng.next() & rng.next()};
        LinkGraph more{g.mask | (std::uint64_t{1} << rng.below(64))};
        for (auto kind : {PatternKind::H432, PatternKind::H4221, PatternKind::H3321})
            if (detect_pattern(g, kind))
                EXPECT_TRUE(detect_pattern(more, kind)) << to_hex(g);
    }
}

TEST(IsExt, Examples)
{
    auto c = is_ext(h_ext_canonical());
    ASSERT_TRUE(c);
    EXPECT_EQ(*c, (Triple{0, 0, 0}));
    EXPECT_FALSE(is_ext(LinkGraph{kFull}));
    LinkGraph moved = h_ext_canonical();
    moved.reset(0, 1, 1);
    moved.set(1, 1, 1);
    EXPECT_EQ(moved.popcount(), 37u);
    EXPECT_FALSE(is_ext(moved));
}

TEST(IsExt, ImpliesNoTripartiteMatching)
{
    Rng rng(5);
    for (int t = 0; t < 2000; ++t) {
        LinkSymmetry s = random_symmetry(rng);
        LinkGraph g = apply(s, h_ext_canonical());
        ASSERT_TRUE(is_ext(g));
        EXPECT_FALSE(tripartite_pm_444(g));
        EXPECT_EQ(is_ext(g).has_value(), oracle::covered_by_transversal(g.mask) && g.popcount() == 37);
    }
}

TEST(Classify, Examples)
{
    auto full = classify(LinkGraph{kFull});
    EXPECT_EQ(full.verdict, Verdict::PerfectMatching);
    EXPECT_TRUE(verify_classification(LinkGraph{kFull}, full));
    auto ext = classify(h_ext_canonical());
    EXPECT_EQ(ext.verdict, Verdict::Ext);
    EXPECT_EQ(*ext.cover, (Triple{0, 0, 0}));
    EXPECT_TRUE(verify_classification(h_ext_canonical(), ext));
    try {
        classify(LinkGraph{(std::uint64_t{1} << 36) - 1});
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NotApplicable);
    }
}

TEST(Classify, SampledMasksNeverViolate)
{
    for (std::uint64_t seed = 0; seed < 20000; ++seed) {
        const auto g = random_link_graph(37, seed);
        auto c = classify(g);
        EXPECT_TRUE(verify_classification(g, c));
        EXPECT_EQ(c.verdict == Verdict::PerfectMatching, oracle::tripartite_pm(g.mask));
    }
}

// Every mask obtained from H_ext by moving one or two edges (k edges removed,
// k non-edges added): 37*27 + C(37,2)*C(27,2) = 999 + 233766 masks.
TEST(Classify, HExtSwapNeighborhoodExhaustive)
{
    const auto base = h_ext_canonical().mask;
    std::vector<unsigned> on, off;
    for (unsigned b = 0; b < 64; ++b)
        ((base >> b) & 1U ? on : off).push_back(b);
    ASSERT_EQ(on.size(), 37u);
    std::uint64_t checked = 0, ext = 0;
    auto check = [&](std::uint64_t mask) {
        LinkGraph g{mask};
        auto c = classify(g);
        ASSERT_TRUE(verify_classification(g, c)) << to_hex(g);
        ext += c.verdict == Verdict::Ext ? 1 : 0;
        ++checked;
    };
    for (unsigned a : on)
        for (unsigned x : off)
            check(base ^ (std::uint64_t{1} << a) ^ (std::uint64_t{1} << x));
    for (std::size_t a = 0; a < on.size(); ++a)
        for (std::size_t b = a + 1; b < on.size(); ++b)
            for (std::size_t x = 0; x < off.size(); ++x)
                for (std::size_t y = x + 1; y < off.size(); ++y)
                    check(base ^ (std::uint64_t{1} << on[a]) ^ (std::uint64_t{1} << on[b]) ^
                          (std::uint64_t{1} << off[x]) ^ (std::uint64_t{1} << off[y]));
    EXPECT_EQ(checked, 999u + 233766u);
    // Moving an edge never lands on another copy of H_ext here.
    EXPECT_EQ(ext, 0u);
}

TEST(CanonicalForm, Examples)
{
    EXPECT_EQ(canonical_form(LinkGraph{kFull}), kFull);
    EXPECT_EQ(canonical_form(LinkGraph{0}), 0u);
    Rng rng(1);
    const auto ref = canonical_form(h_ext_canonical());
    for (int t = 0; t < 100; ++t)
        EXPECT_EQ(canonical_form(apply(random_symmetry(rng), h_ext_canonical())), ref);
}

TEST(CanonicalForm, ConstantOnOrbits)
{
    Rng rng(9);
    for (int t = 0; t < 10000; ++t) {
        LinkGraph g{rng.next() & rng.next()};
        EXPECT_EQ(canonical_form(apply(random_symmetry(rng), g)), canonical_form(g));
    }
}

TEST(CanonicalForm, MatchesBruteForceOrbitMinimum)
{
    Rng rng(23);
    std::vector<std::uint64_t> masks{h_ext_canonical().mask, pattern_witness(PatternKind::H3321, 2, Fill::Zero).mask};
    for (int t = 0; t < 6; ++t)
        masks.push_back(rng.next() & rng.next());
    for (auto m : masks)
        EXPECT_EQ(canonical_form(LinkGraph{m}), oracle::canonical(m)) << to_hex(LinkGraph{m});
}

TEST(BuildLinkGraph, Examples)
{
    const std::array<Block, 3> blocks{singleton_classes(0), singleton_classes(4), singleton_classes(8)};
    const VertexSet z{12, 13, 14, 15};
    EXPECT_EQ(build_link_graph(Hypergraph::complete(4, 16), blocks, z, Rational(1, 2)).mask, kFull);
    EXPECT_EQ(build_link_graph(Hypergraph(4, 16, {}), blocks, z, Rational(1, 100)).mask, 0u);

    std::vector<Edge> edges;
    for (Vertex i = 0; i < 4; ++i)
        for (Vertex zv : z)
            edges.push_back({i, 4 + i, 8 + i, zv});
    auto diag = build_link_graph(Hypergraph(4, 16, std::move(edges)), blocks, z, Rational(1, 2));
    LinkGraph expected;
    for (unsigned i = 0; i < 4; ++i)
        expected.set(i, i, i);
    EXPECT_EQ(diag, expected);

    std::array<Block, 3> overlapping = blocks;
    overlapping[2].classes[0] = {0};
    try {
        build_link_graph(Hypergraph::complete(4, 16), overlapping, z, Rational(1, 2));
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::InvalidPartition);
    }
}

TEST(BuildLinkGraph, ThresholdIsExact)
{
    // One of two Z vertices sees the (0,0,0) triple: density exactly 1/2.
    const std::array<Block, 3> blocks{singleton_classes(0), singleton_classes(4), singleton_classes(8)};
    Hypergraph h(4, 14, {{0, 4, 8, 12}});
    EXPECT_TRUE(build_link_graph(h, blocks, {12, 13}, Rational(1, 4)).test(0, 0, 0));
    EXPECT_FALSE(build_link_graph(h, blocks, {12, 13}, Rational(1, 4) + Rational(1, 1000)).test(0, 0, 0));
}
