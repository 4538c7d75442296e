#include "hypermatch/construct.hpp"

#include <algorithm>
#include <numeric>

#include "hypermatch/rng.hpp"

namespace hypermatch {

namespace {

void check_order(Vertex n)
{
    if (n % 4 != 0)
        throw Error(Errc::Indivisible, "n must be divisible by 4");
    if (n < 8)
        throw Error(Errc::TooSmall, "n must be at least 8");
}

// Enumerates the 4-subsets of [0, n) in lexicographic order.
template <class F>
void for_each_quad(Vertex n, F&& f)
{
    for (Vertex a = 0; a < n; ++a)
        for (Vertex b = a + 1; b < n; ++b)
            for (Vertex c = b + 1; c < n; ++c)
                for (Vertex d = c + 1; d < n; ++d)
                    f(a, b, c, d);
}

std::uint64_t colex4(Vertex a, Vertex b, Vertex c, Vertex d)
{
    return binomial(a, 1) + binomial(b, 2) + binomial(c, 3) + binomial(d, 4);
}

}  // namespace

std::uint64_t threshold(Vertex n)
{
    check_order(n);
    return binomial(n - 1, 3) - binomial(3 * n / 4, 3) + 1;
}

VertexSet extremal_a(Vertex n)
{
    check_order(n);
    VertexSet a(n / 4 - 1);
    std::iota(a.begin(), a.end(), 0);
    return a;
}

VertexSet extremal_b(Vertex n)
{
    check_order(n);
    VertexSet b;
    for (Vertex v = n / 4 - 1; v < n; ++v)
        b.push_back(v);
    return b;
}

Hypergraph extremal_construction(Vertex n)
{
    check_order(n);
    const Vertex a_size = n / 4 - 1;
    std::vector<Edge> edges;
    for_each_quad(n, [&](Vertex a, Vertex b, Vertex c, Vertex d) {
        if (a < a_size)
            edges.push_back({a, b, c, d});
    });
    return Hypergraph(4, n, std::move(edges));
}

Hypergraph extremal_repaired(Vertex n)
{
    auto edges = extremal_construction(n).edge_list();
    const VertexSet b = extremal_b(n);
    // Consecutive 4-blocks of B; a short final block is replaced by the last
    // four vertices of B.
    for (std::size_t i = 0; i < b.size(); i += 4) {
        std::size_t start = std::min(i, b.size() - 4);
        edges.push_back(Edge(b.begin() + start, b.begin() + start + 4));
    }
    return Hypergraph(4, n, std::move(edges));
}

LinkGraph h_ext_canonical()
{
    LinkGraph g;
    for (unsigned i = 0; i < 4; ++i)
        for (unsigned j = 0; j < 4; ++j)
            for (unsigned k = 0; k < 4; ++k)
                if (i == 0 || j == 0 || k == 0)
                    g.set(i, j, k);
    return g;
}

LinkGraph pattern_witness(PatternKind kind, std::uint64_t seed, Fill fill)
{
    Rng rng = Rng::substream(seed, "pattern_witness");
    const auto degrees = required_degrees(kind);
    const Side side = static_cast<Side>(rng.below(3));
    const auto cls = side_classes(side);

    std::vector<unsigned> xs{0, 1, 2, 3};
    std::vector<unsigned> ys{0, 1, 2, 3};
    rng.shuffle(xs);
    rng.shuffle(ys);

    auto bit = [&](unsigned x, unsigned y, unsigned z) {
        std::array<unsigned, 3> idx{};
        idx[cls[0]] = x;
        idx[cls[1]] = y;
        idx[cls[2]] = z;
        return LinkGraph::index(idx[0], idx[1], idx[2]);
    };

    LinkGraph g;
    std::uint64_t planted_region = 0;
    for (std::size_t p = 0; p < degrees.size(); ++p) {
        std::vector<unsigned> zs{0, 1, 2, 3};
        rng.shuffle(zs);
        for (unsigned z = 0; z < 4; ++z)
            planted_region |= std::uint64_t{1} << bit(xs[p], ys[p], z);
        for (unsigned t = 0; t < degrees[p]; ++t)
            g.mask |= std::uint64_t{1} << bit(xs[p], ys[p], zs[t]);
    }

    std::uint64_t other = ~planted_region;
    switch (fill) {
    case Fill::Zero: break;
    case Fill::Full: g.mask |= other; break;
    case Fill::Random: g.mask |= other & rng.next(); break;
    }
    return g;
}

Hypergraph random_dense_hypergraph(Vertex n, std::uint64_t target, std::uint64_t seed)
{
    if (n < 4)
        throw Error(Errc::TooSmall, "n must be at least 4");
    const std::uint64_t cap = binomial(n - 1, 3);
    if (target > cap)
        throw Error(Errc::Infeasible, "target degree exceeds C(n-1, 3)");

    Rng rng = Rng::substream(seed, "random_dense");
    DynBitset present(binomial(n, 4));
    std::vector<std::uint64_t> deg(n, 0);
    std::vector<Edge> edges;

    for_each_quad(n, [&](Vertex a, Vertex b, Vertex c, Vertex d) {
        if (rng.bernoulli(target, cap)) {
            present.set(colex4(a, b, c, d));
            edges.push_back({a, b, c, d});
            ++deg[a], ++deg[b], ++deg[c], ++deg[d];
        }
    });

    Rng repair = Rng::substream(seed, "random_dense/repair");
    for (Vertex v = 0; v < n; ++v) {
        while (deg[v] < target) {
            auto pick = repair.sample(n - 1, 3);
            Edge e{v};
            for (auto p : pick)
                e.push_back(static_cast<Vertex>(p >= v ? p + 1 : p));
            std::sort(e.begin(), e.end());
            auto key = colex4(e[0], e[1], e[2], e[3]);
            if (present.test(key))
                continue;
            present.set(key);
            for (Vertex u : e)
                ++deg[u];
            edges.push_back(std::move(e));
        }
    }
    return Hypergraph(4, n, std::move(edges));
}

std::pair<Hypergraph, Matching> planted_pm_instance(Vertex n, Rational noise, std::uint64_t seed)
{
    if (n % 4 != 0)
        throw Error(Errc::Indivisible, "n must be divisible by 4");
    if (n < 4)
        throw Error(Errc::TooSmall, "n must be at least 4");
    Rng rng = Rng::substream(seed, "planted_pm");
    std::vector<Vertex> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);

    Matching pm;
    DynBitset planted(binomial(n, 4));
    for (Vertex i = 0; i < n; i += 4) {
        Edge e(perm.begin() + i, perm.begin() + i + 4);
        std::sort(e.begin(), e.end());
        planted.set(colex4(e[0], e[1], e[2], e[3]));
        pm.edges.push_back(std::move(e));
    }
    std::sort(pm.edges.begin(), pm.edges.end());

    const auto num = static_cast<std::uint64_t>(noise.numerator());
    const auto den = static_cast<std::uint64_t>(noise.denominator());
    std::vector<Edge> edges = pm.edges;
    for_each_quad(n, [&](Vertex a, Vertex b, Vertex c, Vertex d) {
        if (planted.test(colex4(a, b, c, d)))
            return;
        if (noise > Rational(0) && rng.bernoulli(num, den))
            edges.push_back({a, b, c, d});
    });
    return {Hypergraph(4, n, std::move(edges)), std::move(pm)};
}

LinkGraph random_link_graph(unsigned min_edges, std::uint64_t seed)
{
    if (min_edges > 64)
        throw Error(Errc::Infeasible, "min_edges must be at most 64");
    Rng rng = Rng::substream(seed, "random_link_graph");
    if (min_edges == 0)
        return LinkGraph{rng.next()};

    unsigned __int128 total = 0;
    std::array<unsigned __int128, 65> weight{};
    for (unsigned k = min_edges; k <= 64; ++k) {
        weight[k] = binomial(64, k);
        total += weight[k];
    }
    unsigned __int128 draw = rng.below128(total);
    unsigned k = min_edges;
    while (draw >= weight[k]) {
        draw -= weight[k];
        ++k;
    }
    LinkGraph g;
    for (auto bit : rng.sample(64, k))
        g.mask |= std::uint64_t{1} << bit;
    return g;
}

}  // namespace hypermatch
