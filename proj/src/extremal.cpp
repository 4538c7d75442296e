#include <algorithm>
#include <numeric>

#include "hypermatch/pipeline.hpp"
#include "hypermatch/rng.hpp"
#include "hypermatch/solve.hpp"

namespace hypermatch {

namespace {

using i128 = __int128;

// For each vertex v: edges containing v whose other three vertices lie in
// `in` (v itself may or may not be in `in`).
std::vector<std::uint64_t> degrees_into(const Hypergraph& h, const std::vector<char>& in)
{
    std::vector<std::uint64_t> out(h.num_vertices(), 0);
    for (std::size_t e = 0; e < h.num_edges(); ++e) {
        auto ed = h.edge(e);
        unsigned inside = 0;
        for (Vertex v : ed)
            inside += in[v] ? 1U : 0U;
        if (inside == 4) {
            for (Vertex v : ed)
                ++out[v];
        } else if (inside == 3) {
            for (Vertex v : ed)
                if (!in[v])
                    ++out[v];
        }
    }
    return out;
}

std::uint64_t inside_count(const Hypergraph& h, const std::vector<char>& in)
{
    std::uint64_t total = 0;
    for (std::size_t e = 0; e < h.num_edges(); ++e) {
        bool all = true;
        for (Vertex v : h.edge(e))
            all = all && in[v];
        total += all ? 1 : 0;
    }
    return total;
}

VertexSet members(const std::vector<char>& in)
{
    VertexSet out;
    for (Vertex v = 0; v < in.size(); ++v)
        if (in[v])
            out.push_back(v);
    return out;
}

bool is_extremal_set(const Hypergraph& h, const VertexSet& b, Rational alpha)
{
    const Rational min_size = (Rational(3, 4) - alpha) * static_cast<std::int64_t>(h.num_vertices());
    if (Rational(static_cast<std::int64_t>(b.size())) < min_size || b.size() < 4)
        return false;
    return density(h, b) < alpha;
}

}  // namespace

std::optional<VertexSet> detect_extremal(const Hypergraph& h, Rational alpha, unsigned local_steps)
{
    const Vertex n = h.num_vertices();
    if (h.uniformity() != 4 || alpha <= Rational(0))
        return std::nullopt;
    const Rational target = (Rational(3, 4) - alpha) * static_cast<std::int64_t>(n);
    std::int64_t size = target.numerator() / target.denominator();
    if (Rational(size) < target)
        ++size;
    size = std::max<std::int64_t>(size, 4);
    if (size > static_cast<std::int64_t>(n))
        return std::nullopt;

    std::vector<Vertex> order(n);
    std::iota(order.begin(), order.end(), Vertex{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Vertex a, Vertex b) { return h.vertex_degree(a) < h.vertex_degree(b); });
    std::vector<char> in(n, 0);
    for (std::int64_t i = 0; i < size; ++i)
        in[order[static_cast<std::size_t>(i)]] = 1;

    std::uint64_t current = inside_count(h, in);
    for (unsigned step = 0; step < local_steps && current > 0; ++step) {
        auto deg = degrees_into(h, in);
        Vertex x = n;
        for (Vertex v = 0; v < n; ++v)
            if (in[v] && (x == n || deg[v] > deg[x]))
                x = v;
        in[x] = 0;
        auto without = degrees_into(h, in);
        Vertex y = n;
        for (Vertex v = 0; v < n; ++v)
            if (!in[v] && v != x && (y == n || without[v] < without[y]))
                y = v;
        if (y == n || current - deg[x] + without[y] >= current) {
            in[x] = 1;
            break;
        }
        in[y] = 1;
        current = current - deg[x] + without[y];
    }

    VertexSet b = members(in);
    if (!is_extremal_set(h, b, alpha))
        return std::nullopt;
    return b;
}

namespace {

struct Sides {
    std::vector<char> in_b;
    std::vector<std::uint64_t> deg;  // deg(v, (B choose 3)), v's own side ignored
};

Sides measure(const Hypergraph& h, const std::vector<char>& in_b)
{
    return {in_b, degrees_into(h, in_b)};
}

// Edge patterns for the greedy covering stage; counts of A and B vertices
// besides the anchor.
struct Pattern {
    unsigned a = 0;
    unsigned b = 0;
};

class Greedy {
public:
    Greedy(const Hypergraph& h, const std::vector<char>& in_b) : h_(h), in_b_(in_b), used_(h.num_vertices(), 0) {}

    bool is_used(Vertex v) const { return used_[v] != 0; }

    // First edge (lexicographic) containing v, with the other vertices unused,
    // split as `p` between A and B, and satisfying `extra` on the others.
    template <typename Extra>
    bool take_with(Vertex v, Pattern p, Extra extra)
    {
        const auto& inc = h_.incident(v);
        for (std::size_t e = inc.find_first(); e < inc.size(); e = inc.find_next(e + 1)) {
            auto ed = h_.edge(e);
            unsigned na = 0, nb = 0;
            bool ok = true;
            for (Vertex u : ed) {
                if (u == v)
                    continue;
                if (used_[u] || !extra(u)) {
                    ok = false;
                    break;
                }
                (in_b_[u] ? nb : na) += 1;
            }
            if (ok && na == p.a && nb == p.b) {
                commit(ed);
                return true;
            }
        }
        return false;
    }

    // First edge anywhere with `a` A-vertices and `b` B-vertices drawn from
    // unused vertices passing `allowed`.
    template <typename Allowed>
    bool take_any(Pattern p, Allowed allowed)
    {
        for (std::size_t e = 0; e < h_.num_edges(); ++e) {
            auto ed = h_.edge(e);
            unsigned na = 0, nb = 0;
            bool ok = true;
            for (Vertex u : ed) {
                if (used_[u] || !allowed(u)) {
                    ok = false;
                    break;
                }
                (in_b_[u] ? nb : na) += 1;
            }
            if (ok && na == p.a && nb == p.b) {
                commit(ed);
                return true;
            }
        }
        return false;
    }

    Matching matching;

private:
    void commit(std::span<const Vertex> ed)
    {
        for (Vertex u : ed)
            used_[u] = 1;
        matching.edges.emplace_back(ed.begin(), ed.end());
    }

    const Hypergraph& h_;
    const std::vector<char>& in_b_;
    std::vector<char> used_;
};

bool good_triplet(const Hypergraph& h, const VertexSet& a, const std::array<Vertex, 3>& t, Rational alpha,
                  std::vector<std::size_t>* neighbors)
{
    std::size_t count = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::array<Vertex, 4> e{a[i], t[0], t[1], t[2]};
        if (h.contains_unsorted(e)) {
            ++count;
            if (neighbors)
                neighbors->push_back(i);
        }
    }
    // ((|A''| - count) / |A''|)^4 <= 40^4 alpha
    const i128 miss = static_cast<i128>(a.size() - count);
    const i128 total = static_cast<i128>(a.size());
    return miss * miss * miss * miss * alpha.denominator() <=
           static_cast<i128>(2560000) * alpha.numerator() * total * total * total * total;
}

}  // namespace

std::optional<Matching> extremal_matcher(const Hypergraph& h, const VertexSet& b_in, Rational alpha,
                                         std::uint64_t seed, unsigned retries)
{
    const Vertex n = h.num_vertices();
    if (h.uniformity() != 4 || n % 4 != 0 || n == 0 || alpha <= Rational(0))
        return std::nullopt;
    std::vector<char> in_b(n, 0);
    for (Vertex v : b_in)
        if (v < n)
            in_b[v] = 1;

    // (1) |A| = n/4.
    auto count_a = [&] { return static_cast<std::size_t>(std::count(in_b.begin(), in_b.end(), 0)); };
    while (count_a() != n / 4) {
        auto deg = degrees_into(h, in_b);
        const bool shrink_a = count_a() > n / 4;
        Vertex pick = n;
        for (Vertex v = 0; v < n; ++v) {
            if (shrink_a == static_cast<bool>(in_b[v]))
                continue;
            if (pick == n || (shrink_a ? deg[v] < deg[pick] : deg[v] > deg[pick]))
                pick = v;
        }
        in_b[pick] = shrink_a ? 1 : 0;
    }

    // (2) exceptional classes; (3) exchanges until SX_A or SX_B is empty.
    const i128 p = alpha.numerator();
    const i128 q = alpha.denominator();
    const i128 nb = static_cast<i128>(binomial(3 * n / 4, 3));
    std::vector<char> x_a, sx_a, x_b, sx_b;
    auto classify_vertices = [&] {
        Sides s = measure(h, in_b);
        x_a.assign(n, 0), sx_a.assign(n, 0), x_b.assign(n, 0), sx_b.assign(n, 0);
        for (Vertex v = 0; v < n; ++v) {
            const i128 d = static_cast<i128>(s.deg[v]);
            if (!in_b[v]) {
                sx_a[v] = d * d * d * q < p * nb * nb * nb;
                x_a[v] = !sx_a[v] && (nb - d) * (nb - d) * q > p * nb * nb;
            } else {
                sx_b[v] = (nb - d) * (nb - d) * (nb - d) * q < p * nb * nb * nb;
                x_b[v] = !sx_b[v] && d * d * q > p * nb * nb;
            }
        }
    };
    classify_vertices();
    for (Vertex guard = 0; guard < n; ++guard) {
        auto a = std::find(sx_a.begin(), sx_a.end(), 1);
        auto b = std::find(sx_b.begin(), sx_b.end(), 1);
        if (a == sx_a.end() || b == sx_b.end())
            break;
        in_b[static_cast<std::size_t>(a - sx_a.begin())] = 1;
        in_b[static_cast<std::size_t>(b - sx_b.begin())] = 0;
        classify_vertices();
    }

    // (4) cover exceptional vertices.
    Greedy g(h, in_b);
    auto any = [](Vertex) { return true; };
    for (Vertex v = 0; v < n; ++v) {
        if (!sx_b[v] || g.is_used(v))
            continue;
        if (!g.take_with(v, {0, 3}, [&](Vertex u) { return !sx_b[u]; }))
            return std::nullopt;
        if (!g.take_any({2, 2}, [&](Vertex u) { return !in_b[u] || !x_b[u]; }))
            return std::nullopt;
    }
    for (Vertex v = 0; v < n; ++v)
        if (sx_a[v] && !g.is_used(v) && !g.take_with(v, {0, 3}, any))
            return std::nullopt;
    for (Vertex v = 0; v < n; ++v)
        if (x_a[v] && !g.is_used(v) && !g.take_with(v, {0, 3}, any))
            return std::nullopt;
    for (Vertex v = 0; v < n; ++v)
        if (x_b[v] && !g.is_used(v) && !g.take_with(v, {1, 2}, any))
            return std::nullopt;

    VertexSet a2, b2;
    for (Vertex v = 0; v < n; ++v)
        if (!g.is_used(v))
            (in_b[v] ? b2 : a2).push_back(v);
    if (b2.size() != 3 * a2.size())
        return std::nullopt;

    // (5) good triplets; (6) Hall finish.
    const std::size_t bsize = b2.size();
    std::size_t t1 = 0;
    {
        const i128 lhs_scale = 100000000;  // 100^4
        const i128 b4 = static_cast<i128>(bsize) * bsize * bsize * bsize;
        while (t1 < bsize / 3) {
            const i128 k3 = static_cast<i128>(3 * (t1 + 1));
            if (k3 * k3 * k3 * k3 * q > lhs_scale * p * b4)
                break;
            ++t1;
        }
    }
    for (unsigned attempt = 0; attempt < std::max(retries, 1U); ++attempt) {
        if (a2.empty())
            break;
        Rng rng = Rng::substream(seed, "extremal/t1", attempt);
        VertexSet shuffled = b2;
        rng.shuffle(shuffled);
        std::vector<std::array<Vertex, 3>> triples;
        std::vector<std::vector<std::size_t>> adjacency;
        bool ok = true;
        for (std::size_t k = 0; k < t1 && ok; ++k) {
            std::array<Vertex, 3> t{shuffled[3 * k], shuffled[3 * k + 1], shuffled[3 * k + 2]};
            std::sort(t.begin(), t.end());
            std::vector<std::size_t> nbrs;
            ok = good_triplet(h, a2, t, alpha, &nbrs);
            triples.push_back(t);
            adjacency.push_back(std::move(nbrs));
        }
        if (!ok)
            continue;
        VertexSet rest(shuffled.begin() + static_cast<std::ptrdiff_t>(3 * t1), shuffled.end());
        std::sort(rest.begin(), rest.end());
        if (!rest.empty()) {
            if (rest.size() > 64)
                return std::nullopt;
            std::vector<Edge> good;
            for (std::size_t i = 0; i < rest.size(); ++i)
                for (std::size_t j = i + 1; j < rest.size(); ++j)
                    for (std::size_t k = j + 1; k < rest.size(); ++k)
                        if (good_triplet(h, a2, {rest[i], rest[j], rest[k]}, alpha, nullptr))
                            good.push_back({static_cast<Vertex>(i), static_cast<Vertex>(j), static_cast<Vertex>(k)});
            auto cover = has_perfect_matching(Hypergraph(3, static_cast<Vertex>(rest.size()), std::move(good)));
            if (!cover)
                continue;
            for (const auto& e : cover->edges) {
                std::array<Vertex, 3> t{rest[e[0]], rest[e[1]], rest[e[2]]};
                std::vector<std::size_t> nbrs;
                good_triplet(h, a2, t, alpha, &nbrs);
                triples.push_back(t);
                adjacency.push_back(std::move(nbrs));
            }
        }
        BipartiteGraph bg{a2.size(), adjacency};
        auto hall = hall_matching(bg);
        if (!hall.assignment)
            continue;
        Matching m = g.matching;
        for (std::size_t t = 0; t < triples.size(); ++t)
            m.edges.push_back({a2[(*hall.assignment)[t]], triples[t][0], triples[t][1], triples[t][2]});
        for (auto& e : m.edges)
            std::sort(e.begin(), e.end());
        std::sort(m.edges.begin(), m.edges.end());
        if (validate_matching(h, m).perfect)
            return m;
    }
    if (a2.empty()) {
        Matching m = g.matching;
        for (auto& e : m.edges)
            std::sort(e.begin(), e.end());
        std::sort(m.edges.begin(), m.edges.end());
        if (validate_matching(h, m).perfect)
            return m;
    }
    return std::nullopt;
}

}  // namespace hypermatch
