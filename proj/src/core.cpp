#include "hypermatch/core.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace hypermatch {

namespace {

constexpr std::uint64_t kMaxRankIndexBits = std::uint64_t{1} << 26;

std::vector<char> membership(Vertex n, std::span<const Vertex> u)
{
    std::vector<char> in(n, 0);
    for (Vertex v : u) {
        if (v >= n)
            throw Error(Errc::InvalidVertex, "vertex " + std::to_string(v) + " out of range");
        in[v] = 1;
    }
    return in;
}

}  // namespace

const char* to_string(Errc code)
{
    switch (code) {
    case Errc::InvalidEdge: return "InvalidEdge";
    case Errc::InvalidDegreeOrder: return "InvalidDegreeOrder";
    case Errc::InvalidVertex: return "InvalidVertex";
    case Errc::TooSmall: return "TooSmall";
    case Errc::InvalidPartition: return "InvalidPartition";
    case Errc::Indivisible: return "Indivisible";
    case Errc::Infeasible: return "Infeasible";
    case Errc::NotDisjoint: return "NotDisjoint";
    case Errc::InsufficientDensity: return "InsufficientDensity";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::NotApplicable: return "NotApplicable";
    case Errc::LemmaViolation: return "LemmaViolation";
    case Errc::AbsorptionFailed: return "AbsorptionFailed";
    case Errc::Parse: return "Parse";
    case Errc::TooLarge: return "TooLarge";
    }
    return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
{
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k)
{
    if (k > n)
        return 0;
    k = std::min(k, n - k);
    unsigned __int128 acc = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        acc = acc * (n - k + i) / i;
        if (acc > std::numeric_limits<std::uint64_t>::max())
            throw Error(Errc::TooLarge, "binomial overflow");
    }
    return static_cast<std::uint64_t>(acc);
}

Hypergraph::Hypergraph(unsigned r, Vertex n, std::vector<Edge> edges) : r_(r), n_(n)
{
    if (r < 2 || n < r)
        throw Error(Errc::InvalidEdge, "need r >= 2 and n >= r");
    for (auto& e : edges) {
        if (e.size() != r)
            throw Error(Errc::InvalidEdge, "edge of wrong arity");
        std::sort(e.begin(), e.end());
        if (std::adjacent_find(e.begin(), e.end()) != e.end())
            throw Error(Errc::InvalidEdge, "edge with repeated vertex");
        if (e.back() >= n)
            throw Error(Errc::InvalidEdge, "edge vertex out of range");
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        throw Error(Errc::InvalidEdge, "duplicate edge");

    edges_.reserve(edges.size() * r);
    for (const auto& e : edges)
        edges_.insert(edges_.end(), e.begin(), e.end());

    const std::size_t m = edges.size();
    incidence_.assign(n, DynBitset(m));
    for (std::size_t i = 0; i < m; ++i)
        for (unsigned j = 0; j < r; ++j)
            incidence_[edges_[i * r + j]].set(i);

    binom_.assign(static_cast<std::size_t>(n + 1) * (r + 1), 0);
    for (Vertex v = 0; v <= n; ++v)
        for (unsigned k = 0; k <= r; ++k)
            binom_[v * (r + 1) + k] = k > v ? 0 : binomial(v, k);

    std::uint64_t universe = 0;
    try {
        universe = binomial(n, r);
    } catch (const Error&) {
        universe = std::numeric_limits<std::uint64_t>::max();
    }
    if (universe <= kMaxRankIndexBits) {
        rank_index_ = DynBitset(universe);
        for (std::size_t i = 0; i < m; ++i)
            rank_index_.set(rank(edge(i)));
    }
}

Hypergraph Hypergraph::complete(unsigned r, Vertex n)
{
    std::vector<Edge> edges;
    Edge e(r);
    std::iota(e.begin(), e.end(), 0);
    if (n >= r) {
        while (true) {
            edges.push_back(e);
            int i = static_cast<int>(r) - 1;
            while (i >= 0 && e[i] == n - r + static_cast<Vertex>(i))
                --i;
            if (i < 0)
                break;
            ++e[i];
            for (unsigned j = i + 1; j < r; ++j)
                e[j] = e[j - 1] + 1;
        }
    }
    return Hypergraph(r, n, std::move(edges));
}

std::vector<Edge> Hypergraph::edge_list() const
{
    std::vector<Edge> out;
    out.reserve(num_edges());
    for (std::size_t i = 0; i < num_edges(); ++i) {
        auto e = edge(i);
        out.emplace_back(e.begin(), e.end());
    }
    return out;
}

std::uint64_t Hypergraph::rank(std::span<const Vertex> vertices) const
{
    std::uint64_t acc = 0;
    for (unsigned i = 0; i < r_; ++i)
        acc += binom_[vertices[i] * (r_ + 1) + i + 1];
    return acc;
}

bool Hypergraph::contains(std::span<const Vertex> vertices) const
{
    if (vertices.size() != r_ || vertices.back() >= n_)
        return false;
    if (rank_index_.size() != 0)
        return rank_index_.test(rank(vertices));
    std::size_t lo = 0;
    std::size_t hi = num_edges();
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        auto e = edge(mid);
        if (std::lexicographical_compare(e.begin(), e.end(), vertices.begin(), vertices.end()))
            lo = mid + 1;
        else
            hi = mid;
    }
    return lo < num_edges() && std::equal(vertices.begin(), vertices.end(), edge(lo).begin());
}

bool Hypergraph::contains_unsorted(std::span<const Vertex> vertices) const
{
    Vertex buf[16];
    if (vertices.size() != r_ || r_ > 16)
        return false;
    std::copy(vertices.begin(), vertices.end(), buf);
    std::sort(buf, buf + r_);
    if (std::adjacent_find(buf, buf + r_) != buf + r_)
        return false;
    return contains({buf, r_});
}

VertexSet Matching::vertices() const
{
    VertexSet out;
    for (const auto& e : edges)
        out.insert(out.end(), e.begin(), e.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::uint64_t degree(const Hypergraph& h, std::span<const Vertex> d)
{
    if (d.empty() || d.size() >= h.uniformity())
        throw Error(Errc::InvalidDegreeOrder, "|D| must lie in [1, r-1]");
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i] >= h.num_vertices())
            throw Error(Errc::InvalidVertex, "vertex " + std::to_string(d[i]) + " out of range");
        for (std::size_t j = 0; j < i; ++j)
            if (d[i] == d[j])
                throw Error(Errc::InvalidVertex, "repeated vertex in D");
    }
    if (d.size() == 1)
        return h.vertex_degree(d[0]);
    DynBitset acc = h.incident(d[0]);
    for (std::size_t i = 1; i + 1 < d.size(); ++i)
        acc &= h.incident(d[i]);
    return acc.count_and(h.incident(d.back()));
}

std::uint64_t min_degree(const Hypergraph& h, unsigned d)
{
    const Vertex n = h.num_vertices();
    if (d == 0 || d >= h.uniformity())
        throw Error(Errc::InvalidDegreeOrder, "d must lie in [1, r-1]");
    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
    std::vector<Vertex> combo(d);
    std::iota(combo.begin(), combo.end(), 0);
    while (true) {
        best = std::min(best, degree(h, combo));
        int i = static_cast<int>(d) - 1;
        while (i >= 0 && combo[i] == n - d + static_cast<Vertex>(i))
            --i;
        if (i < 0)
            break;
        ++combo[i];
        for (unsigned j = i + 1; j < d; ++j)
            combo[j] = combo[j - 1] + 1;
    }
    return best;
}

std::uint64_t edges_inside(const Hypergraph& h, std::span<const Vertex> u)
{
    auto in = membership(h.num_vertices(), u);
    std::uint64_t count = 0;
    for (std::size_t i = 0; i < h.num_edges(); ++i) {
        bool inside = true;
        for (Vertex v : h.edge(i))
            if (!in[v]) {
                inside = false;
                break;
            }
        count += inside;
    }
    return count;
}

Rational density(const Hypergraph& h, std::span<const Vertex> u)
{
    PartiteSpec parts{{VertexSet(u.begin(), u.end())}};
    return partite_density(h, DensityKind::Restriction, parts);
}

void check_partition(Vertex n, const PartiteSpec& parts)
{
    std::vector<char> seen(n, 0);
    for (const auto& cls : parts.classes) {
        if (cls.empty())
            throw Error(Errc::InvalidPartition, "empty class");
        for (Vertex v : cls) {
            if (v >= n)
                throw Error(Errc::InvalidPartition, "class vertex out of range");
            if (seen[v])
                throw Error(Errc::InvalidPartition, "classes overlap at vertex " + std::to_string(v));
            seen[v] = 1;
        }
    }
}

std::pair<std::uint64_t, std::uint64_t> partite_counts(const Hypergraph& h, DensityKind kind,
                                                       const PartiteSpec& parts)
{
    const unsigned r = h.uniformity();
    std::size_t arity = 0;
    switch (kind) {
    case DensityKind::Restriction: arity = 1; break;
    case DensityKind::OneVsRest: arity = 2; break;
    case DensityKind::PairVsRest: arity = 3; break;
    case DensityKind::Transversal: arity = r; break;
    }
    if (parts.classes.size() != arity)
        throw Error(Errc::InvalidPartition, "wrong number of parts for density kind");
    if (kind == DensityKind::Restriction) {
        for (Vertex v : parts.classes[0])
            if (v >= h.num_vertices())
                throw Error(Errc::InvalidVertex, "vertex out of range");
        if (parts.classes[0].size() < r)
            throw Error(Errc::TooSmall, "|U| < r");
    } else {
        check_partition(h.num_vertices(), parts);
    }

    std::vector<std::size_t> sizes;
    for (const auto& c : parts.classes)
        sizes.push_back(c.size());

    std::uint64_t denom = 0;
    std::vector<unsigned> want(arity, 1);
    switch (kind) {
    case DensityKind::Restriction:
        denom = binomial(sizes[0], r);
        want[0] = r;
        break;
    case DensityKind::OneVsRest:
        denom = sizes[0] * binomial(sizes[1], r - 1);
        want[1] = r - 1;
        break;
    case DensityKind::PairVsRest:
        denom = sizes[0] * sizes[1] * binomial(sizes[2], r - 2);
        want[2] = r - 2;
        break;
    case DensityKind::Transversal:
        denom = 1;
        for (auto s : sizes)
            denom *= s;
        break;
    }
    if (denom == 0)
        throw Error(Errc::TooSmall, "parts too small for density kind");

    std::vector<int> role(h.num_vertices(), -1);
    for (std::size_t c = 0; c < arity; ++c)
        for (Vertex v : parts.classes[c])
            role[v] = static_cast<int>(c);

    std::uint64_t count = 0;
    std::vector<unsigned> tally(arity);
    auto matches = [&](std::span<const Vertex> e) {
        std::fill(tally.begin(), tally.end(), 0);
        for (Vertex v : e) {
            int c = role[v];
            if (c < 0)
                return false;
            if (++tally[c] > want[c])
                return false;
        }
        return true;  // sizes sum to r, so no class can be short
    };

    if (kind == DensityKind::Restriction) {
        for (std::size_t i = 0; i < h.num_edges(); ++i)
            count += matches(h.edge(i));
    } else {
        // Every counted edge has exactly one vertex in class 0.
        for (Vertex a : parts.classes[0]) {
            const auto& inc = h.incident(a);
            for (std::size_t i = inc.find_first(); i < inc.size(); i = inc.find_next(i + 1))
                count += matches(h.edge(i));
        }
    }
    return {count, denom};
}

Rational partite_density(const Hypergraph& h, DensityKind kind, const PartiteSpec& parts)
{
    auto [num, den] = partite_counts(h, kind, parts);
    if (den > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
        throw Error(Errc::TooLarge, "density denominator overflow");
    return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

Hypergraph induce(const Hypergraph& h, std::span<const Vertex> u)
{
    auto sorted = make_vertex_set(VertexSet(u.begin(), u.end()));
    std::vector<std::int64_t> label(h.num_vertices(), -1);
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i] >= h.num_vertices())
            throw Error(Errc::InvalidVertex, "vertex out of range");
        label[sorted[i]] = static_cast<std::int64_t>(i);
    }
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < h.num_edges(); ++i) {
        Edge e;
        bool inside = true;
        for (Vertex v : h.edge(i)) {
            if (label[v] < 0) {
                inside = false;
                break;
            }
            e.push_back(static_cast<Vertex>(label[v]));
        }
        if (inside)
            edges.push_back(std::move(e));
    }
    // An induced graph on fewer than r vertices is still r-uniform; keep n >= r.
    const auto n = std::max<Vertex>(static_cast<Vertex>(sorted.size()), h.uniformity());
    return Hypergraph(h.uniformity(), n, std::move(edges));
}

MatchingCheck validate_matching(const Hypergraph& h, const Matching& m)
{
    MatchingCheck out;
    std::vector<char> used(h.num_vertices(), 0);
    for (const auto& e : m.edges) {
        if (e.size() != h.uniformity())
            return out;
        Edge sorted = e;
        std::sort(sorted.begin(), sorted.end());
        if (sorted.back() >= h.num_vertices() || !h.contains(sorted))
            return out;
        for (Vertex v : sorted) {
            if (used[v])
                return out;
            used[v] = 1;
        }
    }
    out.valid = true;
    out.perfect = m.size() * h.uniformity() == h.num_vertices();
    return out;
}

VertexSet make_vertex_set(std::vector<Vertex> vertices)
{
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    return vertices;
}

VertexSet set_difference(std::span<const Vertex> a, std::span<const Vertex> b)
{
    VertexSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

VertexSet set_union(std::span<const Vertex> a, std::span<const Vertex> b)
{
    VertexSet out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool disjoint(std::span<const Vertex> a, std::span<const Vertex> b)
{
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i == *j)
            return false;
        if (*i < *j)
            ++i;
        else
            ++j;
    }
    return true;
}

}  // namespace hypermatch
