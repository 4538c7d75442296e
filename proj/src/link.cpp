#include "hypermatch/link.hpp"

#include <algorithm>
#include <bit>

#include "hypermatch/solve.hpp"

namespace hypermatch {

std::string to_hex(LinkGraph g)
{
    static const char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[15 - i] = digits[(g.mask >> (4 * i)) & 0xF];
    }
    return out;
}

LinkGraph link_from_hex(std::string_view text)
{
    if (text.size() == 18 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X'))
        text.remove_prefix(2);
    if (text.size() != 16)
        throw Error(Errc::Parse, "link graph must be 16 hex digits");
    std::uint64_t mask = 0;
    for (char c : text) {
        unsigned d;
        if (c >= '0' && c <= '9')
            d = static_cast<unsigned>(c - '0');
        else if (c >= 'a' && c <= 'f')
            d = static_cast<unsigned>(c - 'a' + 10);
        else if (c >= 'A' && c <= 'F')
            d = static_cast<unsigned>(c - 'A' + 10);
        else
            throw Error(Errc::Parse, std::string("invalid hex digit '") + c + "'");
        mask = (mask << 4) | d;
    }
    return LinkGraph{mask};
}

const char* to_string(PatternKind kind)
{
    switch (kind) {
    case PatternKind::H432: return "H432";
    case PatternKind::H4221: return "H4221";
    case PatternKind::H3321: return "H3321";
    }
    return "?";
}

std::vector<unsigned> required_degrees(PatternKind kind)
{
    switch (kind) {
    case PatternKind::H432: return {4, 3, 2};
    case PatternKind::H4221: return {4, 2, 2, 1};
    case PatternKind::H3321: return {3, 3, 2, 1};
    }
    return {};
}

const char* to_string(Side side)
{
    switch (side) {
    case Side::Q01: return "Q01";
    case Side::Q02: return "Q02";
    case Side::Q12: return "Q12";
    }
    return "?";
}

std::array<unsigned, 3> side_classes(Side side)
{
    switch (side) {
    case Side::Q01: return {0, 1, 2};
    case Side::Q02: return {0, 2, 1};
    case Side::Q12: return {1, 2, 0};
    }
    return {0, 1, 2};
}

const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::PerfectMatching: return "PerfectMatching";
    case Verdict::H432: return "H432";
    case Verdict::H4221: return "H4221";
    case Verdict::H3321: return "H3321";
    case Verdict::Ext: return "Ext";
    }
    return "?";
}

unsigned pair_degree(LinkGraph g, Side side, unsigned x, unsigned y)
{
    const auto cls = side_classes(side);
    unsigned count = 0;
    std::array<unsigned, 3> idx{};
    idx[cls[0]] = x;
    idx[cls[1]] = y;
    for (unsigned z = 0; z < 4; ++z) {
        idx[cls[2]] = z;
        count += g.test(idx[0], idx[1], idx[2]);
    }
    return count;
}

unsigned crossing_degree_sum(LinkGraph g, Side side, VertexPair p1, VertexPair p2)
{
    if (p1.first == p2.first || p1.second == p2.second)
        throw Error(Errc::NotDisjoint, "pairs share a vertex");
    return pair_degree(g, side, p1.first, p2.second) + pair_degree(g, side, p2.first, p1.second);
}

namespace {

bool dominates(std::vector<unsigned> degrees, const std::vector<unsigned>& required)
{
    if (degrees.size() != required.size())
        return false;
    std::sort(degrees.begin(), degrees.end(), std::greater<>());
    for (std::size_t i = 0; i < required.size(); ++i)
        if (degrees[i] < required[i])
            return false;
    return true;
}

constexpr std::array<std::array<std::uint8_t, 3>, 4> kTriples{{{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}};

}  // namespace

std::optional<PairSystem> detect_pattern(LinkGraph g, PatternKind kind)
{
    const auto required = required_degrees(kind);
    const std::size_t size = required.size();
    for (Side side : {Side::Q01, Side::Q02, Side::Q12}) {
        std::array<unsigned, 16> deg{};
        for (unsigned x = 0; x < 4; ++x)
            for (unsigned y = 0; y < 4; ++y)
                deg[4 * x + y] = pair_degree(g, side, x, y);

        std::array<std::uint8_t, 4> perm{0, 1, 2, 3};
        do {
            auto try_indices = [&](const std::uint8_t* idx) -> std::optional<PairSystem> {
                PairSystem sys;
                sys.side = side;
                for (std::size_t t = 0; t < size; ++t) {
                    std::uint8_t x = idx[t];
                    sys.pairs.emplace_back(x, perm[x]);
                    sys.degrees.push_back(deg[4 * x + perm[x]]);
                }
                if (dominates(sys.degrees, required))
                    return sys;
                return std::nullopt;
            };
            if (size == 4) {
                static constexpr std::uint8_t all[4] = {0, 1, 2, 3};
                if (auto s = try_indices(all))
                    return s;
            } else {
                for (const auto& t : kTriples)
                    if (auto s = try_indices(t.data()))
                        return s;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return std::nullopt;
}

bool verify_pair_system(LinkGraph g, PatternKind kind, const PairSystem& system)
{
    const auto required = required_degrees(kind);
    if (system.pairs.size() != required.size() || system.degrees.size() != required.size())
        return false;
    std::vector<unsigned> recomputed;
    for (std::size_t a = 0; a < system.pairs.size(); ++a) {
        const auto [x, y] = system.pairs[a];
        if (x > 3 || y > 3)
            return false;
        for (std::size_t b = 0; b < a; ++b)
            if (system.pairs[b].first == x || system.pairs[b].second == y)
                return false;
        recomputed.push_back(pair_degree(g, system.side, x, y));
        if (recomputed.back() != system.degrees[a])
            return false;
    }
    return dominates(recomputed, required);
}

std::optional<Triple> is_ext(LinkGraph g)
{
    if (g.popcount() != 37)
        return std::nullopt;
    for (std::uint8_t a = 0; a < 4; ++a)
        for (std::uint8_t b = 0; b < 4; ++b)
            for (std::uint8_t c = 0; c < 4; ++c) {
                bool covered = true;
                for (std::uint64_t t = g.mask; t != 0 && covered; t &= t - 1) {
                    unsigned bit = static_cast<unsigned>(std::countr_zero(t));
                    covered = bit / 16 == a || (bit / 4) % 4 == b || bit % 4 == c;
                }
                if (covered)
                    return Triple{a, b, c};
            }
    return std::nullopt;
}

Classification classify(LinkGraph g)
{
    if (g.popcount() < 37)
        throw Error(Errc::NotApplicable, "classification needs at least 37 edges");
    Classification out;
    if (auto pm = tripartite_pm_444(g)) {
        out.verdict = Verdict::PerfectMatching;
        out.matching = pm;
        return out;
    }
    static constexpr std::array<std::pair<PatternKind, Verdict>, 3> order{{
        {PatternKind::H432, Verdict::H432},
        {PatternKind::H4221, Verdict::H4221},
        {PatternKind::H3321, Verdict::H3321},
    }};
    for (auto [kind, verdict] : order) {
        if (auto sys = detect_pattern(g, kind)) {
            out.verdict = verdict;
            out.pairs = std::move(sys);
            return out;
        }
    }
    if (auto cover = is_ext(g)) {
        out.verdict = Verdict::Ext;
        out.cover = cover;
        return out;
    }
    throw Error(Errc::LemmaViolation, "no case applies to " + to_hex(g));
}

bool verify_classification(LinkGraph g, const Classification& c)
{
    switch (c.verdict) {
    case Verdict::PerfectMatching: {
        if (!c.matching)
            return false;
        std::array<bool, 4> seen[3]{};
        for (const auto& t : *c.matching) {
            if (t[0] > 3 || t[1] > 3 || t[2] > 3 || !g.test(t[0], t[1], t[2]))
                return false;
            for (int p = 0; p < 3; ++p) {
                if (seen[p][t[p]])
                    return false;
                seen[p][t[p]] = true;
            }
        }
        return true;
    }
    case Verdict::H432: return c.pairs && verify_pair_system(g, PatternKind::H432, *c.pairs);
    case Verdict::H4221: return c.pairs && verify_pair_system(g, PatternKind::H4221, *c.pairs);
    case Verdict::H3321: return c.pairs && verify_pair_system(g, PatternKind::H3321, *c.pairs);
    case Verdict::Ext: {
        if (!c.cover || g.popcount() != 37)
            return false;
        const auto [a, b, cc] = *c.cover;
        for (unsigned i = 0; i < 4; ++i)
            for (unsigned j = 0; j < 4; ++j)
                for (unsigned k = 0; k < 4; ++k)
                    if (g.test(i, j, k) && i != a && j != b && k != cc)
                        return false;
        return true;
    }
    }
    return false;
}

LinkGraph apply(const LinkSymmetry& s, LinkGraph g)
{
    LinkGraph out;
    for (std::uint64_t t = g.mask; t != 0; t &= t - 1) {
        unsigned bit = static_cast<unsigned>(std::countr_zero(t));
        std::array<unsigned, 3> old{bit / 16, (bit / 4) % 4, bit % 4};
        std::array<unsigned, 3> now{};
        for (unsigned c = 0; c < 3; ++c)
            now[c] = s.labels[c][old[s.class_perm[c]]];
        out.set(now[0], now[1], now[2]);
    }
    return out;
}

std::uint64_t canonical_form(LinkGraph g)
{
    // For fixed relabelings of the first two (new) classes, the mask is an
    // interleaving of four column words, one per label of the third class,
    // with no carries between them. Giving the largest column the lowest
    // label minimizes the mask, so only 6 * 24 * 24 cases remain.
    static const auto perms = [] {
        std::vector<std::array<std::uint8_t, 4>> out;
        std::array<std::uint8_t, 4> p{0, 1, 2, 3};
        do
            out.push_back(p);
        while (std::next_permutation(p.begin(), p.end()));
        return out;
    }();
    static constexpr std::array<std::array<std::uint8_t, 3>, 6> class_perms{
        {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};

    std::uint64_t best = ~std::uint64_t{0};
    for (const auto& cp : class_perms) {
        // nib[u0][u1]: bits over u2, coordinates taken in class order cp.
        std::array<std::array<std::uint8_t, 4>, 4> nib{};
        for (std::uint64_t t = g.mask; t != 0; t &= t - 1) {
            unsigned bit = static_cast<unsigned>(std::countr_zero(t));
            std::array<unsigned, 3> old{bit / 16, (bit / 4) % 4, bit % 4};
            nib[old[cp[0]]][old[cp[1]]] |= static_cast<std::uint8_t>(1U << old[cp[2]]);
        }
        for (const auto& s0 : perms) {
            for (const auto& s1 : perms) {
                std::array<std::uint64_t, 4> col{};
                for (unsigned u0 = 0; u0 < 4; ++u0)
                    for (unsigned u1 = 0; u1 < 4; ++u1) {
                        const unsigned n = nib[u0][u1];
                        if (n == 0)
                            continue;
                        const unsigned pos = 4 * (4 * s0[u0] + s1[u1]);
                        for (unsigned u2 = 0; u2 < 4; ++u2)
                            if (n & (1U << u2))
                                col[u2] |= std::uint64_t{1} << pos;
                    }
                std::sort(col.begin(), col.end(), std::greater<>());
                const std::uint64_t m = col[0] | (col[1] << 1) | (col[2] << 2) | (col[3] << 3);
                best = std::min(best, m);
            }
        }
    }
    return best;
}

LinkGraph build_link_graph(const Hypergraph& h, const std::array<Block, 3>& blocks, const VertexSet& z,
                           Rational eta)
{
    PartiteSpec all;
    for (const auto& b : blocks) {
        if (b.classes.size() != 4)
            throw Error(Errc::InvalidPartition, "blocks must have four classes");
        for (const auto& c : b.classes)
            all.classes.push_back(c);
    }
    all.classes.push_back(z);
    check_partition(h.num_vertices(), all);

    // role[v] = 1 + 4 * block + class for block vertices, 13 for Z.
    std::vector<std::uint8_t> role(h.num_vertices(), 0);
    for (unsigned b = 0; b < 3; ++b)
        for (unsigned c = 0; c < 4; ++c)
            for (Vertex v : blocks[b].classes[c])
                role[v] = static_cast<std::uint8_t>(1 + 4 * b + c);
    for (Vertex v : z)
        role[v] = 13;

    std::array<std::uint64_t, 64> count{};
    for (Vertex zv : z) {
        const auto& inc = h.incident(zv);
        for (std::size_t e = inc.find_first(); e < inc.size(); e = inc.find_next(e + 1)) {
            std::array<int, 3> cls{-1, -1, -1};
            bool ok = h.uniformity() == 4;
            for (Vertex v : h.edge(e)) {
                if (!ok || v == zv)
                    continue;
                int r = role[v];
                if (r == 0 || r == 13) {
                    ok = false;
                    break;
                }
                int b = (r - 1) / 4;
                if (cls[b] >= 0) {
                    ok = false;
                    break;
                }
                cls[b] = (r - 1) % 4;
            }
            if (ok)
                ++count[LinkGraph::index(cls[0], cls[1], cls[2])];
        }
    }

    LinkGraph out;
    const auto num = static_cast<unsigned __int128>(eta.numerator());
    const auto den = static_cast<unsigned __int128>(eta.denominator());
    for (unsigned i = 0; i < 4; ++i)
        for (unsigned j = 0; j < 4; ++j)
            for (unsigned k = 0; k < 4; ++k) {
                unsigned __int128 total = static_cast<unsigned __int128>(z.size()) * blocks[0].classes[i].size() *
                                          blocks[1].classes[j].size() * blocks[2].classes[k].size();
                // count / total >= 2 eta
                if (static_cast<unsigned __int128>(count[LinkGraph::index(i, j, k)]) * den >= 2 * num * total)
                    out.set(i, j, k);
            }
    return out;
}

}  // namespace hypermatch
