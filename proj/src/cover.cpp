#include <algorithm>
#include <functional>

#include "hypermatch/pipeline.hpp"

#include <array>
#include "hypermatch/rng.hpp"
#include "hypermatch/solve.hpp"

namespace hypermatch {

namespace {

VertexSet block_vertices(const MultipartiteWitness& w)
{
    VertexSet out;
    for (const auto& c : w.classes)
        out.insert(out.end(), c.begin(), c.end());
    return make_vertex_set(std::move(out));
}

// Keeps the `size` lowest vertices of `cls`; the rest go to `discarded`.
void shrink_class(VertexSet& cls, std::size_t size, VertexSet& discarded)
{
    if (cls.size() <= size)
        return;
    discarded.insert(discarded.end(), cls.begin() + static_cast<std::ptrdiff_t>(size), cls.end());
    cls.resize(size);
}

bool meets_density(const Hypergraph& h, DensityKind kind, const PartiteSpec& parts, Rational eta)
{
    try {
        return partite_density(h, kind, parts) >= 2 * eta;
    } catch (const Error& e) {
        if (e.code() == Errc::TooSmall || e.code() == Errc::InvalidPartition)
            return false;
        throw;
    }
}

std::size_t cover_size(const Cover& c)
{
    std::size_t total = 0;
    for (const auto& b : c.blocks)
        for (const auto& cls : b.classes)
            total += cls.size();
    return total;
}

// Rebalances a partly consumed block to its smallest class and appends it if
// anything remains.
void settle_block(MultipartiteWitness block, std::vector<MultipartiteWitness>& out, VertexSet& discarded)
{
    std::size_t smallest = block.classes.front().size();
    for (const auto& c : block.classes)
        smallest = std::min(smallest, c.size());
    for (auto& c : block.classes)
        shrink_class(c, smallest, discarded);
    if (smallest > 0)
        out.push_back(std::move(block));
    else
        for (auto& c : block.classes)
            discarded.insert(discarded.end(), c.begin(), c.end());
}

ExtendResult finish(const Cover& before, std::vector<MultipartiteWitness> blocks, VertexSet leftover,
                    unsigned size, ExtendResult out)
{
    Cover next;
    next.blocks = std::move(blocks);
    next.leftover = make_vertex_set(std::move(leftover));
    next.m = before.m;
    out.cover = split_blocks(next, size);
    const std::size_t old_size = cover_size(before);
    const std::size_t new_size = cover_size(out.cover);
    out.gain = new_size > old_size ? new_size - old_size : 0;
    return out;
}

}  // namespace

bool cover_valid(const Hypergraph& h, const Cover& cover)
{
    std::vector<char> seen(h.num_vertices(), 0);
    auto claim = [&](Vertex v) {
        if (v >= h.num_vertices() || seen[v])
            return false;
        seen[v] = 1;
        return true;
    };
    for (const auto& b : cover.blocks) {
        if (b.classes.size() != 4)
            return false;
        for (const auto& c : b.classes) {
            if (c.size() != cover.m)
                return false;
            for (Vertex v : c)
                if (!claim(v))
                    return false;
        }
        if (!is_complete(h, b))
            return false;
    }
    for (Vertex v : cover.leftover)
        if (!claim(v))
            return false;
    return true;
}

void validate_config(const PipelineConfig& cfg)
{
    if (!(cfg.gamma > Rational(0) && cfg.gamma <= cfg.alpha && cfg.alpha <= Rational(1)))
        throw Error(Errc::InvalidPartition, "need 0 < gamma <= alpha <= 1");
    if (cfg.l == 0 || cfg.pull_size == 0)
        throw Error(Errc::InvalidPartition, "class sizes must be positive");
    if (cfg.eta <= Rational(0))
        throw Error(Errc::InvalidPartition, "eta must be positive");
}

Rational filtered_density(const Hypergraph& h, const PartiteSpec& groups)
{
    if (h.uniformity() != 4)
        throw Error(Errc::InvalidEdge, "filtered density expects a 4-graph");
    check_partition(h.num_vertices(), groups);
    std::vector<std::int64_t> group_of(h.num_vertices(), -1);
    // e[k] = number of k-sets with at most one vertex per group.
    std::array<std::uint64_t, 5> e{1, 0, 0, 0, 0};
    for (std::size_t g = 0; g < groups.classes.size(); ++g) {
        for (Vertex v : groups.classes[g])
            group_of[v] = static_cast<std::int64_t>(g);
        const std::uint64_t size = groups.classes[g].size();
        for (std::size_t k = 4; k > 0; --k)
            e[k] += e[k - 1] * size;
    }
    if (e[4] == 0)
        throw Error(Errc::TooSmall, "fewer than four nonempty groups");
    std::uint64_t hits = 0;
    for (std::size_t i = 0; i < h.num_edges(); ++i) {
        std::array<std::int64_t, 4> gs{};
        bool ok = true;
        for (unsigned j = 0; j < 4 && ok; ++j) {
            gs[j] = group_of[h.edge(i)[j]];
            ok = gs[j] >= 0;
            for (unsigned k = 0; k < j && ok; ++k)
                ok = gs[k] != gs[j];
        }
        hits += ok ? 1 : 0;
    }
    return Rational(static_cast<std::int64_t>(hits), static_cast<std::int64_t>(e[4]));
}

Cover split_blocks(const Cover& cover, unsigned size)
{
    Cover out;
    out.m = size;
    VertexSet leftover = cover.leftover;
    for (const auto& b : cover.blocks) {
        const std::size_t m = b.classes.front().size();
        const std::size_t pieces = m / size;
        for (std::size_t p = 0; p < pieces; ++p) {
            MultipartiteWitness piece;
            piece.roles = b.roles;
            piece.method = b.method;
            for (const auto& c : b.classes)
                piece.classes.emplace_back(c.begin() + static_cast<std::ptrdiff_t>(p * size),
                                           c.begin() + static_cast<std::ptrdiff_t>((p + 1) * size));
            out.blocks.push_back(std::move(piece));
        }
        for (const auto& c : b.classes)
            leftover.insert(leftover.end(), c.begin() + static_cast<std::ptrdiff_t>(pieces * size), c.end());
    }
    out.leftover = make_vertex_set(std::move(leftover));
    return out;
}

Matching cover_to_matching(const Cover& cover)
{
    Matching m;
    for (const auto& b : cover.blocks) {
        const std::size_t size = b.classes.front().size();
        for (std::size_t i = 0; i < size; ++i) {
            Edge e;
            for (const auto& c : b.classes)
                e.push_back(c[i]);
            std::sort(e.begin(), e.end());
            m.edges.push_back(std::move(e));
        }
    }
    std::sort(m.edges.begin(), m.edges.end());
    return m;
}

Cover build_initial_cover(const Hypergraph& h, const VertexSet& domain, const PipelineConfig& cfg)
{
    Cover cover;
    cover.m = cfg.l;
    cover.leftover = make_vertex_set(domain);
    const Rational gamma_n = cfg.gamma * static_cast<std::int64_t>(h.num_vertices());
    while (Rational(static_cast<std::int64_t>(cover.leftover.size())) >= gamma_n &&
           cover.leftover.size() >= 4 * static_cast<std::size_t>(cfg.l)) {
        Hypergraph sub = induce(h, cover.leftover);
        auto w = find_complete_r_partite(sub, cfg.l, cfg.extract_budget);
        if (!w)
            break;
        for (auto& c : w->classes)
            for (auto& v : c)
                v = cover.leftover[v];
        cover.leftover = set_difference(cover.leftover, block_vertices(*w));
        cover.blocks.push_back(std::move(*w));
    }
    return cover;
}

Cover build_initial_cover(const Hypergraph& h, const PipelineConfig& cfg)
{
    VertexSet all(h.num_vertices());
    for (Vertex v = 0; v < h.num_vertices(); ++v)
        all[v] = v;
    return build_initial_cover(h, all, cfg);
}

ExtendResult extend_cover_two_classes(const Hypergraph& h, const Cover& cover, const PipelineConfig& cfg)
{
    const std::size_t s = cfg.pull_size;
    VertexSet pool = cover.leftover;
    std::vector<MultipartiteWitness> blocks;
    VertexSet discarded;

    for (const auto& block : cover.blocks) {
        const std::size_t m = block.classes.front().size();
        if (m < s || pool.size() < 6 * s) {
            blocks.push_back(block);
            continue;
        }
        std::vector<unsigned> connected;
        for (unsigned c = 0; c < 4; ++c)
            if (meets_density(h, DensityKind::OneVsRest, PartiteSpec{{block.classes[c], pool}}, cfg.eta))
                connected.push_back(c);
        if (connected.size() < 2) {
            blocks.push_back(block);
            continue;
        }
        const unsigned c1 = connected[0];
        const unsigned c2 = connected[1];
        std::optional<MultipartiteWitness> x1, x2;
        VertexSet rest;
        try {
            x1 = extract_one_three(h, block.classes[c1], pool, cfg.eta, static_cast<unsigned>(s),
                                   cfg.extract_budget);
            if (x1) {
                rest = set_difference(pool, block_vertices(*x1));
                x2 = extract_one_three(h, block.classes[c2], rest, cfg.eta, static_cast<unsigned>(s),
                                       cfg.extract_budget);
            }
        } catch (const Error& e) {
            if (e.code() != Errc::InsufficientDensity)
                throw;
            x2.reset();
        }
        if (!x1 || !x2) {
            blocks.push_back(block);
            continue;
        }
        pool = set_difference(rest, block_vertices(*x2));
        MultipartiteWitness remaining = block;
        remaining.classes[c1] = set_difference(block.classes[c1], x1->classes[0]);
        remaining.classes[c2] = set_difference(block.classes[c2], x2->classes[0]);
        for (unsigned c = 0; c < 4; ++c)
            if (c != c1 && c != c2)
                shrink_class(remaining.classes[c], m - s, discarded);
        blocks.push_back(std::move(*x1));
        blocks.push_back(std::move(*x2));
        settle_block(std::move(remaining), blocks, discarded);
    }
    pool.insert(pool.end(), discarded.begin(), discarded.end());
    return finish(cover, std::move(blocks), std::move(pool), cfg.pull_size, {});
}

ExtendResult extend_cover_nine_sided(const Hypergraph& h, const Cover& cover, const PipelineConfig& cfg)
{
    const std::size_t s = cfg.pull_size;
    const std::size_t k = cover.blocks.size();
    if (k < 2 || cover.leftover.size() < 6 * s)
        return finish(cover, cover.blocks, cover.leftover, cfg.pull_size, {});

    const VertexSet& z = cover.leftover;
    std::vector<std::vector<std::uint16_t>> sides(k, std::vector<std::uint16_t>(k, 0));
    std::vector<Edge> aux;
    for (std::size_t p = 0; p < k; ++p)
        for (std::size_t q = p + 1; q < k; ++q) {
            std::uint16_t mask = 0;
            for (unsigned i = 0; i < 4; ++i)
                for (unsigned j = 0; j < 4; ++j)
                    if (meets_density(h, DensityKind::PairVsRest,
                                      PartiteSpec{{cover.blocks[p].classes[i], cover.blocks[q].classes[j], z}},
                                      cfg.eta))
                        mask |= static_cast<std::uint16_t>(1U << (4 * i + j));
            sides[p][q] = mask;
            if (std::popcount(mask) >= 9)
                aux.push_back({static_cast<Vertex>(p), static_cast<Vertex>(q)});
        }
    if (aux.empty())
        return finish(cover, cover.blocks, cover.leftover, cfg.pull_size, {});

    Hypergraph aux_graph(2, static_cast<Vertex>(k), aux);
    auto peeled = min_degree_peel(aux_graph);
    std::vector<std::pair<std::size_t, std::size_t>> chosen;
    std::vector<char> taken(k, 0);
    for (const auto& e : greedy_matching(peeled.graph).edges) {
        std::size_t p = peeled.kept[e[0]], q = peeled.kept[e[1]];
        chosen.emplace_back(p, q);
        taken[p] = taken[q] = 1;
    }
    // Anything the peeled core missed, still disjoint.
    for (const auto& e : aux)
        if (!taken[e[0]] && !taken[e[1]]) {
            chosen.emplace_back(e[0], e[1]);
            taken[e[0]] = taken[e[1]] = 1;
        }
    std::sort(chosen.begin(), chosen.end());

    VertexSet pool = cover.leftover;
    VertexSet discarded;
    std::vector<MultipartiteWitness> blocks;
    std::vector<char> consumed(k, 0);

    for (auto [p, q] : chosen) {
        const auto& bp = cover.blocks[p];
        const auto& bq = cover.blocks[q];
        const std::size_t m = bp.classes.front().size();
        if (m < s || bq.classes.front().size() != m || pool.size() < 6 * s)
            continue;
        // Three disjoint connected class pairs.
        std::array<std::uint8_t, 4> perm{0, 1, 2, 3};
        std::optional<std::array<std::pair<unsigned, unsigned>, 3>> pick;
        do {
            for (unsigned skip = 4; skip-- > 0 && !pick;) {
                std::array<std::pair<unsigned, unsigned>, 3> trial{};
                bool ok = true;
                unsigned t = 0;
                for (unsigned i = 0; i < 4 && ok; ++i) {
                    if (i == skip)
                        continue;
                    ok = (sides[p][q] >> (4 * i + perm[i])) & 1U;
                    trial[t++] = {i, perm[i]};
                }
                if (ok)
                    pick = trial;
            }
        } while (!pick && std::next_permutation(perm.begin(), perm.end()));
        if (!pick)
            continue;

        VertexSet trial_pool = pool;
        std::vector<MultipartiteWitness> pulled;
        bool ok = true;
        try {
            for (auto [i, j] : *pick) {
                auto x = extract_two_two(h, bp.classes[i], bq.classes[j], trial_pool, cfg.eta,
                                         static_cast<unsigned>(s), cfg.extract_budget);
                if (!x) {
                    ok = false;
                    break;
                }
                trial_pool = set_difference(trial_pool, block_vertices(*x));
                pulled.push_back(std::move(*x));
            }
        } catch (const Error& e) {
            if (e.code() != Errc::InsufficientDensity)
                throw;
            ok = false;
        }
        if (!ok)
            continue;

        pool = std::move(trial_pool);
        MultipartiteWitness rp = bp, rq = bq;
        std::array<bool, 4> used_p{}, used_q{};
        for (std::size_t t = 0; t < 3; ++t) {
            auto [i, j] = (*pick)[t];
            rp.classes[i] = set_difference(rp.classes[i], pulled[t].classes[0]);
            rq.classes[j] = set_difference(rq.classes[j], pulled[t].classes[1]);
            used_p[i] = used_q[j] = true;
        }
        for (unsigned c = 0; c < 4; ++c) {
            if (!used_p[c])
                shrink_class(rp.classes[c], m - s, discarded);
            if (!used_q[c])
                shrink_class(rq.classes[c], m - s, discarded);
        }
        for (auto& x : pulled)
            blocks.push_back(std::move(x));
        settle_block(std::move(rp), blocks, discarded);
        settle_block(std::move(rq), blocks, discarded);
        consumed[p] = consumed[q] = 1;
    }
    for (std::size_t b = 0; b < k; ++b)
        if (!consumed[b])
            blocks.push_back(cover.blocks[b]);
    pool.insert(pool.end(), discarded.begin(), discarded.end());
    return finish(cover, std::move(blocks), std::move(pool), cfg.pull_size, {});
}

namespace {

using LinkTriple = std::array<unsigned, 3>;  // class index in each of the three blocks

std::vector<LinkTriple> allowed_triples(LinkGraph g, const Classification& c)
{
    std::vector<LinkTriple> out;
    if (c.verdict == Verdict::PerfectMatching) {
        for (const auto& t : *c.matching)
            out.push_back({t[0], t[1], t[2]});
        return out;
    }
    const auto cls = side_classes(c.pairs->side);
    for (const auto& [x, y] : c.pairs->pairs) {
        for (unsigned zv = 0; zv < 4; ++zv) {
            LinkTriple idx{};
            idx[cls[0]] = x;
            idx[cls[1]] = y;
            idx[cls[2]] = zv;
            if (g.test(idx[0], idx[1], idx[2]))
                out.push_back(idx);
        }
    }
    return out;
}

struct Plan {
    std::vector<unsigned> counts;
    long gain = 0;
};

// Count vectors over the allowed triples with per-class capacity `cap`;
// predicted net gain (in pulls) = pulls - rebalancing discards.
std::vector<Plan> plans_for(const std::vector<LinkTriple>& allowed, unsigned cap)
{
    std::vector<Plan> out;
    std::array<std::array<unsigned, 4>, 3> usage{};
    std::vector<unsigned> counts(allowed.size(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t t) {
        if (t == allowed.size()) {
            long pulls = 0;
            for (auto c : counts)
                pulls += c;
            if (pulls == 0)
                return;
            long discards = 0;
            for (const auto& u : usage) {
                unsigned most = *std::max_element(u.begin(), u.end());
                for (auto v : u)
                    discards += most - v;
            }
            if (pulls > discards)
                out.push_back({counts, pulls - discards});
            return;
        }
        const auto& tr = allowed[t];
        for (unsigned c = 0;; ++c) {
            counts[t] = c;
            rec(t + 1);
            if (usage[0][tr[0]] + 1 > cap || usage[1][tr[1]] + 1 > cap || usage[2][tr[2]] + 1 > cap)
                break;
            ++usage[0][tr[0]], ++usage[1][tr[1]], ++usage[2][tr[2]];
        }
        usage[0][tr[0]] -= counts[t];
        usage[1][tr[1]] -= counts[t];
        usage[2][tr[2]] -= counts[t];
        counts[t] = 0;
    };
    rec(0);
    std::stable_sort(out.begin(), out.end(), [](const Plan& a, const Plan& b) { return a.gain > b.gain; });
    return out;
}

}  // namespace

ExtendResult extend_cover_triples(const Hypergraph& h, const Cover& cover, const PipelineConfig& cfg)
{
    ExtendResult out;
    const std::size_t s = cfg.pull_size;
    const std::size_t k = cover.blocks.size();
    if (k < 3 || cover.leftover.size() < s)
        return finish(cover, cover.blocks, cover.leftover, cfg.pull_size, std::move(out));

    std::vector<std::array<std::size_t, 3>> triples;
    if (binomial(k, 3) <= cfg.triple_samples) {
        for (std::size_t p = 0; p < k; ++p)
            for (std::size_t q = p + 1; q < k; ++q)
                for (std::size_t r = q + 1; r < k; ++r)
                    triples.push_back({p, q, r});
    } else {
        Rng rng = Rng::substream(cfg.seed, "triples", cover.leftover.size() * 1000003 + k);
        for (std::size_t t = 0; t < cfg.triple_samples; ++t) {
            auto pick = rng.sample(k, 3);
            std::sort(pick.begin(), pick.end());
            triples.push_back({pick[0], pick[1], pick[2]});
        }
    }

    VertexSet pool = cover.leftover;
    VertexSet discarded;
    std::vector<MultipartiteWitness> blocks;
    std::vector<char> consumed(k, 0);

    for (const auto& tri : triples) {
        if (consumed[tri[0]] || consumed[tri[1]] || consumed[tri[2]])
            continue;
        if (pool.size() < s)
            break;
        std::array<Block, 3> specs;
        for (unsigned b = 0; b < 3; ++b)
            specs[b].classes = cover.blocks[tri[b]].classes;
        LinkGraph g = build_link_graph(h, specs, pool, cfg.eta);
        if (g.popcount() < 37)
            continue;
        Classification verdict;
        try {
            verdict = classify(g);
        } catch (const Error& e) {
            if (e.code() != Errc::LemmaViolation)
                throw;
            ++out.verdicts["LemmaViolation"];
            continue;
        }
        ++out.verdicts[to_string(verdict.verdict)];
        if (verdict.verdict == Verdict::Ext) {
            ExtTriple et;
            et.blocks = tri;
            et.cover = *verdict.cover;
            VertexSet cv;
            for (unsigned b = 0; b < 3; ++b) {
                const auto& c = cover.blocks[tri[b]].classes[(*verdict.cover)[b]];
                cv.insert(cv.end(), c.begin(), c.end());
            }
            et.cover_vertices = make_vertex_set(std::move(cv));
            out.ext_triples.push_back(std::move(et));
            continue;
        }

        const std::size_t m = cover.blocks[tri[0]].classes.front().size();
        const unsigned cap = static_cast<unsigned>(std::min<std::size_t>(m / s, 2));
        if (cap == 0)
            continue;
        const auto allowed = allowed_triples(g, verdict);
        const auto plans = plans_for(allowed, cap);

        constexpr std::size_t kPlansTried = 8;
        for (std::size_t pi = 0; pi < plans.size() && pi < kPlansTried; ++pi) {
            const auto& plan = plans[pi];
            std::array<MultipartiteWitness, 3> rem{cover.blocks[tri[0]], cover.blocks[tri[1]],
                                                   cover.blocks[tri[2]]};
            VertexSet trial_pool = pool;
            std::vector<MultipartiteWitness> pulled;
            bool ok = true;
            try {
                for (std::size_t t = 0; t < allowed.size() && ok; ++t) {
                    const auto& lt = allowed[t];
                    for (unsigned c = 0; c < plan.counts[t] && ok; ++c) {
                        auto x = extract_partite_volume(h, rem[0].classes[lt[0]], rem[1].classes[lt[1]],
                                                        rem[2].classes[lt[2]], trial_pool, cfg.eta,
                                                        static_cast<unsigned>(s), cfg.extract_budget);
                        if (!x) {
                            ok = false;
                            break;
                        }
                        for (unsigned b = 0; b < 3; ++b)
                            rem[b].classes[lt[b]] = set_difference(rem[b].classes[lt[b]], x->classes[b]);
                        trial_pool = set_difference(trial_pool, x->classes[3]);
                        pulled.push_back(std::move(*x));
                    }
                }
            } catch (const Error& e) {
                if (e.code() != Errc::InsufficientDensity && e.code() != Errc::InvalidPartition)
                    throw;
                ok = false;
            }
            if (!ok)
                continue;
            pool = std::move(trial_pool);
            for (auto& x : pulled)
                blocks.push_back(std::move(x));
            for (auto& r : rem)
                settle_block(std::move(r), blocks, discarded);
            consumed[tri[0]] = consumed[tri[1]] = consumed[tri[2]] = 1;
            break;
        }
    }
    for (std::size_t b = 0; b < k; ++b)
        if (!consumed[b])
            blocks.push_back(cover.blocks[b]);
    pool.insert(pool.end(), discarded.begin(), discarded.end());
    return finish(cover, std::move(blocks), std::move(pool), cfg.pull_size, std::move(out));
}

}  // namespace hypermatch
