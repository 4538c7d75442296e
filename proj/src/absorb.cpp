#include "hypermatch/absorb.hpp"

#include <algorithm>

#include "hypermatch/rng.hpp"
#include "hypermatch/solve.hpp"

namespace hypermatch {

namespace {

VertexSet block_vertices(const AbsorbingMatching& am, std::size_t b)
{
    VertexSet out;
    for (auto idx : am.blocks[b])
        out.insert(out.end(), am.base.edges[idx].begin(), am.base.edges[idx].end());
    return make_vertex_set(std::move(out));
}

VertexSet edges_vertices(const std::vector<Edge>& edges)
{
    VertexSet out;
    for (const auto& e : edges)
        out.insert(out.end(), e.begin(), e.end());
    return make_vertex_set(std::move(out));
}

}  // namespace

bool is_absorbing_set(const Hypergraph& h, const VertexSet& s, const VertexSet& w)
{
    const VertexSet ss = make_vertex_set(s);
    const VertexSet ws = make_vertex_set(w);
    if (!disjoint(ss, ws))
        throw Error(Errc::NotDisjoint, "S and W overlap");
    if (ss.size() % h.uniformity() != 0)
        return false;
    if (!perfect_matching_on(h, ss))
        return false;
    return perfect_matching_on(h, set_union(ss, ws)).has_value();
}

AbsorbingMatching build_absorbing_matching(const Hypergraph& h, const AbsorberParams& params, std::uint64_t seed)
{
    AbsorbingMatching am;
    const Vertex n = h.num_vertices();
    const std::size_t block_edges = params.set_size / 4;
    Rng sample_rng = Rng::substream(seed, "absorb/w");
    Rng search_rng = Rng::substream(seed, "absorb/s");
    std::vector<char> in_base(n, 0);
    std::vector<char> reserved(n, 0);  // vertices of registered W
    std::size_t barren = 0;

    for (std::size_t t = 0; t < params.trials; ++t) {
        VertexSet outside;
        for (Vertex v = 0; v < n; ++v)
            if (!in_base[v])
                outside.push_back(v);
        if (outside.size() < 4)
            break;
        ++am.sampled;
        VertexSet w;
        for (auto i : sample_rng.sample(outside.size(), 4))
            w.push_back(outside[i]);
        w = make_vertex_set(std::move(w));
        if (am.absorbers.count(w)) {
            ++am.registered;
            continue;
        }

        bool done = false;
        for (std::size_t b = 0; b < am.blocks.size() && !done; ++b) {
            auto vb = block_vertices(am, b);
            if (auto pm = perfect_matching_on(h, set_union(vb, w))) {
                am.absorbers[w] = Absorber{b, std::move(*pm)};
                done = true;
            }
        }
        if (!done && am.base.size() + block_edges <= params.max_edges && barren < params.barren_limit) {
            VertexSet pool;
            for (Vertex v : outside)
                if (!reserved[v] && !std::binary_search(w.begin(), w.end(), v))
                    pool.push_back(v);
            for (std::size_t s = 0; s < params.search_trials && pool.size() >= params.set_size && !done; ++s) {
                VertexSet cand;
                for (auto i : search_rng.sample(pool.size(), params.set_size))
                    cand.push_back(pool[i]);
                cand = make_vertex_set(std::move(cand));
                auto inner = perfect_matching_on(h, cand);
                if (!inner)
                    continue;
                auto outer = perfect_matching_on(h, set_union(cand, w));
                if (!outer)
                    continue;
                std::vector<std::size_t> ids;
                for (auto& e : inner->edges) {
                    ids.push_back(am.base.edges.size());
                    for (Vertex v : e)
                        in_base[v] = 1;
                    am.base.edges.push_back(e);
                }
                am.blocks.push_back(std::move(ids));
                am.absorbers[w] = Absorber{am.blocks.size() - 1, std::move(*outer)};
                ++am.fresh_blocks;
                done = true;
            }
            barren = done ? 0 : barren + 1;
        }
        if (done) {
            ++am.registered;
            for (Vertex v : w)
                reserved[v] = 1;
        }
    }
    return am;
}

Matching absorb(const Hypergraph& h, const AbsorbingMatching& am, const Matching& partial, const VertexSet& w_in,
                std::size_t search_budget)
{
    const VertexSet w = make_vertex_set(w_in);
    if (w.size() % 4 != 0)
        throw Error(Errc::Indivisible, "|W| must be divisible by 4");
    const VertexSet base_v = am.base.vertices();
    const VertexSet part_v = partial.vertices();
    if (!disjoint(w, base_v) || !disjoint(w, part_v) || !disjoint(base_v, part_v))
        throw Error(Errc::NotDisjoint, "W, base and partial matching must be disjoint");

    std::vector<char> block_used(am.blocks.size(), 0);
    std::vector<char> base_edge_used(am.base.size(), 0);
    std::vector<char> partial_used(partial.size(), 0);
    std::vector<Edge> replacements;

    auto use_block = [&](std::size_t b, Matching&& m) {
        block_used[b] = 1;
        for (auto idx : am.blocks[b])
            base_edge_used[idx] = 1;
        replacements.insert(replacements.end(), m.edges.begin(), m.edges.end());
    };

    for (std::size_t i = 0; i < w.size(); i += 4) {
        const VertexSet piece(w.begin() + i, w.begin() + i + 4);
        bool done = false;
        if (auto it = am.absorbers.find(piece); it != am.absorbers.end() && !block_used[it->second.block]) {
            use_block(it->second.block, Matching(it->second.replacement));
            done = true;
        }
        for (std::size_t b = 0; b < am.blocks.size() && !done; ++b) {
            if (block_used[b])
                continue;
            if (auto pm = perfect_matching_on(h, set_union(block_vertices(am, b), piece))) {
                use_block(b, std::move(*pm));
                done = true;
            }
        }
        if (done)
            continue;

        // Fresh search over small combinations of available edges.
        struct Source {
            bool from_base;
            std::size_t idx;
        };
        std::vector<Source> pool;
        for (std::size_t e = 0; e < partial.size(); ++e)
            if (!partial_used[e])
                pool.push_back({false, e});
        for (std::size_t e = 0; e < am.base.size(); ++e)
            if (!base_edge_used[e])
                pool.push_back({true, e});
        auto edge_of = [&](const Source& s) -> const Edge& {
            return s.from_base ? am.base.edges[s.idx] : partial.edges[s.idx];
        };
        std::size_t spent = 0;
        for (std::size_t k = 1; k <= 3 && !done && k <= pool.size(); ++k) {
            std::vector<std::size_t> pick(k);
            for (std::size_t j = 0; j < k; ++j)
                pick[j] = j;
            while (!done && spent < search_budget) {
                ++spent;
                std::vector<Edge> chosen;
                for (auto p : pick)
                    chosen.push_back(edge_of(pool[p]));
                if (auto pm = perfect_matching_on(h, set_union(edges_vertices(chosen), piece))) {
                    for (auto p : pick) {
                        if (pool[p].from_base)
                            base_edge_used[pool[p].idx] = 1;
                        else
                            partial_used[pool[p].idx] = 1;
                    }
                    replacements.insert(replacements.end(), pm->edges.begin(), pm->edges.end());
                    done = true;
                    break;
                }
                int j = static_cast<int>(k) - 1;
                while (j >= 0 && pick[j] == pool.size() - k + static_cast<std::size_t>(j))
                    --j;
                if (j < 0)
                    break;
                ++pick[j];
                for (std::size_t t = j + 1; t < k; ++t)
                    pick[t] = pick[t - 1] + 1;
            }
        }
        if (!done)
            throw Error(Errc::AbsorptionFailed, "no absorber for a leftover 4-set");
    }

    Matching out;
    for (std::size_t e = 0; e < am.base.size(); ++e)
        if (!base_edge_used[e])
            out.edges.push_back(am.base.edges[e]);
    for (std::size_t e = 0; e < partial.size(); ++e)
        if (!partial_used[e])
            out.edges.push_back(partial.edges[e]);
    out.edges.insert(out.edges.end(), replacements.begin(), replacements.end());
    std::sort(out.edges.begin(), out.edges.end());
    return out;
}

}  // namespace hypermatch
