#include "hypermatch/solve.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <unordered_map>

namespace hypermatch {

namespace {

constexpr std::size_t kMemoCap = std::size_t{1} << 22;

class BranchAndBound {
public:
    BranchAndBound(const Hypergraph& h, std::uint64_t budget) : r_(h.uniformity()), budget_(budget)
    {
        if (h.num_vertices() > 64)
            throw Error(Errc::TooLarge, "exact search supports at most 64 vertices");
        masks_.reserve(h.num_edges());
        for (std::size_t i = 0; i < h.num_edges(); ++i) {
            std::uint64_t m = 0;
            for (Vertex v : h.edge(i))
                m |= std::uint64_t{1} << v;
            masks_.push_back(m);
        }
        all_ = h.num_vertices() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << h.num_vertices()) - 1;
        pool_.resize(h.num_vertices() + 3);
    }

    void seed(std::size_t best, std::vector<std::uint32_t> edges)
    {
        best_ = best;
        best_edges_ = std::move(edges);
    }

    void run()
    {
        std::vector<std::uint32_t> everything(masks_.size());
        std::iota(everything.begin(), everything.end(), 0);
        pool_[0] = std::move(everything);
        visit(all_, 0);
    }

    std::size_t best() const { return best_; }
    const std::vector<std::uint32_t>& best_edges() const { return best_edges_; }
    std::uint64_t nodes() const { return nodes_; }
    bool timed_out() const { return timed_out_; }

private:
    // Parent's live edge list sits in pool_[depth].
    void visit(std::uint64_t free, std::size_t depth)
    {
        ++nodes_;
        if (budget_ != 0 && nodes_ > budget_) {
            timed_out_ = true;
            return;
        }
        const std::size_t matched = current_.size();
        if (matched > best_) {
            best_ = matched;
            best_edges_ = current_;
        }

        auto& alive = pool_[depth + 1];
        alive.clear();
        std::uint64_t coverable = 0;
        std::array<std::uint32_t, 64> deg{};
        for (auto e : pool_[depth]) {
            std::uint64_t m = masks_[e];
            if ((m & ~free) != 0)
                continue;
            alive.push_back(e);
            coverable |= m;
            for (std::uint64_t t = m; t != 0; t &= t - 1)
                ++deg[std::countr_zero(t)];
        }
        if (alive.empty())
            return;
        const std::uint64_t reduced = free & coverable;
        if (matched + static_cast<std::size_t>(std::popcount(reduced)) / r_ <= best_)
            return;

        const std::size_t need = best_ - matched + 1;
        auto hit = memo_.find(reduced);
        if (hit != memo_.end() && need >= hit->second)
            return;
        const std::size_t best_at_entry = best_;

        int pivot = -1;
        for (std::uint64_t t = reduced; t != 0; t &= t - 1) {
            int v = std::countr_zero(t);
            if (pivot < 0 || deg[v] < deg[pivot])
                pivot = v;
        }
        const std::uint64_t pivot_bit = std::uint64_t{1} << pivot;

        // Children write only to deeper pool slots, so `alive` stays valid.
        std::vector<std::uint32_t> branches;
        for (auto e : alive)
            if (masks_[e] & pivot_bit)
                branches.push_back(e);
        for (auto e : branches) {
            current_.push_back(e);
            visit(reduced & ~masks_[e], depth + 1);
            current_.pop_back();
            if (timed_out_)
                return;
        }
        visit(reduced & ~pivot_bit, depth + 1);
        if (timed_out_)
            return;

        if (best_ == best_at_entry && (hit != memo_.end() || memo_.size() < kMemoCap)) {
            auto& slot = memo_[reduced];
            if (slot == 0 || need < slot)
                slot = static_cast<std::uint32_t>(need);
        }
    }

    unsigned r_;
    std::uint64_t budget_;
    std::uint64_t all_ = 0;
    std::vector<std::uint64_t> masks_;
    std::vector<std::vector<std::uint32_t>> pool_;
    std::vector<std::uint32_t> current_;
    std::vector<std::uint32_t> best_edges_;
    std::size_t best_ = 0;
    std::uint64_t nodes_ = 0;
    bool timed_out_ = false;
    std::unordered_map<std::uint64_t, std::uint32_t> memo_;
};

Matching to_matching(const Hypergraph& h, const std::vector<std::uint32_t>& ids)
{
    Matching m;
    for (auto id : ids) {
        auto e = h.edge(id);
        m.edges.emplace_back(e.begin(), e.end());
    }
    std::sort(m.edges.begin(), m.edges.end());
    return m;
}

}  // namespace

MatchingResult max_matching_exact(const Hypergraph& h, std::uint64_t node_budget)
{
    BranchAndBound search(h, node_budget);
    Matching greedy = greedy_matching(h);
    std::vector<std::uint32_t> seed_ids;
    {
        // Recover edge ids of the greedy matching.
        std::size_t next = 0;
        for (std::size_t i = 0; i < h.num_edges() && next < greedy.size(); ++i) {
            auto e = h.edge(i);
            if (std::equal(e.begin(), e.end(), greedy.edges[next].begin())) {
                seed_ids.push_back(static_cast<std::uint32_t>(i));
                ++next;
            }
        }
    }
    search.seed(seed_ids.size(), seed_ids);
    search.run();

    MatchingResult out;
    out.matching = to_matching(h, search.best_edges());
    out.nodes_explored = search.nodes();
    out.timed_out = search.timed_out();
    out.optimal = !out.timed_out;
    return out;
}

std::optional<Matching> has_perfect_matching(const Hypergraph& h)
{
    const unsigned r = h.uniformity();
    if (h.num_vertices() % r != 0)
        throw Error(Errc::Indivisible, "n must be divisible by r");
    if (h.num_vertices() > 64)
        throw Error(Errc::TooLarge, "exact search supports at most 64 vertices");
    for (Vertex v = 0; v < h.num_vertices(); ++v)
        if (h.vertex_degree(v) == 0)
            return std::nullopt;
    const std::size_t target = h.num_vertices() / r;
    BranchAndBound search(h, 0);
    search.seed(target - 1, {});
    search.run();
    if (search.best() < target)
        return std::nullopt;
    return to_matching(h, search.best_edges());
}

std::optional<Matching> perfect_matching_on(const Hypergraph& h, const VertexSet& given)
{
    const VertexSet u = make_vertex_set(given);
    const unsigned r = h.uniformity();
    if (u.size() % r != 0)
        return std::nullopt;
    if (u.empty())
        return Matching{};
    std::vector<Edge> edges;
    if (u.size() <= 24 && binomial(u.size(), r) < h.num_edges()) {
        // Probe the r-subsets of U directly.
        std::vector<std::size_t> idx(r);
        for (unsigned i = 0; i < r; ++i)
            idx[i] = i;
        Edge probe(r), local(r);
        while (true) {
            for (unsigned i = 0; i < r; ++i) {
                probe[i] = u[idx[i]];
                local[i] = static_cast<Vertex>(idx[i]);
            }
            if (h.contains(probe))
                edges.push_back(local);
            int i = static_cast<int>(r) - 1;
            while (i >= 0 && idx[i] == u.size() - r + static_cast<std::size_t>(i))
                --i;
            if (i < 0)
                break;
            ++idx[i];
            for (unsigned j = i + 1; j < r; ++j)
                idx[j] = idx[j - 1] + 1;
        }
    } else {
        edges = induce(h, u).edge_list();
    }
    const auto n = std::max<Vertex>(static_cast<Vertex>(u.size()), r);
    auto pm = has_perfect_matching(Hypergraph(r, n, std::move(edges)));
    if (!pm)
        return std::nullopt;
    for (auto& e : pm->edges)
        for (auto& v : e)
            v = u[v];
    std::sort(pm->edges.begin(), pm->edges.end());
    return pm;
}

std::optional<std::array<Triple, 4>> tripartite_pm_444(LinkGraph g)
{
    std::array<std::uint8_t, 4> sigma{0, 1, 2, 3};
    do {
        std::array<std::uint8_t, 4> tau{0, 1, 2, 3};
        do {
            bool ok = true;
            for (unsigned i = 0; i < 4 && ok; ++i)
                ok = g.test(i, sigma[i], tau[i]);
            if (ok) {
                std::array<Triple, 4> out{};
                for (std::uint8_t i = 0; i < 4; ++i)
                    out[i] = {i, sigma[i], tau[i]};
                return out;
            }
        } while (std::next_permutation(tau.begin(), tau.end()));
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return std::nullopt;
}

namespace {

struct Kuhn {
    const BipartiteGraph& g;
    std::vector<std::size_t> left_match;  // right partner or npos
    std::vector<char> left_seen;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    bool augment(std::size_t r, std::vector<std::size_t>& right_match)
    {
        for (std::size_t l : g.right_adj[r]) {
            if (left_seen[l])
                continue;
            left_seen[l] = 1;
            if (left_match[l] == npos || augment(left_match[l], right_match)) {
                left_match[l] = r;
                right_match[r] = l;
                return true;
            }
        }
        return false;
    }
};

}  // namespace

HallOutcome hall_matching(const BipartiteGraph& g)
{
    Kuhn k{g, std::vector<std::size_t>(g.left_size, Kuhn::npos), {}};
    std::vector<std::size_t> right_match(g.right_adj.size(), Kuhn::npos);
    HallOutcome out;
    for (std::size_t r = 0; r < g.right_adj.size(); ++r) {
        k.left_seen.assign(g.left_size, 0);
        if (k.augment(r, right_match))
            continue;
        // Every left vertex reached is matched to a right vertex that was also
        // explored, so the explored right side has exactly one too few neighbors.
        std::vector<std::size_t> q{r};
        for (std::size_t l = 0; l < g.left_size; ++l)
            if (k.left_seen[l])
                q.push_back(k.left_match[l]);
        std::sort(q.begin(), q.end());
        out.violator = std::move(q);
        return out;
    }
    out.assignment = std::move(right_match);
    return out;
}

std::vector<std::size_t> neighborhood(const BipartiteGraph& g, const std::vector<std::size_t>& right)
{
    std::vector<std::size_t> out;
    for (auto r : right)
        out.insert(out.end(), g.right_adj[r].begin(), g.right_adj[r].end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Matching greedy_matching(const Hypergraph& h)
{
    Matching m;
    std::vector<char> used(h.num_vertices(), 0);
    for (std::size_t i = 0; i < h.num_edges(); ++i) {
        auto e = h.edge(i);
        if (std::any_of(e.begin(), e.end(), [&](Vertex v) { return used[v]; }))
            continue;
        for (Vertex v : e)
            used[v] = 1;
        m.edges.emplace_back(e.begin(), e.end());
    }
    return m;
}

PeelResult min_degree_peel(const Hypergraph& h)
{
    if (h.num_edges() == 0)
        throw Error(Errc::EmptyInput, "graph has no edges");
    const std::uint64_t m = h.num_edges();
    const std::uint64_t n = h.num_vertices();
    std::vector<char> alive_vertex(n, 1);
    std::vector<char> alive_edge(m, 1);
    std::vector<std::uint64_t> deg(n);
    for (Vertex v = 0; v < n; ++v)
        deg[v] = h.vertex_degree(v);

    // deg < m / n  <=>  deg * n < m
    bool changed = true;
    while (changed) {
        changed = false;
        for (Vertex v = 0; v < n; ++v) {
            if (!alive_vertex[v] || deg[v] * n >= m)
                continue;
            alive_vertex[v] = 0;
            const auto& inc = h.incident(v);
            for (std::size_t e = inc.find_first(); e < inc.size(); e = inc.find_next(e + 1)) {
                if (!alive_edge[e])
                    continue;
                alive_edge[e] = 0;
                for (Vertex u : h.edge(e))
                    --deg[u];
            }
            changed = true;
            break;
        }
    }
    PeelResult out{{}, Hypergraph(h.uniformity(), h.uniformity(), {})};
    for (Vertex v = 0; v < n; ++v)
        if (alive_vertex[v])
            out.kept.push_back(v);
    out.graph = induce(h, out.kept);
    return out;
}

}  // namespace hypermatch
