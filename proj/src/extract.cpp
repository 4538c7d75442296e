#include "hypermatch/extract.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <unordered_set>

namespace hypermatch {

namespace {

using Tuple = std::vector<Vertex>;
using Contains = std::function<bool(const Tuple& sorted)>;

std::uint64_t pack(const Tuple& sorted)
{
    std::uint64_t key = 0;
    for (Vertex v : sorted)
        key = (key << 16) | v;
    return key;
}

// Candidate slots that share a candidate set are interchangeable; group[s] is
// the first slot with the same set.
std::vector<std::size_t> slot_groups(const std::vector<VertexSet>& cand)
{
    std::vector<std::size_t> group(cand.size());
    for (std::size_t s = 0; s < cand.size(); ++s) {
        group[s] = s;
        for (std::size_t t = 0; t < s; ++t)
            if (cand[t] == cand[s]) {
                group[s] = group[t];
                break;
            }
    }
    return group;
}

// All tuples with slot s drawn from cand[s], vertices distinct, and
// interchangeable slots in increasing order. Emitted in slot order.
std::vector<Tuple> transversals(const std::vector<VertexSet>& cand)
{
    const auto group = slot_groups(cand);
    std::vector<Tuple> out;
    Tuple cur;
    std::function<void(std::size_t)> rec = [&](std::size_t s) {
        if (s == cand.size()) {
            out.push_back(cur);
            return;
        }
        for (Vertex v : cand[s]) {
            if (std::find(cur.begin(), cur.end(), v) != cur.end())
                continue;
            bool ordered = true;
            for (std::size_t t = 0; t < s; ++t)
                if (group[t] == group[s] && cur[t] >= v)
                    ordered = false;
            if (!ordered)
                continue;
            cur.push_back(v);
            rec(s + 1);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

Tuple sorted_copy(Tuple t)
{
    std::sort(t.begin(), t.end());
    return t;
}

class CompleteSearch {
public:
    CompleteSearch(std::vector<VertexSet> cand, unsigned l, Contains contains, std::uint64_t& budget)
        : cand_(std::move(cand)), k_(cand_.size()), l_(l), contains_(std::move(contains)), budget_(budget),
          group_(slot_groups(cand_))
    {
    }

    /// Tries every seed tuple as the first transversal.
    std::optional<std::vector<VertexSet>> run(const std::vector<Tuple>& seeds)
    {
        std::vector<std::size_t> order(k_);
        for (const auto& seed : seeds) {
            if (seed.size() != k_)
                continue;
            for (std::size_t i = 0; i < k_; ++i)
                order[i] = i;
            do {
                if (exhausted_)
                    return std::nullopt;
                if (!assignable(seed, order))
                    continue;
                if (budget_ == 0) {
                    exhausted_ = true;
                    return std::nullopt;
                }
                --budget_;
                classes_.assign(k_, {});
                for (std::size_t s = 0; s < k_; ++s)
                    classes_[s].push_back(seed[order[s]]);
                if (extend(k_)) {
                    std::vector<VertexSet> out;
                    for (auto& c : classes_)
                        out.push_back(make_vertex_set(c));
                    return out;
                }
            } while (std::next_permutation(order.begin(), order.end()));
        }
        return std::nullopt;
    }

private:
    bool assignable(const Tuple& seed, const std::vector<std::size_t>& order) const
    {
        for (std::size_t s = 0; s < k_; ++s) {
            Vertex v = seed[order[s]];
            if (!std::binary_search(cand_[s].begin(), cand_[s].end(), v))
                return false;
            for (std::size_t t = 0; t < s; ++t)
                if (group_[t] == group_[s] && seed[order[t]] >= v)
                    return false;
        }
        return true;
    }

    bool used(Vertex v) const
    {
        for (const auto& c : classes_)
            if (std::find(c.begin(), c.end(), v) != c.end())
                return true;
        return false;
    }

    // Every tuple made of v and one current member of each other class.
    bool compatible(std::size_t slot, Vertex v) const
    {
        std::vector<std::size_t> idx(k_, 0);
        Tuple t(k_);
        while (true) {
            for (std::size_t s = 0; s < k_; ++s)
                t[s] = s == slot ? v : classes_[s][idx[s]];
            if (!contains_(sorted_copy(t)))
                return false;
            std::size_t s = 0;
            for (; s < k_; ++s) {
                if (s == slot)
                    continue;
                if (++idx[s] < classes_[s].size())
                    break;
                idx[s] = 0;
            }
            if (s == k_)
                return true;
        }
    }

    bool extend(std::size_t step)
    {
        if (step == k_ * l_)
            return true;
        const std::size_t slot = step % k_;
        for (Vertex v : cand_[slot]) {
            if (v <= classes_[slot].back() || used(v))
                continue;
            if (budget_ == 0) {
                exhausted_ = true;
                return false;
            }
            --budget_;
            if (!compatible(slot, v))
                continue;
            classes_[slot].push_back(v);
            if (extend(step + 1))
                return true;
            classes_[slot].pop_back();
            if (exhausted_)
                return false;
        }
        return false;
    }

    std::vector<VertexSet> cand_;
    std::size_t k_;
    unsigned l_;
    Contains contains_;
    std::uint64_t& budget_;
    std::vector<std::size_t> group_;
    std::vector<std::vector<Vertex>> classes_;
    bool exhausted_ = false;
};

std::vector<Tuple> edge_seeds(const Hypergraph& h)
{
    std::vector<Tuple> seeds;
    seeds.reserve(h.num_edges());
    for (std::size_t i = 0; i < h.num_edges(); ++i) {
        auto e = h.edge(i);
        seeds.emplace_back(e.begin(), e.end());
    }
    return seeds;
}

Contains host_contains(const Hypergraph& h)
{
    return [&h](const Tuple& t) { return h.contains(t); };
}

// Candidate sets must be nonempty, sorted and, where distinct, disjoint.
void check_roles(const Hypergraph& h, const std::vector<VertexSet>& sets)
{
    PartiteSpec spec;
    for (const auto& s : sets)
        spec.classes.push_back(s);
    check_partition(h.num_vertices(), spec);
}

struct FactResult {
    std::vector<VertexSet> head;
    std::vector<VertexSet> rest;
};

// Fact 1 and Fact 2 path: rows are rest tuples, columns head tuples. The
// densest neighborhood buckets are searched for complete pieces on both sides.
std::optional<FactResult> fact_path(const Hypergraph& h, const std::vector<VertexSet>& head_cand,
                                    const std::vector<VertexSet>& rest_cand, Rational eta, unsigned l,
                                    std::uint64_t& budget)
{
    const auto heads = transversals(head_cand);
    const auto rests = transversals(rest_cand);
    if (heads.empty() || rests.empty())
        return std::nullopt;

    Incidence inc;
    inc.left_size = heads.size();
    inc.rows.assign(rests.size(), DynBitset(heads.size()));
    Tuple joint;
    for (std::size_t r = 0; r < rests.size(); ++r)
        for (std::size_t c = 0; c < heads.size(); ++c) {
            joint = rests[r];
            joint.insert(joint.end(), heads[c].begin(), heads[c].end());
            std::sort(joint.begin(), joint.end());
            if (h.contains(joint))
                inc.rows[r].set(c);
        }

    const auto dense = dense_side(inc, eta);
    std::map<std::vector<std::uint64_t>, std::vector<std::size_t>> groups;
    for (auto r : dense)
        groups[inc.rows[r].words()].push_back(r);
    std::vector<std::pair<std::vector<std::uint64_t>, std::vector<std::size_t>>> ranked(groups.begin(),
                                                                                      groups.end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& x, const auto& y) { return x.second.size() > y.second.size(); });

    constexpr std::size_t kBucketsTried = 8;
    std::size_t tried = 0;
    for (const auto& [words, rows] : ranked) {
        if (tried++ >= kBucketsTried || budget == 0)
            break;
        const DynBitset& nb = inc.rows[rows.front()];
        if (nb.count() < 1)
            continue;
        std::vector<Tuple> head_seeds;
        std::unordered_set<std::uint64_t> head_fam;
        for (std::size_t c = nb.find_first(); c < nb.size(); c = nb.find_next(c + 1)) {
            head_seeds.push_back(heads[c]);
            head_fam.insert(pack(sorted_copy(heads[c])));
        }
        std::vector<Tuple> rest_seeds;
        std::unordered_set<std::uint64_t> rest_fam;
        for (auto r : rows) {
            rest_seeds.push_back(rests[r]);
            rest_fam.insert(pack(sorted_copy(rests[r])));
        }
        CompleteSearch hs(head_cand, l, [&](const Tuple& t) { return head_fam.count(pack(t)) > 0; }, budget);
        auto head = hs.run(head_seeds);
        if (!head)
            continue;
        CompleteSearch rs(rest_cand, l, [&](const Tuple& t) { return rest_fam.count(pack(t)) > 0; }, budget);
        auto rest = rs.run(rest_seeds);
        if (!rest)
            continue;
        return FactResult{std::move(*head), std::move(*rest)};
    }
    return std::nullopt;
}

void require_density(const Hypergraph& h, DensityKind kind, const PartiteSpec& parts, Rational eta)
{
    if (partite_density(h, kind, parts) < 2 * eta)
        throw Error(Errc::InsufficientDensity, "partite density below 2 eta");
}

}  // namespace

const char* to_string(ExtractMethod m)
{
    return m == ExtractMethod::Bucket ? "bucket" : "backtrack";
}

std::vector<std::size_t> dense_side(const Incidence& g, Rational eta)
{
    std::uint64_t ones = 0;
    for (const auto& row : g.rows)
        ones += row.count();
    const auto num = static_cast<unsigned __int128>(eta.numerator());
    const auto den = static_cast<unsigned __int128>(eta.denominator());
    const unsigned __int128 cells = static_cast<unsigned __int128>(g.left_size) * g.rows.size();
    if (cells == 0 || static_cast<unsigned __int128>(ones) * den < 2 * num * cells)
        throw Error(Errc::InsufficientDensity, "incidence density below 2 eta");
    std::vector<std::size_t> out;
    for (std::size_t r = 0; r < g.rows.size(); ++r)
        if (static_cast<unsigned __int128>(g.rows[r].count()) * den >= num * g.left_size)
            out.push_back(r);
    return out;
}

Biclique common_neighborhood_bucket(const Incidence& g)
{
    if (g.rows.empty())
        throw Error(Errc::EmptyInput, "no right items");
    std::vector<std::size_t> order(g.rows.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return numeric_less(g.rows[a], g.rows[b]); });
    Biclique best;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && g.rows[order[j]] == g.rows[order[i]])
            ++j;
        // Groups are visited in increasing neighborhood order, so strict
        // improvement keeps the smallest neighborhood among ties.
        if (j - i > best.right.size()) {
            best.right.assign(order.begin() + i, order.begin() + j);
            std::sort(best.right.begin(), best.right.end());
            best.left.clear();
            const auto& row = g.rows[order[i]];
            for (std::size_t c = row.find_first(); c < row.size(); c = row.find_next(c + 1))
                best.left.push_back(c);
        }
        i = j;
    }
    return best;
}

bool is_complete(const Hypergraph& h, const MultipartiteWitness& w)
{
    if (w.classes.size() != h.uniformity())
        return false;
    std::vector<std::size_t> idx(w.classes.size(), 0);
    for (const auto& c : w.classes)
        if (c.empty())
            return false;
    Tuple t(w.classes.size());
    while (true) {
        for (std::size_t s = 0; s < t.size(); ++s)
            t[s] = w.classes[s][idx[s]];
        if (!h.contains_unsorted(t))
            return false;
        std::size_t s = 0;
        for (; s < t.size(); ++s) {
            if (++idx[s] < w.classes[s].size())
                break;
            idx[s] = 0;
        }
        if (s == t.size())
            return true;
    }
}

bool is_balanced(const MultipartiteWitness& w)
{
    for (const auto& c : w.classes)
        if (c.size() != w.classes.front().size())
            return false;
    return !w.classes.empty();
}

bool is_disjoint(const MultipartiteWitness& w)
{
    VertexSet all;
    for (const auto& c : w.classes)
        all.insert(all.end(), c.begin(), c.end());
    std::sort(all.begin(), all.end());
    return std::adjacent_find(all.begin(), all.end()) == all.end();
}

std::optional<MultipartiteWitness> find_complete_in(const Hypergraph& h,
                                                    const std::vector<VertexSet>& candidates, unsigned l,
                                                    std::uint64_t budget)
{
    if (candidates.size() != h.uniformity() || l == 0)
        return std::nullopt;
    CompleteSearch search(candidates, l, host_contains(h), budget);
    auto classes = search.run(edge_seeds(h));
    if (!classes)
        return std::nullopt;
    MultipartiteWitness w;
    w.classes = std::move(*classes);
    w.roles.assign(w.classes.size(), 'V');
    w.method = ExtractMethod::Backtrack;
    return w;
}

std::optional<MultipartiteWitness> find_complete_r_partite(const Hypergraph& h, unsigned l, std::uint64_t budget)
{
    VertexSet all(h.num_vertices());
    for (Vertex v = 0; v < h.num_vertices(); ++v)
        all[v] = v;
    if (static_cast<std::uint64_t>(l) * h.uniformity() > h.num_vertices())
        return std::nullopt;
    return find_complete_in(h, std::vector<VertexSet>(h.uniformity(), all), l, budget);
}

std::optional<MultipartiteWitness> extract_one_three(const Hypergraph& h, const VertexSet& a, const VertexSet& b,
                                                     Rational eta, unsigned l, std::uint64_t budget)
{
    check_roles(h, {a, b});
    require_density(h, DensityKind::OneVsRest, PartiteSpec{{a, b}}, eta);
    if (a.size() < l || b.size() < 3 * static_cast<std::size_t>(l))
        return std::nullopt;
    MultipartiteWitness w;
    w.roles = {'A', 'B', 'B', 'B'};
    if (auto f = fact_path(h, {a}, {b, b, b}, eta, l, budget)) {
        w.classes = {f->head[0], f->rest[0], f->rest[1], f->rest[2]};
        w.method = ExtractMethod::Bucket;
        return w;
    }
    CompleteSearch search({a, b, b, b}, l, host_contains(h), budget);
    auto classes = search.run(edge_seeds(h));
    if (!classes)
        return std::nullopt;
    w.classes = std::move(*classes);
    return w;
}

std::optional<MultipartiteWitness> extract_two_two(const Hypergraph& h, const VertexSet& a, const VertexSet& b,
                                                   const VertexSet& z, Rational eta, unsigned l,
                                                   std::uint64_t budget)
{
    check_roles(h, {a, b, z});
    require_density(h, DensityKind::PairVsRest, PartiteSpec{{a, b, z}}, eta);
    if (a.size() < l || b.size() < l || z.size() < 2 * static_cast<std::size_t>(l))
        return std::nullopt;
    MultipartiteWitness w;
    w.roles = {'A', 'B', 'Z', 'Z'};
    if (auto f = fact_path(h, {a, b}, {z, z}, eta, l, budget)) {
        w.classes = {f->head[0], f->head[1], f->rest[0], f->rest[1]};
        w.method = ExtractMethod::Bucket;
        return w;
    }
    CompleteSearch search({a, b, z, z}, l, host_contains(h), budget);
    auto classes = search.run(edge_seeds(h));
    if (!classes)
        return std::nullopt;
    w.classes = std::move(*classes);
    return w;
}

std::optional<MultipartiteWitness> extract_partite_volume(const Hypergraph& h, const VertexSet& a,
                                                          const VertexSet& b, const VertexSet& c,
                                                          const VertexSet& z, Rational eta, unsigned l,
                                                          std::uint64_t budget)
{
    check_roles(h, {a, b, c, z});
    require_density(h, DensityKind::Transversal, PartiteSpec{{z, a, b, c}}, eta);
    if (a.size() < l || b.size() < l || c.size() < l || z.size() < l)
        return std::nullopt;
    MultipartiteWitness w;
    w.roles = {'A', 'B', 'C', 'Z'};
    if (auto f = fact_path(h, {z}, {a, b, c}, eta, l, budget)) {
        w.classes = {f->rest[0], f->rest[1], f->rest[2], f->head[0]};
        w.method = ExtractMethod::Bucket;
        return w;
    }
    CompleteSearch search({a, b, c, z}, l, host_contains(h), budget);
    auto classes = search.run(edge_seeds(h));
    if (!classes)
        return std::nullopt;
    w.classes = std::move(*classes);
    return w;
}

}  // namespace hypermatch
