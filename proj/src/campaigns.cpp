#include "hypermatch/campaigns.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <thread>

#include "hypermatch/absorb.hpp"
#include "hypermatch/construct.hpp"
#include "hypermatch/hg_format.hpp"
#include "hypermatch/link.hpp"
#include "hypermatch/pipeline.hpp"
#include "hypermatch/rng.hpp"
#include "hypermatch/solve.hpp"

namespace hypermatch {

namespace {

using json = nlohmann::ordered_json;

// Runs f(0..count-1) on up to `jobs` threads. Callers store results by index.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& f)
{
    const unsigned workers = static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(jobs, count)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < count;) {
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                }
            }
        });
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

json header(const char* name, const CampaignContext& ctx)
{
    json j;
    j["campaign"] = name;
    j["seed"] = ctx.seed;
    return j;
}

std::string write_artifact(const CampaignContext& ctx, const std::string& name, const std::string& contents)
{
    std::filesystem::create_directories(ctx.artifact_dir);
    const std::string path = (std::filesystem::path(ctx.artifact_dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    out << contents;
    return path;
}

std::string rational_text(Rational r)
{
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

constexpr std::uint64_t kChunk = 4096;

struct Lemma37Tally {
    std::array<std::uint64_t, 5> verdicts{};
    std::uint64_t lemma_violations = 0;
    std::uint64_t witness_failures = 0;
    std::vector<std::uint64_t> bad;  // masks
};

void check_mask(LinkGraph g, Lemma37Tally& t)
{
    try {
        Classification c = classify(g);
        ++t.verdicts[static_cast<std::size_t>(c.verdict)];
        if (!verify_classification(g, c)) {
            ++t.witness_failures;
            t.bad.push_back(g.mask);
        }
    } catch (const Error& e) {
        if (e.code() != Errc::LemmaViolation)
            throw;
        ++t.lemma_violations;
        t.bad.push_back(g.mask);
    }
}

LinkGraph random_symmetry(LinkGraph g, Rng& rng)
{
    LinkSymmetry s;
    std::vector<std::uint8_t> perm{0, 1, 2};
    rng.shuffle(perm);
    std::copy(perm.begin(), perm.end(), s.class_perm.begin());
    for (auto& labels : s.labels) {
        std::vector<std::uint8_t> l{0, 1, 2, 3};
        rng.shuffle(l);
        std::copy(l.begin(), l.end(), labels.begin());
    }
    return apply(s, g);
}

// Random relabeling of H_ext or a pattern witness, a few edge swaps, then
// random additions up to 37..39 edges.
LinkGraph mutant(Rng& rng)
{
    static constexpr std::array kKinds{PatternKind::H432, PatternKind::H4221, PatternKind::H3321};
    static constexpr std::array kFills{Fill::Zero, Fill::Random, Fill::Full};
    const auto base = rng.below(4);
    LinkGraph g = base == 0 ? h_ext_canonical()
                            : pattern_witness(kKinds[base - 1], rng.next(), kFills[rng.below(3)]);
    g = random_symmetry(g, rng);
    auto pick = [&](bool set) {
        while (true) {
            const auto bit = rng.below(64);
            if (((g.mask >> bit) & 1U) == (set ? 1U : 0U))
                return bit;
        }
    };
    const auto swaps = rng.below(4);
    for (std::uint64_t s = 0; s < swaps && g.popcount() > 0 && g.popcount() < 64; ++s) {
        const auto off = pick(true);
        const auto on = pick(false);
        g.mask ^= (std::uint64_t{1} << off) | (std::uint64_t{1} << on);
    }
    const unsigned want = 37 + static_cast<unsigned>(rng.below(3));
    while (g.popcount() < want)
        g.mask |= std::uint64_t{1} << pick(false);
    return g;
}

}  // namespace

std::size_t naive_max_matching(const Hypergraph& h)
{
    const Vertex n = h.num_vertices();
    if (n > 64)
        throw Error(Errc::TooLarge, "naive matcher supports n <= 64");
    std::vector<std::vector<std::uint64_t>> by_vertex(n);
    for (std::size_t e = 0; e < h.num_edges(); ++e) {
        std::uint64_t mask = 0;
        for (Vertex v : h.edge(e))
            mask |= std::uint64_t{1} << v;
        by_vertex[h.edge(e)[0]].push_back(mask);
    }
    std::function<std::size_t(std::uint64_t, Vertex)> rec = [&](std::uint64_t used, Vertex from) -> std::size_t {
        Vertex v = from;
        while (v < n && ((used >> v) & 1U))
            ++v;
        if (v >= n)
            return 0;
        std::size_t best = rec(used | (std::uint64_t{1} << v), v + 1);
        for (std::uint64_t e : by_vertex[v])
            if ((e & used) == 0)
                best = std::max(best, 1 + rec(used | e, v + 1));
        return best;
    };
    return rec(0, 0);
}

json run_lemma37(const Lemma37Params& p, const CampaignContext& ctx)
{
    json j = header("lemma37", ctx);
    j["params"] = {{"samples", p.samples}, {"mutants", p.mutants}};

    const std::uint64_t uniform_chunks = (p.samples + kChunk - 1) / kChunk;
    const std::uint64_t mutant_chunks = (p.mutants + kChunk - 1) / kChunk;
    std::vector<Lemma37Tally> tallies(uniform_chunks + mutant_chunks);
    parallel_for(tallies.size(), ctx.jobs, [&](std::size_t c) {
        const bool uniform = c < uniform_chunks;
        const std::uint64_t index = uniform ? c : c - uniform_chunks;
        const std::uint64_t total = uniform ? p.samples : p.mutants;
        const std::uint64_t count = std::min(kChunk, total - index * kChunk);
        Rng rng = Rng::substream(ctx.seed, uniform ? "lemma37/uniform" : "lemma37/mutant", index);
        for (std::uint64_t i = 0; i < count; ++i)
            check_mask(uniform ? random_link_graph(37, rng.next()) : mutant(rng), tallies[c]);
    });

    Lemma37Tally sum;
    for (const auto& t : tallies) {
        for (std::size_t v = 0; v < 5; ++v)
            sum.verdicts[v] += t.verdicts[v];
        sum.lemma_violations += t.lemma_violations;
        sum.witness_failures += t.witness_failures;
        sum.bad.insert(sum.bad.end(), t.bad.begin(), t.bad.end());
    }
    json counts;
    for (std::size_t v = 0; v < 5; ++v)
        counts[to_string(static_cast<Verdict>(v))] = sum.verdicts[v];
    counts["LemmaViolation"] = sum.lemma_violations;
    counts["witness_failures"] = sum.witness_failures;
    j["counts"] = counts;
    j["violations"] = sum.lemma_violations + sum.witness_failures;

    json artifacts = json::array();
    if (!sum.bad.empty()) {
        std::vector<std::uint64_t> canon;
        for (auto m : sum.bad)
            canon.push_back(canonical_form(LinkGraph{m}));
        std::sort(canon.begin(), canon.end());
        canon.erase(std::unique(canon.begin(), canon.end()), canon.end());
        j["min_canonical_counterexample"] = to_hex(LinkGraph{canon.front()});
        for (auto m : canon)
            artifacts.push_back(write_artifact(ctx, "lemma37_" + to_hex(LinkGraph{m}) + ".hex",
                                               to_hex(LinkGraph{m}) + "\n"));
    }
    j["artifacts"] = artifacts;
    return j;
}

json run_tightness(const TightnessParams& p, const CampaignContext& ctx)
{
    json j = header("tightness", ctx);
    j["params"] = {{"sizes", p.sizes}};
    std::vector<json> rows(p.sizes.size());
    std::vector<int> bad(p.sizes.size(), 0);
    parallel_for(p.sizes.size(), ctx.jobs, [&](std::size_t i) {
        const Vertex n = p.sizes[i];
        Hypergraph h = extremal_construction(n);
        const auto delta = min_degree(h, 1);
        const auto thr = threshold(n);
        const auto mm = max_matching_exact(h, 0);
        const bool ok = delta + 1 == thr && mm.optimal && mm.matching.size() == n / 4 - 1 &&
                        validate_matching(h, mm.matching).valid;
        rows[i] = {{"n", n},           {"min_degree", delta}, {"threshold", thr},
                   {"max_matching", mm.matching.size()},        {"optimal", mm.optimal},
                   {"ok", ok}};
        bad[i] = ok ? 0 : 1;
    });
    j["counts"] = {{"cases", rows}};
    std::uint64_t violations = 0;
    json artifacts = json::array();
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (bad[i]) {
            ++violations;
            artifacts.push_back(write_artifact(ctx, "tightness_n" + std::to_string(p.sizes[i]) + ".hg",
                                               serialize_hg(extremal_construction(p.sizes[i]))));
        }
    j["violations"] = violations;
    j["artifacts"] = artifacts;
    return j;
}

json run_solver(const SolverParams& p, const CampaignContext& ctx)
{
    json j = header("solver", ctx);
    j["params"] = {{"n_max", p.n_max}, {"trials", p.trials}};
    if (p.n_max < 4 || p.n_max > 64)
        throw Error(Errc::TooLarge, "n_max must be in [4, 64]");

    constexpr std::uint64_t kSolverChunk = 256;
    const std::uint64_t chunks = (p.trials + kSolverChunk - 1) / kSolverChunk;
    std::vector<std::uint64_t> agree(chunks, 0), perfect(chunks, 0);
    std::vector<std::vector<std::string>> bad(chunks);
    parallel_for(chunks, ctx.jobs, [&](std::size_t c) {
        Rng rng = Rng::substream(ctx.seed, "solver", c);
        const std::uint64_t count = std::min(kSolverChunk, p.trials - c * kSolverChunk);
        for (std::uint64_t t = 0; t < count; ++t) {
            const Vertex n = static_cast<Vertex>(4 + rng.below(p.n_max - 3));
            const std::uint64_t rate = 1 + rng.below(12);  // out of 20
            std::vector<Edge> edges;
            for (Vertex a = 0; a < n; ++a)
                for (Vertex b = a + 1; b < n; ++b)
                    for (Vertex x = b + 1; x < n; ++x)
                        for (Vertex y = x + 1; y < n; ++y)
                            if (rng.bernoulli(rate, 20))
                                edges.push_back({a, b, x, y});
            Hypergraph h(4, n, std::move(edges));
            const auto bb = max_matching_exact(h, 0);
            const auto naive = naive_max_matching(h);
            const bool ok = bb.optimal && validate_matching(h, bb.matching).valid && bb.matching.size() == naive;
            if (ok) {
                ++agree[c];
                perfect[c] += 4 * naive == n ? 1 : 0;
            } else {
                bad[c].push_back(serialize_hg(h));
            }
        }
    });
    std::uint64_t agreed = 0, perfects = 0;
    json artifacts = json::array();
    for (std::size_t c = 0; c < chunks; ++c) {
        agreed += agree[c];
        perfects += perfect[c];
        for (std::size_t k = 0; k < bad[c].size(); ++k)
            artifacts.push_back(write_artifact(
                ctx, "solver_" + std::to_string(c) + "_" + std::to_string(k) + ".hg", bad[c][k]));
    }
    j["counts"] = {{"trials", p.trials}, {"agree", agreed}, {"perfect", perfects}};
    j["violations"] = p.trials - agreed;
    j["artifacts"] = artifacts;
    return j;
}

json run_absorb(const AbsorbParams& p, const CampaignContext& ctx)
{
    json j = header("absorb", ctx);
    const std::uint64_t pool = binomial(p.n - 1, 3);
    const Rational want = p.min_degree_fraction * static_cast<std::int64_t>(pool);
    std::uint64_t target = static_cast<std::uint64_t>(want.numerator() / want.denominator());
    if (Rational(static_cast<std::int64_t>(target)) < want)
        ++target;
    j["params"] = {{"n", p.n},
                   {"min_degree_fraction", rational_text(p.min_degree_fraction)},
                   {"min_degree_target", target},
                   {"instances", p.instances},
                   {"absorb_trials", p.absorb_trials}};

    struct Row {
        json summary;
        std::uint64_t sampled = 0, registered = 0, ok = 0, failed = 0, mismatched = 0;
        std::vector<std::pair<std::string, std::string>> artifacts;
    };
    std::vector<Row> rows(p.instances);
    parallel_for(p.instances, ctx.jobs, [&](std::size_t i) {
        Row& row = rows[i];
        const std::uint64_t seed = Rng::substream(ctx.seed, "absorb/instance", i).next();
        Hypergraph h = random_dense_hypergraph(p.n, target, seed);
        AbsorberParams ap;
        AbsorbingMatching am = build_absorbing_matching(h, ap, seed);
        row.sampled = am.sampled;
        row.registered = am.registered;

        const VertexSet base = am.base.vertices();
        VertexSet outside;
        for (Vertex v = 0; v < p.n; ++v)
            if (!std::binary_search(base.begin(), base.end(), v))
                outside.push_back(v);
        Rng rng = Rng::substream(seed, "absorb/trials");
        for (std::uint64_t t = 0; t < p.absorb_trials && outside.size() >= 4; ++t) {
            VertexSet w;
            for (auto k : rng.sample(outside.size(), 4))
                w.push_back(outside[k]);
            w = make_vertex_set(std::move(w));
            const VertexSet rest = set_difference(outside, w);
            Matching partial;
            for (const auto& e : greedy_matching(induce(h, rest)).edges) {
                Edge mapped;
                for (Vertex v : e)
                    mapped.push_back(rest[v]);
                partial.edges.push_back(std::move(mapped));
            }
            try {
                Matching m = absorb(h, am, partial, w);
                const VertexSet expected = set_union(set_union(base, partial.vertices()), w);
                if (validate_matching(h, m).valid && m.vertices() == expected) {
                    ++row.ok;
                } else {
                    ++row.mismatched;
                    row.artifacts.emplace_back("absorb_mismatch_" + std::to_string(i) + "_" + std::to_string(t),
                                               serialize_hg(h));
                }
            } catch (const Error& e) {
                if (e.code() != Errc::AbsorptionFailed)
                    throw;
                ++row.failed;
                json rec = {{"instance_seed", seed}, {"w", w}};
                row.artifacts.emplace_back("absorb_failed_" + std::to_string(i) + "_" + std::to_string(t),
                                           rec.dump() + "\n");
            }
        }
        row.summary = {{"instance", i},           {"sampled", am.sampled},
                       {"registered", am.registered}, {"base_edges", am.base.size()},
                       {"absorbed", row.ok},        {"absorption_failed", row.failed},
                       {"mismatched", row.mismatched}};
    });

    std::uint64_t sampled = 0, registered = 0, ok = 0, failed = 0, mismatched = 0, low_rate = 0;
    json per_instance = json::array();
    json artifacts = json::array();
    for (auto& row : rows) {
        sampled += row.sampled;
        registered += row.registered;
        ok += row.ok;
        failed += row.failed;
        mismatched += row.mismatched;
        // registration >= 99%
        if (row.registered * 100 < row.sampled * 99)
            ++low_rate;
        per_instance.push_back(row.summary);
        for (auto& [name, contents] : row.artifacts)
            artifacts.push_back(write_artifact(ctx, name + (name.rfind("absorb_failed", 0) == 0 ? ".json" : ".hg"),
                                               contents));
    }
    j["counts"] = {{"sampled", sampled},   {"registered", registered},   {"absorbed", ok},
                   {"absorption_failed", failed}, {"mismatched", mismatched},
                   {"instances_below_99_percent", low_rate}, {"per_instance", per_instance}};
    j["violations"] = mismatched + low_rate;
    j["artifacts"] = artifacts;
    return j;
}

json run_pipeline(const PipelineParams& p, const CampaignContext& ctx)
{
    json j = header("pipeline", ctx);
    j["params"] = {{"n", p.n}, {"instances", p.instances}, {"extremal_sizes", p.extremal_sizes}};

    struct Row {
        bool found = false;
        bool fallback = false;
        std::string path;
        std::uint64_t seed = 0;
    };
    std::vector<Row> rows(p.instances);
    const std::uint64_t target = threshold(p.n);
    parallel_for(p.instances, ctx.jobs, [&](std::size_t i) {
        Row& row = rows[i];
        row.seed = Rng::substream(ctx.seed, "pipeline/instance", i).next();
        Hypergraph h = random_dense_hypergraph(p.n, target, row.seed);
        PipelineConfig cfg;
        cfg.seed = row.seed;
        auto [m, report] = solve_pipeline(h, cfg);
        row.found = m && validate_matching(h, *m).perfect;
        row.fallback = report.fallback_used;
        row.path = report.path;
    });

    std::vector<json> extremal(p.extremal_sizes.size());
    std::vector<int> extremal_bad(p.extremal_sizes.size(), 0);
    parallel_for(p.extremal_sizes.size(), ctx.jobs, [&](std::size_t i) {
        const Vertex n = p.extremal_sizes[i];
        Hypergraph h = extremal_construction(n);
        PipelineConfig cfg;
        cfg.seed = ctx.seed;
        auto [m, report] = solve_pipeline(h, cfg);
        const bool oracle = has_perfect_matching(h).has_value();
        extremal_bad[i] = (m.has_value() || oracle) ? 1 : 0;
        extremal[i] = {{"n", n}, {"pipeline_found", m.has_value()}, {"oracle_found", oracle}, {"path", report.path}};
    });

    std::uint64_t found = 0, fallback = 0;
    std::map<std::string, std::uint64_t> paths;
    json artifacts = json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        found += rows[i].found ? 1 : 0;
        fallback += rows[i].fallback ? 1 : 0;
        ++paths[rows[i].path];
        if (!rows[i].found)
            artifacts.push_back(write_artifact(ctx, "pipeline_miss_" + std::to_string(i) + ".hg",
                                               serialize_hg(random_dense_hypergraph(p.n, target, rows[i].seed))));
    }
    std::uint64_t extremal_violations = 0;
    for (std::size_t i = 0; i < extremal.size(); ++i)
        if (extremal_bad[i]) {
            ++extremal_violations;
            artifacts.push_back(write_artifact(ctx, "pipeline_extremal_n" + std::to_string(p.extremal_sizes[i]) + ".hg",
                                               serialize_hg(extremal_construction(p.extremal_sizes[i]))));
        }
    json path_counts = json::object();
    for (const auto& [k, v] : paths)
        path_counts[k] = v;
    const bool fallback_heavy = p.instances > 0 && 2 * fallback >= p.instances;
    j["counts"] = {{"instances", p.instances}, {"found", found}, {"fallback_used", fallback},
                   {"paths", path_counts},     {"extremal", extremal}};
    j["violations"] = (p.instances - found) + extremal_violations + (fallback_heavy ? 1 : 0);
    j["artifacts"] = artifacts;
    return j;
}

}  // namespace hypermatch
