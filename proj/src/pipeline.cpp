#include "hypermatch/pipeline.hpp"

#include <chrono>

#include "hypermatch/solve.hpp"

namespace hypermatch {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

bool leftover_small(const Cover& c, Rational gamma, Vertex n)
{
    return Rational(static_cast<std::int64_t>(c.leftover.size())) <= gamma * static_cast<std::int64_t>(n);
}

void merge_verdicts(std::map<std::string, std::size_t>& into, const std::map<std::string, std::size_t>& from)
{
    for (const auto& [k, v] : from)
        into[k] += v;
}

std::string rational_text(Rational r)
{
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// Candidate B from the Ext-dominant endgame, or nothing if the density
// tests fail.
std::optional<VertexSet> endgame_set(const Hypergraph& h, const Cover& cover, const std::vector<ExtTriple>& ext,
                                     const PipelineConfig& cfg, std::string& note)
{
    std::map<std::size_t, unsigned> cover_class;
    for (const auto& t : ext)
        for (unsigned i = 0; i < 3; ++i)
            cover_class.emplace(t.blocks[i], t.cover[i]);
    VertexSet u;
    PartiteSpec groups;
    for (const auto& [block, cls] : cover_class) {
        VertexSet g;
        for (unsigned c = 0; c < 4; ++c)
            if (c != cls)
                g.insert(g.end(), cover.blocks[block].classes[c].begin(), cover.blocks[block].classes[c].end());
        g = make_vertex_set(std::move(g));
        u.insert(u.end(), g.begin(), g.end());
        groups.classes.push_back(std::move(g));
    }
    u = make_vertex_set(std::move(u));
    if (u.size() >= 4) {
        const Rational plain = density(h, u);
        std::optional<Rational> filtered;
        if (groups.classes.size() >= 4)
            filtered = filtered_density(h, groups);
        note = "d(U)=" + rational_text(plain) + (filtered ? " filtered=" + rational_text(*filtered) : "");
        const Rational d = cfg.filtered_endgame && filtered ? *filtered : plain;
        if (d * d > cfg.gamma)
            return std::nullopt;
    }
    if (cover.leftover.size() >= 3 && !u.empty()) {
        Rational d = partite_density(h, DensityKind::OneVsRest, PartiteSpec{{u, cover.leftover}});
        if (d * d > cfg.gamma)
            return std::nullopt;
    }
    VertexSet b = set_union(u, cover.leftover);
    const Rational min_size = (Rational(3, 4) - cfg.alpha) * static_cast<std::int64_t>(h.num_vertices());
    if (b.size() < 4 || Rational(static_cast<std::int64_t>(b.size())) < min_size)
        return std::nullopt;
    if (density(h, b) >= cfg.alpha)
        return std::nullopt;
    return b;
}

}  // namespace

std::pair<std::optional<Matching>, PipelineReport> solve_pipeline(const Hypergraph& h, const PipelineConfig& cfg)
{
    validate_config(cfg);
    const Vertex n = h.num_vertices();
    if (h.uniformity() != 4)
        throw Error(Errc::InvalidEdge, "pipeline expects a 4-graph");
    if (n % 4 != 0)
        throw Error(Errc::Indivisible, "n must be divisible by 4");

    PipelineReport report;
    auto stage = [&](std::string name, std::size_t covered, std::size_t leftover, std::size_t gain,
                     std::string note, Clock::time_point start) {
        report.stages.push_back({std::move(name), covered, leftover, gain, std::move(note), seconds_since(start)});
    };
    auto accept = [&](const Matching& m, const char* path) {
        if (!validate_matching(h, m).perfect)
            return false;
        report.path = path;
        report.found = true;
        return true;
    };

    // Extremal track.
    auto t0 = Clock::now();
    auto b = detect_extremal(h, cfg.alpha, cfg.extremal_local_steps);
    stage("detect_extremal", 0, n, 0, b ? "|B|=" + std::to_string(b->size()) : "non-extremal", t0);
    if (b) {
        t0 = Clock::now();
        auto m = extremal_matcher(h, *b, cfg.alpha, cfg.seed, cfg.extremal_retries);
        stage("extremal_matcher", m ? n : 0, m ? 0 : n, 0, m ? "matched" : "failed", t0);
        if (m && accept(*m, "extremal"))
            return {m, report};
        report.fallback_reason = "extremal matcher failed";
    } else {
        // Non-extremal track.
        t0 = Clock::now();
        AbsorbingMatching am = build_absorbing_matching(h, cfg.absorber, cfg.seed);
        report.absorber_base_edges = am.base.size();
        report.absorber_sampled = am.sampled;
        report.absorber_registered = am.registered;
        report.absorber_fresh_blocks = am.fresh_blocks;
        const VertexSet base_vertices = am.base.vertices();
        stage("absorbing_matching", base_vertices.size(), n - base_vertices.size(), 0,
              std::to_string(am.registered) + "/" + std::to_string(am.sampled) + " registered", t0);

        VertexSet domain;
        for (Vertex v = 0; v < n; ++v)
            if (!std::binary_search(base_vertices.begin(), base_vertices.end(), v))
                domain.push_back(v);

        t0 = Clock::now();
        Cover cover = build_initial_cover(h, domain, cfg);
        stage("initial_cover", cover.covered(), cover.leftover.size(), cover.covered(), "", t0);
        report.cover_trace.push_back(cover.covered());

        auto check = [&](const Cover& c) {
            if (cfg.check_invariants && !cover_valid(h, c))
                throw Error(Errc::LemmaViolation, "cover invariant broken");
        };
        check(cover);

        for (unsigned it = 0; it < cfg.max_iterations && !leftover_small(cover, cfg.gamma, n); ++it) {
            std::size_t gain = 0;
            const std::string tag = "#" + std::to_string(it);

            t0 = Clock::now();
            auto r1 = extend_cover_two_classes(h, cover, cfg);
            check(r1.cover);
            cover = std::move(r1.cover);
            gain += r1.gain;
            stage("two_classes" + tag, cover.covered(), cover.leftover.size(), r1.gain, "", t0);

            t0 = Clock::now();
            auto r2 = extend_cover_nine_sided(h, cover, cfg);
            check(r2.cover);
            cover = std::move(r2.cover);
            gain += r2.gain;
            stage("nine_sided" + tag, cover.covered(), cover.leftover.size(), r2.gain, "", t0);

            t0 = Clock::now();
            const Cover before_triples = cover;
            auto r3 = extend_cover_triples(h, cover, cfg);
            check(r3.cover);
            merge_verdicts(report.verdicts, r3.verdicts);
            cover = std::move(r3.cover);
            gain += r3.gain;
            stage("triples" + tag, cover.covered(), cover.leftover.size(), r3.gain,
                  std::to_string(r3.ext_triples.size()) + " ext", t0);
            report.cover_trace.push_back(cover.covered());

            if (gain > 0)
                continue;
            std::size_t ext = r3.verdicts.count("Ext") ? r3.verdicts.at("Ext") : 0;
            std::size_t others = 0;
            for (const auto& [k, v] : r3.verdicts)
                others += k == "Ext" ? 0 : v;
            if (ext > 0 && ext >= others) {
                t0 = Clock::now();
                std::string densities;
                auto eb = endgame_set(h, before_triples, r3.ext_triples, cfg, densities);
                std::optional<Matching> m;
                if (eb)
                    m = extremal_matcher(h, *eb, cfg.alpha, cfg.seed, cfg.extremal_retries);
                std::string note = eb ? (m ? "extremal matched" : "extremal failed") : "density tests failed";
                if (!densities.empty())
                    note += "; " + densities;
                stage("endgame", m ? n : cover.covered(), m ? 0 : cover.leftover.size(), 0, note, t0);
                if (m && accept(*m, "extremal"))
                    return {m, report};
            }
            break;
        }

        t0 = Clock::now();
        try {
            Matching m = absorb(h, am, cover_to_matching(cover), cover.leftover);
            stage("absorb", n, 0, cover.leftover.size(), "", t0);
            if (accept(m, "non-extremal"))
                return {m, report};
            report.fallback_reason = "absorbed matching invalid";
        } catch (const Error& e) {
            stage("absorb", cover.covered() + base_vertices.size(), cover.leftover.size(), 0, to_string(e.code()),
                  t0);
            report.fallback_reason = std::string("absorb: ") + to_string(e.code());
        }
    }

    // Exact fallback.
    if (n <= cfg.exact_max_n && n <= 64) {
        t0 = Clock::now();
        auto res = max_matching_exact(h, cfg.exact_budget);
        report.fallback_used = true;
        report.exact_optimal = res.optimal;
        report.exact_nodes = res.nodes_explored;
        const bool perfect = res.matching.size() * 4 == n;
        stage("exact_fallback", 4 * res.matching.size(), n - 4 * res.matching.size(), 0,
              perfect ? "perfect" : (res.optimal ? "no perfect matching" : "budget exhausted"), t0);
        if (perfect && accept(res.matching, "exact-fallback"))
            return {res.matching, report};
    }
    report.path = "none";
    return {std::nullopt, report};
}

nlohmann::ordered_json to_json(const Matching& m)
{
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& e : m.edges)
        out.push_back(e);
    return out;
}

nlohmann::ordered_json to_json(const PipelineReport& report, bool timings)
{
    nlohmann::ordered_json j;
    j["path"] = report.path;
    j["found"] = report.found;
    auto stages = nlohmann::ordered_json::array();
    for (const auto& s : report.stages) {
        nlohmann::ordered_json st;
        st["name"] = s.name;
        st["covered"] = s.covered;
        st["leftover"] = s.leftover;
        st["gain"] = s.gain;
        st["note"] = s.note;
        if (timings)
            st["seconds"] = s.seconds;
        stages.push_back(std::move(st));
    }
    j["stages"] = std::move(stages);
    j["cover_trace"] = report.cover_trace;
    j["absorber_stats"] = {{"base_edges", report.absorber_base_edges},
                           {"sampled", report.absorber_sampled},
                           {"registered", report.absorber_registered},
                           {"fresh_blocks", report.absorber_fresh_blocks}};
    j["fallback_used"] = report.fallback_used;
    j["fallback_reason"] = report.fallback_reason;
    j["exact"] = {{"optimal", report.exact_optimal}, {"nodes", report.exact_nodes}};
    nlohmann::ordered_json verdicts = nlohmann::ordered_json::object();
    for (const auto& [k, v] : report.verdicts)
        verdicts[k] = v;
    j["verdicts"] = std::move(verdicts);
    return j;
}

}  // namespace hypermatch
