// hypermatch command-line front end. JSON on stdout; exit 0 = success or
// perfect matching found, 1 = none/unknown/violations, 2 = error.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hypermatch/campaigns.hpp"
#include "hypermatch/construct.hpp"
#include "hypermatch/hg_format.hpp"
#include "hypermatch/link.hpp"
#include "hypermatch/pipeline.hpp"
#include "hypermatch/solve.hpp"

using namespace hypermatch;
using json = nlohmann::ordered_json;

namespace {

struct Globals {
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    bool no_timings = false;
};

std::uint64_t env_seed()
{
    const char* text = std::getenv("HYPERMATCH_SEED");
    if (text == nullptr || *text == '\0')
        return 0;
    try {
        std::size_t used = 0;
        auto v = std::stoull(text, &used, 0);
        if (used == std::string(text).size())
            return v;
    } catch (const std::exception&) {
    }
    throw Error(Errc::Parse, "HYPERMATCH_SEED is not an integer");
}

// "p/q" or a plain decimal such as 0.1.
Rational parse_rational(const std::string& text)
{
    try {
        if (auto slash = text.find('/'); slash != std::string::npos) {
            const auto p = std::stoll(text.substr(0, slash));
            const auto q = std::stoll(text.substr(slash + 1));
            if (q <= 0)
                throw Error(Errc::Parse, "bad rational: " + text);
            return Rational(p, q);
        }
        const auto dot = text.find('.');
        const std::string whole = text.substr(0, dot);
        const std::string frac = dot == std::string::npos ? "" : text.substr(dot + 1);
        if (frac.size() > 15 || (whole.empty() && frac.empty()))
            throw Error(Errc::Parse, "bad rational: " + text);
        std::int64_t scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i)
            scale *= 10;
        std::int64_t value = whole.empty() ? 0 : std::stoll(whole);
        std::int64_t tail = frac.empty() ? 0 : std::stoll(frac);
        if (value < 0 || tail < 0)
            throw Error(Errc::Parse, "bad rational: " + text);
        return Rational(value * scale + tail, scale);
    } catch (const std::logic_error&) {
        throw Error(Errc::Parse, "bad rational: " + text);
    }
}

std::string rational_text(Rational r)
{
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

void emit(const json& j)
{
    std::cout << j.dump(2) << "\n";
}

json triples_json(const std::array<Triple, 4>& m)
{
    json out = json::array();
    for (const auto& t : m)
        out.push_back({t[0], t[1], t[2]});
    return out;
}

// ---------------------------------------------------------------- gen

struct GenOptions {
    std::string kind;
    Vertex n = 0;
    std::optional<std::uint64_t> min_deg;
    std::string noise = "1/10";
    std::string pattern = "H432";
    std::string fill = "random";
    std::string out;
};

int cmd_gen(const GenOptions& o, const Globals& g)
{
    InstanceRecipe recipe;
    recipe.kind = o.kind;
    recipe.seed = g.seed;
    std::string contents;
    json summary;

    if (o.kind == "extremal" || o.kind == "random" || o.kind == "planted") {
        if (o.n == 0)
            throw Error(Errc::TooSmall, "--n is required");
        recipe.n = o.n;
        std::optional<Hypergraph> h;
        if (o.kind == "extremal") {
            recipe.kind = "extremal";
            h = extremal_construction(o.n);
        } else if (o.kind == "random") {
            recipe.kind = "random-dense";
            const std::uint64_t target = o.min_deg ? *o.min_deg : threshold(o.n);
            recipe.params["min_degree"] = std::to_string(target);
            h = random_dense_hypergraph(o.n, target, g.seed);
            if (min_degree(*h, 1) < target)
                throw Error(Errc::Infeasible, "generated graph misses the degree target");
        } else {
            recipe.kind = "planted-pm";
            const Rational noise = parse_rational(o.noise);
            recipe.params["noise"] = rational_text(noise);
            h = planted_pm_instance(o.n, noise, g.seed).first;
        }
        contents = serialize_hg(*h);
        summary["n"] = h->num_vertices();
        summary["edges"] = h->num_edges();
        summary["min_degree"] = min_degree(*h, 1);
    } else {
        LinkGraph lg;
        recipe.n = 12;
        if (o.kind == "hext") {
            lg = h_ext_canonical();
        } else {
            recipe.kind = "pattern";
            PatternKind kind = o.pattern == "H432" ? PatternKind::H432
                               : o.pattern == "H4221" ? PatternKind::H4221
                                                      : PatternKind::H3321;
            Fill fill = o.fill == "zero" ? Fill::Zero : o.fill == "full" ? Fill::Full : Fill::Random;
            recipe.params["pattern"] = o.pattern;
            recipe.params["fill"] = o.fill;
            lg = pattern_witness(kind, g.seed, fill);
        }
        contents = to_hex(lg) + "\n";
        summary["mask"] = to_hex(lg);
        summary["popcount"] = lg.popcount();
    }

    json manifest;
    manifest["kind"] = recipe.kind;
    manifest["n"] = recipe.n;
    manifest["params"] = json::object();
    for (const auto& [k, v] : recipe.params)
        manifest["params"][k] = v;
    manifest["seed"] = recipe.seed;

    if (o.out.empty()) {
        std::cout << contents;
        return 0;
    }
    std::filesystem::path out(o.out);
    if (out.has_parent_path())
        std::filesystem::create_directories(out.parent_path());
    {
        std::ofstream f(out, std::ios::binary);
        if (!f)
            throw Error(Errc::Parse, "cannot write " + o.out);
        f << contents;
    }
    std::filesystem::path manifest_path = out;
    manifest_path.replace_extension(".json");
    {
        std::ofstream f(manifest_path, std::ios::binary);
        f << manifest.dump(2) << "\n";
    }
    json j;
    j["written"] = out.string();
    j["manifest"] = manifest_path.string();
    j["recipe"] = manifest;
    for (auto& [k, v] : summary.items())
        j[k] = v;
    emit(j);
    return 0;
}

// ---------------------------------------------------------------- solve

struct SolveOptions {
    std::string input;
    std::string mode = "auto";
    std::uint64_t budget = 5000000;
};

int cmd_solve(const SolveOptions& o, const Globals& g)
{
    const auto start = std::chrono::steady_clock::now();
    Hypergraph h = read_hg_file(o.input);
    const Vertex n = h.num_vertices();
    std::string mode = o.mode;
    if (mode == "auto")
        mode = n <= 20 ? "exact" : "pipeline";

    json j;
    j["input"] = o.input;
    j["n"] = n;
    j["edges"] = h.num_edges();
    j["mode"] = mode;
    j["seed"] = g.seed;
    bool found = false;

    if (h.uniformity() == 0 || n % h.uniformity() != 0) {
        j["found"] = false;
        j["matching"] = nullptr;
        j["note"] = "n is not divisible by r";
    } else if (mode == "exact") {
        auto res = max_matching_exact(h, o.budget);
        found = res.matching.size() * h.uniformity() == n;
        j["found"] = found;
        j["matching"] = found ? to_json(res.matching) : json(nullptr);
        j["max_matching"] = res.matching.size();
        j["max_matching_edges"] = to_json(res.matching);
        j["optimal"] = res.optimal;
        j["nodes"] = res.nodes_explored;
        j["timed_out"] = res.timed_out;
    } else {
        PipelineConfig cfg;
        cfg.seed = g.seed;
        cfg.exact_budget = o.budget;
        auto [m, report] = solve_pipeline(h, cfg);
        found = m.has_value();
        j["found"] = found;
        j["matching"] = found ? to_json(*m) : json(nullptr);
        j["report"] = to_json(report, !g.no_timings);
    }
    if (!g.no_timings)
        j["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    emit(j);
    return found ? 0 : 1;
}

// ---------------------------------------------------------------- classify

int cmd_classify(const std::string& arg, const std::string& artifact_dir)
{
    std::string text = arg;
    if (std::filesystem::is_regular_file(arg)) {
        std::ifstream f(arg);
        f >> text;
    }
    LinkGraph g = link_from_hex(text);
    json j;
    j["mask"] = to_hex(g);
    j["popcount"] = g.popcount();
    j["canonical"] = to_hex(LinkGraph{canonical_form(g)});
    if (g.popcount() < 37) {
        j["verdict"] = "NotApplicable";
        emit(j);
        return 1;
    }
    try {
        Classification c = classify(g);
        j["verdict"] = to_string(c.verdict);
        json w = json::object();
        if (c.matching)
            w["matching"] = triples_json(*c.matching);
        if (c.pairs) {
            w["side"] = to_string(c.pairs->side);
            json pairs = json::array();
            for (auto [x, y] : c.pairs->pairs)
                pairs.push_back({x, y});
            w["pairs"] = pairs;
            w["degrees"] = c.pairs->degrees;
        }
        if (c.cover)
            w["cover"] = {(*c.cover)[0], (*c.cover)[1], (*c.cover)[2]};
        j["witness"] = w;
        j["verified"] = verify_classification(g, c);
        emit(j);
        return j["verified"].get<bool>() ? 0 : 1;
    } catch (const Error& e) {
        if (e.code() != Errc::LemmaViolation)
            throw;
        std::filesystem::create_directories(artifact_dir);
        const auto path = std::filesystem::path(artifact_dir) / ("lemma37_" + to_hex(g) + ".hex");
        std::ofstream(path) << to_hex(g) << "\n";
        j["verdict"] = "LemmaViolation";
        j["artifact"] = path.string();
        emit(j);
        return 1;
    }
}

// ---------------------------------------------------------------- verify

struct VerifyOptions {
    std::string campaign;
    std::optional<std::uint64_t> samples, mutants, trials, instances, absorb_trials;
    std::vector<Vertex> sizes;
    std::vector<Vertex> extremal_sizes;
    std::optional<Vertex> n_max;
    std::string artifacts = "artifacts";
};

int cmd_verify(const VerifyOptions& o, const Globals& g)
{
    CampaignContext ctx{g.seed, std::max(1U, g.jobs), o.artifacts};
    json j;
    if (o.campaign == "lemma37") {
        Lemma37Params p;
        if (o.samples)
            p.samples = *o.samples;
        if (o.mutants)
            p.mutants = *o.mutants;
        j = run_lemma37(p, ctx);
    } else if (o.campaign == "tightness") {
        TightnessParams p;
        if (!o.sizes.empty())
            p.sizes = o.sizes;
        j = run_tightness(p, ctx);
    } else if (o.campaign == "solver") {
        SolverParams p;
        if (o.n_max)
            p.n_max = *o.n_max;
        if (o.trials)
            p.trials = *o.trials;
        j = run_solver(p, ctx);
    } else if (o.campaign == "absorb") {
        AbsorbParams p;
        if (!o.sizes.empty())
            p.n = o.sizes.front();
        if (o.instances)
            p.instances = *o.instances;
        if (o.absorb_trials)
            p.absorb_trials = *o.absorb_trials;
        j = run_absorb(p, ctx);
    } else {
        PipelineParams p;
        if (!o.sizes.empty())
            p.n = o.sizes.front();
        if (o.instances)
            p.instances = *o.instances;
        if (!o.extremal_sizes.empty())
            p.extremal_sizes = o.extremal_sizes;
        j = run_pipeline(p, ctx);
    }
    emit(j);
    return j["violations"].get<std::uint64_t>() == 0 ? 0 : 1;
}

// ---------------------------------------------------------------- stats

int cmd_stats(const std::string& input)
{
    Hypergraph h = read_hg_file(input);
    const Vertex n = h.num_vertices();
    const unsigned r = h.uniformity();
    json j;
    j["input"] = input;
    j["n"] = n;
    j["r"] = r;
    j["edges"] = h.num_edges();
    json degs = json::object();
    for (unsigned d = 1; d < r; ++d)
        degs[std::to_string(d)] = n >= r ? min_degree(h, d) : 0;
    j["min_degree"] = degs;
    if (n >= r) {
        VertexSet all(n);
        for (Vertex v = 0; v < n; ++v)
            all[v] = v;
        const Rational d = density(h, all);
        j["density"] = rational_text(d);
        j["density_value"] = boost::rational_cast<double>(d);
    } else {
        j["density"] = nullptr;
    }
    if (r == 4 && n >= 8 && n % 4 == 0) {
        const auto thr = threshold(n);
        const auto d1 = min_degree(h, 1);
        j["threshold"] = thr;
        j["flag"] = d1 < thr ? "below threshold" : d1 == thr ? "at threshold" : "above";
    } else {
        j["threshold"] = nullptr;
        j["flag"] = "n/a";
    }
    emit(j);
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Perfect matchings in 4-uniform hypergraphs: generators, solvers, verification campaigns."};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    std::optional<std::uint64_t> seed;
    app.add_option("--seed", seed, "Root seed (default: $HYPERMATCH_SEED or 0)");
    app.add_option("--jobs", g.jobs, "Worker threads for campaigns")->check(CLI::Range(1U, 1024U));
    app.add_flag("--no-timings", g.no_timings, "Omit wall-clock fields from JSON");

    GenOptions gen;
    auto* gen_cmd = app.add_subcommand("gen", "Generate an instance and its JSON manifest");
    gen_cmd->add_option("kind", gen.kind, "extremal | hext | random | planted | pattern")
        ->required()
        ->check(CLI::IsMember({"extremal", "hext", "random", "planted", "pattern"}));
    gen_cmd->add_option("--n", gen.n, "Vertex count");
    gen_cmd->add_option("--min-deg", gen.min_deg, "Minimum vertex degree target (random)");
    gen_cmd->add_option("--noise", gen.noise, "Noise rate as p/q or decimal (planted)");
    gen_cmd->add_option("--pattern", gen.pattern, "H432 | H4221 | H3321")
        ->check(CLI::IsMember({"H432", "H4221", "H3321"}));
    gen_cmd->add_option("--fill", gen.fill, "zero | random | full")->check(CLI::IsMember({"zero", "random", "full"}));
    gen_cmd->add_option("--out,-o", gen.out, "Output path; the manifest goes next to it as .json");

    SolveOptions solve;
    auto* solve_cmd = app.add_subcommand("solve", "Find a perfect matching");
    solve_cmd->add_option("input", solve.input, ".hg file")->required();
    solve_cmd->add_option("--mode", solve.mode, "exact | pipeline | auto")
        ->check(CLI::IsMember({"exact", "pipeline", "auto"}));
    solve_cmd->add_option("--budget", solve.budget, "Node budget of the exact solver (0 = unlimited)");

    std::string classify_arg, classify_artifacts = "artifacts";
    auto* classify_cmd = app.add_subcommand("classify", "Classify a 4x4x4 link graph");
    classify_cmd->add_option("mask", classify_arg, "16 hex digits or a file containing them")->required();
    classify_cmd->add_option("--artifacts", classify_artifacts, "Directory for counterexamples");

    VerifyOptions verify;
    auto* verify_cmd = app.add_subcommand("verify", "Run a verification campaign");
    verify_cmd->add_option("campaign", verify.campaign, "lemma37 | tightness | solver | absorb | pipeline")
        ->required()
        ->check(CLI::IsMember({"lemma37", "tightness", "solver", "absorb", "pipeline"}));
    verify_cmd->add_option("--samples", verify.samples, "Uniform masks (lemma37)");
    verify_cmd->add_option("--mutants", verify.mutants, "Adversarial masks (lemma37)");
    verify_cmd->add_option("--n", verify.sizes, "Vertex counts, comma separated")->delimiter(',');
    verify_cmd->add_option("--extremal-n", verify.extremal_sizes, "Extremal sizes (pipeline)")->delimiter(',');
    verify_cmd->add_option("--n-max", verify.n_max, "Largest n (solver)");
    verify_cmd->add_option("--trials", verify.trials, "Random graphs (solver)");
    verify_cmd->add_option("--instances", verify.instances, "Random instances (absorb, pipeline)");
    verify_cmd->add_option("--absorb-trials", verify.absorb_trials, "Absorb calls per instance");
    verify_cmd->add_option("--artifacts", verify.artifacts, "Directory for counterexamples");

    std::string stats_input;
    auto* stats_cmd = app.add_subcommand("stats", "Degree and density statistics");
    stats_cmd->add_option("input", stats_input, ".hg file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        g.seed = seed ? *seed : env_seed();
        if (*gen_cmd)
            return cmd_gen(gen, g);
        if (*solve_cmd)
            return cmd_solve(solve, g);
        if (*classify_cmd)
            return cmd_classify(classify_arg, classify_artifacts);
        if (*verify_cmd)
            return cmd_verify(verify, g);
        if (*stats_cmd)
            return cmd_stats(stats_input);
    } catch (const Error& e) {
        std::cerr << json{{"error", to_string(e.code())}, {"message", e.what()}}.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "Internal"}, {"message", e.what()}}.dump() << "\n";
        return 2;
    }
    return 2;
}
