#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "hypermatch/core.hpp"

namespace hypermatch {

/// Shared knobs. Results never depend on `jobs`.
struct CampaignContext {
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    std::string artifact_dir = "artifacts";
};

struct Lemma37Params {
    std::uint64_t samples = 1000000;  // uniform masks with >= 37 edges
    std::uint64_t mutants = 100000;   // perturbed H_ext / pattern witnesses
};

struct TightnessParams {
    std::vector<Vertex> sizes{8, 12, 16, 20};
};

struct SolverParams {
    Vertex n_max = 12;
    std::uint64_t trials = 10000;
};

struct AbsorbParams {
    Vertex n = 40;
    Rational min_degree_fraction{3, 5};  // of C(n-1, 3)
    std::uint64_t instances = 1;
    std::uint64_t absorb_trials = 200;
};

struct PipelineParams {
    Vertex n = 32;
    std::uint64_t instances = 100;
    std::vector<Vertex> extremal_sizes{8, 12, 16, 20};
};

/// Every campaign returns {"campaign", "seed", "params", "counts",
/// "violations", "artifacts"}; exit status 0 iff violations == 0.
nlohmann::ordered_json run_lemma37(const Lemma37Params& p, const CampaignContext& ctx);
nlohmann::ordered_json run_tightness(const TightnessParams& p, const CampaignContext& ctx);
nlohmann::ordered_json run_solver(const SolverParams& p, const CampaignContext& ctx);
nlohmann::ordered_json run_absorb(const AbsorbParams& p, const CampaignContext& ctx);
nlohmann::ordered_json run_pipeline(const PipelineParams& p, const CampaignContext& ctx);

/// Exhaustive maximum matching size: the first uncovered vertex is either
/// skipped or covered by each of its remaining edges.
std::size_t naive_max_matching(const Hypergraph& h);

}  // namespace hypermatch
