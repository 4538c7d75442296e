#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hypermatch/absorb.hpp"
#include "hypermatch/core.hpp"
#include "hypermatch/extract.hpp"
#include "hypermatch/link.hpp"

namespace hypermatch {

/// Disjoint balanced complete 4-partite blocks with common class size m.
struct Cover {
    std::vector<MultipartiteWitness> blocks;
    unsigned m = 0;
    VertexSet leftover;

    std::size_t covered() const { return 4 * static_cast<std::size_t>(m) * blocks.size(); }
};

/// Blocks disjoint from each other and from the leftover, four classes of
/// size m each, and complete in h.
bool cover_valid(const Hypergraph& h, const Cover& cover);

struct PipelineConfig {
    Rational gamma{1, 8};
    Rational alpha{1, 5};
    Rational eta{1, 16};
    unsigned l = 1;          // class size of the initial cover
    unsigned pull_size = 1;  // class size of blocks created by extensions
    std::uint64_t extract_budget = 200000;
    std::uint64_t exact_budget = 5000000;
    Vertex exact_max_n = 40;
    AbsorberParams absorber{};
    std::size_t triple_samples = 4000;
    unsigned max_iterations = 64;
    unsigned extremal_retries = 8;
    unsigned extremal_local_steps = 256;
    std::uint64_t seed = 0;
    bool check_invariants = false;
    bool filtered_endgame = false;  // gate d(U) with filtered_density instead of density
};

/// Throws InvalidPartition unless 0 < gamma <= alpha <= 1, l >= 1 and
/// pull_size >= 1.
void validate_config(const PipelineConfig& cfg);

std::optional<VertexSet> detect_extremal(const Hypergraph& h, Rational alpha, unsigned local_steps = 256);

/// Repeated K^(4)(l) extraction inside the leftover of `domain`.
Cover build_initial_cover(const Hypergraph& h, const VertexSet& domain, const PipelineConfig& cfg);
Cover build_initial_cover(const Hypergraph& h, const PipelineConfig& cfg);

struct ExtTriple {
    std::array<std::size_t, 3> blocks{};  // indices into the cover passed in
    Triple cover{};
    VertexSet cover_vertices;
};

struct ExtendResult {
    Cover cover;
    std::size_t gain = 0;  // net increase in covered vertices
    std::vector<ExtTriple> ext_triples;
    std::map<std::string, std::size_t> verdicts;  // link graphs with >= 37 edges
};

ExtendResult extend_cover_two_classes(const Hypergraph& h, const Cover& cover, const PipelineConfig& cfg);
ExtendResult extend_cover_nine_sided(const Hypergraph& h, const Cover& cover, const PipelineConfig& cfg);
ExtendResult extend_cover_triples(const Hypergraph& h, const Cover& cover, const PipelineConfig& cfg);

/// Density of the 4-graph over the 4-sets that take at most one vertex from
/// each group. Throws InvalidPartition on overlapping groups and TooSmall when
/// fewer than four groups are nonempty.
Rational filtered_density(const Hypergraph& h, const PartiteSpec& groups);

/// Splits every block into blocks of class size `size`; classes that do not
/// divide evenly lose their highest vertices to the leftover.
Cover split_blocks(const Cover& cover, unsigned size);

/// Edge i of a block takes the i-th vertex of each class.
Matching cover_to_matching(const Cover& cover);

std::optional<Matching> extremal_matcher(const Hypergraph& h, const VertexSet& b, Rational alpha,
                                         std::uint64_t seed = 0, unsigned retries = 8);

struct StageRecord {
    std::string name;
    std::size_t covered = 0;
    std::size_t leftover = 0;
    std::size_t gain = 0;
    std::string note;
    double seconds = 0;
};

struct PipelineReport {
    std::string path = "none";  // extremal | non-extremal | exact-fallback | none
    std::vector<StageRecord> stages;
    std::vector<std::size_t> cover_trace;
    std::size_t absorber_base_edges = 0;
    std::size_t absorber_sampled = 0;
    std::size_t absorber_registered = 0;
    std::size_t absorber_fresh_blocks = 0;
    bool fallback_used = false;
    std::string fallback_reason;
    bool exact_optimal = false;
    std::uint64_t exact_nodes = 0;
    std::map<std::string, std::size_t> verdicts;
    bool found = false;
};

std::pair<std::optional<Matching>, PipelineReport> solve_pipeline(const Hypergraph& h, const PipelineConfig& cfg);

nlohmann::ordered_json to_json(const PipelineReport& report, bool timings);
nlohmann::ordered_json to_json(const Matching& m);

}  // namespace hypermatch
