#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "hypermatch/core.hpp"

namespace hypermatch {

struct Absorber {
    std::size_t block = 0;  // index into AbsorbingMatching::blocks
    Matching replacement;   // covers exactly V(block) and W
};

struct AbsorbingMatching {
    Matching base;
    /// Each block lists indices into base.edges.
    std::vector<std::vector<std::size_t>> blocks;
    std::map<VertexSet, Absorber> absorbers;
    std::size_t sampled = 0;
    std::size_t registered = 0;
    std::size_t fresh_blocks = 0;

    Rational success_rate() const
    {
        return sampled == 0 ? Rational(0) : Rational(static_cast<std::int64_t>(registered),
                                                     static_cast<std::int64_t>(sampled));
    }
};

/// H|_S and H|_{S u W} both have perfect matchings. Throws NotDisjoint if S
/// meets W.
bool is_absorbing_set(const Hypergraph& h, const VertexSet& s, const VertexSet& w);

struct AbsorberParams {
    std::size_t max_edges = 6;
    std::size_t trials = 200;        // sampled 4-sets W
    std::size_t search_trials = 64;  // random S tried per fresh block
    unsigned set_size = 12;          // 12 or 16
    std::size_t barren_limit = 16;   // consecutive failed fresh searches before they stop
};

/// Samples W from the vertices outside the current base. Each W is matched
/// against the existing blocks first; otherwise a fresh absorbing set S is
/// searched for and its matching appended to the base, capacity permitting.
AbsorbingMatching build_absorbing_matching(const Hypergraph& h, const AbsorberParams& params,
                                           std::uint64_t seed);

/// Matching covering exactly V(base) u V(partial) u W. W is split into
/// consecutive 4-sets; each uses a registered absorber, another unused
/// block, or a fresh combination of up to three edges from the partial
/// matching and unused base edges. Throws AbsorptionFailed when a 4-set
/// cannot be absorbed and NotDisjoint when the inputs overlap.
Matching absorb(const Hypergraph& h, const AbsorbingMatching& am, const Matching& partial, const VertexSet& w,
                std::size_t search_budget = 4096);

}  // namespace hypermatch
