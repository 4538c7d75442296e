#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "hypermatch/core.hpp"
#include "hypermatch/link_graph.hpp"

namespace hypermatch {

/// C(n-1, 3) - C(3n/4, 3) + 1. Throws Indivisible unless 4 | n, TooSmall if n < 8.
std::uint64_t threshold(Vertex n);

/// The set A = {0, ..., n/4 - 2} of the tightness construction.
VertexSet extremal_a(Vertex n);
VertexSet extremal_b(Vertex n);

/// All 4-sets meeting A. Minimum vertex degree is threshold(n) - 1 and the
/// largest matching has n/4 - 1 edges.
Hypergraph extremal_construction(Vertex n);

/// extremal_construction(n) plus ceil(|B|/4) edges inside B that together
/// cover B, which lifts the minimum degree to threshold(n).
Hypergraph extremal_repaired(Vertex n);

/// Triples meeting the transversal (0, 0, 0): 37 of them.
LinkGraph h_ext_canonical();

enum class Fill { Zero, Random, Full };

/// Plants disjoint pairs with exactly the degrees `kind` requires. Bits whose
/// pair is not planted are filled according to `fill`.
LinkGraph pattern_witness(PatternKind kind, std::uint64_t seed, Fill fill = Fill::Random);

/// Bernoulli(target / C(n-1, 3)) on every 4-set, then deficient vertices (in
/// id order) receive random incident edges until they reach target.
/// Throws Infeasible if target > C(n-1, 3).
Hypergraph random_dense_hypergraph(Vertex n, std::uint64_t target, std::uint64_t seed);

/// A random perfect matching plus every other 4-set independently at
/// rate `noise`.
std::pair<Hypergraph, Matching> planted_pm_instance(Vertex n, Rational noise, std::uint64_t seed);

/// Uniform over masks with popcount >= min_edges.
LinkGraph random_link_graph(unsigned min_edges, std::uint64_t seed);

/// Reproducible generation record written next to generated files.
struct InstanceRecipe {
    std::string kind;
    Vertex n = 0;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> params;
};

}  // namespace hypermatch
