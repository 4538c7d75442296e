#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hypermatch/bitset.hpp"
#include "hypermatch/core.hpp"

namespace hypermatch {

/// Bipartite incidence between abstract left items and right items; one bit
/// row (over left items) per right item.
struct Incidence {
    std::size_t left_size = 0;
    std::vector<DynBitset> rows;
};

/// Right items of degree >= eta * |left|. Throws InsufficientDensity if the
/// incidence density is below 2 eta.
std::vector<std::size_t> dense_side(const Incidence& g, Rational eta);

struct Biclique {
    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
};

/// Groups the right items by exact neighborhood and returns the largest group
/// with its shared neighborhood. Ties go to the numerically smallest
/// neighborhood. Throws EmptyInput if there are no right items.
Biclique common_neighborhood_bucket(const Incidence& g);

enum class ExtractMethod { Bucket, Backtrack };

const char* to_string(ExtractMethod m);

struct MultipartiteWitness {
    std::vector<VertexSet> classes;
    std::vector<char> roles;  // host set each class was drawn from: 'A', 'B', 'C', 'Z' or 'V'
    ExtractMethod method = ExtractMethod::Backtrack;
};

/// Every transversal tuple is an edge.
bool is_complete(const Hypergraph& h, const MultipartiteWitness& w);
bool is_balanced(const MultipartiteWitness& w);
bool is_disjoint(const MultipartiteWitness& w);

/// Backtracking search for K^(r)(l). nullopt means the budget ran out or the
/// search was exhausted; it is not a proof of absence when budget-limited.
std::optional<MultipartiteWitness> find_complete_r_partite(const Hypergraph& h, unsigned l,
                                                           std::uint64_t budget);

/// Complete r-partite subgraph with class s drawn from candidates[s], classes
/// pairwise disjoint, each of size l.
std::optional<MultipartiteWitness> find_complete_in(const Hypergraph& h,
                                                    const std::vector<VertexSet>& candidates, unsigned l,
                                                    std::uint64_t budget);

inline constexpr std::uint64_t kDefaultExtractBudget = 200000;

/// Classes (A1, B1, B2, B3). Needs d4(A, (B choose 3)) >= 2 eta.
std::optional<MultipartiteWitness> extract_one_three(const Hypergraph& h, const VertexSet& a,
                                                     const VertexSet& b, Rational eta, unsigned l,
                                                     std::uint64_t budget = kDefaultExtractBudget);

/// Classes (A', B', Z1, Z2). Needs d4(A, B, (Z choose 2)) >= 2 eta.
std::optional<MultipartiteWitness> extract_two_two(const Hypergraph& h, const VertexSet& a, const VertexSet& b,
                                                   const VertexSet& z, Rational eta, unsigned l,
                                                   std::uint64_t budget = kDefaultExtractBudget);

/// Classes (A', B', C', Z'). Needs d4(Z, A x B x C) >= 2 eta.
std::optional<MultipartiteWitness> extract_partite_volume(const Hypergraph& h, const VertexSet& a,
                                                          const VertexSet& b, const VertexSet& c,
                                                          const VertexSet& z, Rational eta, unsigned l,
                                                          std::uint64_t budget = kDefaultExtractBudget);

}  // namespace hypermatch
