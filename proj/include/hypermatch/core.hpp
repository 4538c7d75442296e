#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "hypermatch/bitset.hpp"

namespace hypermatch {

using Vertex = std::uint32_t;
/// An edge is the strictly increasing tuple of its vertices.
using Edge = std::vector<Vertex>;
/// Sorted, duplicate-free list of vertex ids.
using VertexSet = std::vector<Vertex>;
/// Exact densities and thresholds.
using Rational = boost::rational<std::int64_t>;

enum class Errc {
    InvalidEdge,
    InvalidDegreeOrder,
    InvalidVertex,
    TooSmall,
    InvalidPartition,
    Indivisible,
    Infeasible,
    NotDisjoint,
    InsufficientDensity,
    EmptyInput,
    NotApplicable,
    LemmaViolation,
    AbsorptionFailed,
    Parse,
    TooLarge,
};

const char* to_string(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what);
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

/// C(n, k); throws TooLarge if the result does not fit in 64 bits.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// r-uniform hypergraph with edges kept in lexicographic order.
///
/// Construction builds per-vertex incidence bitsets over edge indices and an
/// edge-membership index. The object is immutable afterwards.
class Hypergraph {
public:
    /// Edges may be given in any order and with unsorted vertices; they are
    /// normalized. Throws InvalidEdge on wrong arity, out-of-range or repeated
    /// vertices, or duplicate edges.
    Hypergraph(unsigned r, Vertex n, std::vector<Edge> edges);

    static Hypergraph complete(unsigned r, Vertex n);

    unsigned uniformity() const { return r_; }
    Vertex num_vertices() const { return n_; }
    std::size_t num_edges() const { return edges_.size() / r_; }

    std::span<const Vertex> edge(std::size_t i) const { return {edges_.data() + i * r_, r_}; }
    std::vector<Edge> edge_list() const;

    /// `vertices` must be strictly increasing and of size r.
    bool contains(std::span<const Vertex> vertices) const;
    /// Accepts vertices in any order.
    bool contains_unsorted(std::span<const Vertex> vertices) const;

    const DynBitset& incident(Vertex v) const { return incidence_[v]; }
    std::uint64_t vertex_degree(Vertex v) const { return incidence_[v].count(); }

    friend bool operator==(const Hypergraph& a, const Hypergraph& b)
    {
        return a.r_ == b.r_ && a.n_ == b.n_ && a.edges_ == b.edges_;
    }

private:
    std::uint64_t rank(std::span<const Vertex> vertices) const;

    unsigned r_;
    Vertex n_;
    std::vector<Vertex> edges_;  // flat, r per edge
    std::vector<DynBitset> incidence_;
    std::vector<std::uint64_t> binom_;  // (n+1) x (r+1) table for colex ranks
    DynBitset rank_index_;  // empty when C(n, r) is too large
};

struct Matching {
    std::vector<Edge> edges;

    std::size_t size() const { return edges.size(); }
    VertexSet vertices() const;
    friend bool operator==(const Matching&, const Matching&) = default;
};

struct MatchingCheck {
    bool valid = false;
    bool perfect = false;
};

/// Ordered list of pairwise disjoint vertex classes.
struct PartiteSpec {
    std::vector<VertexSet> classes;
};

enum class DensityKind {
    Restriction,  // d_r(U): parts = {U}
    OneVsRest,    // d_r(A, (B choose r-1)): parts = {A, B}
    PairVsRest,   // d_r(A, B, (C choose r-2)): parts = {A, B, C}
    Transversal,  // d_r(A_1, (A_2 x ... x A_r)): parts = {A_1, ..., A_r}
};

std::uint64_t degree(const Hypergraph& h, std::span<const Vertex> d);
std::uint64_t min_degree(const Hypergraph& h, unsigned d);

Rational density(const Hypergraph& h, std::span<const Vertex> u);
Rational partite_density(const Hypergraph& h, DensityKind kind, const PartiteSpec& parts);
/// Numerator and denominator of partite_density before reduction.
std::pair<std::uint64_t, std::uint64_t> partite_counts(const Hypergraph& h, DensityKind kind,
                                                       const PartiteSpec& parts);

/// Restriction to U, relabeled to [0, |U|) preserving order.
Hypergraph induce(const Hypergraph& h, std::span<const Vertex> u);

MatchingCheck validate_matching(const Hypergraph& h, const Matching& m);

/// Throws InvalidPartition unless the classes are nonempty, pairwise disjoint and < n.
void check_partition(Vertex n, const PartiteSpec& parts);

VertexSet make_vertex_set(std::vector<Vertex> vertices);
VertexSet set_difference(std::span<const Vertex> a, std::span<const Vertex> b);
VertexSet set_union(std::span<const Vertex> a, std::span<const Vertex> b);
bool disjoint(std::span<const Vertex> a, std::span<const Vertex> b);

/// Number of edges fully inside `u`.
std::uint64_t edges_inside(const Hypergraph& h, std::span<const Vertex> u);

}  // namespace hypermatch
