#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "hypermatch/core.hpp"
#include "hypermatch/link_graph.hpp"

namespace hypermatch {

using VertexPair = std::pair<std::uint8_t, std::uint8_t>;

/// |N(x, y)|: vertices of the third class forming an edge with x and y.
unsigned pair_degree(LinkGraph g, Side side, unsigned x, unsigned y);

/// pair_degree(x1, y2) + pair_degree(x2, y1). Throws NotDisjoint if the pairs
/// share a vertex.
unsigned crossing_degree_sum(LinkGraph g, Side side, VertexPair p1, VertexPair p2);

struct PairSystem {
    Side side = Side::Q01;
    std::vector<VertexPair> pairs;
    std::vector<unsigned> degrees;  // aligned with pairs
    friend bool operator==(const PairSystem&, const PairSystem&) = default;
};

/// First qualifying system in scan order: sides Q01, Q02, Q12; pairings by
/// next_permutation; then index subsets in lexicographic order.
std::optional<PairSystem> detect_pattern(LinkGraph g, PatternKind kind);

/// Recomputes degrees and disjointness and checks the kind's requirement.
bool verify_pair_system(LinkGraph g, PatternKind kind, const PairSystem& system);

/// Cover transversal (a, b, c), scanned lexicographically, if g is a copy of H_ext.
std::optional<Triple> is_ext(LinkGraph g);

enum class Verdict { PerfectMatching, H432, H4221, H3321, Ext };

const char* to_string(Verdict v);

struct Classification {
    Verdict verdict = Verdict::Ext;
    std::optional<std::array<Triple, 4>> matching;
    std::optional<PairSystem> pairs;
    std::optional<Triple> cover;
};

/// Precedence PerfectMatching > H432 > H4221 > H3321 > Ext.
/// Throws NotApplicable below 37 edges and LemmaViolation if nothing applies.
Classification classify(LinkGraph g);

bool verify_classification(LinkGraph g, const Classification& c);

/// Element of (S4 x S4 x S4) x| S3. New class c is old class class_perm[c];
/// within new class c, old label t becomes labels[c][t].
struct LinkSymmetry {
    std::array<std::uint8_t, 3> class_perm{0, 1, 2};
    std::array<std::array<std::uint8_t, 4>, 3> labels{{{0, 1, 2, 3}, {0, 1, 2, 3}, {0, 1, 2, 3}}};
};

LinkGraph apply(const LinkSymmetry& s, LinkGraph g);

/// Minimum mask over the orbit of g.
std::uint64_t canonical_form(LinkGraph g);

/// Four classes each.
using Block = PartiteSpec;

/// Bit (i, j, k) is set iff d4(Z, A_i x B_j x C_k) >= 2 eta, where A, B, C are
/// the classes of the three blocks. Throws InvalidPartition on overlap.
LinkGraph build_link_graph(const Hypergraph& h, const std::array<Block, 3>& blocks,
                           const VertexSet& z, Rational eta);

}  // namespace hypermatch
