#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "hypermatch/core.hpp"
#include "hypermatch/link_graph.hpp"

namespace hypermatch {

struct MatchingResult {
    Matching matching;
    bool optimal = false;
    std::uint64_t nodes_explored = 0;
    bool timed_out = false;
};

/// Branch and bound over vertices (lowest residual degree first, ties by id),
/// branching on the pivot's live edges and finally on leaving it uncovered.
/// Supports n <= 64; throws TooLarge otherwise. A zero budget means unlimited.
MatchingResult max_matching_exact(const Hypergraph& h, std::uint64_t node_budget);

/// Exhaustive; ignores budgets. Throws Indivisible unless r | n.
std::optional<Matching> has_perfect_matching(const Hypergraph& h);

/// Perfect matching of H|_U, reported in the original vertex ids.
std::optional<Matching> perfect_matching_on(const Hypergraph& h, const VertexSet& u);

/// Four disjoint triples (i, sigma(i), tau(i)) of the link graph, if any.
std::optional<std::array<Triple, 4>> tripartite_pm_444(LinkGraph g);

/// Bipartite graph with adjacency stored per right vertex.
struct BipartiteGraph {
    std::size_t left_size = 0;
    std::vector<std::vector<std::size_t>> right_adj;
};

struct HallOutcome {
    /// assignment[r] = left partner of right vertex r.
    std::optional<std::vector<std::size_t>> assignment;
    /// Right vertices whose joint neighborhood is smaller than themselves.
    std::optional<std::vector<std::size_t>> violator;
};

HallOutcome hall_matching(const BipartiteGraph& g);

/// Left neighbors of the given right vertices.
std::vector<std::size_t> neighborhood(const BipartiteGraph& g, const std::vector<std::size_t>& right);

/// Takes edges in lexicographic order whenever they are disjoint from the
/// current matching. The result is maximal.
Matching greedy_matching(const Hypergraph& h);

struct PeelResult {
    VertexSet kept;    // vertex ids in the input graph
    Hypergraph graph;  // induced on kept, relabeled
};

/// With theta = |E| / |V| fixed from the input, deletes vertices of degree
/// below theta (lowest id first) until none remain. Throws EmptyInput on an
/// edgeless graph.
PeelResult min_degree_peel(const Hypergraph& h);

}  // namespace hypermatch
