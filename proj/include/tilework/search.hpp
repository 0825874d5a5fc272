#pragma once

#include "tilework/recurrent.hpp"

#include <optional>

namespace tilework {

// An n-subtile of type p lying in the interior of R^n(P)_p.
struct InteriorCopy {
    int n = 0;
    Point translation;
    std::vector<int> path;
};

// Interior copies at level n, closest to the centre of p first.
std::vector<InteriorCopy> interior_copies(const SubstitutionRule& rule, int p, int n);
// Least n with an interior copy. Throws ValidationError past max_n.
InteriorCopy find_interior_copy(const SubstitutionRule& rule, int p, int max_n = 8);

// Per prototile: the interior copy and, per prototile edge, the R^N(G) edges of the channel path.
struct ChannelPlan {
    int p = 0, N = 0;
    InteriorCopy p0;
    std::vector<std::vector<int>> paths;     // contracted-graph edge ids, from the boundary inward
    std::vector<std::vector<int>> subtiles;  // N-subtiles met by each path
    std::vector<int> tree;                   // edges of the connecting tree inside p0
};

enum class SearchTarget { quasi_dual, dual };

struct SearchOptions {
    SearchTarget target = SearchTarget::quasi_dual;
    int max_N = 3;
    int max_iterations = 6;
    long budget = 100000;    // breadth-first expansions per prototile and level
    unsigned seed = 0;       // rotates the routing order
    bool corridor = false;   // keep each path inside the subtiles met by its straight chord
    int injectivity_max = 4;
};

struct SearchResult {
    bool ok = false;
    std::string diagnosis;
    std::vector<std::string> log;
    EmbeddedGraph G;
    std::vector<std::vector<std::vector<int>>> graph_edges;  // vertex-id polylines of G
    RecurrentPair pair;
    InjectivityReport injectivity;
    int iterations = 0;
};

// Straight spokes from the vertex average to the midpoint of every prototile edge.
EmbeddedGraph standard_dual_graph(const SubstitutionRule& rule);

// Graph part from a skeleton: kept vertices only, polylines as edges.
PlanarGraph skeleton_part(const Skeleton& s);
// Lists polyline interior points as extra vertices and returns id polylines for printing.
std::vector<std::vector<std::vector<int>>> polyline_ids(EmbeddedGraph& g);

// Channels and the level-N quasi-dual graph G1 inside R^N(G0). nullopt when routing fails for some prototile.
struct QuasiDualStep {
    int N = 0;
    EmbeddedGraph G1;  // skeleton form
    std::vector<std::vector<SubEdgeRef>> refs;  // G1 as edges of R^N(G0)
    std::vector<ChannelPlan> plans;
};
std::optional<QuasiDualStep> build_quasi_dual(const SubstitutionRule& rule, const EmbeddedGraph& g0, int N,
                                              const SearchOptions& opt, int copy_level, std::vector<std::string>* log = nullptr);

// The quasi-dual H in R^N(G') through the N-subtiles met by G'. Throws ValidationError if it is not unique,
// unless choose_tree is set; then the first spanning tree in edge order is taken.
std::vector<std::vector<SubEdgeRef>> iterate_pair(const SubstitutionRule& rule, const EmbeddedGraph& g_prime, int N,
                                                  bool choose_tree = false);

// Why no tree in R^N(G0)_p can be equivalent to the dual G0_p, if that is the case.
std::optional<std::string> dual_obstruction(const SubstitutionRule& rule, const EmbeddedGraph& g0, int N);

bool is_convex(const Polygon& poly);

SearchResult search_pair(const SubstitutionRule& rule, const EmbeddedGraph& g0, const SearchOptions& opt = {});
// Dual/dual pair for convex singly edge-to-edge rules. Throws ValidationError when the preconditions fail.
SearchResult convex_dual_pair(const SubstitutionRule& rule, int max_N = 4);

}  // namespace tilework
