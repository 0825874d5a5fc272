#pragma once

#include "tilework/graph.hpp"

#include <optional>

namespace tilework {

// Copy of edge `edge` of G_q inside the subtile reached by `path`.
struct SubEdgeRef {
    std::vector<int> path;
    int edge = 0;

    friend bool operator==(const SubEdgeRef&, const SubEdgeRef&) = default;
    friend auto operator<=>(const SubEdgeRef&, const SubEdgeRef&) = default;
};

struct RecurrentPair {
    int N = 1;
    std::vector<std::vector<SubEdgeRef>> S;  // per prototile
};

// R^N(G)_p. graph.edges[i] is the copy described by refs[i].
struct ContractedGraph {
    int p = 0, N = 0;
    PlanarGraph graph;
    std::vector<SubEdgeRef> refs;
    std::vector<int> type;  // prototile of the subtile holding each edge

    int find(const SubEdgeRef& r) const;
};

ContractedGraph contract_graph(const SubstitutionRule& rule, const EmbeddedGraph& g, int p, int n);
// Graph made of the given R^n(G)_p edges, in order.
PlanarGraph select_edges(const SubstitutionRule& rule, const EmbeddedGraph& g, int p, int n, const std::vector<SubEdgeRef>& refs);

struct SkeletonMatch {
    std::vector<int> vertex_map;                // a vertex -> b vertex
    std::vector<std::pair<int, bool>> edge_map; // a edge -> (b edge, same direction)
};

// Orientation-preserving isomorphism fixing prototile-edge hosts of boundary vertices.
std::optional<SkeletonMatch> match_skeletons(const Skeleton& a, const Skeleton& b, std::string* why = nullptr);

struct PairStructure {
    bool ok = false;
    std::string message;
    int N = 1;
    std::vector<Skeleton> g, s;
    std::vector<PlanarGraph> s_graph;
    std::vector<std::vector<SubEdgeRef>> refs;
    std::vector<SkeletonMatch> match;
    // images[p][k]: pieces of psi(G_p edge k) as (index into refs[p], forward), following G's orientation
    std::vector<std::vector<std::vector<std::pair<int, bool>>>> images;
};

PairStructure match_equivalence(const SubstitutionRule& rule, const EmbeddedGraph& g, const RecurrentPair& pair);

struct Condition {
    bool pass = true;
    std::vector<std::string> witnesses;
    void fail(std::string w) {
        pass = false;
        if (witnesses.size() < 8) witnesses.push_back(std::move(w));
    }
};

struct InjectivityReport {
    int N = 0;
    Condition I1, I2, I3, I4;
    Condition spans;  // every S edge is a union of at least two subedges
    bool all_pass() const { return I1.pass && I2.pass && I3.pass && I4.pass && spans.pass; }
    std::string summary() const;
};

InjectivityReport check_injectivity(const SubstitutionRule& rule, const PairStructure& ps, int n_test);
// same conditions for a graph given by its skeletons, one per prototile
InjectivityReport check_injectivity(const SubstitutionRule& rule, const std::vector<Skeleton>& skeletons, int n_test);

struct InjectivityScan {
    int least_n = -1;
    std::vector<InjectivityReport> reports;
};
// tests every N in [lo, hi] independently until one passes
InjectivityScan scan_injectivity(const SubstitutionRule& rule, const PairStructure& ps, int lo = 1, int hi = 4);

struct SpeedTable {
    // [p][k]: arclength fractions of the pieces of psi(e), and |psi(e)| / |e|
    std::vector<std::vector<std::vector<double>>> fractions;
    std::vector<std::vector<double>> ratio;
};
SpeedTable constant_speed(const SubstitutionRule& rule, const EmbeddedGraph& g, const PairStructure& ps);

double polyline_length(const std::vector<Point>& pts);

}  // namespace tilework
