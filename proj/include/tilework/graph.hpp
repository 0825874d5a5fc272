#pragma once

#include "tilework/rule.hpp"

namespace tilework {

// An edge is a polyline from vertex u to vertex w (both ends included).
struct GraphEdge {
    int u = 0, w = 0;
    std::vector<Point> polyline;
};

struct PlanarGraph {
    std::vector<Point> vertices;
    std::vector<GraphEdge> edges;
};

// Geometric graph on a prototile set: one planar graph per prototile.
struct EmbeddedGraph {
    std::vector<PlanarGraph> parts;
};

// Builds a graph part from vertex coordinates and vertex-id polylines.
PlanarGraph make_graph(const std::vector<Point>& vertices, const std::vector<std::vector<int>>& polylines);

struct EdgeEnd {
    int edge;
    bool at_start;  // the end at the edge's `from` vertex
};

struct Skeleton {
    static constexpr int kInterior = -1;
    static constexpr int kAtCorner = -2;

    struct Edge {
        int from = 0, to = 0;
        // underlying graph edges in traversal order, with direction
        std::vector<std::pair<int, bool>> pieces;
        std::vector<Point> polyline;
    };
    std::vector<int> vertex;  // skeleton vertex -> graph vertex id
    std::vector<Point> position;
    std::vector<int> host;  // prototile edge holding the vertex, kInterior or kAtCorner
    std::vector<Edge> edges;
    std::vector<std::vector<EdgeEnd>> rotation;  // counterclockwise at each vertex

    int degree(int v) const { return static_cast<int>(rotation[v].size()); }
    bool is_boundary(int v) const { return host[v] != kInterior; }
    int find(const Point& p) const;
    int interior_count() const;
};

// Suppresses degree-2 vertices. Vertices on the prototile boundary are kept.
// Throws ValidationError when two edge ends leave a vertex in the same direction.
Skeleton skeleton(const PlanarGraph& g, const Prototile* tile = nullptr);

// prototile edge whose relative interior holds p, Skeleton::kAtCorner on a vertex, kInterior otherwise
int host_edge(const Prototile& tile, const Point& p);

struct ConsistencyReport {
    bool planar = true;           // edges meet only at shared end vertices
    bool boundary_ok = true;      // meets the boundary only at boundary vertices
    bool t_consistent = true;     // boundary vertices closed under tile adjacency
    bool trees = true;
    bool one_per_edge = true;     // one boundary vertex per prototile edge, none at corners
    bool interior_degrees = true; // interior vertices have degree >= 3
    bool quasi_dual = false;
    bool dual = false;
    std::vector<std::string> diagnostics;
};

ConsistencyReport check_consistency(const EmbeddedGraph& g, const SubstitutionRule& rule);

struct Face {
    std::vector<Point> boundary;  // closed walk, counterclockwise
    bool complete = false;
    Point vertex;                 // the tiling vertex the face surrounds (complete faces)
    int label = -1;               // index into the star list, -1 if unknown
};

// Faces of the graph obtained by placing G in every tile of a unit-scale patch.
std::vector<Face> induced_tiling(const EmbeddedGraph& g, const SubstitutionRule& rule, const Patch& patch,
                                 const std::vector<VertexStar>& stars);

}  // namespace tilework
