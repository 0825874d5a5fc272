#pragma once

#include "tilework/polygon.hpp"

#include <Eigen/Core>

#include <map>
#include <string>

namespace tilework {

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Prototile {
    std::string label;
    Polygon support;
    // T-consistent vertex set, counterclockwise from support corner 0.
    // Prototile edge k runs from boundary_vertices[k] to boundary_vertices[k+1].
    std::vector<Point> boundary_vertices;

    std::size_t edge_count() const { return boundary_vertices.size(); }
    const Point& corner(std::size_t k) const { return boundary_vertices[k % boundary_vertices.size()]; }
};

// A tile of a tiling at unit scale touching tile `a` at the origin.
struct Adjacency {
    int a = 0, b = 0;
    Point offset;
};

struct SubstitutionRule {
    std::string name;
    int d = 1;
    FieldScalar lambda;
    std::vector<Prototile> prototiles;
    // digits[p][q] = D_pq
    std::vector<std::vector<std::vector<Point>>> digits;

    // filled by compute_vertex_set
    std::vector<Adjacency> adjacencies;
    int closure_depth = -1;
    bool vertex_set_grew = false;

    int size() const { return static_cast<int>(prototiles.size()); }
    int index_of(const std::string& label) const;
    Eigen::MatrixXi substitution_matrix() const;
    FieldScalar lambda_pow(int k) const;
};

struct Child {
    int type;
    Point digit;
};
// Children of p ordered by type, then by digit order within D_pq.
std::vector<Child> children(const SubstitutionRule& rule, int p);

// support = lambda^-level * supp(type) + translation
struct PlacedTile {
    int type = 0;
    Point translation;
    int level = 0;
    std::vector<int> path;
};
using Patch = std::vector<PlacedTile>;

Polygon tile_support(const SubstitutionRule& rule, const PlacedTile& t);
// boundary_vertices of the tile in ambient coordinates
std::vector<Point> tile_marks(const SubstitutionRule& rule, const PlacedTile& t);

Patch subtile_patch(const SubstitutionRule& rule, int p, int n);
Patch supertile(const SubstitutionRule& rule, int p, int n);
// omega applied to a patch of unit-scale tiles
Patch inflate(const SubstitutionRule& rule, const Patch& patch);
// point of the n-subtile with the given path, in coordinates of the root prototile
Point subtile_translation(const SubstitutionRule& rule, int p, const std::vector<int>& path, int* type = nullptr);

bool is_primitive(const Eigen::MatrixXi& m);

// Computes legal adjacencies by closing under inflation, then the
// T-consistent vertex set. Throws ValidationError if not stable by max_depth.
void compute_vertex_set(SubstitutionRule& rule, int max_depth = 6);
bool singly_edge_to_edge(const SubstitutionRule& rule);
// number of prototile edges a and b share in the given adjacency
int shared_edge_count(const SubstitutionRule& rule, const Adjacency& adj);

struct ValidationReport {
    bool valid = false;
    std::vector<std::string> errors;
    Eigen::MatrixXi M;
    bool primitive = false;
    bool singly_edge_to_edge = false;
    bool vertex_set_grew = false;
    int closure_depth = -1;
    std::vector<int> vertex_counts;
    double seconds = 0;

    std::string summary() const;
};

// Checks covering and packing of every R(P)_p exactly, then computes the vertex set.
ValidationReport validate_rule(SubstitutionRule& rule);

struct StarTile {
    int type;
    Point translation;
};

// Tiles around a tiling vertex, anchored at the origin, sorted canonically.
struct VertexStar {
    std::vector<StarTile> tiles;
};

bool star_less(const VertexStar& x, const VertexStar& y);
struct LocatedStar {
    Point vertex;
    VertexStar star;
};
std::vector<LocatedStar> located_stars(const SubstitutionRule& rule, const Patch& patch);
// tiles of a patch (unit scale) that form a complete star at some mark; anchors normalized
std::vector<VertexStar> complete_stars(const SubstitutionRule& rule, const Patch& patch);
std::vector<VertexStar> enumerate_vertex_stars(const SubstitutionRule& rule, int max_rounds = 16);
// index of the tile's boundary vertex sitting at the anchor
int anchor_mark(const SubstitutionRule& rule, const StarTile& t);
// tiles in counterclockwise order around the anchor
std::vector<StarTile> ccw_order(const SubstitutionRule& rule, const VertexStar& star);

}  // namespace tilework
