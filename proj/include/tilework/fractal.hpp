#pragma once

#include "tilework/recurrent.hpp"

#include <functional>

namespace tilework {

// One subedge of psi(e): a copy of edge f scaled by lambda^-N and shifted.
struct EdgePiece {
    int edge = 0;
    bool forward = true;
    Point translation;
    std::vector<int> path;
};

struct EdgeSubstitution {
    int N = 1;
    FieldScalar scale;        // lambda^N
    std::vector<int> offset;  // first global edge id of each prototile
    std::vector<std::pair<int, int>> owner;  // global edge -> (prototile, G edge)
    std::vector<std::vector<Point>> base;    // straight G edges
    std::vector<std::vector<EdgePiece>> pieces;
    std::vector<std::vector<double>> fractions;  // arclength share of each piece
    Eigen::MatrixXi M;

    int size() const { return static_cast<int>(base.size()); }
    int global(int p, int k) const { return offset[p] + k; }
};

EdgeSubstitution build_edge_substitution(const SubstitutionRule& rule, const EmbeddedGraph& g, const PairStructure& ps);

// Calls fn on every vertex of the level-n polyline of edge e, in order.
void for_each_point(const EdgeSubstitution& es, int e, int n, const std::function<void(const PointD&)>& fn);
std::vector<PointD> iterate_edge(const EdgeSubstitution& es, int e, int n);
std::vector<std::vector<PointD>> iterate(const EdgeSubstitution& es, int n);
// Vertices of the level-n polyline with the matched parameter in [0, 1].
std::vector<std::pair<double, PointD>> parameterized(const EdgeSubstitution& es, int e, int n);

// Spectral radius by norm growth of repeated squares with Richardson extrapolation.
double spectral_radius(const Eigen::MatrixXd& m, double tolerance = 1e-10);
// det(m - mu I) == 0, exactly
bool has_eigenvalue(const Eigen::MatrixXi& m, const FieldScalar& mu);

struct DimensionResult {
    double lambda_E = 0;
    double value = 0;
    bool exact = false;     // snapped to 1 or 2 by an exact eigenvalue test
    bool verified = true;   // false when injectivity failed and the caller overrode
    std::string label;
};

// ln(lambda_E) / ln(lambda^N). Throws unless injectivity passed or allow_unverified is set.
DimensionResult hausdorff_dimension(const Eigen::MatrixXi& me, const FieldScalar& lambda_n, bool injectivity_ok,
                                    bool allow_unverified = false);
DimensionResult hausdorff_dimension(const EdgeSubstitution& es, bool injectivity_ok, bool allow_unverified = false);

struct BoxCount {
    std::vector<double> eps;
    std::vector<double> counts;
    double slope = 0;
};
// Boxes of side 2^-k, k in [kmin, kmax], met by the level-n polylines; counts summed over edges.
BoxCount box_counting(const EdgeSubstitution& es, int level, int kmin = 4, int kmax = 12);

struct CauchyReport {
    std::vector<double> distance;  // sup over edges of dist(level n, level n+1)
    std::vector<double> bound;     // max tile diameter * lambda^-nN
    int direct_levels = 0;         // levels measured directly; the rest use d_n = lambda^-N max d_{n-1}
    bool pass() const;
};
CauchyReport cauchy_check(const SubstitutionRule& rule, const EdgeSubstitution& es, int max_level = 8, int direct_max = 6);
// sup distance between level n and n+1 of edge e under the matched parameterization
double level_distance(const EdgeSubstitution& es, int e, int n);

struct FractalPrototile {
    int star = 0;
    std::vector<StarTile> tiles;                // counterclockwise around the origin
    std::vector<std::pair<int, bool>> word;     // (global edge, forward), counterclockwise
    std::vector<int> word_tile;                 // index into tiles for each word letter
    std::vector<Point> boundary;                // level-0 face polygon
};

struct FractalSubtile {
    int cls = 0;
    Point vertex;  // in the lambda^N-inflated frame of the parent
};

struct FractalPrototileSet {
    int N = 1;
    FieldScalar scale;
    std::vector<VertexStar> stars;
    std::vector<FractalPrototile> tiles;
    std::vector<std::vector<FractalSubtile>> subtiles;
    Eigen::MatrixXi A2;  // A2(c, c') = copies of c' in the substitution of c
};

FractalPrototileSet build_fractal_prototiles(const SubstitutionRule& rule, const EmbeddedGraph& g, const PairStructure& ps,
                                             const EdgeSubstitution& es);

struct SelfSimilarityReport {
    bool pass = true;
    std::vector<std::string> witnesses;
};
SelfSimilarityReport verify_self_similarity(const SubstitutionRule& rule, const EdgeSubstitution& es,
                                            const FractalPrototileSet& fps);

}  // namespace tilework
