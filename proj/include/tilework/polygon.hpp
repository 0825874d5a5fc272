#pragma once

#include "tilework/exact.hpp"

#include <array>
#include <optional>
#include <vector>

namespace tilework {

enum class Orientation { right = -1, collinear = 0, left = 1 };

Orientation orientation(const Point& p, const Point& q, const Point& r);

// closed segment tests
bool on_segment(const Point& p, const Point& a, const Point& b);
bool segments_intersect(const Point& a, const Point& b, const Point& c, const Point& d);
bool segments_cross_properly(const Point& a, const Point& b, const Point& c, const Point& d);
// parameter t with p = a + t (b - a); p is assumed collinear with ab
FieldScalar segment_parameter(const Point& p, const Point& a, const Point& b);
Point midpoint(const Point& a, const Point& b);
bool same_direction(const Point& u, const Point& v);
// strict order of nonzero directions by angle in [0, 2 pi)
bool angle_less(const Point& u, const Point& v);

struct BBox {
    double x0, y0, x1, y1;
    bool overlaps(const BBox& o, double slack = 1e-9) const {
        return x0 <= o.x1 + slack && o.x0 <= x1 + slack && y0 <= o.y1 + slack && o.y0 <= y1 + slack;
    }
    bool contains(const PointD& p, double slack = 1e-9) const {
        return p.x() >= x0 - slack && p.x() <= x1 + slack && p.y() >= y0 - slack && p.y() <= y1 + slack;
    }
};

// Simple polygon, counterclockwise.
struct Polygon {
    std::vector<Point> v;

    std::size_t size() const { return v.size(); }
    const Point& operator[](std::size_t i) const { return v[i % v.size()]; }
};

FieldScalar signed_area(const Polygon& poly);
bool is_simple(const Polygon& poly);
BBox bbox(const Polygon& poly);
Polygon transformed(const Polygon& poly, const FieldScalar& scale, const Point& shift);

enum class Location { outside, boundary, inside };
Location locate(const Polygon& poly, const Point& p);
inline bool contains(const Polygon& poly, const Point& p) { return locate(poly, p) != Location::outside; }
bool on_boundary(const Polygon& poly, const Point& p);

std::vector<std::array<Point, 3>> triangulate(const Polygon& poly);
bool interiors_overlap(const Polygon& a, const Polygon& b);
// closed containment a subset of b
bool contained_in(const Polygon& a, const Polygon& b);
bool touches(const Polygon& a, const Polygon& b);
// Segment a-b against polygon (closed) intersection test.
bool segment_meets_polygon(const Point& a, const Point& b, const Polygon& poly);

struct Segment {
    Point a, b;
};

struct PolygonRelation {
    bool interiors_overlap = false;
    std::vector<Segment> shared_segments;
    std::vector<Point> shared_points;
};

PolygonRelation polygon_relations(const Polygon& a, const Polygon& b);

}  // namespace tilework
