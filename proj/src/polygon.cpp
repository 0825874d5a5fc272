#include "tilework/polygon.hpp"

#include <algorithm>

namespace tilework {

Orientation orientation(const Point& p, const Point& q, const Point& r) {
    Point u = q - p, w = r - p;
    int s = cross(u, w).sign();
    return static_cast<Orientation>(s);
}

namespace {

bool between(const FieldScalar& x, const FieldScalar& a, const FieldScalar& b) {
    return compare(a, b) <= 0 ? compare(a, x) <= 0 && compare(x, b) <= 0 : compare(b, x) <= 0 && compare(x, a) <= 0;
}

int osign(const Point& p, const Point& q, const Point& r) { return static_cast<int>(orientation(p, q, r)); }

}  // namespace

bool on_segment(const Point& p, const Point& a, const Point& b) {
    return osign(a, b, p) == 0 && between(p.x(), a.x(), b.x()) && between(p.y(), a.y(), b.y());
}

bool segments_intersect(const Point& a, const Point& b, const Point& c, const Point& d) {
    int o1 = osign(a, b, c), o2 = osign(a, b, d), o3 = osign(c, d, a), o4 = osign(c, d, b);
    if (o1 * o2 < 0 && o3 * o4 < 0) return true;
    return (o1 == 0 && on_segment(c, a, b)) || (o2 == 0 && on_segment(d, a, b)) || (o3 == 0 && on_segment(a, c, d)) ||
           (o4 == 0 && on_segment(b, c, d));
}

bool segments_cross_properly(const Point& a, const Point& b, const Point& c, const Point& d) {
    return osign(a, b, c) * osign(a, b, d) < 0 && osign(c, d, a) * osign(c, d, b) < 0;
}

FieldScalar segment_parameter(const Point& p, const Point& a, const Point& b) {
    Point ab = b - a;
    return (p - a).dot(ab) / ab.dot(ab);
}

Point midpoint(const Point& a, const Point& b) {
    Point m = a + b;
    return Point(m.x() / 2, m.y() / 2);
}

bool same_direction(const Point& u, const Point& v) { return cross(u, v).sign() == 0 && u.dot(v).sign() > 0; }

namespace {

// 0 for angles in [0, pi), 1 for [pi, 2 pi)
int half_plane(const Point& u) {
    int sy = u.y().sign();
    return (sy > 0 || (sy == 0 && u.x().sign() > 0)) ? 0 : 1;
}

}  // namespace

bool angle_less(const Point& u, const Point& v) {
    int hu = half_plane(u), hv = half_plane(v);
    if (hu != hv) return hu < hv;
    return cross(u, v).sign() > 0;
}

FieldScalar signed_area(const Polygon& poly) {
    FieldScalar s;
    for (std::size_t i = 0; i < poly.size(); ++i) s += cross(poly[i], poly[i + 1]);
    return s / 2;
}

bool is_simple(const Polygon& poly) {
    std::size_t n = poly.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        if (poly[i] == poly[i + 1]) return false;
        for (std::size_t j = i + 1; j < n; ++j) {
            bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if (!adjacent) {
                if (segments_intersect(poly[i], poly[i + 1], poly[j], poly[j + 1])) return false;
                continue;
            }
            // adjacent edges may only share their common endpoint
            const Point& shared = j == i + 1 ? poly[j] : poly[i];
            const Point& far_i = j == i + 1 ? poly[i] : poly[i + 1];
            const Point& far_j = j == i + 1 ? poly[j + 1] : poly[j];
            if (osign(far_i, shared, far_j) == 0 && compare((far_i - shared).dot(far_j - shared), FieldScalar(0)) > 0)
                return false;
        }
    }
    return true;
}

BBox bbox(const Polygon& poly) {
    BBox b{1e300, 1e300, -1e300, -1e300};
    for (const Point& p : poly.v) {
        PointD q = to_double(p);
        b.x0 = std::min(b.x0, q.x());
        b.y0 = std::min(b.y0, q.y());
        b.x1 = std::max(b.x1, q.x());
        b.y1 = std::max(b.y1, q.y());
    }
    return b;
}

Polygon transformed(const Polygon& poly, const FieldScalar& scale, const Point& shift) {
    Polygon out;
    out.v.reserve(poly.size());
    for (const Point& p : poly.v) out.v.push_back(p * scale + shift);
    return out;
}

bool on_boundary(const Polygon& poly, const Point& p) {
    for (std::size_t i = 0; i < poly.size(); ++i)
        if (on_segment(p, poly[i], poly[i + 1])) return true;
    return false;
}

Location locate(const Polygon& poly, const Point& p) {
    if (on_boundary(poly, p)) return Location::boundary;
    int winding = 0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point& a = poly[i];
        const Point& b = poly[i + 1];
        if (compare(a.y(), p.y()) <= 0) {
            if (compare(b.y(), p.y()) > 0 && osign(a, b, p) > 0) ++winding;
        } else if (compare(b.y(), p.y()) <= 0 && osign(a, b, p) < 0) {
            --winding;
        }
    }
    return winding ? Location::inside : Location::outside;
}

std::vector<std::array<Point, 3>> triangulate(const Polygon& poly) {
    std::vector<Point> ring = poly.v;
    std::vector<std::array<Point, 3>> out;
    while (ring.size() > 3) {
        std::size_t n = ring.size();
        bool clipped = false;
        for (std::size_t i = 0; i < n && !clipped; ++i) {
            const Point& a = ring[(i + n - 1) % n];
            const Point& b = ring[i];
            const Point& c = ring[(i + 1) % n];
            if (osign(a, b, c) <= 0) continue;
            bool empty = true;
            for (std::size_t j = 0; j < n && empty; ++j) {
                if (j == i || j == (i + 1) % n || j == (i + n - 1) % n) continue;
                const Point& q = ring[j];
                if (osign(a, b, q) >= 0 && osign(b, c, q) >= 0 && osign(c, a, q) >= 0) empty = false;
            }
            if (!empty) continue;
            out.push_back({a, b, c});
            ring.erase(ring.begin() + static_cast<long>(i));
            clipped = true;
        }
        if (clipped) continue;
        // only degenerate (straight) corners remain clip-blocked; drop one
        for (std::size_t i = 0; i < n && !clipped; ++i)
            if (osign(ring[(i + n - 1) % n], ring[i], ring[(i + 1) % n]) == 0) {
                ring.erase(ring.begin() + static_cast<long>(i));
                clipped = true;
            }
        if (!clipped) throw ArithmeticError("triangulation failed: polygon is not simple");
    }
    if (ring.size() == 3 && osign(ring[0], ring[1], ring[2]) > 0) out.push_back({ring[0], ring[1], ring[2]});
    return out;
}

namespace {

bool triangles_overlap(const std::array<Point, 3>& s, const std::array<Point, 3>& t) {
    auto separated = [](const std::array<Point, 3>& p, const std::array<Point, 3>& q) {
        for (int i = 0; i < 3; ++i) {
            Point e = p[(i + 1) % 3] - p[i];
            Point n(e.y(), -e.x());
            FieldScalar pmax = n.dot(p[0]), qmin = n.dot(q[0]);
            for (int k = 1; k < 3; ++k) {
                FieldScalar a = n.dot(p[k]), b = n.dot(q[k]);
                if (compare(a, pmax) > 0) pmax = a;
                if (compare(b, qmin) < 0) qmin = b;
            }
            // outward normal of a ccw triangle: q lies beyond the edge line
            if (compare(qmin, pmax) >= 0) return true;
        }
        return false;
    };
    return !separated(s, t) && !separated(t, s);
}

}  // namespace

bool interiors_overlap(const Polygon& a, const Polygon& b) {
    if (!bbox(a).overlaps(bbox(b))) return false;
    auto ta = triangulate(a), tb = triangulate(b);
    for (const auto& s : ta)
        for (const auto& t : tb)
            if (triangles_overlap(s, t)) return true;
    return false;
}

bool contained_in(const Polygon& a, const Polygon& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Point& p = a[i];
        const Point& q = a[i + 1];
        std::vector<FieldScalar> cuts{FieldScalar(0), FieldScalar(1)};
        for (std::size_t j = 0; j < b.size(); ++j) {
            const Point& c = b[j];
            const Point& d = b[j + 1];
            if (segments_cross_properly(p, q, c, d)) return false;
            if (on_segment(c, p, q)) cuts.push_back(segment_parameter(c, p, q));
        }
        std::sort(cuts.begin(), cuts.end(), [](const FieldScalar& x, const FieldScalar& y) { return compare(x, y) < 0; });
        if (!contains(b, p)) return false;
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            if (cuts[k] == cuts[k + 1]) continue;
            FieldScalar t = (cuts[k] + cuts[k + 1]) / 2;
            if (!contains(b, p + (q - p) * t)) return false;
        }
    }
    return true;
}

bool touches(const Polygon& a, const Polygon& b) {
    if (!bbox(a).overlaps(bbox(b))) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            if (segments_intersect(a[i], a[i + 1], b[j], b[j + 1])) return true;
    return contains(b, a[0]) || contains(a, b[0]);
}

bool segment_meets_polygon(const Point& a, const Point& b, const Polygon& poly) {
    if (contains(poly, a) || contains(poly, b)) return true;
    for (std::size_t i = 0; i < poly.size(); ++i)
        if (segments_intersect(a, b, poly[i], poly[i + 1])) return true;
    return false;
}

PolygonRelation polygon_relations(const Polygon& a, const Polygon& b) {
    if (!(signed_area(a).sign() > 0) || !(signed_area(b).sign() > 0))
        throw ArithmeticError("degenerate polygon (non-positive area)");
    PolygonRelation rel;
    rel.interiors_overlap = interiors_overlap(a, b);
    std::vector<Segment> segs;
    std::vector<Point> pts;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Point& p = a[i];
        const Point& q = a[i + 1];
        for (std::size_t j = 0; j < b.size(); ++j) {
            const Point& c = b[j];
            const Point& d = b[j + 1];
            if (!segments_intersect(p, q, c, d)) continue;
            if (osign(p, q, c) == 0 && osign(p, q, d) == 0) {
                // collinear overlap: clip c-d to p-q by parameter
                FieldScalar t0 = segment_parameter(c, p, q), t1 = segment_parameter(d, p, q);
                if (compare(t0, t1) > 0) std::swap(t0, t1);
                if (compare(t0, FieldScalar(0)) < 0) t0 = 0;
                if (compare(t1, FieldScalar(1)) > 0) t1 = 1;
                Point s = p + (q - p) * t0, e = p + (q - p) * t1;
                if (s == e)
                    pts.push_back(s);
                else
                    segs.push_back({s, e});
                continue;
            }
            // single intersection point
            Point r = q - p, w = d - c;
            FieldScalar t = cross<FieldScalar>(c - p, w) / cross<FieldScalar>(r, w);
            pts.push_back(p + r * t);
        }
    }
    // merge collinear touching segments
    bool merged = true;
    while (merged) {
        merged = false;
        for (std::size_t i = 0; i < segs.size() && !merged; ++i)
            for (std::size_t j = i + 1; j < segs.size() && !merged; ++j) {
                Segment& s = segs[i];
                const Segment& t = segs[j];
                if (osign(s.a, s.b, t.a) != 0 || osign(s.a, s.b, t.b) != 0) continue;
                if (!(on_segment(t.a, s.a, s.b) || on_segment(t.b, s.a, s.b) || on_segment(s.a, t.a, t.b))) continue;
                std::vector<Point> ends{s.a, s.b, t.a, t.b};
                std::sort(ends.begin(), ends.end(), PointLess());
                s = {ends.front(), ends.back()};
                segs.erase(segs.begin() + static_cast<long>(j));
                merged = true;
            }
    }
    rel.shared_segments = segs;
    std::sort(pts.begin(), pts.end(), PointLess());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    for (const Point& p : pts) {
        bool covered = std::any_of(segs.begin(), segs.end(), [&](const Segment& s) { return on_segment(p, s.a, s.b); });
        if (!covered) rel.shared_points.push_back(p);
    }
    return rel;
}

}  // namespace tilework
