#include "tilework/rule.hpp"

#include <algorithm>
#include <chrono>
#include <set>

namespace tilework {

int SubstitutionRule::index_of(const std::string& label) const {
    for (int i = 0; i < size(); ++i)
        if (prototiles[i].label == label) return i;
    return -1;
}

Eigen::MatrixXi SubstitutionRule::substitution_matrix() const {
    Eigen::MatrixXi m(size(), size());
    for (int p = 0; p < size(); ++p)
        for (int q = 0; q < size(); ++q) m(p, q) = static_cast<int>(digits[p][q].size());
    return m;
}

FieldScalar SubstitutionRule::lambda_pow(int k) const { return pow(lambda, k); }

std::vector<Child> children(const SubstitutionRule& rule, int p) {
    std::vector<Child> out;
    for (int q = 0; q < rule.size(); ++q)
        for (const Point& d : rule.digits[p][q]) out.push_back({q, d});
    return out;
}

Polygon tile_support(const SubstitutionRule& rule, const PlacedTile& t) {
    return transformed(rule.prototiles[t.type].support, rule.lambda_pow(-t.level), t.translation);
}

std::vector<Point> tile_marks(const SubstitutionRule& rule, const PlacedTile& t) {
    FieldScalar s = rule.lambda_pow(-t.level);
    std::vector<Point> out;
    for (const Point& m : rule.prototiles[t.type].boundary_vertices) out.push_back(m * s + t.translation);
    return out;
}

Patch subtile_patch(const SubstitutionRule& rule, int p, int n) {
    Patch cur{{p, Point(0, 0), 0, {}}};
    std::vector<std::vector<Child>> kids;
    for (int q = 0; q < rule.size(); ++q) kids.push_back(children(rule, q));
    for (int level = 1; level <= n; ++level) {
        FieldScalar s = rule.lambda_pow(-level);
        Patch next;
        for (const PlacedTile& t : cur) {
            const auto& ks = kids[t.type];
            for (std::size_t i = 0; i < ks.size(); ++i) {
                PlacedTile c{ks[i].type, t.translation + ks[i].digit * s, level, t.path};
                c.path.push_back(static_cast<int>(i));
                next.push_back(std::move(c));
            }
        }
        cur = std::move(next);
    }
    return cur;
}

Patch supertile(const SubstitutionRule& rule, int p, int n) {
    Patch sub = subtile_patch(rule, p, n);
    FieldScalar s = rule.lambda_pow(n);
    for (PlacedTile& t : sub) {
        t.translation = t.translation * s;
        t.level = 0;
    }
    return sub;
}

Patch inflate(const SubstitutionRule& rule, const Patch& patch) {
    Patch out;
    for (const PlacedTile& t : patch)
        for (int q = 0; q < rule.size(); ++q)
            for (const Point& d : rule.digits[t.type][q]) out.push_back({q, t.translation * rule.lambda + d, 0, {}});
    return out;
}

Point subtile_translation(const SubstitutionRule& rule, int p, const std::vector<int>& path, int* type) {
    Point x(0, 0);
    FieldScalar s(1);
    int cur = p;
    for (int idx : path) {
        auto ks = children(rule, cur);
        if (idx < 0 || idx >= static_cast<int>(ks.size()))
            throw ValidationError("child index " + std::to_string(idx) + " out of range for " + rule.prototiles[cur].label);
        s /= rule.lambda;
        x += ks[idx].digit * s;
        cur = ks[idx].type;
    }
    if (type) *type = cur;
    return x;
}

bool is_primitive(const Eigen::MatrixXi& m) {
    long n = m.rows();
    if (n == 0) return false;
    Eigen::MatrixXi b = (m.array() > 0).cast<int>();
    Eigen::MatrixXi pw = b;
    // Wielandt bound
    long bound = n * n - 2 * n + 2;
    for (long k = 1; k <= std::max(1L, bound); ++k) {
        if ((pw.array() > 0).all()) return true;
        pw = ((pw * b).array() > 0).cast<int>();
    }
    return false;
}

namespace {

struct AdjLess {
    bool operator()(const Adjacency& x, const Adjacency& y) const {
        if (x.a != y.a) return x.a < y.a;
        if (x.b != y.b) return x.b < y.b;
        return compare(x.offset, y.offset) < 0;
    }
};

Adjacency canonical(int a, int b, const Point& offset) {
    if (a < b || (a == b && compare(offset, Point(0, 0)) > 0)) return {a, b, offset};
    return {b, a, -offset};
}

struct Shape {
    Polygon poly;
    BBox box;
};

std::vector<Shape> shapes_of(const SubstitutionRule& rule, const Patch& patch) {
    std::vector<Shape> out;
    for (const PlacedTile& t : patch) {
        Polygon poly = tile_support(rule, t);
        BBox b = bbox(poly);
        out.push_back({std::move(poly), b});
    }
    return out;
}

// Boundary position of a point on the polygon: (corner index, parameter on that side).
std::pair<std::size_t, FieldScalar> boundary_position(const Polygon& poly, const Point& p) {
    for (std::size_t i = 0; i < poly.size(); ++i) {
        if (poly[i] == p) return {i, FieldScalar(0)};
        if (on_segment(p, poly[i], poly[i + 1]) && !(p == poly[i + 1])) return {i, segment_parameter(p, poly[i], poly[i + 1])};
    }
    throw ValidationError("point " + to_string(p) + " is not on the prototile boundary");
}

}  // namespace

void compute_vertex_set(SubstitutionRule& rule, int max_depth) {
    int n = rule.size();
    for (auto& pt : rule.prototiles)
        if (pt.boundary_vertices.empty()) pt.boundary_vertices = pt.support.v;

    std::set<Adjacency, AdjLess> known;
    std::vector<Adjacency> frontier;
    auto record = [&](const PlacedTile& x, const PlacedTile& y) {
        Adjacency adj = canonical(x.type, y.type, y.translation - x.translation);
        if (known.insert(adj).second) frontier.push_back(adj);
    };
    // pairs (i in [0,split), j in [split, end)) that touch
    auto scan = [&](const Patch& patch, std::size_t split, bool all_pairs) {
        auto sh = shapes_of(rule, patch);
        for (std::size_t i = 0; i < patch.size(); ++i)
            for (std::size_t j = all_pairs ? i + 1 : std::max(i + 1, split); j < patch.size(); ++j) {
                if (!all_pairs && i >= split) break;
                if (!sh[i].box.overlaps(sh[j].box)) continue;
                if (interiors_overlap(sh[i].poly, sh[j].poly))
                    throw ValidationError("overlapping tiles " + rule.prototiles[patch[i].type].label + " and " +
                                          rule.prototiles[patch[j].type].label + " inside a supertile");
                if (touches(sh[i].poly, sh[j].poly)) record(patch[i], patch[j]);
            }
    };
    for (int p = 0; p < n; ++p) scan(inflate(rule, {{p, Point(0, 0), 0, {}}}), 0, true);
    int depth = 0;
    while (!frontier.empty()) {
        if (++depth > max_depth)
            throw ValidationError("adjacency closure did not stabilize within supertile depth " + std::to_string(max_depth) +
                                  "; the rule may fail finite local complexity");
        std::vector<Adjacency> work;
        work.swap(frontier);
        for (const Adjacency& adj : work) {
            Patch a = inflate(rule, {{adj.a, Point(0, 0), 0, {}}});
            Patch b = inflate(rule, {{adj.b, adj.offset, 0, {}}});
            std::size_t split = a.size();
            a.insert(a.end(), b.begin(), b.end());
            scan(a, split, false);
        }
    }
    rule.adjacencies.assign(known.begin(), known.end());
    rule.closure_depth = depth;

    // propagate marks across adjacencies until stable
    std::vector<std::vector<Point>> marks(n);
    std::vector<BBox> boxes(n);
    for (int p = 0; p < n; ++p) {
        marks[p] = rule.prototiles[p].support.v;
        boxes[p] = bbox(rule.prototiles[p].support);
    }
    auto has = [](const std::vector<Point>& v, const Point& x) { return std::find(v.begin(), v.end(), x) != v.end(); };
    bool changed = true;
    while (changed) {
        changed = false;
        for (const Adjacency& adj : rule.adjacencies)
            for (int dir = 0; dir < 2; ++dir) {
                int src = dir ? adj.a : adj.b, dst = dir ? adj.b : adj.a;
                Point shift = dir ? Point(-adj.offset) : adj.offset;
                std::vector<Point> add;
                for (const Point& m : marks[src]) {
                    Point q = m + shift;
                    if (!boxes[dst].contains(to_double(q))) continue;
                    if (!has(marks[dst], q) && on_boundary(rule.prototiles[dst].support, q)) add.push_back(q);
                }
                for (Point& q : add)
                    if (!has(marks[dst], q)) {
                        marks[dst].push_back(q);
                        changed = true;
                    }
            }
    }
    rule.vertex_set_grew = false;
    for (int p = 0; p < n; ++p) {
        const Polygon& poly = rule.prototiles[p].support;
        std::vector<std::pair<std::pair<std::size_t, FieldScalar>, Point>> keyed;
        for (const Point& m : marks[p]) keyed.push_back({boundary_position(poly, m), m});
        std::sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) {
            if (x.first.first != y.first.first) return x.first.first < y.first.first;
            return compare(x.first.second, y.first.second) < 0;
        });
        rule.prototiles[p].boundary_vertices.clear();
        for (auto& k : keyed) rule.prototiles[p].boundary_vertices.push_back(k.second);
        if (keyed.size() > poly.size()) rule.vertex_set_grew = true;
    }
}

int shared_edge_count(const SubstitutionRule& rule, const Adjacency& adj) {
    const auto& va = rule.prototiles[adj.a].boundary_vertices;
    const auto& vb = rule.prototiles[adj.b].boundary_vertices;
    int count = 0;
    for (std::size_t i = 0; i < va.size(); ++i) {
        const Point& u = va[i];
        const Point& w = va[(i + 1) % va.size()];
        for (std::size_t j = 0; j < vb.size(); ++j)
            if (vb[j] + adj.offset == w && vb[(j + 1) % vb.size()] + adj.offset == u) ++count;
    }
    return count;
}

bool singly_edge_to_edge(const SubstitutionRule& rule) {
    for (const Adjacency& adj : rule.adjacencies)
        if (shared_edge_count(rule, adj) > 1) return false;
    return true;
}

std::string ValidationReport::summary() const {
    if (!valid) return "invalid: " + (errors.empty() ? std::string("unknown error") : errors.front());
    std::string s = "valid; ";
    s += primitive ? "primitive; " : "NOT primitive; ";
    s += singly_edge_to_edge ? "singly edge-to-edge" : "NOT singly edge-to-edge";
    if (vertex_set_grew && !vertex_counts.empty() &&
        std::all_of(vertex_counts.begin(), vertex_counts.end(), [&](int c) { return c == vertex_counts.front(); })) {
        static const char* names[] = {"", "", "", "triangle", "quadrilateral", "pentagon", "hexagon", "heptagon",
                                      "octagon", "nonagon", "decagon", "hendecagon", "dodecagon"};
        int c = vertex_counts.front();
        s += std::string(" (") + (c < 13 ? names[c] : (std::to_string(c) + "-gon").c_str()) + " variant)";
    }
    return s;
}

ValidationReport validate_rule(SubstitutionRule& rule) {
    auto start = std::chrono::steady_clock::now();
    ValidationReport rep;
    auto fail = [&](std::string msg) { rep.errors.push_back(std::move(msg)); };
    int n = rule.size();
    if (n == 0) fail("at least one prototile is required");
    if (compare(rule.lambda, FieldScalar(1)) <= 0) fail("expansion factor must exceed 1, got " + to_string(rule.lambda));
    for (const auto& pt : rule.prototiles) {
        if (!is_simple(pt.support)) fail("prototile " + pt.label + " is not a simple polygon");
        else if (signed_area(pt.support).sign() <= 0) fail("prototile " + pt.label + " is not counterclockwise with positive area");
    }
    if (!rep.errors.empty()) return rep;
    rep.M = rule.substitution_matrix();
    for (int p = 0; p < n && rep.errors.empty(); ++p) {
        const Prototile& pt = rule.prototiles[p];
        Patch sub = subtile_patch(rule, p, 1);
        auto sh = shapes_of(rule, sub);
        BBox outer = bbox(pt.support);
        FieldScalar area;
        auto name = [&](std::size_t i) {
            return "(" + pt.label + ", " + rule.prototiles[sub[i].type].label + ", digit " +
                   to_string(Point(sub[i].translation * rule.lambda)) + ")";
        };
        for (std::size_t i = 0; i < sub.size(); ++i) {
            area += signed_area(sh[i].poly);
            if (!outer.overlaps(sh[i].box) || !contained_in(sh[i].poly, pt.support)) {
                fail("subtile " + name(i) + " leaves the prototile");
                break;
            }
            for (std::size_t j = i + 1; j < sub.size(); ++j)
                if (sh[i].box.overlaps(sh[j].box) && interiors_overlap(sh[i].poly, sh[j].poly)) {
                    fail("subtiles " + name(i) + " and " + name(j) + " overlap");
                    break;
                }
            if (!rep.errors.empty()) break;
        }
        if (rep.errors.empty() && !(area == signed_area(pt.support)))
            fail("subtiles of " + pt.label + " leave a gap: area " + to_string(area) + " vs " + to_string(signed_area(pt.support)));
    }
    if (!rep.errors.empty()) return rep;
    try {
        compute_vertex_set(rule);
    } catch (const ValidationError& e) {
        fail(e.what());
        return rep;
    }
    rep.valid = true;
    rep.primitive = is_primitive(rep.M);
    rep.singly_edge_to_edge = singly_edge_to_edge(rule);
    rep.vertex_set_grew = rule.vertex_set_grew;
    rep.closure_depth = rule.closure_depth;
    for (const auto& pt : rule.prototiles) rep.vertex_counts.push_back(static_cast<int>(pt.boundary_vertices.size()));
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

bool star_less(const VertexStar& x, const VertexStar& y) {
    return std::lexicographical_compare(x.tiles.begin(), x.tiles.end(), y.tiles.begin(), y.tiles.end(),
                                        [](const StarTile& s, const StarTile& t) {
                                            if (s.type != t.type) return s.type < t.type;
                                            return compare(s.translation, t.translation) < 0;
                                        });
}

std::vector<LocatedStar> located_stars(const SubstitutionRule& rule, const Patch& patch) {
    struct Entry {
        std::size_t tile;
        Point start, end;
    };
    std::map<Point, std::vector<Entry>, PointLess> at;
    for (std::size_t i = 0; i < patch.size(); ++i) {
        auto m = tile_marks(rule, patch[i]);
        for (std::size_t k = 0; k < m.size(); ++k) {
            const Point& v = m[k];
            at[v].push_back({i, Point(m[(k + 1) % m.size()] - v), Point(m[(k + m.size() - 1) % m.size()] - v)});
        }
    }
    std::vector<LocatedStar> out;
    for (const auto& [v, entries] : at) {
        if (entries.size() < 2) continue;
        bool complete = true;
        for (const Entry& e : entries) {
            int hits = 0;
            for (const Entry& f : entries)
                if (f.tile != e.tile && same_direction(e.start, f.end)) ++hits;
            if (hits != 1) {
                complete = false;
                break;
            }
        }
        if (!complete) continue;
        VertexStar s;
        for (const Entry& e : entries) s.tiles.push_back({patch[e.tile].type, Point(patch[e.tile].translation - v)});
        std::sort(s.tiles.begin(), s.tiles.end(), [](const StarTile& x, const StarTile& y) {
            if (x.type != y.type) return x.type < y.type;
            return compare(x.translation, y.translation) < 0;
        });
        out.push_back({v, std::move(s)});
    }
    return out;
}

std::vector<VertexStar> complete_stars(const SubstitutionRule& rule, const Patch& patch) {
    std::vector<VertexStar> out;
    for (auto& ls : located_stars(rule, patch)) out.push_back(std::move(ls.star));
    return out;
}

std::vector<VertexStar> enumerate_vertex_stars(const SubstitutionRule& rule, int max_rounds) {
    std::vector<VertexStar> all;
    std::set<VertexStar, decltype(&star_less)> seen(&star_less);
    std::vector<VertexStar> frontier;
    auto absorb = [&](const Patch& patch) {
        for (auto& s : complete_stars(rule, patch))
            if (seen.insert(s).second) frontier.push_back(s);
    };
    for (int p = 0; p < rule.size(); ++p) absorb(inflate(rule, {{p, Point(0, 0), 0, {}}}));
    for (const Adjacency& adj : rule.adjacencies) absorb(inflate(rule, {{adj.a, Point(0, 0), 0, {}}, {adj.b, adj.offset, 0, {}}}));
    int round = 0;
    while (!frontier.empty()) {
        if (++round > max_rounds)
            throw ValidationError("vertex star enumeration did not stabilize within " + std::to_string(max_rounds) + " rounds");
        std::vector<VertexStar> work;
        work.swap(frontier);
        for (const VertexStar& s : work) {
            all.push_back(s);
            Patch patch;
            for (const StarTile& t : s.tiles) patch.push_back({t.type, t.translation, 0, {}});
            absorb(inflate(rule, patch));
        }
    }
    std::sort(all.begin(), all.end(), star_less);
    return all;
}

int anchor_mark(const SubstitutionRule& rule, const StarTile& t) {
    const auto& m = rule.prototiles[t.type].boundary_vertices;
    for (std::size_t k = 0; k < m.size(); ++k)
        if (m[k] + t.translation == Point(0, 0)) return static_cast<int>(k);
    throw ValidationError("star tile does not have a vertex at the anchor");
}

std::vector<StarTile> ccw_order(const SubstitutionRule& rule, const VertexStar& star) {
    std::vector<std::pair<Point, StarTile>> keyed;
    for (const StarTile& t : star.tiles) {
        const auto& m = rule.prototiles[t.type].boundary_vertices;
        int k = anchor_mark(rule, t);
        keyed.push_back({Point(m[(k + 1) % m.size()] - m[k]), t});
    }
    std::sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) { return angle_less(x.first, y.first); });
    std::vector<StarTile> out;
    for (auto& k : keyed) out.push_back(k.second);
    return out;
}

}  // namespace tilework
