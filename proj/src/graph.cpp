#include "tilework/graph.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace tilework {

PlanarGraph make_graph(const std::vector<Point>& vertices, const std::vector<std::vector<int>>& polylines) {
    PlanarGraph g;
    g.vertices = vertices;
    for (const auto& ids : polylines) {
        if (ids.size() < 2) throw ValidationError("graph edge needs at least two vertex ids");
        GraphEdge e;
        for (int id : ids) {
            if (id < 0 || id >= static_cast<int>(vertices.size()))
                throw ValidationError("graph edge refers to missing vertex " + std::to_string(id));
            e.polyline.push_back(vertices[id]);
        }
        e.u = ids.front();
        e.w = ids.back();
        g.edges.push_back(std::move(e));
    }
    return g;
}

int Skeleton::find(const Point& p) const {
    for (std::size_t i = 0; i < position.size(); ++i)
        if (position[i] == p) return static_cast<int>(i);
    return -1;
}

int Skeleton::interior_count() const {
    return static_cast<int>(std::count(host.begin(), host.end(), kInterior));
}

int host_edge(const Prototile& tile, const Point& p) {
    const auto& bv = tile.boundary_vertices;
    for (std::size_t k = 0; k < bv.size(); ++k)
        if (bv[k] == p) return Skeleton::kAtCorner;
    for (std::size_t k = 0; k < bv.size(); ++k)
        if (on_segment(p, bv[k], bv[(k + 1) % bv.size()])) return static_cast<int>(k);
    return Skeleton::kInterior;
}

Skeleton skeleton(const PlanarGraph& g, const Prototile* tile) {
    std::size_t nv = g.vertices.size();
    std::vector<std::vector<EdgeEnd>> inc(nv);
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        inc[g.edges[i].u].push_back({static_cast<int>(i), true});
        inc[g.edges[i].w].push_back({static_cast<int>(i), false});
    }
    std::vector<int> host(nv, Skeleton::kInterior);
    std::vector<char> keep(nv);
    for (std::size_t v = 0; v < nv; ++v) {
        if (tile) host[v] = host_edge(*tile, g.vertices[v]);
        // isolated listed points (polyline interiors) are not graph vertices
        keep[v] = !inc[v].empty() && (inc[v].size() != 2 || host[v] != Skeleton::kInterior);
    }
    std::vector<char> used(g.edges.size());
    struct Chain {
        int from, to;
        std::vector<std::pair<int, bool>> pieces;
    };
    std::vector<Chain> chains;
    // the other edge end at a degree-2 vertex
    auto other = [&](int v, int e, bool at_start) {
        for (const EdgeEnd& x : inc[v])
            if (x.edge != e || x.at_start != at_start) return x;
        return inc[v].front();
    };
    for (std::size_t e0 = 0; e0 < g.edges.size(); ++e0) {
        if (used[e0]) continue;
        used[e0] = 1;
        Chain c{g.edges[e0].u, g.edges[e0].w, {{static_cast<int>(e0), true}}};
        // forward
        int x = c.to, e = static_cast<int>(e0);
        bool arrived_at_start = false;  // arrived at x through the `w` end of e
        while (!keep[x] && x != c.from) {
            EdgeEnd nxt = other(x, e, arrived_at_start);
            used[nxt.edge] = 1;
            c.pieces.push_back({nxt.edge, nxt.at_start});
            x = nxt.at_start ? g.edges[nxt.edge].w : g.edges[nxt.edge].u;
            e = nxt.edge;
            arrived_at_start = !nxt.at_start;
        }
        c.to = x;
        if (x == c.from && !keep[x]) {
            keep[x] = 1;  // a cycle of degree-2 vertices
        } else {
            // backward
            int y = c.from;
            e = static_cast<int>(e0);
            bool leaving_at_start = true;
            while (!keep[y]) {
                EdgeEnd nxt = other(y, e, leaving_at_start);
                used[nxt.edge] = 1;
                // traversed toward y, i.e. forward iff y is its `w` end
                c.pieces.insert(c.pieces.begin(), {nxt.edge, !nxt.at_start});
                y = nxt.at_start ? g.edges[nxt.edge].w : g.edges[nxt.edge].u;
                e = nxt.edge;
                leaving_at_start = !nxt.at_start;
            }
            c.from = y;
        }
        chains.push_back(std::move(c));
    }

    Skeleton sk;
    std::vector<int> index(nv, -1);
    for (std::size_t v = 0; v < nv; ++v)
        if (keep[v]) {
            index[v] = static_cast<int>(sk.vertex.size());
            sk.vertex.push_back(static_cast<int>(v));
            sk.position.push_back(g.vertices[v]);
            sk.host.push_back(host[v]);
        }
    sk.rotation.resize(sk.vertex.size());
    std::vector<std::vector<std::pair<Point, EdgeEnd>>> dirs(sk.vertex.size());
    for (const Chain& c : chains) {
        Skeleton::Edge se;
        se.from = index[c.from];
        se.to = index[c.to];
        se.pieces = c.pieces;
        for (auto [id, fwd] : c.pieces) {
            std::vector<Point> pts = g.edges[id].polyline;
            if (!fwd) std::reverse(pts.begin(), pts.end());
            for (std::size_t i = se.polyline.empty() ? 0 : 1; i < pts.size(); ++i) se.polyline.push_back(pts[i]);
        }
        int id = static_cast<int>(sk.edges.size());
        const auto& pl = se.polyline;
        dirs[se.from].push_back({Point(pl[1] - pl[0]), {id, true}});
        dirs[se.to].push_back({Point(pl[pl.size() - 2] - pl.back()), {id, false}});
        sk.edges.push_back(std::move(se));
    }
    for (std::size_t v = 0; v < dirs.size(); ++v) {
        auto& d = dirs[v];
        std::sort(d.begin(), d.end(), [](const auto& a, const auto& b) { return angle_less(a.first, b.first); });
        for (std::size_t i = 0; i + 1 < d.size(); ++i)
            if (same_direction(d[i].first, d[i + 1].first))
                throw ValidationError("two graph edges leave " + to_string(sk.position[v]) + " in the same direction");
        for (auto& x : d) sk.rotation[v].push_back(x.second);
    }
    return sk;
}

namespace {

// intersecting segments ab and cd may only touch at a point that is an end vertex of both edges
bool meet_at_ends(const Point& a, const Point& b, bool a_end, bool b_end, const Point& c, const Point& d, bool c_end,
                  bool d_end) {
    if (segments_cross_properly(a, b, c, d)) return false;
    if (orientation(a, b, c) == Orientation::collinear && orientation(a, b, d) == Orientation::collinear) {
        // collinear pieces may only touch end to end
        auto strictly_inside = [](const Point& x, const Point& p, const Point& q) { return on_segment(x, p, q) && x != p && x != q; };
        if (strictly_inside(a, c, d) || strictly_inside(b, c, d) || strictly_inside(c, a, b) || strictly_inside(d, a, b)) return false;
        if ((a == c && b == d) || (a == d && b == c)) return false;
    }
    Point x = on_segment(a, c, d) ? a : on_segment(b, c, d) ? b : on_segment(c, a, b) ? c : d;
    bool first = (x == a && a_end) || (x == b && b_end);
    bool second = (x == c && c_end) || (x == d && d_end);
    return first && second;
}

}  // namespace

ConsistencyReport check_consistency(const EmbeddedGraph& g, const SubstitutionRule& rule) {
    ConsistencyReport rep;
    auto note = [&](bool& flag, std::string msg) {
        flag = false;
        rep.diagnostics.push_back(std::move(msg));
    };
    if (static_cast<int>(g.parts.size()) != rule.size()) {
        note(rep.planar, "graph has " + std::to_string(g.parts.size()) + " parts for " + std::to_string(rule.size()) + " prototiles");
        return rep;
    }
    std::vector<Skeleton> sks;
    for (int p = 0; p < rule.size(); ++p) {
        const Prototile& pt = rule.prototiles[p];
        const PlanarGraph& gp = g.parts[p];
        const std::string& lab = pt.label;
        const Polygon& poly = pt.support;
        for (const Point& v : gp.vertices)
            if (!contains(poly, v)) note(rep.boundary_ok, "vertex " + to_string(v) + " of G_" + lab + " lies outside the prototile");
        // boundary contact only at end vertices
        for (const GraphEdge& e : gp.edges) {
            const auto& pl = e.polyline;
            for (std::size_t i = 0; i + 1 < pl.size(); ++i) {
                for (std::size_t k = 0; k < poly.size(); ++k) {
                    const Point &a = pl[i], &b = pl[i + 1], &c = poly[k], &d = poly[k + 1];
                    if (!segments_intersect(a, b, c, d)) continue;
                    bool a_on = on_segment(a, c, d), b_on = on_segment(b, c, d);
                    bool ok = true;
                    if (a_on && b_on) ok = false;
                    else if (a_on) ok = i == 0;
                    else if (b_on) ok = i + 2 == pl.size();
                    else if (on_segment(c, a, b) || on_segment(d, a, b)) ok = false;
                    else ok = false;  // proper crossing
                    if (!ok) {
                        note(rep.boundary_ok, "an edge of G_" + lab + " meets the prototile boundary away from a boundary vertex");
                        goto next_edge;
                    }
                }
            }
        next_edge:;
        }
        // edges meet only at shared end vertices
        for (std::size_t i = 0; i < gp.edges.size(); ++i)
            for (std::size_t j = i + 1; j < gp.edges.size(); ++j) {
                const auto& pa = gp.edges[i].polyline;
                const auto& pb = gp.edges[j].polyline;
                for (std::size_t s = 0; s + 1 < pa.size(); ++s)
                    for (std::size_t t = 0; t + 1 < pb.size(); ++t) {
                        if (!segments_intersect(pa[s], pa[s + 1], pb[t], pb[t + 1])) continue;
                        bool ok = meet_at_ends(pa[s], pa[s + 1], s == 0, s + 2 == pa.size(), pb[t], pb[t + 1], t == 0,
                                               t + 2 == pb.size());
                        if (!ok) {
                            note(rep.planar, "edges " + std::to_string(i) + " and " + std::to_string(j) + " of G_" + lab + " cross");
                            s = pa.size();
                            break;
                        }
                    }
            }
        Skeleton sk;
        try {
            sk = skeleton(gp, &pt);
        } catch (const ValidationError& e) {
            note(rep.planar, std::string("G_") + lab + ": " + e.what());
            sks.emplace_back();
            continue;
        }
        // tree
        std::vector<int> parent(gp.vertices.size());
        std::iota(parent.begin(), parent.end(), 0);
        std::function<int(int)> root = [&](int x) { return parent[x] == x ? x : parent[x] = root(parent[x]); };
        bool cycle = false;
        for (const GraphEdge& e : gp.edges) {
            int a = root(e.u), b = root(e.w);
            if (a == b) cycle = true;
            else parent[a] = b;
        }
        int comps = 0;
        std::vector<char> touched(gp.vertices.size());
        for (const GraphEdge& e : gp.edges) touched[e.u] = touched[e.w] = 1;
        for (std::size_t v = 0; v < gp.vertices.size(); ++v) comps += touched[v] && root(static_cast<int>(v)) == static_cast<int>(v);
        if (cycle || comps != 1) note(rep.trees, "G_" + lab + (cycle ? " contains a cycle" : " is not connected"));
        // boundary vertices per prototile edge
        std::vector<int> per_edge(pt.edge_count());
        for (std::size_t v = 0; v < sk.host.size(); ++v) {
            if (sk.host[v] == Skeleton::kAtCorner) note(rep.one_per_edge, "G_" + lab + " has a vertex at a prototile vertex " + to_string(sk.position[v]));
            else if (sk.host[v] >= 0) ++per_edge[sk.host[v]];
            else if (sk.degree(static_cast<int>(v)) < 3)
                note(rep.interior_degrees, "interior vertex " + to_string(sk.position[v]) + " of G_" + lab + " has degree " +
                                               std::to_string(sk.degree(static_cast<int>(v))));
        }
        for (std::size_t k = 0; k < per_edge.size(); ++k)
            if (per_edge[k] != 1)
                note(rep.one_per_edge, "prototile edge " + std::to_string(k) + " of " + lab + " holds " + std::to_string(per_edge[k]) +
                                           " boundary vertices");
        sks.push_back(std::move(sk));
    }
    // T-consistency across adjacencies
    for (const Adjacency& adj : rule.adjacencies)
        for (int dir = 0; dir < 2; ++dir) {
            int src = dir ? adj.b : adj.a, dst = dir ? adj.a : adj.b;
            Point shift = dir ? adj.offset : Point(-adj.offset);
            const Skeleton& s = sks[src];
            for (std::size_t v = 0; v < s.position.size(); ++v) {
                if (!s.is_boundary(static_cast<int>(v))) continue;
                Point q = s.position[v] + shift;
                if (!on_boundary(rule.prototiles[dst].support, q)) continue;
                int w = sks[dst].find(q);
                if (w < 0 || !sks[dst].is_boundary(w)) {
                    note(rep.t_consistent, "boundary vertex " + to_string(s.position[v]) + " of G_" + rule.prototiles[src].label +
                                               " has no partner in the adjacent " + rule.prototiles[dst].label);
                    break;
                }
            }
        }
    rep.quasi_dual = rep.planar && rep.boundary_ok && rep.t_consistent && rep.trees && rep.one_per_edge && rep.interior_degrees;
    rep.dual = rep.quasi_dual && std::all_of(sks.begin(), sks.end(), [](const Skeleton& s) { return s.interior_count() == 1; });
    return rep;
}

std::vector<Face> induced_tiling(const EmbeddedGraph& g, const SubstitutionRule& rule, const Patch& patch,
                                 const std::vector<VertexStar>& stars) {
    std::map<Point, int, PointLess> ids;
    std::vector<Point> verts;
    auto vid = [&](const Point& p) {
        auto [it, fresh] = ids.emplace(p, static_cast<int>(verts.size()));
        if (fresh) verts.push_back(p);
        return it->second;
    };
    struct Half {
        int from, to;
        std::vector<Point> pts;
    };
    std::vector<Half> halves;
    for (const PlacedTile& t : patch) {
        FieldScalar s = rule.lambda_pow(-t.level);
        for (const GraphEdge& e : g.parts[t.type].edges) {
            std::vector<Point> pts;
            for (const Point& x : e.polyline) pts.push_back(x * s + t.translation);
            int a = vid(pts.front()), b = vid(pts.back());
            halves.push_back({a, b, pts});
            std::reverse(pts.begin(), pts.end());
            halves.push_back({b, a, pts});
        }
    }
    std::vector<std::vector<int>> out(verts.size());
    for (std::size_t h = 0; h < halves.size(); ++h) out[halves[h].from].push_back(static_cast<int>(h));
    for (auto& o : out)
        std::sort(o.begin(), o.end(), [&](int x, int y) {
            return angle_less(Point(halves[x].pts[1] - halves[x].pts[0]), Point(halves[y].pts[1] - halves[y].pts[0]));
        });
    std::vector<int> pos(halves.size());
    for (auto& o : out)
        for (std::size_t i = 0; i < o.size(); ++i) pos[o[i]] = static_cast<int>(i);
    auto next = [&](int h) {
        int twin = h ^ 1;
        const auto& o = out[halves[h].to];
        return o[(pos[twin] + o.size() - 1) % o.size()];
    };
    // tiling vertices of the patch
    std::vector<Point> marks;
    for (const PlacedTile& t : patch)
        for (const Point& m : tile_marks(rule, t)) marks.push_back(m);
    std::sort(marks.begin(), marks.end(), PointLess());
    marks.erase(std::unique(marks.begin(), marks.end()), marks.end());

    std::vector<char> seen(halves.size());
    std::vector<Face> faces;
    for (std::size_t h0 = 0; h0 < halves.size(); ++h0) {
        if (seen[h0]) continue;
        Face f;
        bool dangling = false;
        int h = static_cast<int>(h0);
        do {
            seen[h] = 1;
            if (out[halves[h].to].size() == 1) dangling = true;
            const auto& pts = halves[h].pts;
            f.boundary.insert(f.boundary.end(), pts.begin(), pts.end() - 1);
            h = next(h);
        } while (h != static_cast<int>(h0));
        Polygon poly{f.boundary};
        f.complete = !dangling && signed_area(poly).sign() > 0;
        if (f.complete) {
            int inside = 0;
            for (const Point& m : marks)
                if (locate(poly, m) == Location::inside) {
                    f.vertex = m;
                    ++inside;
                }
            if (inside != 1) f.complete = false;
        }
        if (f.complete) {
            VertexStar st;
            for (const PlacedTile& t : patch)
                if (t.level == 0 && contains(tile_support(rule, t), f.vertex)) st.tiles.push_back({t.type, Point(t.translation - f.vertex)});
            std::sort(st.tiles.begin(), st.tiles.end(), [](const StarTile& x, const StarTile& y) {
                if (x.type != y.type) return x.type < y.type;
                return compare(x.translation, y.translation) < 0;
            });
            for (std::size_t i = 0; i < stars.size(); ++i)
                if (!star_less(st, stars[i]) && !star_less(stars[i], st)) f.label = static_cast<int>(i);
        }
        faces.push_back(std::move(f));
    }
    return faces;
}

}  // namespace tilework
