#include "tilework/recurrent.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

namespace tilework {

int ContractedGraph::find(const SubEdgeRef& r) const {
    auto it = std::find(refs.begin(), refs.end(), r);
    return it == refs.end() ? -1 : static_cast<int>(it - refs.begin());
}

namespace {

struct VertexPool {
    std::map<Point, int, PointLess> ids;
    std::vector<Point>* out;
    int operator()(const Point& p) {
        auto [it, fresh] = ids.emplace(p, static_cast<int>(out->size()));
        if (fresh) out->push_back(p);
        return it->second;
    }
};

GraphEdge placed_edge(const GraphEdge& e, const FieldScalar& s, const Point& t, VertexPool& pool) {
    GraphEdge out;
    for (const Point& x : e.polyline) out.polyline.push_back(x * s + t);
    out.u = pool(out.polyline.front());
    out.w = pool(out.polyline.back());
    return out;
}

}  // namespace

ContractedGraph contract_graph(const SubstitutionRule& rule, const EmbeddedGraph& g, int p, int n) {
    ContractedGraph cg;
    cg.p = p;
    cg.N = n;
    VertexPool pool{{}, &cg.graph.vertices};
    FieldScalar s = rule.lambda_pow(-n);
    for (const PlacedTile& t : subtile_patch(rule, p, n)) {
        const auto& edges = g.parts[t.type].edges;
        for (std::size_t k = 0; k < edges.size(); ++k) {
            cg.graph.edges.push_back(placed_edge(edges[k], s, t.translation, pool));
            cg.refs.push_back({t.path, static_cast<int>(k)});
            cg.type.push_back(t.type);
        }
    }
    return cg;
}

PlanarGraph select_edges(const SubstitutionRule& rule, const EmbeddedGraph& g, int p, int n, const std::vector<SubEdgeRef>& refs) {
    PlanarGraph out;
    VertexPool pool{{}, &out.vertices};
    FieldScalar s = rule.lambda_pow(-n);
    for (const SubEdgeRef& r : refs) {
        if (static_cast<int>(r.path.size()) != n)
            throw ValidationError("S edge path has length " + std::to_string(r.path.size()) + ", expected " + std::to_string(n));
        int q = 0;
        Point t = subtile_translation(rule, p, r.path, &q);
        if (r.edge < 0 || r.edge >= static_cast<int>(g.parts[q].edges.size()))
            throw ValidationError("S refers to missing edge " + std::to_string(r.edge) + " of G_" + rule.prototiles[q].label);
        out.edges.push_back(placed_edge(g.parts[q].edges[r.edge], s, t, pool));
    }
    return out;
}

std::optional<SkeletonMatch> match_skeletons(const Skeleton& a, const Skeleton& b, std::string* why) {
    auto fail = [&](std::string m) -> std::optional<SkeletonMatch> {
        if (why) *why = std::move(m);
        return std::nullopt;
    };
    std::size_t nv = a.position.size();
    if (nv != b.position.size())
        return fail("vertex counts differ (" + std::to_string(nv) + " vs " + std::to_string(b.position.size()) + ")");
    if (a.edges.size() != b.edges.size())
        return fail("edge counts differ (" + std::to_string(a.edges.size()) + " vs " + std::to_string(b.edges.size()) + ")");
    SkeletonMatch m;
    m.vertex_map.assign(nv, -1);
    std::vector<char> taken(nv);
    for (std::size_t v = 0; v < nv; ++v) {
        if (!a.is_boundary(static_cast<int>(v))) continue;
        int hits = 0;
        for (std::size_t w = 0; w < nv; ++w)
            if (b.is_boundary(static_cast<int>(w)) && b.host[w] == a.host[v] && a.host[v] >= 0) {
                m.vertex_map[v] = static_cast<int>(w);
                ++hits;
            }
        if (hits != 1)
            return fail("boundary vertex " + to_string(a.position[v]) + " on prototile edge " + std::to_string(a.host[v]) +
                        (hits ? " has several counterparts" : " has no counterpart on the same prototile edge"));
        if (taken[m.vertex_map[v]]) return fail("two boundary vertices map to one");
        taken[m.vertex_map[v]] = 1;
    }
    // edge multiplicities between vertex pairs
    auto count = [](const Skeleton& s, int x, int y) {
        int c = 0;
        for (const auto& e : s.edges)
            if ((e.from == x && e.to == y) || (e.from == y && e.to == x)) ++c;
        return c;
    };
    std::vector<int> interior;
    for (std::size_t v = 0; v < nv; ++v)
        if (!a.is_boundary(static_cast<int>(v))) interior.push_back(static_cast<int>(v));
    // backtracking over interior vertices; checks adjacency counts against already mapped vertices
    std::function<bool(std::size_t)> assign = [&](std::size_t i) -> bool {
        if (i == interior.size()) return true;
        int v = interior[i];
        for (std::size_t w = 0; w < nv; ++w) {
            if (taken[w] || b.is_boundary(static_cast<int>(w)) || b.degree(static_cast<int>(w)) != a.degree(v)) continue;
            m.vertex_map[v] = static_cast<int>(w);
            bool ok = count(a, v, v) == count(b, static_cast<int>(w), static_cast<int>(w));
            for (std::size_t u = 0; u < nv && ok; ++u)
                if (m.vertex_map[u] >= 0 && static_cast<int>(u) != v)
                    ok = count(a, v, static_cast<int>(u)) == count(b, static_cast<int>(w), m.vertex_map[u]);
            if (!ok) continue;
            taken[w] = 1;
            if (assign(i + 1)) return true;
            taken[w] = 0;
        }
        m.vertex_map[v] = -1;
        return false;
    };
    // boundary-boundary adjacency must agree too
    for (std::size_t u = 0; u < nv; ++u)
        for (std::size_t v = u; v < nv; ++v)
            if (m.vertex_map[u] >= 0 && m.vertex_map[v] >= 0 &&
                count(a, static_cast<int>(u), static_cast<int>(v)) != count(b, m.vertex_map[u], m.vertex_map[v]))
                return fail("edges between boundary vertices differ");
    if (!assign(0)) return fail("no structure-preserving map of interior vertices");
    // edges, in order of appearance between each vertex pair
    std::vector<char> used(b.edges.size());
    for (const auto& e : a.edges) {
        int x = m.vertex_map[e.from], y = m.vertex_map[e.to];
        bool found = false;
        for (std::size_t j = 0; j < b.edges.size() && !found; ++j) {
            if (used[j]) continue;
            const auto& f = b.edges[j];
            if (f.from == x && f.to == y) {
                m.edge_map.push_back({static_cast<int>(j), true});
                found = true;
            } else if (f.from == y && f.to == x) {
                m.edge_map.push_back({static_cast<int>(j), false});
                found = true;
            }
            if (found) used[j] = 1;
        }
        if (!found) return fail("edge counts between matched vertices differ");
    }
    // rotation systems must agree up to cyclic shift
    for (std::size_t v = 0; v < nv; ++v) {
        const auto& ra = a.rotation[v];
        const auto& rb = b.rotation[m.vertex_map[v]];
        if (ra.size() < 3) continue;
        std::vector<std::pair<int, bool>> mapped, target;
        for (const EdgeEnd& x : ra) {
            auto [j, same] = m.edge_map[x.edge];
            mapped.push_back({j, same ? x.at_start : !x.at_start});
        }
        for (const EdgeEnd& x : rb) target.push_back({x.edge, x.at_start});
        bool ok = false;
        for (std::size_t shift = 0; shift < target.size() && !ok; ++shift)
            ok = std::equal(mapped.begin(), mapped.end(), target.begin() + static_cast<long>(shift), target.end()) &&
                 std::equal(mapped.begin() + static_cast<long>(target.size() - shift), mapped.end(), target.begin());
        if (!ok) return fail("rotation order differs at " + to_string(a.position[v]) + " (mirror image or different planar embedding)");
    }
    return m;
}

PairStructure match_equivalence(const SubstitutionRule& rule, const EmbeddedGraph& g, const RecurrentPair& pair) {
    PairStructure ps;
    ps.N = pair.N;
    ps.refs = pair.S;
    ps.refs.resize(rule.size());
    auto fail = [&](std::string m) {
        ps.ok = false;
        ps.message = std::move(m);
        return ps;
    };
    if (static_cast<int>(g.parts.size()) != rule.size()) return fail("G has no part for every prototile");
    try {
        for (int p = 0; p < rule.size(); ++p) {
            const Prototile& pt = rule.prototiles[p];
            Skeleton gs = skeleton(g.parts[p], &pt);
            for (std::size_t k = 0; k < gs.edges.size(); ++k)
                if (gs.edges.size() != g.parts[p].edges.size() || gs.edges[k].pieces.size() != 1 ||
                    gs.edges[k].pieces[0] != std::pair<int, bool>{static_cast<int>(k), true})
                    return fail("G_" + pt.label + " must be listed without degree-2 vertices");
            ps.g.push_back(std::move(gs));
            if (ps.refs[p].empty()) return fail("S has no edges in prototile " + pt.label);
            PlanarGraph sg = select_edges(rule, g, p, pair.N, ps.refs[p]);
            ps.s.push_back(skeleton(sg, &pt));
            ps.s_graph.push_back(std::move(sg));
        }
    } catch (const ValidationError& e) {
        return fail(e.what());
    }
    for (int p = 0; p < rule.size(); ++p) {
        std::string why;
        auto m = match_skeletons(ps.g[p], ps.s[p], &why);
        if (!m) return fail("G_" + rule.prototiles[p].label + " and S_" + rule.prototiles[p].label + " are not equivalent: " + why);
        std::vector<std::vector<std::pair<int, bool>>> imgs;
        for (auto [j, same] : m->edge_map) {
            auto pieces = ps.s[p].edges[j].pieces;
            if (!same) {
                std::reverse(pieces.begin(), pieces.end());
                for (auto& x : pieces) x.second = !x.second;
            }
            imgs.push_back(std::move(pieces));
        }
        ps.images.push_back(std::move(imgs));
        ps.match.push_back(std::move(*m));
    }
    ps.ok = true;
    ps.message = "equivalent";
    return ps;
}

std::string InjectivityReport::summary() const {
    auto w = [](const char* name, const Condition& c) { return std::string(name) + (c.pass ? " pass" : " FAIL"); };
    return "N=" + std::to_string(N) + ": " + w("I1", I1) + ", " + w("I2", I2) + ", " + w("I3", I3) + ", " + w("I4", I4) + ", " +
           w("spans", spans);
}

namespace {

struct TileGeom {
    Polygon poly;
    BBox box;
};

BBox box_of(const std::vector<Point>& pts) {
    return bbox(Polygon{pts});
}

std::vector<int> tiles_meeting(const std::vector<TileGeom>& tiles, const std::vector<Point>& pl) {
    std::vector<int> out;
    BBox b = box_of(pl);
    for (std::size_t i = 0; i < tiles.size(); ++i) {
        if (!tiles[i].box.overlaps(b)) continue;
        bool hit = pl.size() == 1 && contains(tiles[i].poly, pl[0]);
        for (std::size_t k = 0; k + 1 < pl.size() && !hit; ++k) {
            BBox sb = box_of({pl[k], pl[k + 1]});
            if (sb.overlaps(tiles[i].box)) hit = segment_meets_polygon(pl[k], pl[k + 1], tiles[i].poly);
        }
        if (hit) out.push_back(static_cast<int>(i));
    }
    return out;
}

std::vector<int> intersect(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool touches_boundary(const Polygon& tile, const Polygon& outer) {
    for (std::size_t i = 0; i < tile.size(); ++i)
        for (std::size_t k = 0; k < outer.size(); ++k)
            if (segments_intersect(tile[i], tile[i + 1], outer[k], outer[k + 1])) return true;
    return false;
}

struct Interval {
    FieldScalar a, b;
};

// closed pieces of tile ∩ side k of outer, as boundary parameters k + t
void boundary_pieces(const Polygon& tile, const Polygon& outer, std::size_t k, std::vector<Interval>& out) {
    const Point& c = outer[k];
    const Point& d = outer[k + 1];
    std::vector<FieldScalar> cuts{FieldScalar(0), FieldScalar(1)};
    for (std::size_t i = 0; i < tile.size(); ++i) {
        const Point& a = tile[i];
        const Point& b = tile[i + 1];
        if (on_segment(a, c, d)) cuts.push_back(segment_parameter(a, c, d));
        if (segments_cross_properly(a, b, c, d)) {
            Point r = d - c, w = b - a;
            cuts.push_back(cross<FieldScalar>(a - c, w) / cross<FieldScalar>(r, w));
        }
    }
    std::sort(cuts.begin(), cuts.end(), [](const FieldScalar& x, const FieldScalar& y) { return compare(x, y) < 0; });
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    FieldScalar base(static_cast<long>(k));
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        if (contains(tile, c + (d - c) * cuts[i])) out.push_back({base + cuts[i], base + cuts[i]});
        if (i + 1 < cuts.size() && contains(tile, c + (d - c) * ((cuts[i] + cuts[i + 1]) / 2)))
            out.push_back({base + cuts[i], base + cuts[i + 1]});
    }
}

// union of closed intervals on the circle [0, n) is connected
bool connected_on_circle(std::vector<Interval> iv, std::size_t n) {
    if (iv.empty()) return true;
    std::sort(iv.begin(), iv.end(), [](const Interval& x, const Interval& y) { return compare(x.a, y.a) < 0; });
    std::vector<Interval> merged{iv[0]};
    for (std::size_t i = 1; i < iv.size(); ++i) {
        if (compare(iv[i].a, merged.back().b) <= 0) {
            if (compare(iv[i].b, merged.back().b) > 0) merged.back().b = iv[i].b;
        } else {
            merged.push_back(iv[i]);
        }
    }
    if (merged.size() == 1) return true;
    return merged.size() == 2 && merged.front().a.is_zero() && merged.back().b == FieldScalar(static_cast<long>(n));
}

}  // namespace

InjectivityReport check_injectivity(const SubstitutionRule& rule, const PairStructure& ps, int n_test) {
    return check_injectivity(rule, ps.s, n_test);
}

InjectivityReport check_injectivity(const SubstitutionRule& rule, const std::vector<Skeleton>& skeletons, int n_test) {
    InjectivityReport rep;
    rep.N = n_test;
    for (int p = 0; p < rule.size(); ++p) {
        const Prototile& pt = rule.prototiles[p];
        const Skeleton& s = skeletons[p];
        Patch sub = subtile_patch(rule, p, n_test);
        std::vector<TileGeom> tiles;
        for (const PlacedTile& t : sub) {
            Polygon poly = tile_support(rule, t);
            BBox b = bbox(poly);
            tiles.push_back({std::move(poly), b});
        }
        auto tname = [&](int i) {
            std::string s2 = pt.label + "[";
            for (std::size_t k = 0; k < sub[i].path.size(); ++k) s2 += (k ? "," : "") + std::to_string(sub[i].path[k]);
            return s2 + "]";
        };
        std::size_t ne = s.edges.size();
        std::vector<std::vector<int>> patch(ne);
        for (std::size_t e = 0; e < ne; ++e) {
            patch[e] = tiles_meeting(tiles, s.edges[e].polyline);
            if (s.edges[e].pieces.size() < 2)
                rep.spans.fail("S_" + pt.label + " edge " + std::to_string(e) + " is a single subedge");
        }
        for (std::size_t e = 0; e < ne; ++e)
            for (std::size_t f = e + 1; f < ne; ++f) {
                const auto& E = s.edges[e];
                const auto& F = s.edges[f];
                std::vector<int> shared_v;
                for (int x : {E.from, E.to})
                    if (x == F.from || x == F.to) shared_v.push_back(x);
                std::sort(shared_v.begin(), shared_v.end());
                shared_v.erase(std::unique(shared_v.begin(), shared_v.end()), shared_v.end());
                auto common = intersect(patch[e], patch[f]);
                std::string pair_name = "S_" + pt.label + " edges " + std::to_string(e) + "," + std::to_string(f);
                if (shared_v.empty() != common.empty())
                    rep.I1.fail(pair_name + (common.empty() ? " share a vertex but no subtile" : " share subtile " + tname(common[0]) + " but no vertex"));
                if (shared_v.size() == 1) {
                    auto vt = tiles_meeting(tiles, {s.position[shared_v[0]]});
                    if (vt.size() != 1)
                        rep.I2.fail(pair_name + ": vertex " + to_string(s.position[shared_v[0]]) + " lies in " + std::to_string(vt.size()) + " subtiles");
                    else if (common != vt)
                        rep.I2.fail(pair_name + " share more than the vertex subtile " + tname(vt[0]));
                    else if (touches_boundary(tiles[vt[0]].poly, pt.support))
                        rep.I2.fail(pair_name + ": vertex subtile " + tname(vt[0]) + " touches the prototile boundary");
                }
            }
        std::set<int> all;
        for (const auto& pe : patch) all.insert(pe.begin(), pe.end());
        for (int i : all)
            for (const Point& m : pt.boundary_vertices)
                if (tiles[i].box.contains(to_double(m)) && contains(tiles[i].poly, m))
                    rep.I3.fail("subtile " + tname(i) + " of [S_" + pt.label + "] contains vertex " + to_string(m));
        for (std::size_t e = 0; e < ne; ++e) {
            const auto& pl = s.edges[e].polyline;
            bool edge_meets = false;
            for (std::size_t k = 0; k + 1 < pl.size() && !edge_meets; ++k)
                for (std::size_t j = 0; j < pt.support.size() && !edge_meets; ++j)
                    edge_meets = segments_intersect(pl[k], pl[k + 1], pt.support[j], pt.support[j + 1]);
            std::vector<Interval> iv;
            for (int i : patch[e])
                for (std::size_t k = 0; k < pt.support.size(); ++k) boundary_pieces(tiles[i].poly, pt.support, k, iv);
            std::string nm = "S_" + pt.label + " edge " + std::to_string(e);
            if (edge_meets != !iv.empty())
                rep.I4.fail(nm + (edge_meets ? " meets the boundary but its patch does not" : " stays inside but its patch meets the boundary"));
            else if (!connected_on_circle(iv, pt.support.size()))
                rep.I4.fail(nm + ": patch meets the boundary in a disconnected set");
        }
    }
    return rep;
}

InjectivityScan scan_injectivity(const SubstitutionRule& rule, const PairStructure& ps, int lo, int hi) {
    InjectivityScan out;
    for (int n = lo; n <= hi; ++n) {
        out.reports.push_back(check_injectivity(rule, ps, n));
        if (out.reports.back().all_pass()) {
            out.least_n = n;
            break;
        }
    }
    return out;
}

double polyline_length(const std::vector<Point>& pts) {
    double len = 0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) len += (to_double(pts[i + 1]) - to_double(pts[i])).norm();
    return len;
}

SpeedTable constant_speed(const SubstitutionRule& rule, const EmbeddedGraph& g, const PairStructure& ps) {
    SpeedTable t;
    for (int p = 0; p < rule.size(); ++p) {
        t.fractions.emplace_back();
        t.ratio.emplace_back();
        for (std::size_t k = 0; k < ps.images[p].size(); ++k) {
            double base = polyline_length(g.parts[p].edges[k].polyline);
            if (base == 0) throw ValidationError("zero-length edge in G_" + rule.prototiles[p].label);
            std::vector<double> lens;
            double total = 0;
            for (auto [idx, fwd] : ps.images[p][k]) {
                lens.push_back(polyline_length(ps.s_graph[p].edges[idx].polyline));
                total += lens.back();
            }
            for (double& l : lens) l /= total;
            t.fractions[p].push_back(std::move(lens));
            t.ratio[p].push_back(total / base);
        }
    }
    return t;
}

}  // namespace tilework
