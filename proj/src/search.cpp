#include "tilework/search.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

namespace tilework {

namespace {

struct TileGeom {
    Polygon poly;
    BBox box;
    bool inner = false;   // disjoint from the prototile boundary
    bool corner = false;  // contains a vertex of the prototile
};

bool touches_boundary(const Polygon& tile, const Polygon& outer) {
    for (const Point& v : tile.v)
        if (on_boundary(outer, v)) return true;
    for (const Point& c : outer.v)
        if (contains(tile, c)) return true;
    return false;
}

PointD centre(const Polygon& poly) {
    PointD c(0, 0);
    for (const Point& v : poly.v) c += to_double(v);
    return c / static_cast<double>(poly.size());
}

std::vector<int> meeting(const std::vector<TileGeom>& tiles, const std::vector<Point>& pl) {
    BBox b{1e300, 1e300, -1e300, -1e300};
    for (const Point& p : pl) {
        PointD q = to_double(p);
        b.x0 = std::min(b.x0, q.x());
        b.y0 = std::min(b.y0, q.y());
        b.x1 = std::max(b.x1, q.x());
        b.y1 = std::max(b.y1, q.y());
    }
    std::vector<int> out;
    for (std::size_t i = 0; i < tiles.size(); ++i) {
        if (!tiles[i].box.overlaps(b)) continue;
        bool hit = pl.size() == 1 && contains(tiles[i].poly, pl[0]);
        for (std::size_t k = 0; k + 1 < pl.size() && !hit; ++k) hit = segment_meets_polygon(pl[k], pl[k + 1], tiles[i].poly);
        if (hit) out.push_back(static_cast<int>(i));
    }
    return out;
}

// true when a is closer to target than b; exact ties go to the lexicographically smaller offset
bool closer(const Point& a, const Point& b, const Point& target) {
    Point da = a - target, db = b - target;
    int c = compare(da.squaredNorm(), db.squaredNorm());
    if (c != 0) return c < 0;
    return compare(da, db) < 0;
}

int nearest(const std::vector<int>& cands, const std::vector<Point>& pos, const Point& target) {
    int best = -1;
    for (int v : cands)
        if (best < 0 || closer(pos[v], pos[best], target)) best = v;
    return best;
}

bool open_segment(const Point& v, const Point& a, const Point& b) { return v != a && v != b && on_segment(v, a, b); }

// R^N(G)_p with the subtile geometry
struct Level {
    Patch sub;
    std::vector<TileGeom> tiles;
    ContractedGraph cg;
    std::vector<int> edge_tile;
    std::vector<std::vector<int>> edge_patch;
    std::vector<std::vector<std::pair<int, int>>> adj;  // vertex -> (edge, other end)
};

Level make_level(const SubstitutionRule& rule, const EmbeddedGraph& g, int p, int N) {
    const Prototile& pt = rule.prototiles[p];
    Level L;
    L.sub = subtile_patch(rule, p, N);
    for (const PlacedTile& t : L.sub) {
        TileGeom tg;
        tg.poly = tile_support(rule, t);
        tg.box = bbox(tg.poly);
        tg.inner = !touches_boundary(tg.poly, pt.support);
        for (const Point& m : pt.boundary_vertices)
            if (tg.box.contains(to_double(m)) && contains(tg.poly, m)) tg.corner = true;
        L.tiles.push_back(std::move(tg));
    }
    L.cg = contract_graph(rule, g, p, N);
    for (std::size_t t = 0; t < L.sub.size(); ++t)
        for (std::size_t k = 0; k < g.parts[L.sub[t].type].edges.size(); ++k) L.edge_tile.push_back(static_cast<int>(t));
    L.adj.resize(L.cg.graph.vertices.size());
    for (std::size_t e = 0; e < L.cg.graph.edges.size(); ++e) {
        const GraphEdge& ge = L.cg.graph.edges[e];
        L.edge_patch.push_back(meeting(L.tiles, ge.polyline));
        L.adj[ge.u].push_back({static_cast<int>(e), ge.w});
        L.adj[ge.w].push_back({static_cast<int>(e), ge.u});
    }
    return L;
}

bool has_prefix(const std::vector<int>& path, const std::vector<int>& prefix) {
    return path.size() >= prefix.size() && std::equal(prefix.begin(), prefix.end(), path.begin());
}

std::string edge_name(const Prototile& pt, int k) { return pt.label + " edge " + std::to_string(k); }

// Boundary vertices O_V: per prototile edge, the R^N(G) vertex nearest the edge midpoint
// whose subtiles avoid the prototile vertices.
std::optional<std::vector<int>> boundary_choice(const Prototile& pt, const Level& L, std::string* why) {
    const auto& pos = L.cg.graph.vertices;
    std::vector<int> out;
    for (std::size_t k = 0; k < pt.edge_count(); ++k) {
        std::vector<int> cands;
        for (std::size_t v = 0; v < pos.size(); ++v) {
            if (L.adj[v].empty() || host_edge(pt, pos[v]) != static_cast<int>(k)) continue;
            bool ok = true;
            for (int t : meeting(L.tiles, {pos[v]})) ok = ok && !L.tiles[t].corner;
            if (ok) cands.push_back(static_cast<int>(v));
        }
        if (cands.empty()) {
            *why = "no boundary vertex on " + edge_name(pt, static_cast<int>(k)) + " away from the corner subtiles";
            return std::nullopt;
        }
        out.push_back(nearest(cands, pos, midpoint(pt.corner(k), pt.corner(k + 1))));
    }
    return out;
}

struct Router {
    const SubstitutionRule& rule;
    const Prototile& pt;
    const Level& L;
    const SearchOptions& opt;
    std::vector<char> in_p0;
    std::vector<int> start, target;
    std::vector<std::vector<char>> corridor;
    long budget;

    // breadth-first path for edge k; nullopt on failure, sets budget < 0 when exhausted
    std::optional<std::vector<int>> route(int k, const std::vector<char>& banned_tile, const std::vector<char>& used_vertex) {
        std::size_t nv = L.cg.graph.vertices.size();
        std::vector<int> prev_edge(2 * nv, -2), prev_state(2 * nv, -1);
        std::deque<int> queue;
        int s0 = 2 * start[k];
        prev_edge[s0] = -1;
        queue.push_back(s0);
        int goal = -1;
        while (!queue.empty() && goal < 0) {
            int s = queue.front();
            queue.pop_front();
            if (--budget < 0) return std::nullopt;
            int v = s / 2;
            bool entered = s % 2;
            for (auto [e, w] : L.adj[v]) {
                int t = L.edge_tile[e];
                if (in_p0[t]) continue;
                if (entered && !L.tiles[t].inner) continue;
                if (opt.corridor && !corridor[k][t]) continue;
                if (used_vertex[w] && w != target[k]) continue;
                bool blocked = false;
                for (int x : L.edge_patch[e]) blocked = blocked || (!in_p0[x] && banned_tile[x]);
                if (blocked) continue;
                int ns = 2 * w + (entered || L.tiles[t].inner);
                // each vertex once, so the path stays simple
                if (prev_edge[2 * w] != -2 || prev_edge[2 * w + 1] != -2) continue;
                prev_edge[ns] = e;
                prev_state[ns] = s;
                if (w == target[k]) {
                    goal = ns;
                    break;
                }
                queue.push_back(ns);
            }
        }
        if (goal < 0) return std::nullopt;
        std::vector<int> path;
        for (int s = goal; prev_edge[s] >= 0; s = prev_state[s]) path.push_back(prev_edge[s]);
        std::reverse(path.begin(), path.end());
        return path;
    }

    int failed = -1;

    std::optional<std::vector<std::vector<int>>> attempt(const std::vector<int>& order) {
        std::size_t m = start.size();
        std::vector<char> banned(L.tiles.size()), used(L.cg.graph.vertices.size());
        for (std::size_t t = 0; t < L.tiles.size(); ++t) banned[t] = L.tiles[t].corner;
        for (std::size_t k = 0; k < m; ++k) used[start[k]] = used[target[k]] = 1;
        std::vector<std::vector<int>> paths(m);
        for (int k : order) {
            auto path = route(k, banned, used);
            if (!path) {
                failed = k;
                return std::nullopt;
            }
            for (int e : *path) {
                for (int x : L.edge_patch[e]) banned[x] = 1;
                used[L.cg.graph.edges[e].u] = used[L.cg.graph.edges[e].w] = 1;
            }
            paths[k] = std::move(*path);
        }
        return paths;
    }
};

// spanning tree of the edges inside p0, pruned to the terminals
std::optional<std::vector<int>> connecting_tree(const Level& L, const std::vector<char>& in_p0, const std::vector<int>& terminals) {
    const auto& edges = L.cg.graph.edges;
    std::size_t nv = L.cg.graph.vertices.size();
    std::vector<int> parent_edge(nv, -2);
    std::deque<int> queue{terminals[0]};
    parent_edge[terminals[0]] = -1;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (auto [e, w] : L.adj[v])
            if (in_p0[L.edge_tile[e]] && parent_edge[w] == -2) {
                parent_edge[w] = e;
                queue.push_back(w);
            }
    }
    std::set<int> keep;
    for (int t : terminals) {
        if (parent_edge[t] == -2) return std::nullopt;
        for (int v = t; parent_edge[v] >= 0;) {
            int e = parent_edge[v];
            if (!keep.insert(e).second) break;
            v = edges[e].u == v ? edges[e].w : edges[e].u;
        }
    }
    return std::vector<int>(keep.begin(), keep.end());
}

}  // namespace

std::vector<InteriorCopy> interior_copies(const SubstitutionRule& rule, int p, int n) {
    const Prototile& pt = rule.prototiles[p];
    PointD c = centre(pt.support);
    std::vector<std::pair<double, InteriorCopy>> found;
    for (const PlacedTile& t : subtile_patch(rule, p, n)) {
        if (t.type != p) continue;
        Polygon poly = tile_support(rule, t);
        if (touches_boundary(poly, pt.support)) continue;
        found.push_back({(centre(poly) - c).squaredNorm(), {n, t.translation, t.path}});
    }
    std::stable_sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
        if (std::abs(a.first - b.first) > 1e-12) return a.first < b.first;
        return a.second.path < b.second.path;
    });
    std::vector<InteriorCopy> out;
    for (auto& f : found) out.push_back(std::move(f.second));
    return out;
}

InteriorCopy find_interior_copy(const SubstitutionRule& rule, int p, int max_n) {
    for (int n = 1; n <= max_n; ++n) {
        auto c = interior_copies(rule, p, n);
        if (!c.empty()) return c.front();
    }
    throw ValidationError("no interior copy of " + rule.prototiles[p].label + " up to level " + std::to_string(max_n));
}

EmbeddedGraph standard_dual_graph(const SubstitutionRule& rule) {
    EmbeddedGraph g;
    for (const Prototile& pt : rule.prototiles) {
        Point c(FieldScalar(0), FieldScalar(0));
        for (const Point& v : pt.support.v) c += v;
        c /= FieldScalar(static_cast<int>(pt.support.size()));
        std::vector<Point> verts{c};
        std::vector<std::vector<int>> edges;
        for (std::size_t k = 0; k < pt.edge_count(); ++k) {
            verts.push_back(midpoint(pt.corner(k), pt.corner(k + 1)));
            edges.push_back({0, static_cast<int>(k) + 1});
        }
        g.parts.push_back(make_graph(verts, edges));
    }
    return g;
}

PlanarGraph skeleton_part(const Skeleton& s) {
    PlanarGraph g;
    g.vertices = s.position;
    for (const Skeleton::Edge& e : s.edges) g.edges.push_back({e.from, e.to, e.polyline});
    return g;
}

std::vector<std::vector<std::vector<int>>> polyline_ids(EmbeddedGraph& g) {
    std::vector<std::vector<std::vector<int>>> out;
    for (PlanarGraph& part : g.parts) {
        std::map<Point, int, PointLess> ids;
        for (std::size_t v = 0; v < part.vertices.size(); ++v) ids.emplace(part.vertices[v], static_cast<int>(v));
        std::vector<std::vector<int>> lines;
        for (const GraphEdge& e : part.edges) {
            std::vector<int> line{e.u};
            for (std::size_t i = 1; i + 1 < e.polyline.size(); ++i) {
                auto [it, fresh] = ids.emplace(e.polyline[i], static_cast<int>(part.vertices.size()));
                if (fresh) part.vertices.push_back(e.polyline[i]);
                line.push_back(it->second);
            }
            line.push_back(e.w);
            lines.push_back(std::move(line));
        }
        out.push_back(std::move(lines));
    }
    return out;
}

bool is_convex(const Polygon& poly) {
    for (std::size_t i = 0; i < poly.size(); ++i)
        if (orientation(poly[i], poly[i + 1], poly[i + 2]) == Orientation::right) return false;
    return true;
}

std::optional<QuasiDualStep> build_quasi_dual(const SubstitutionRule& rule, const EmbeddedGraph& g0, int N,
                                              const SearchOptions& opt, int copy_level, std::vector<std::string>* log) {
    auto note = [&](std::string s) {
        if (log) log->push_back(std::move(s));
    };
    QuasiDualStep step;
    step.N = N;
    for (int p = 0; p < rule.size(); ++p) {
        const Prototile& pt = rule.prototiles[p];
        int n = copy_level;
        if (n <= 0) {
            try {
                n = find_interior_copy(rule, p, N).n;
            } catch (const ValidationError&) {
                note("N=" + std::to_string(N) + ": no interior copy of " + pt.label + " yet");
                return std::nullopt;
            }
        }
        auto copies = interior_copies(rule, p, n);
        if (copies.empty()) {
            note("N=" + std::to_string(N) + ": no interior " + std::to_string(n) + "-subtile of type " + pt.label);
            return std::nullopt;
        }
        Level L = make_level(rule, g0, p, N);
        std::string why;
        auto starts = boundary_choice(pt, L, &why);
        if (!starts) {
            note("N=" + std::to_string(N) + ": " + why);
            return std::nullopt;
        }
        std::optional<ChannelPlan> plan;
        long budget = opt.budget;
        std::string failure;
        for (std::size_t ci = 0; ci < copies.size() && ci < 4 && !plan && budget > 0; ++ci) {
            const InteriorCopy& p0 = copies[ci];
            Router r{rule, pt, L, opt, {}, *starts, {}, {}, budget};
            for (const PlacedTile& t : L.sub) r.in_p0.push_back(has_prefix(t.path, p0.path));
            FieldScalar s = rule.lambda_pow(-n);
            bool targets_ok = true;
            for (std::size_t k = 0; k < pt.edge_count() && targets_ok; ++k) {
                Point a = pt.corner(k) * s + p0.translation, b = pt.corner(k + 1) * s + p0.translation;
                std::vector<int> cands;
                for (std::size_t v = 0; v < L.cg.graph.vertices.size(); ++v)
                    if (!L.adj[v].empty() && open_segment(L.cg.graph.vertices[v], a, b)) cands.push_back(static_cast<int>(v));
                if (cands.empty()) {
                    failure = "no vertex of R^N(G) on " + edge_name(pt, static_cast<int>(k)) + " of the interior copy";
                    targets_ok = false;
                } else {
                    r.target.push_back(nearest(cands, L.cg.graph.vertices, midpoint(a, b)));
                }
                if (opt.corridor && targets_ok) {
                    std::vector<char> c(L.tiles.size());
                    for (int t : meeting(L.tiles, {L.cg.graph.vertices[r.start[k]], L.cg.graph.vertices[r.target[k]]})) c[t] = 1;
                    r.corridor.push_back(std::move(c));
                }
            }
            if (!targets_ok) continue;
            std::size_t m = pt.edge_count();
            std::vector<int> order(m);
            std::iota(order.begin(), order.end(), 0);
            std::rotate(order.begin(), order.begin() + opt.seed % m, order.end());
            // a blocked edge moves to the front of the order
            std::set<std::vector<int>> tried;
            std::optional<std::vector<std::vector<int>>> paths;
            while (tried.insert(order).second) {
                paths = r.attempt(order);
                if (paths || r.budget < 0) break;
                order.erase(std::find(order.begin(), order.end(), r.failed));
                order.insert(order.begin(), r.failed);
            }
            budget = r.budget;
            if (!paths) {
                failure = r.budget < 0 ? "routing budget exhausted"
                                       : "no tile-disjoint channel for " + edge_name(pt, r.failed) + " in any order tried";
                continue;
            }
            auto tree = connecting_tree(L, r.in_p0, r.target);
            if (!tree) {
                failure = "the interior copy does not connect its boundary vertices";
                continue;
            }
            ChannelPlan cp;
            cp.p = p;
            cp.N = N;
            cp.p0 = p0;
            cp.paths = std::move(*paths);
            for (const auto& path : cp.paths) {
                std::set<int> tiles;
                for (int e : path)
                    for (int x : L.edge_patch[e])
                        if (!r.in_p0[x]) tiles.insert(x);
                cp.subtiles.emplace_back(tiles.begin(), tiles.end());
            }
            cp.tree = std::move(*tree);
            plan = std::move(cp);
        }
        if (!plan) {
            note("N=" + std::to_string(N) + ": routing in " + pt.label + " failed: " + failure);
            return std::nullopt;
        }
        std::vector<int> ids = plan->tree;
        for (const auto& path : plan->paths) ids.insert(ids.end(), path.begin(), path.end());
        std::sort(ids.begin(), ids.end());
        std::vector<SubEdgeRef> refs;
        for (int e : ids) refs.push_back(L.cg.refs[e]);
        PlanarGraph sg = select_edges(rule, g0, p, N, refs);
        step.G1.parts.push_back(skeleton_part(skeleton(sg, &pt)));
        step.refs.push_back(std::move(refs));
        step.plans.push_back(std::move(*plan));
    }
    return step;
}

std::vector<std::vector<SubEdgeRef>> iterate_pair(const SubstitutionRule& rule, const EmbeddedGraph& g_prime, int N, bool choose_tree) {
    std::vector<std::vector<SubEdgeRef>> out;
    for (int p = 0; p < rule.size(); ++p) {
        const Prototile& pt = rule.prototiles[p];
        Skeleton gs = skeleton(g_prime.parts[p], &pt);
        Level L = make_level(rule, g_prime, p, N);
        std::vector<char> in_q(L.tiles.size());
        for (const Skeleton::Edge& e : gs.edges)
            for (int t : meeting(L.tiles, e.polyline)) in_q[t] = 1;
        const auto& edges = L.cg.graph.edges;
        const auto& pos = L.cg.graph.vertices;
        std::vector<char> alive(edges.size());
        std::vector<int> degree(pos.size());
        for (std::size_t e = 0; e < edges.size(); ++e)
            if (in_q[L.edge_tile[e]]) {
                alive[e] = 1;
                ++degree[edges[e].u];
                ++degree[edges[e].w];
            }
        std::vector<int> host(pos.size());
        for (std::size_t v = 0; v < pos.size(); ++v) host[v] = host_edge(pt, pos[v]);
        // terminal per prototile edge: the live boundary vertex nearest the one of G'
        std::vector<char> terminal(pos.size());
        for (std::size_t v = 0; v < gs.position.size(); ++v) {
            if (!gs.is_boundary(static_cast<int>(v))) continue;
            std::vector<int> cands;
            for (std::size_t w = 0; w < pos.size(); ++w)
                if (degree[w] > 0 && host[w] == gs.host[v]) cands.push_back(static_cast<int>(w));
            if (cands.empty()) throw ValidationError("iteration: no vertex of R^N(G') on " + edge_name(pt, gs.host[v]) + " in the patch");
            terminal[nearest(cands, pos, gs.position[v])] = 1;
        }
        auto prune = [&] {
            for (bool changed = true; changed;) {
                changed = false;
                for (std::size_t e = 0; e < edges.size(); ++e) {
                    if (!alive[e]) continue;
                    for (int v : {edges[e].u, edges[e].w})
                        if (degree[v] == 1 && !terminal[v]) {
                            alive[e] = 0;
                            --degree[edges[e].u];
                            --degree[edges[e].w];
                            changed = true;
                            break;
                        }
                }
            }
        };
        std::vector<int> parent(pos.size());
        std::iota(parent.begin(), parent.end(), 0);
        std::function<int(int)> root = [&](int x) { return parent[x] == x ? x : parent[x] = root(parent[x]); };
        prune();
        if (choose_tree) {
            // first spanning forest in edge order
            for (std::size_t e = 0; e < edges.size(); ++e) {
                if (!alive[e]) continue;
                int a = root(edges[e].u), b = root(edges[e].w);
                if (a != b) {
                    parent[a] = b;
                    continue;
                }
                alive[e] = 0;
                --degree[edges[e].u];
                --degree[edges[e].w];
            }
            std::iota(parent.begin(), parent.end(), 0);
            prune();
        }
        // what is left must be one tree through the terminals, touching the boundary only there
        std::vector<SubEdgeRef> refs;
        for (std::size_t e = 0; e < edges.size(); ++e) {
            if (!alive[e]) continue;
            int a = root(edges[e].u), b = root(edges[e].w);
            if (a == b) throw ValidationError("iteration: R^N(G') contains a cycle in the patch of " + pt.label + "; the graph is not unique");
            parent[a] = b;
            refs.push_back(L.cg.refs[e]);
        }
        int comps = 0;
        for (std::size_t v = 0; v < pos.size(); ++v) {
            if (degree[v] == 0) continue;
            comps += root(static_cast<int>(v)) == static_cast<int>(v);
            if (host[v] != Skeleton::kInterior && !terminal[v])
                throw ValidationError("iteration: the patch of " + pt.label + " meets the boundary at " + to_string(pos[v]) +
                                      " away from the terminals; the graph is not unique");
        }
        if (comps != 1) throw ValidationError("iteration: the patch of " + pt.label + " is not connected");
        out.push_back(std::move(refs));
    }
    return out;
}

std::optional<std::string> dual_obstruction(const SubstitutionRule& rule, const EmbeddedGraph& g0, int N) {
    for (int p = 0; p < rule.size(); ++p) {
        const Prototile& pt = rule.prototiles[p];
        Skeleton g = skeleton(g0.parts[p], &pt);
        if (g.interior_count() != 1) return std::nullopt;
        int need = 0;
        for (std::size_t v = 0; v < g.position.size(); ++v)
            if (!g.is_boundary(static_cast<int>(v))) need = g.degree(static_cast<int>(v));
        ContractedGraph cg = contract_graph(rule, g0, p, N);
        Skeleton sk = skeleton(cg.graph, &pt);
        int candidates = 0, blocked = 0;
        for (std::size_t v = 0; v < sk.position.size(); ++v) {
            if (sk.is_boundary(static_cast<int>(v)) || sk.degree(static_cast<int>(v)) < need) continue;
            ++candidates;
            std::set<int> others;
            for (const EdgeEnd& end : sk.rotation[v]) {
                const Skeleton::Edge& e = sk.edges[end.edge];
                int w = end.at_start ? e.to : e.from;
                if (w != static_cast<int>(v)) others.insert(w);
            }
            if (static_cast<int>(others.size()) < need) ++blocked;
        }
        if (blocked == candidates) {
            std::string d = std::to_string(need);
            if (candidates == 0)
                return "dual target impossible at N=" + std::to_string(N) + ": R^N(G)_" + pt.label + " has no interior vertex of degree " + d;
            return "dual target impossible at N=" + std::to_string(N) + ": every interior vertex of degree " + d + " in R^N(G)_" +
                   pt.label + " (" + std::to_string(candidates) +
                   " checked) has two edges that meet again in an adjacent subtile, so no tree in R^N(G) is equivalent to G_" +
                   pt.label + "; the tiles do not meet singly edge-to-edge";
        }
    }
    return std::nullopt;
}

namespace {

bool accept(const SubstitutionRule& rule, const EmbeddedGraph& g, const RecurrentPair& pair, const SearchOptions& opt,
            SearchResult& res) {
    PairStructure ps = match_equivalence(rule, g, pair);
    std::string tag = "N=" + std::to_string(pair.N) + ": ";
    if (!ps.ok) {
        res.log.push_back(tag + ps.message);
        return false;
    }
    ConsistencyReport cons = check_consistency(g, rule);
    if (!cons.quasi_dual) {
        res.log.push_back(tag + "G is not quasi-dual: " + (cons.diagnostics.empty() ? "" : cons.diagnostics[0]));
        return false;
    }
    InjectivityScan scan = scan_injectivity(rule, ps, 1, opt.injectivity_max);
    res.injectivity = scan.reports.back();
    if (scan.least_n < 0) {
        res.log.push_back(tag + "injectivity fails up to " + std::to_string(opt.injectivity_max) + ": " + res.injectivity.summary());
        return false;
    }
    res.ok = true;
    res.G = g;
    res.graph_edges = polyline_ids(res.G);
    res.pair = pair;
    res.log.push_back(tag + "pair accepted, " + res.injectivity.summary());
    return true;
}

int interior_total(const SubstitutionRule& rule, const EmbeddedGraph& g) {
    int n = 0;
    for (int p = 0; p < rule.size(); ++p) n += skeleton(g.parts[p], &rule.prototiles[p]).interior_count();
    return n;
}

}  // namespace

SearchResult search_pair(const SubstitutionRule& rule, const EmbeddedGraph& g0, const SearchOptions& opt) {
    SearchResult res;
    ConsistencyReport cons = check_consistency(g0, rule);
    if (!cons.quasi_dual) {
        res.diagnosis = "the starting graph is not a T-consistent quasi-dual graph";
        return res;
    }
    bool singly = singly_edge_to_edge(rule);
    if (!singly)
        res.log.push_back("warning: the tiles do not meet singly edge-to-edge, so success is not guaranteed");
    if (opt.target == SearchTarget::dual) {
        if (!cons.dual) {
            res.diagnosis = "dual target needs a dual starting graph";
            return res;
        }
        for (int N = 1; N <= opt.max_N; ++N) {
            if (auto why = dual_obstruction(rule, g0, N)) {
                res.diagnosis = *why;
                return res;
            }
            auto step = build_quasi_dual(rule, g0, N, opt, N, &res.log);
            if (step && accept(rule, g0, {N, step->refs}, opt, res)) return res;
        }
        res.diagnosis = "no dual pair found up to N=" + std::to_string(opt.max_N);
        return res;
    }
    for (int N = 1; N <= opt.max_N; ++N) {
        auto step = build_quasi_dual(rule, g0, N, opt, 0, &res.log);
        if (!step) continue;
        if (accept(rule, g0, {N, step->refs}, opt, res)) return res;
        EmbeddedGraph cur = step->G1;
        int count = interior_total(rule, cur);
        for (int i = 1; i <= opt.max_iterations; ++i) {
            res.iterations = i;
            std::vector<std::vector<SubEdgeRef>> refs;
            try {
                refs = iterate_pair(rule, cur, N, !singly);
            } catch (const ValidationError& e) {
                res.log.push_back("N=" + std::to_string(N) + ": " + e.what());
                break;
            }
            if (accept(rule, cur, {N, refs}, opt, res)) return res;
            EmbeddedGraph next;
            for (int p = 0; p < rule.size(); ++p)
                next.parts.push_back(skeleton_part(skeleton(select_edges(rule, cur, p, N, refs[p]), &rule.prototiles[p])));
            int c = interior_total(rule, next);
            res.log.push_back("N=" + std::to_string(N) + " iteration " + std::to_string(i) + ": " + std::to_string(c) + " interior vertices");
            if (c < count) {
                res.log.push_back("N=" + std::to_string(N) + ": interior vertex count decreased");
                break;
            }
            count = c;
            cur = std::move(next);
        }
    }
    res.diagnosis = "no recurrent pair found up to N=" + std::to_string(opt.max_N);
    return res;
}

SearchResult convex_dual_pair(const SubstitutionRule& rule, int max_N) {
    for (const Prototile& pt : rule.prototiles)
        if (!is_convex(pt.support)) throw ValidationError("convex dual construction: prototile " + pt.label + " is not convex");
    if (!singly_edge_to_edge(rule)) throw ValidationError("convex dual construction: the tiles do not meet singly edge-to-edge");
    if (!is_primitive(rule.substitution_matrix())) throw ValidationError("convex dual construction: the rule is not primitive");
    SearchOptions opt;
    opt.target = SearchTarget::dual;
    opt.corridor = true;
    opt.max_N = max_N;
    return search_pair(rule, standard_dual_graph(rule), opt);
}

}  // namespace tilework
