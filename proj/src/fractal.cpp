#include "tilework/fractal.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <unordered_set>

namespace tilework {

EdgeSubstitution build_edge_substitution(const SubstitutionRule& rule, const EmbeddedGraph& g, const PairStructure& ps) {
    if (!ps.ok) throw ValidationError("edge substitution needs a matched pair: " + ps.message);
    EdgeSubstitution es;
    es.N = ps.N;
    es.scale = rule.lambda_pow(ps.N);
    for (int p = 0; p < rule.size(); ++p) {
        es.offset.push_back(es.size());
        for (std::size_t k = 0; k < g.parts[p].edges.size(); ++k) {
            es.owner.push_back({p, static_cast<int>(k)});
            es.base.push_back(g.parts[p].edges[k].polyline);
        }
    }
    SpeedTable speed = constant_speed(rule, g, ps);
    FieldScalar shrink = rule.lambda_pow(-ps.N);
    es.M = Eigen::MatrixXi::Zero(es.size(), es.size());
    es.pieces.resize(es.size());
    es.fractions.resize(es.size());
    for (int e = 0; e < es.size(); ++e) {
        auto [p, k] = es.owner[e];
        Point last;
        bool have_last = false;
        for (auto [idx, fwd] : ps.images[p][k]) {
            const SubEdgeRef& ref = ps.refs[p][idx];
            int q = 0;
            Point t = subtile_translation(rule, p, ref.path, &q);
            EdgePiece piece{es.global(q, ref.edge), fwd, t, ref.path};
            const auto& pl = es.base[piece.edge];
            Point first = (fwd ? pl.front() : pl.back()) * shrink + t;
            if (have_last && first != last)
                throw ValidationError("decomposition of edge " + std::to_string(k) + " of G_" + rule.prototiles[p].label +
                                      " is not a connected path");
            last = (fwd ? pl.back() : pl.front()) * shrink + t;
            have_last = true;
            es.M(e, piece.edge) += 1;
            es.pieces[e].push_back(std::move(piece));
        }
        es.fractions[e] = speed.fractions[p][k];
    }
    return es;
}

namespace {

struct NumericSubstitution {
    std::vector<std::vector<PointD>> base;
    std::vector<std::vector<double>> base_param;
    std::vector<std::vector<PointD>> shift;
    std::vector<std::vector<double>> cumulative;  // piece boundaries in [0, 1]
    double shrink = 1;

    explicit NumericSubstitution(const EdgeSubstitution& es) {
        shrink = 1.0 / es.scale.to_double();
        for (int e = 0; e < es.size(); ++e) {
            base.emplace_back();
            for (const Point& x : es.base[e]) base.back().push_back(to_double(x));
            std::vector<double> par{0};
            for (std::size_t i = 1; i < base.back().size(); ++i) par.push_back(par.back() + (base.back()[i] - base.back()[i - 1]).norm());
            for (double& t : par) t /= par.back();
            base_param.push_back(std::move(par));
            shift.emplace_back();
            for (const auto& pc : es.pieces[e]) shift.back().push_back(to_double(pc.translation));
            std::vector<double> cum{0};
            for (double f : es.fractions[e]) cum.push_back(cum.back() + f);
            cum.back() = 1;
            cumulative.push_back(std::move(cum));
        }
    }
};

// Emits edge e at level n mapped by x -> s x + shift, traversed forward or backward,
// with output parameters running from a to b.
struct Emitter {
    const EdgeSubstitution& es;
    const NumericSubstitution& ns;
    const std::function<void(double, const PointD&)>& fn;
    bool started = false;

    void run(int e, int n, double s, const PointD& shift, bool fwd, double a, double b) {
        if (n == 0) {
            const auto& pts = ns.base[e];
            const auto& par = ns.base_param[e];
            std::size_t m = pts.size();
            for (std::size_t i = 0; i < m; ++i) {
                std::size_t j = fwd ? i : m - 1 - i;
                if (i == 0 && started) continue;
                double u = fwd ? par[j] : 1 - par[j];
                fn(a + (b - a) * u, pts[j] * s + shift);
                started = true;
            }
            return;
        }
        const auto& pcs = es.pieces[e];
        const auto& cum = ns.cumulative[e];
        std::size_t m = pcs.size();
        for (std::size_t i = 0; i < m; ++i) {
            std::size_t j = fwd ? i : m - 1 - i;
            double u0 = fwd ? cum[j] : 1 - cum[j + 1];
            double u1 = fwd ? cum[j + 1] : 1 - cum[j];
            run(pcs[j].edge, n - 1, s * ns.shrink, shift + ns.shift[e][j] * s, fwd == pcs[j].forward, a + (b - a) * u0,
                a + (b - a) * u1);
        }
    }
};

}  // namespace

void for_each_point(const EdgeSubstitution& es, int e, int n, const std::function<void(const PointD&)>& fn) {
    NumericSubstitution ns(es);
    std::function<void(double, const PointD&)> wrap = [&](double, const PointD& x) { fn(x); };
    Emitter em{es, ns, wrap};
    em.run(e, n, 1.0, PointD(0, 0), true, 0, 1);
}

std::vector<PointD> iterate_edge(const EdgeSubstitution& es, int e, int n) {
    std::vector<PointD> out;
    for_each_point(es, e, n, [&](const PointD& x) { out.push_back(x); });
    return out;
}

std::vector<std::vector<PointD>> iterate(const EdgeSubstitution& es, int n) {
    std::vector<std::vector<PointD>> out;
    for (int e = 0; e < es.size(); ++e) out.push_back(iterate_edge(es, e, n));
    return out;
}

std::vector<std::pair<double, PointD>> parameterized(const EdgeSubstitution& es, int e, int n) {
    NumericSubstitution ns(es);
    std::vector<std::pair<double, PointD>> out;
    std::function<void(double, const PointD&)> fn = [&](double t, const PointD& x) { out.push_back({t, x}); };
    Emitter em{es, ns, fn};
    em.run(e, n, 1.0, PointD(0, 0), true, 0, 1);
    return out;
}

double spectral_radius(const Eigen::MatrixXd& m, double tolerance) {
    auto norm = [](const Eigen::MatrixXd& x) { return x.cwiseAbs().rowwise().sum().maxCoeff(); };
    if (m.size() == 0) return 0;
    double n0 = norm(m);
    if (n0 == 0) return 0;
    Eigen::MatrixXd b = m / n0;
    // log ||m^(2^j)|| = s
    double s = std::log(n0);
    double prev_r = 0, prev_x = 0;
    for (int j = 0; j < 60; ++j) {
        Eigen::MatrixXd sq = b * b;
        double nj = norm(sq);
        if (nj == 0) return 0;
        double next = 2 * s + std::log(nj);
        double r = (next - s) / std::ldexp(1.0, j);
        double x = j > 0 ? 2 * r - prev_r : r;
        if (j > 3 && std::abs(x - prev_x) <= tolerance * std::max(1.0, std::abs(x))) return std::exp(x);
        prev_r = r;
        prev_x = x;
        s = next;
        b = sq / nj;
    }
    return std::exp(prev_x);
}

bool has_eigenvalue(const Eigen::MatrixXi& m, const FieldScalar& mu) {
    const Eigen::Index n = m.rows();
    std::vector<std::vector<FieldScalar>> a(n, std::vector<FieldScalar>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a[i][j] = FieldScalar(m(i, j)) - (i == j ? mu : FieldScalar(0));
    for (Eigen::Index c = 0; c < n; ++c) {
        Eigen::Index p = c;
        while (p < n && a[p][c] == FieldScalar(0)) ++p;
        if (p == n) return true;
        std::swap(a[p], a[c]);
        FieldScalar inv = inverse(a[c][c]);
        for (Eigen::Index i = c + 1; i < n; ++i) {
            if (a[i][c] == FieldScalar(0)) continue;
            FieldScalar f = a[i][c] * inv;
            for (Eigen::Index j = c; j < n; ++j) a[i][j] -= f * a[c][j];
        }
    }
    return false;
}

DimensionResult hausdorff_dimension(const Eigen::MatrixXi& me, const FieldScalar& lambda_n, bool injectivity_ok,
                                    bool allow_unverified) {
    if (!injectivity_ok && !allow_unverified)
        throw ValidationError("injectivity conditions failed; the dimension formula is not justified (override to compute anyway)");
    DimensionResult r;
    r.verified = injectivity_ok;
    r.lambda_E = spectral_radius(me.cast<double>());
    double l = lambda_n.to_double();
    r.value = std::log(r.lambda_E) / std::log(l);
    for (int k = 1; k <= 2; ++k) {
        FieldScalar mu = pow(lambda_n, k);
        double md = mu.to_double();
        if (std::abs(r.lambda_E - md) <= 1e-6 * md && has_eigenvalue(me, mu)) {
            r.lambda_E = md;
            r.value = k;
            r.exact = true;
        }
    }
    r.label = injectivity_ok ? "Hausdorff dimension" : "formula value, SOSC unverified";
    return r;
}

DimensionResult hausdorff_dimension(const EdgeSubstitution& es, bool injectivity_ok, bool allow_unverified) {
    return hausdorff_dimension(es.M, es.scale, injectivity_ok, allow_unverified);
}

BoxCount box_counting(const EdgeSubstitution& es, int level, int kmin, int kmax) {
    BoxCount bc;
    const int levels = kmax - kmin + 1;
    std::vector<double> total(levels, 0);
    const double fine = std::ldexp(1.0, -kmax);
    for (int e = 0; e < es.size(); ++e) {
        std::vector<std::unordered_set<std::uint64_t>> cells(levels);
        auto mark = [&](const PointD& x) {
            for (int i = 0; i < levels; ++i) {
                double inv = std::ldexp(1.0, kmin + i);
                auto ix = static_cast<std::int64_t>(std::floor(x.x() * inv)) + (1LL << 31);
                auto iy = static_cast<std::int64_t>(std::floor(x.y() * inv)) + (1LL << 31);
                cells[i].insert((static_cast<std::uint64_t>(ix) << 32) | static_cast<std::uint32_t>(iy));
            }
        };
        bool first = true;
        PointD prev;
        for_each_point(es, e, level, [&](const PointD& x) {
            if (!first) {
                // sample long segments so no crossed box is missed
                double len = (x - prev).norm();
                int steps = static_cast<int>(std::ceil(len / (fine / 4)));
                for (int s = 1; s < steps; ++s) mark(prev + (x - prev) * (double(s) / steps));
            }
            mark(x);
            prev = x;
            first = false;
        });
        for (int i = 0; i < levels; ++i) total[i] += static_cast<double>(cells[i].size());
    }
    // least squares slope of log N against log(1/eps)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < levels; ++i) {
        double x = (kmin + i) * std::log(2.0), y = std::log(total[i]);
        bc.eps.push_back(std::ldexp(1.0, -(kmin + i)));
        bc.counts.push_back(total[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    bc.slope = (levels * sxy - sx * sy) / (levels * sxx - sx * sx);
    return bc;
}

double level_distance(const EdgeSubstitution& es, int e, int n) {
    auto a = parameterized(es, e, n);
    auto b = parameterized(es, e, n + 1);
    auto eval = [](const std::vector<std::pair<double, PointD>>& c, std::size_t& i, double t) {
        while (i + 2 < c.size() && c[i + 1].first < t) ++i;
        double t0 = c[i].first, t1 = c[i + 1].first;
        double u = t1 > t0 ? std::clamp((t - t0) / (t1 - t0), 0.0, 1.0) : 0.0;
        return PointD(c[i].second + (c[i + 1].second - c[i].second) * u);
    };
    // both curves are linear between merged breakpoints, so the sup sits on one
    std::vector<double> ts;
    for (auto& x : a) ts.push_back(x.first);
    for (auto& x : b) ts.push_back(x.first);
    std::sort(ts.begin(), ts.end());
    std::size_t ia = 0, ib = 0;
    double best = 0;
    for (double t : ts) best = std::max(best, (eval(a, ia, t) - eval(b, ib, t)).norm());
    return best;
}

bool CauchyReport::pass() const {
    for (std::size_t n = 0; n < distance.size(); ++n)
        if (distance[n] > bound[n] * (1 + 1e-9)) return false;
    return true;
}

CauchyReport cauchy_check(const SubstitutionRule& rule, const EdgeSubstitution& es, int max_level, int direct_max) {
    CauchyReport rep;
    double diam = 0;
    for (const auto& t : rule.prototiles)
        for (const auto& x : t.support.v)
            for (const auto& y : t.support.v) diam = std::max(diam, (to_double(x) - to_double(y)).norm());
    const double shrink = 1.0 / es.scale.to_double();
    // stop measuring directly once the polylines get large
    Eigen::VectorXd segs(es.size());
    for (int e = 0; e < es.size(); ++e) segs[e] = static_cast<double>(es.base[e].size() - 1);
    Eigen::MatrixXd md = es.M.cast<double>();
    std::vector<double> per_edge(es.size(), 0);
    for (int n = 0; n <= max_level; ++n) {
        Eigen::VectorXd next = md * segs;
        bool direct = n <= direct_max && next.maxCoeff() <= 4e5;
        if (direct) {
            for (int e = 0; e < es.size(); ++e) per_edge[e] = level_distance(es, e, n);
            rep.direct_levels = n + 1;
        } else {
            std::vector<double> upd(es.size(), 0);
            for (int e = 0; e < es.size(); ++e)
                for (const auto& pc : es.pieces[e]) upd[e] = std::max(upd[e], shrink * per_edge[pc.edge]);
            per_edge = upd;
        }
        segs = next;
        rep.distance.push_back(*std::max_element(per_edge.begin(), per_edge.end()));
        rep.bound.push_back(diam * std::pow(shrink, n));
    }
    return rep;
}

namespace {

// tree path between two skeleton vertices as (skeleton edge, forward)
std::vector<std::pair<int, bool>> tree_path(const Skeleton& sk, int from, int to) {
    std::vector<std::pair<int, int>> via(sk.position.size(), {-1, -1});  // (edge, previous vertex)
    std::vector<char> seen(sk.position.size());
    std::queue<int> q;
    q.push(from);
    seen[from] = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (const EdgeEnd& end : sk.rotation[v]) {
            const auto& ed = sk.edges[end.edge];
            int w = end.at_start ? ed.to : ed.from;
            if (seen[w]) continue;
            seen[w] = 1;
            via[w] = {end.edge, v};
            q.push(w);
        }
    }
    if (!seen[to]) throw ValidationError("G is not connected between boundary vertices");
    std::vector<std::pair<int, bool>> out;
    for (int v = to; v != from; v = via[v].second) out.push_back({via[v].first, sk.edges[via[v].first].to == v});
    std::reverse(out.begin(), out.end());
    return out;
}

int boundary_vertex_on(const Skeleton& sk, int edge) {
    for (std::size_t v = 0; v < sk.host.size(); ++v)
        if (sk.host[v] == edge) return static_cast<int>(v);
    throw ValidationError("no boundary vertex of G on prototile edge " + std::to_string(edge));
}

// lambda^N psi(face) as an exact closed polyline
std::vector<Point> inflated_face(const EdgeSubstitution& es, const SubstitutionRule& rule, const FractalPrototile& fp) {
    std::vector<Point> out;
    FieldScalar shrink = rule.lambda_pow(-es.N);
    for (std::size_t i = 0; i < fp.word.size(); ++i) {
        auto [e, fwd] = fp.word[i];
        const Point& x = fp.tiles[fp.word_tile[i]].translation;
        const auto& pcs = es.pieces[e];
        for (std::size_t j = 0; j < pcs.size(); ++j) {
            const EdgePiece& pc = pcs[fwd ? j : pcs.size() - 1 - j];
            auto pl = es.base[pc.edge];
            if (fwd != pc.forward) std::reverse(pl.begin(), pl.end());
            for (const Point& y : pl) {
                Point z = (y * shrink + pc.translation + x) * es.scale;
                if (out.empty() || out.back() != z) out.push_back(z);
            }
        }
    }
    if (out.size() > 1 && out.front() == out.back()) out.pop_back();
    return out;
}

}  // namespace

FractalPrototileSet build_fractal_prototiles(const SubstitutionRule& rule, const EmbeddedGraph& g, const PairStructure& ps,
                                             const EdgeSubstitution& es) {
    FractalPrototileSet fps;
    fps.N = es.N;
    fps.scale = es.scale;
    fps.stars = enumerate_vertex_stars(rule);
    const int classes = static_cast<int>(fps.stars.size());
    for (int c = 0; c < classes; ++c) {
        FractalPrototile fp;
        fp.star = c;
        fp.tiles = ccw_order(rule, fps.stars[c]);
        for (std::size_t ti = 0; ti < fp.tiles.size(); ++ti) {
            const StarTile& t = fp.tiles[ti];
            const Skeleton& sk = ps.g[t.type];
            int k = anchor_mark(rule, t);
            int n = static_cast<int>(rule.prototiles[t.type].edge_count());
            int out_v = boundary_vertex_on(sk, k), in_v = boundary_vertex_on(sk, (k + n - 1) % n);
            for (auto [edge, fwd] : tree_path(sk, out_v, in_v)) {
                fp.word.push_back({es.global(t.type, edge), fwd});
                fp.word_tile.push_back(static_cast<int>(ti));
                auto pl = g.parts[t.type].edges[edge].polyline;
                if (!fwd) std::reverse(pl.begin(), pl.end());
                for (const Point& y : pl) {
                    Point z = y + t.translation;
                    if (fp.boundary.empty() || fp.boundary.back() != z) fp.boundary.push_back(z);
                }
            }
        }
        if (fp.boundary.size() < 3 || fp.boundary.front() != fp.boundary.back())
            throw ValidationError("face walk around vertex star " + std::to_string(c) + " does not close");
        fp.boundary.pop_back();
        fps.tiles.push_back(std::move(fp));
    }
    fps.A2 = Eigen::MatrixXi::Zero(classes, classes);
    for (int c = 0; c < classes; ++c) {
        Polygon curve{inflated_face(es, rule, fps.tiles[c])};
        Patch patch;
        for (const StarTile& t : fps.stars[c].tiles) patch.push_back({t.type, t.translation, 0, {}});
        for (int i = 0; i < es.N; ++i) patch = inflate(rule, patch);
        std::vector<FractalSubtile> subs;
        for (const LocatedStar& ls : located_stars(rule, patch)) {
            Location where = locate(curve, ls.vertex);
            if (where == Location::boundary)
                throw ValidationError("a tiling vertex lies on the inflated boundary of fractal prototile " + std::to_string(c));
            if (where != Location::inside) continue;
            auto it = std::lower_bound(fps.stars.begin(), fps.stars.end(), ls.star, star_less);
            if (it == fps.stars.end() || star_less(ls.star, *it))
                throw ValidationError("substituted fractal prototile contains an unknown vertex star");
            int cls = static_cast<int>(it - fps.stars.begin());
            subs.push_back({cls, ls.vertex});
            fps.A2(c, cls) += 1;
        }
        fps.subtiles.push_back(std::move(subs));
    }
    return fps;
}

SelfSimilarityReport verify_self_similarity(const SubstitutionRule& rule, const EdgeSubstitution& es,
                                            const FractalPrototileSet& fps) {
    SelfSimilarityReport rep;
    auto fail = [&](std::string w) {
        rep.pass = false;
        if (rep.witnesses.size() < 8) rep.witnesses.push_back(std::move(w));
    };
    const int classes = static_cast<int>(fps.tiles.size());
    for (int c = 0; c < classes; ++c) {
        std::vector<int> counts(classes, 0);
        for (const auto& s : fps.subtiles[c]) counts[s.cls]++;
        for (int d = 0; d < classes; ++d)
            if (fps.A2(c, d) != counts[d])
                fail("A2(" + std::to_string(c) + "," + std::to_string(d) + ") = " + std::to_string(fps.A2(c, d)) + " but " +
                     std::to_string(counts[d]) + " subtiles are placed");

        // signed edge occurrences: subtile faces minus the inflated boundary word must cancel
        std::map<std::pair<int, Point>, int, bool (*)(const std::pair<int, Point>&, const std::pair<int, Point>&)> occ(
            [](const std::pair<int, Point>& x, const std::pair<int, Point>& y) {
                if (x.first != y.first) return x.first < y.first;
                return compare(x.second, y.second) < 0;
            });
        for (const auto& s : fps.subtiles[c]) {
            const FractalPrototile& fp = fps.tiles[s.cls];
            for (std::size_t i = 0; i < fp.word.size(); ++i)
                occ[{fp.word[i].first, Point(fp.tiles[fp.word_tile[i]].translation + s.vertex)}] += fp.word[i].second ? 1 : -1;
        }
        const FractalPrototile& fp = fps.tiles[c];
        for (std::size_t i = 0; i < fp.word.size(); ++i) {
            auto [e, fwd] = fp.word[i];
            const Point& x = fp.tiles[fp.word_tile[i]].translation;
            for (const EdgePiece& pc : es.pieces[e])
                occ[{pc.edge, Point((x + pc.translation) * es.scale)}] -= (fwd == pc.forward) ? 1 : -1;
        }
        for (const auto& [key, n] : occ)
            if (n != 0) {
                auto [p, k] = es.owner[key.first];
                fail("fractal prototile " + std::to_string(c) + ": edge " + std::to_string(k) + " of G_" + rule.prototiles[p].label +
                     " at " + to_string(key.second) + " is unmatched (multiplicity " + std::to_string(n) + ")");
                break;
            }
    }
    return rep;
}

}  // namespace tilework
