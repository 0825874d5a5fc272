#include "tilework/cohomology.hpp"

#include "tilework/io.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace tilework {

std::vector<std::string> check_complex(const CochainComplex& c) {
    std::vector<std::string> out;
    auto dims = [](const IntMatrix& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); };
    Eigen::Index v = c.delta0.cols(), e = c.delta0.rows(), f = c.delta1.rows();
    if (c.delta1.cols() != e) out.push_back("delta1 is " + dims(c.delta1) + " but delta0 has " + std::to_string(e) + " rows");
    if (c.A0.rows() != v || c.A0.cols() != v) out.push_back("A0 is " + dims(c.A0) + ", expected " + std::to_string(v) + " square");
    if (c.A1.rows() != e || c.A1.cols() != e) out.push_back("A1 is " + dims(c.A1) + ", expected " + std::to_string(e) + " square");
    if (c.A2.rows() != f || c.A2.cols() != f) out.push_back("A2 is " + dims(c.A2) + ", expected " + std::to_string(f) + " square");
    if (!out.empty()) return out;
    if (!(c.delta1 * c.delta0).isZero(0)) out.push_back("delta1 * delta0 is not zero");
    if (c.A1 * c.delta0 != c.delta0 * c.A0) out.push_back("A1 delta0 != delta0 A0");
    if (c.A2 * c.delta1 != c.delta1 * c.A1) out.push_back("A2 delta1 != delta1 A1");
    return out;
}

CochainComplex load_complex(const std::filesystem::path& dir) {
    CochainComplex c;
    c.delta0 = read_matrix_file(dir / "delta0.txt");
    c.delta1 = read_matrix_file(dir / "delta1.txt");
    c.A0 = read_matrix_file(dir / "A0.txt");
    c.A1 = read_matrix_file(dir / "A1.txt");
    c.A2 = read_matrix_file(dir / "A2.txt");
    for (Eigen::Index i = 0; i < c.delta0.cols(); ++i) c.vertex_names.push_back("v" + std::to_string(i));
    for (Eigen::Index i = 0; i < c.delta0.rows(); ++i) c.edge_names.push_back("e" + std::to_string(i));
    for (Eigen::Index i = 0; i < c.delta1.rows(); ++i) c.face_names.push_back("f" + std::to_string(i));
    return c;
}

namespace {

// Edge types of G seen from the approximant.
struct HalfEdgeTable {
    const SubstitutionRule& rule;
    const PairStructure& ps;
    const EdgeSubstitution& es;
    std::map<std::pair<int, int>, int> vertex;  // (prototile, skeleton vertex) -> cell
    std::map<int, int> inner;                   // global edge joining interior vertices -> cell
    std::map<std::pair<int, int>, int> glued;   // (first half, second half) -> cell
    std::vector<std::pair<int, int>> glued_list;

    const Skeleton& sk(int e) const { return ps.g[es.owner[e].first]; }
    const Skeleton::Edge& edge(int e) const { return sk(e).edges[es.owner[e].second]; }
    bool boundary(int e, int v) const { return sk(e).is_boundary(v); }
    bool is_half(int e) const { return boundary(e, edge(e).from) != boundary(e, edge(e).to); }
    // the half points at the prototile boundary
    bool is_out(int e) const { return boundary(e, edge(e).to); }
    int interior_cell(int e) const {
        const auto& ed = edge(e);
        int v = boundary(e, ed.from) ? ed.to : ed.from;
        return vertex.at({es.owner[e].first, v});
    }
    std::pair<int, int> key(int a, int b) const {
        bool oa = is_out(a), ob = is_out(b);
        if (oa && !ob) return {a, b};
        if (ob && !oa) return {b, a};
        return {std::min(a, b), std::max(a, b)};
    }
    bool ends_on_boundary(int e, bool fwd) const { return boundary(e, fwd ? edge(e).to : edge(e).from); }
    bool starts_on_boundary(int e, bool fwd) const { return boundary(e, fwd ? edge(e).from : edge(e).to); }

    // signed edge cells of a path of G letters; halves pair up across boundary vertices
    void accumulate(std::vector<std::pair<int, bool>> seq, bool cyclic, std::vector<int>& row, int sign) const {
        if (cyclic) {
            std::size_t r = 0;
            while (r < seq.size() && starts_on_boundary(seq[r].first, seq[r].second)) ++r;
            if (r == seq.size()) throw ValidationError("closed path without an interior vertex");
            std::rotate(seq.begin(), seq.begin() + static_cast<long>(r), seq.end());
        }
        for (std::size_t i = 0; i < seq.size(); ++i) {
            auto [e, fwd] = seq[i];
            if (!is_half(e)) {
                row[inner.at(e)] += sign * (fwd ? 1 : -1);
                continue;
            }
            if (!ends_on_boundary(e, fwd) || i + 1 == seq.size() || !starts_on_boundary(seq[i + 1].first, seq[i + 1].second))
                throw ValidationError("a path of G edges leaves an interior vertex without reaching another");
            int f = seq[i + 1].first;
            auto k = key(e, f);
            auto it = glued.find(k);
            if (it == glued.end()) throw ValidationError("half edges " + std::to_string(e) + " and " + std::to_string(f) + " meet but are not adjacent in the tiling");
            row[it->second] += sign * (k.first == e ? 1 : -1);
            ++i;
        }
    }

    std::vector<std::pair<int, bool>> expand(int e, bool fwd) const {
        std::vector<std::pair<int, bool>> out;
        const auto& pcs = es.pieces[e];
        for (std::size_t j = 0; j < pcs.size(); ++j) {
            const EdgePiece& pc = pcs[fwd ? j : pcs.size() - 1 - j];
            out.push_back({pc.edge, fwd == pc.forward});
        }
        return out;
    }
};

std::string edge_name(int a, int b) {
    if (a < 9 && b < 9) return std::to_string(a + 1) + std::to_string(b + 1);
    return std::to_string(a + 1) + "~" + std::to_string(b + 1);
}

}  // namespace

CochainComplex build_ap_complex(const SubstitutionRule& rule, const PairStructure& ps, const EdgeSubstitution& es,
                                const FractalPrototileSet& fps) {
    HalfEdgeTable t{rule, ps, es, {}, {}, {}, {}};
    CochainComplex c;
    for (int p = 0; p < rule.size(); ++p) {
        const Skeleton& sk = ps.g[p];
        int count = 0;
        for (std::size_t v = 0; v < sk.position.size(); ++v)
            if (!sk.is_boundary(static_cast<int>(v))) {
                t.vertex[{p, static_cast<int>(v)}] = static_cast<int>(c.vertex_names.size());
                c.vertex_names.push_back(rule.prototiles[p].label + (count++ ? ":" + std::to_string(v) : ""));
            }
        if (count == 0) throw ValidationError("G_" + rule.prototiles[p].label + " has no interior vertex");
        for (int v = 0; v < static_cast<int>(sk.position.size()); ++v)
            if (sk.is_boundary(v) && sk.degree(v) != 1)
                throw ValidationError("boundary vertex of G_" + rule.prototiles[p].label + " has degree " + std::to_string(sk.degree(v)));
    }
    int cells = 0;
    std::vector<std::pair<int, int>> inner_ends;
    for (int e = 0; e < es.size(); ++e) {
        const auto& ed = t.edge(e);
        bool bf = t.boundary(e, ed.from), bt = t.boundary(e, ed.to);
        if (bf && bt) throw ValidationError("an edge of G joins two boundary vertices; the approximant needs interior vertices");
        if (!bf && !bt) {
            t.inner[e] = cells++;
            int p = es.owner[e].first;
            inner_ends.push_back({t.vertex.at({p, ed.from}), t.vertex.at({p, ed.to})});
            c.edge_names.push_back(rule.prototiles[p].label + ":" + std::to_string(es.owner[e].second));
        }
    }
    // half edges meeting across legal adjacencies
    auto half_at = [&](int p, int v) {
        const EdgeEnd& end = ps.g[p].rotation[v].front();
        return es.global(p, end.edge);
    };
    for (const Adjacency& adj : rule.adjacencies) {
        const Skeleton& sa = ps.g[adj.a];
        const Skeleton& sb = ps.g[adj.b];
        for (int x = 0; x < static_cast<int>(sa.position.size()); ++x) {
            if (!sa.is_boundary(x)) continue;
            int y = sb.find(Point(sa.position[x] - adj.offset));
            if (y < 0 || !sb.is_boundary(y)) continue;
            auto k = t.key(half_at(adj.a, x), half_at(adj.b, y));
            if (!t.glued.count(k)) {
                t.glued[k] = -1;
                t.glued_list.push_back(k);
            }
        }
    }
    std::sort(t.glued_list.begin(), t.glued_list.end());
    std::vector<std::pair<int, int>> ends = inner_ends;
    for (auto k : t.glued_list) {
        t.glued[k] = cells++;
        c.edge_names.push_back(edge_name(k.first, k.second));
        ends.push_back({t.interior_cell(k.first), t.interior_cell(k.second)});
    }
    const int V = static_cast<int>(c.vertex_names.size()), E = cells, F = static_cast<int>(fps.tiles.size());
    c.delta0 = IntMatrix::Zero(E, V);
    for (int i = 0; i < E; ++i) {
        c.delta0(i, ends[i].first) -= 1;
        c.delta0(i, ends[i].second) += 1;
    }
    c.delta1 = IntMatrix::Zero(F, E);
    for (int f = 0; f < F; ++f) {
        std::vector<int> row(E, 0);
        // faces are oriented clockwise
        t.accumulate(fps.tiles[f].word, true, row, -1);
        for (int i = 0; i < E; ++i) c.delta1(f, i) = row[i];
        c.face_names.push_back("F" + std::to_string(f));
    }

    c.A0 = IntMatrix::Zero(V, V);
    for (const auto& [pv, cell] : t.vertex) {
        auto [p, v] = pv;
        int s = ps.match[p].vertex_map[v];
        const Point& at = ps.s[p].position[s];
        int hit = -1;
        for (const SubEdgeRef& ref : ps.refs[p]) {
            int q = 0;
            Point tr = subtile_translation(rule, p, ref.path, &q);
            int w = ps.g[q].find(Point((at - tr) * es.scale));
            if (w >= 0 && !ps.g[q].is_boundary(w)) {
                hit = t.vertex.at({q, w});
                break;
            }
        }
        if (hit < 0) throw ValidationError("interior vertex of S_" + rule.prototiles[p].label + " is not a vertex of a subtile graph");
        c.A0(cell, hit) += 1;
    }

    c.A1 = IntMatrix::Zero(E, E);
    for (int i = 0; i < E; ++i) {
        std::vector<std::pair<int, bool>> seq;
        auto inner_it = std::find_if(t.inner.begin(), t.inner.end(), [&](const auto& kv) { return kv.second == i; });
        if (inner_it != t.inner.end()) {
            seq = t.expand(inner_it->first, true);
        } else {
            auto k = t.glued_list[i - static_cast<int>(t.inner.size())];
            seq = t.expand(k.first, t.is_out(k.first));
            auto tail = t.expand(k.second, !t.is_out(k.second));
            seq.insert(seq.end(), tail.begin(), tail.end());
        }
        std::vector<int> row(E, 0);
        t.accumulate(seq, false, row, 1);
        for (int j = 0; j < E; ++j) c.A1(i, j) = row[j];
    }
    c.A2 = to_integer(fps.A2);
    return c;
}

std::string FinitelyGenerated::str() const {
    std::vector<std::string> terms;
    if (rank == 1) terms.push_back("Z");
    if (rank > 1) terms.push_back("Z^" + std::to_string(rank));
    for (std::size_t i = 0; i < torsion.size();) {
        std::size_t j = i;
        while (j < torsion.size() && torsion[j] == torsion[i]) ++j;
        std::string t = "Z/" + torsion[i].str();
        terms.push_back(j - i > 1 ? "(" + t + ")^" + std::to_string(j - i) : t);
        i = j;
    }
    if (terms.empty()) return "0";
    std::string out;
    for (const auto& s : terms) out += (out.empty() ? "" : " (+) ") + s;
    return out;
}

std::string LimitGroup::str() const {
    std::vector<std::string> terms;
    if (!closed_form) {
        terms.push_back(fallback);
    } else {
        for (const auto& [k, m] : localized) terms.push_back("Z[1/" + k.str() + "]" + (m > 1 ? "^" + std::to_string(m) : ""));
        if (free_rank == 1) terms.push_back("Z");
        if (free_rank > 1) terms.push_back("Z^" + std::to_string(free_rank));
    }
    FinitelyGenerated t{0, torsion};
    if (!torsion.empty()) terms.push_back(t.str());
    if (terms.empty()) return "0";
    std::string out;
    for (const auto& s : terms) out += (out.empty() ? "" : " (+) ") + s;
    return out;
}

namespace {

IntMatrix integer_kernel(const IntMatrix& m) {
    if (m.rows() == 0) return identity(m.cols());
    SmithForm f = smith_normal_form(m);
    return f.V.rightCols(m.cols() - f.rank());
}

IntMatrix scale_to_integer(const RatMatrix& m) {
    IntMatrix out(m.rows(), m.cols());
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        Integer l = 1;
        for (Eigen::Index i = 0; i < m.rows(); ++i) l = mp::lcm(l, mp::denominator(m(i, j)));
        for (Eigen::Index i = 0; i < m.rows(); ++i) out(i, j) = mp::numerator(m(i, j)) * (l / mp::denominator(m(i, j)));
    }
    return out;
}

// subgroup of sum Z/d generated by the columns of g: its invariant factors
std::vector<Integer> subgroup_structure(const IntMatrix& g, const std::vector<Integer>& d) {
    const Eigen::Index t = static_cast<Eigen::Index>(d.size());
    IntMatrix all(t, g.cols() + t);
    all.leftCols(g.cols()) = g;
    all.rightCols(t) = IntMatrix::Zero(t, t);
    for (Eigen::Index i = 0; i < t; ++i) all(i, g.cols() + i) = d[i];
    SmithForm f = smith_normal_form(all);
    IntMatrix basis = unimodular_inverse(f.U) * f.S.leftCols(t);
    IntMatrix D = IntMatrix::Zero(t, t);
    for (Eigen::Index i = 0; i < t; ++i) D(i, i) = d[i];
    IntMatrix q = to_integer(RatMatrix(inverse(to_rational(basis)) * to_rational(D)));
    std::vector<Integer> out;
    for (const Integer& s : smith_normal_form(q).diagonal)
        if (s > 1) out.push_back(s);
    return out;
}

std::string compact(const IntMatrix& m) {
    std::string out = "[";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        out += i ? "; " : "";
        for (Eigen::Index j = 0; j < m.cols(); ++j) out += (j ? " " : "") + m(i, j).str();
    }
    return out + "]";
}

}  // namespace

LimitGroup direct_limit(const IntMatrix& m, const std::vector<Integer>& torsion, const IntMatrix& torsion_map) {
    LimitGroup g;
    const Eigen::Index r = m.rows();
    if (r > 0) {
        // restrict to the eventual image, where m is invertible over Q
        IntMatrix power = identity(r);
        for (Eigen::Index i = 0; i < r; ++i) power = power * m;
        IntMatrix lattice;
        if (rank(power) == 0) {
            lattice = IntMatrix(r, 0);
        } else {
            RatMatrix perp = null_space(to_rational(IntMatrix(power.transpose())));
            lattice = perp.cols() == 0 ? identity(r) : integer_kernel(IntMatrix(scale_to_integer(perp).transpose()));
        }
        const Eigen::Index s = lattice.cols();
        if (s > 0) {
            RatMatrix L = to_rational(lattice);
            RatMatrix gram = L.transpose() * L;
            IntMatrix b = to_integer(RatMatrix(inverse(gram) * L.transpose() * to_rational(m) * L));
            std::vector<std::pair<Integer, int>> roots;
            bool ok = integer_roots(characteristic_polynomial(b), roots);
            IntMatrix eig(s, 0);
            std::map<Integer, int, std::greater<Integer>> local;
            for (const auto& [mu, mult] : roots) {
                if (!ok) break;
                IntMatrix shifted = b - identity(s) * mu;
                IntMatrix ker = integer_kernel(shifted);
                if (ker.cols() != mult) {
                    ok = false;  // not diagonalizable
                    break;
                }
                IntMatrix grown(s, eig.cols() + ker.cols());
                grown << eig, ker;
                eig = grown;
                Integer a = mp::abs(mu);
                if (a == 1)
                    g.free_rank += mult;
                else
                    local[a] += mult;
            }
            if (ok) {
                Integer det = 1;
                for (const Integer& x : smith_normal_form(eig).diagonal) det *= x;
                g.lattice_index = det;
                for (const auto& kv : local) g.localized.push_back(kv);
            } else {
                g.closed_form = false;
                g.free_rank = 0;
                g.fallback = "colim(Z^" + std::to_string(s) + ", " + compact(b) + ")";
            }
        }
    }
    if (!torsion.empty()) {
        const Eigen::Index t = static_cast<Eigen::Index>(torsion.size());
        IntMatrix gens = identity(t);
        std::vector<Integer> prev = subgroup_structure(gens, torsion);
        auto order = [](const std::vector<Integer>& v) {
            Integer o = 1;
            for (const auto& x : v) o *= x;
            return o;
        };
        for (int it = 0; it < 256; ++it) {
            gens = torsion_map * gens;
            for (Eigen::Index i = 0; i < t; ++i)
                for (Eigen::Index j = 0; j < gens.cols(); ++j) {
                    gens(i, j) %= torsion[i];
                    if (gens(i, j) < 0) gens(i, j) += torsion[i];
                }
            auto next = subgroup_structure(gens, torsion);
            bool stable = order(next) == order(prev);
            prev = next;
            if (stable) break;
        }
        g.torsion = prev;
    }
    return g;
}

CohomologyDegree cohomology_degree(const IntMatrix& delta_prev, const IntMatrix& delta_next, const IntMatrix& a) {
    CohomologyDegree out;
    const Eigen::Index n = a.rows();
    SmithForm f1 = smith_normal_form(delta_next);
    const Eigen::Index r = f1.rank();
    IntMatrix vinv = unimodular_inverse(f1.V);
    IntMatrix K = f1.V.rightCols(n - r);
    IntMatrix X = (vinv * delta_prev).bottomRows(n - r);
    SmithForm f2 = smith_normal_form(X);
    const Eigen::Index s = f2.rank();
    const Eigen::Index free = (n - r) - s;
    IntMatrix u2inv = unimodular_inverse(f2.U);
    out.approximant.rank = static_cast<int>(free);
    std::vector<Eigen::Index> tor_idx;
    for (Eigen::Index i = 0; i < s; ++i)
        if (f2.diagonal[i] > 1) {
            out.approximant.torsion.push_back(f2.diagonal[i]);
            tor_idx.push_back(i);
        }
    out.generators = K * u2inv.rightCols(free);
    IntMatrix full = vinv * a * K;
    if (r > 0 && !full.topRows(r).isZero(0)) throw ValidationError("A does not map cocycles to cocycles");
    IntMatrix y = full.bottomRows(n - r);
    IntMatrix moved = f2.U * y * u2inv;
    out.induced = moved.bottomRightCorner(free, free);
    out.torsion_map = IntMatrix(static_cast<Eigen::Index>(tor_idx.size()), static_cast<Eigen::Index>(tor_idx.size()));
    for (std::size_t i = 0; i < tor_idx.size(); ++i)
        for (std::size_t j = 0; j < tor_idx.size(); ++j)
            out.torsion_map(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = moved(tor_idx[i], tor_idx[j]);
    out.limit = direct_limit(out.induced, out.approximant.torsion, out.torsion_map);
    return out;
}

CohomologyReport compute_cohomology(const CochainComplex& c) {
    CohomologyReport rep;
    rep.problems = check_complex(c);
    if (!rep.problems.empty()) throw ValidationError("inconsistent cochain complex: " + rep.problems.front());
    const Eigen::Index V = c.delta0.cols(), F = c.delta1.rows();
    rep.H[0] = cohomology_degree(IntMatrix(V, 0), c.delta0, c.A0);
    rep.H[1] = cohomology_degree(c.delta0, c.delta1, c.A1);
    rep.H[2] = cohomology_degree(c.delta1, IntMatrix(0, F), c.A2);
    return rep;
}

std::string CohomologyReport::str() const {
    std::ostringstream os;
    for (int k = 0; k < 3; ++k) os << "H" << k << "(approximant) = " << H[k].approximant.str() << "\n";
    for (int k = 0; k < 3; ++k) {
        os << "H" << k << " = " << H[k].limit.str();
        if (H[k].limit.closed_form && H[k].limit.lattice_index != 1) os << "  [eigenlattice index " << H[k].limit.lattice_index << "]";
        os << "\n";
    }
    return os.str();
}

}  // namespace tilework
