#include "tilework/integer_matrix.hpp"

#include <algorithm>
#include <sstream>

namespace tilework {

RatMatrix to_rational(const IntMatrix& m) {
    RatMatrix out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = Rational(m(i, j));
    return out;
}

IntMatrix to_integer(const RatMatrix& m) {
    IntMatrix out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (mp::denominator(m(i, j)) != 1) throw ArithmeticError("matrix entry " + to_string(m(i, j)) + " is not an integer");
            out(i, j) = mp::numerator(m(i, j));
        }
    return out;
}

IntMatrix identity(Eigen::Index n) {
    IntMatrix out = IntMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) out(i, i) = 1;
    return out;
}

SmithForm smith_normal_form(const IntMatrix& m) {
    const Eigen::Index rows = m.rows(), cols = m.cols();
    SmithForm f{identity(rows), m, identity(cols), {}};
    IntMatrix& S = f.S;
    auto swap_rows = [&](Eigen::Index a, Eigen::Index b) {
        if (a == b) return;
        S.row(a).swap(S.row(b));
        f.U.row(a).swap(f.U.row(b));
    };
    auto swap_cols = [&](Eigen::Index a, Eigen::Index b) {
        if (a == b) return;
        S.col(a).swap(S.col(b));
        f.V.col(a).swap(f.V.col(b));
    };
    // row_i -= q row_t
    auto row_op = [&](Eigen::Index i, Eigen::Index t, const Integer& q) {
        if (q == 0) return;
        S.row(i) -= S.row(t) * q;
        f.U.row(i) -= f.U.row(t) * q;
    };
    auto col_op = [&](Eigen::Index j, Eigen::Index t, const Integer& q) {
        if (q == 0) return;
        S.col(j) -= S.col(t) * q;
        f.V.col(j) -= f.V.col(t) * q;
    };
    for (Eigen::Index t = 0; t < std::min(rows, cols); ++t) {
        for (;;) {
            // smallest nonzero entry of the trailing block becomes the pivot
            Eigen::Index pi = -1, pj = -1;
            for (Eigen::Index i = t; i < rows; ++i)
                for (Eigen::Index j = t; j < cols; ++j)
                    if (S(i, j) != 0 && (pi < 0 || mp::abs(S(i, j)) < mp::abs(S(pi, pj)))) {
                        pi = i;
                        pj = j;
                    }
            if (pi < 0) goto done;
            swap_rows(t, pi);
            swap_cols(t, pj);
            bool clean = true;
            for (Eigen::Index i = t + 1; i < rows; ++i) {
                row_op(i, t, S(i, t) / S(t, t));
                if (S(i, t) != 0) clean = false;
            }
            for (Eigen::Index j = t + 1; j < cols; ++j) {
                col_op(j, t, S(t, j) / S(t, t));
                if (S(t, j) != 0) clean = false;
            }
            if (!clean) continue;
            // divisibility: fold an offending row into the pivot row
            Eigen::Index bad = -1;
            for (Eigen::Index i = t + 1; i < rows && bad < 0; ++i)
                for (Eigen::Index j = t + 1; j < cols; ++j)
                    if (S(i, j) % S(t, t) != 0) {
                        bad = i;
                        break;
                    }
            if (bad < 0) break;
            row_op(t, bad, Integer(-1));
        }
        if (S(t, t) < 0) {
            S.row(t) *= Integer(-1);
            f.U.row(t) *= Integer(-1);
        }
        f.diagonal.push_back(S(t, t));
    }
done:
    return f;
}

namespace {

// reduced row echelon form in place; returns pivot columns
std::vector<Eigen::Index> rref(RatMatrix& a) {
    std::vector<Eigen::Index> pivots;
    Eigen::Index r = 0;
    for (Eigen::Index c = 0; c < a.cols() && r < a.rows(); ++c) {
        Eigen::Index p = -1;
        for (Eigen::Index i = r; i < a.rows(); ++i)
            if (a(i, c) != 0) {
                p = i;
                break;
            }
        if (p < 0) continue;
        a.row(r).swap(a.row(p));
        Rational inv = 1 / a(r, c);
        a.row(r) *= inv;
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            if (i != r && a(i, c) != 0) {
                Rational q = a(i, c);
                a.row(i) -= a.row(r) * q;
            }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace

int rank(const RatMatrix& m) {
    RatMatrix a = m;
    return static_cast<int>(rref(a).size());
}

RatMatrix inverse(const RatMatrix& m) {
    if (m.rows() != m.cols()) throw ArithmeticError("inverse of a non-square matrix");
    Eigen::Index n = m.rows();
    RatMatrix a(n, 2 * n);
    a.leftCols(n) = m;
    a.rightCols(n) = to_rational(identity(n));
    auto piv = rref(a);
    if (static_cast<Eigen::Index>(piv.size()) < n || piv[n - 1] != n - 1) throw ArithmeticError("matrix is singular");
    return a.rightCols(n);
}

IntMatrix unimodular_inverse(const IntMatrix& m) { return to_integer(inverse(to_rational(m))); }

RatMatrix null_space(const RatMatrix& m) {
    RatMatrix a = m;
    auto piv = rref(a);
    std::vector<char> is_pivot(m.cols());
    for (auto c : piv) is_pivot[c] = 1;
    std::vector<Eigen::Index> free_cols;
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    RatMatrix out = RatMatrix::Zero(m.cols(), static_cast<Eigen::Index>(free_cols.size()));
    for (std::size_t k = 0; k < free_cols.size(); ++k) {
        Eigen::Index fc = free_cols[k];
        out(fc, static_cast<Eigen::Index>(k)) = 1;
        for (std::size_t r = 0; r < piv.size(); ++r) out(piv[r], static_cast<Eigen::Index>(k)) = -a(static_cast<Eigen::Index>(r), fc);
    }
    return out;
}

std::vector<Integer> characteristic_polynomial(const IntMatrix& m) {
    // Faddeev-LeVerrier; exact over the integers since c_{n-k} * k divides evenly
    Eigen::Index n = m.rows();
    std::vector<Integer> c(n + 1);
    c[n] = 1;
    IntMatrix Mk = IntMatrix::Zero(n, n);
    IntMatrix I = identity(n);
    for (Eigen::Index k = 1; k <= n; ++k) {
        Mk = m * Mk + I * c[n - k + 1];
        IntMatrix AM = m * Mk;
        Integer tr = AM.trace();
        c[n - k] = -tr / Integer(k);
    }
    return c;
}

bool integer_roots(std::vector<Integer> coeffs, std::vector<std::pair<Integer, int>>& roots) {
    roots.clear();
    auto degree = [&]() { return static_cast<int>(coeffs.size()) - 1; };
    // synthetic division by (x - r); returns true if exact
    auto divide = [&](const Integer& r) {
        int n = degree();
        std::vector<Integer> q(n);
        Integer acc = 0;
        for (int i = n; i >= 1; --i) {
            acc = acc * r + coeffs[i];
            q[i - 1] = acc;
        }
        if (acc * r + coeffs[0] != 0) return false;
        coeffs = q;
        return true;
    };
    while (degree() > 0 && coeffs[0] == 0) {
        coeffs.erase(coeffs.begin());
        if (roots.empty() || roots.back().first != 0) roots.push_back({Integer(0), 0});
        roots.back().second++;
    }
    if (degree() == 0) return true;
    Integer c0 = mp::abs(coeffs[0]);
    if (c0 > Integer(1000000000000LL)) return false;
    std::vector<Integer> divs;
    for (Integer d = 1; d * d <= c0; ++d)
        if (c0 % d == 0) {
            divs.push_back(d);
            if (d * d != c0) divs.push_back(c0 / d);
        }
    std::sort(divs.begin(), divs.end());
    for (const Integer& d : divs)
        for (const Integer& r : {d, Integer(-d)}) {
            int mult = 0;
            while (degree() > 0 && divide(r)) ++mult;
            if (mult) roots.push_back({r, mult});
        }
    return degree() == 0;
}

std::string format_matrix(const IntMatrix& m) {
    std::ostringstream os;
    std::vector<std::size_t> width(m.cols(), 1);
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) width[j] = std::max(width[j], m(i, j).str().size());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            std::string s = m(i, j).str();
            os << (j ? " " : "") << std::string(width[j] - s.size(), ' ') << s;
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace tilework
