#pragma once

#include "tilework/exact.hpp"

#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Core>

namespace tilework {

using IntMatrix = Eigen::Matrix<Integer, Eigen::Dynamic, Eigen::Dynamic>;
using RatMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;

template <class Derived>
IntMatrix to_integer(const Eigen::MatrixBase<Derived>& m) {
    IntMatrix out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = Integer(m(i, j));
    return out;
}

RatMatrix to_rational(const IntMatrix& m);
// entries must be integral
IntMatrix to_integer(const RatMatrix& m);

// U * M * V = S with U, V unimodular and S diagonal, s_1 | s_2 | ..., all nonnegative
struct SmithForm {
    IntMatrix U, S, V;
    std::vector<Integer> diagonal;  // the nonzero invariant factors
    int rank() const { return static_cast<int>(diagonal.size()); }
};

SmithForm smith_normal_form(const IntMatrix& m);

int rank(const RatMatrix& m);
inline int rank(const IntMatrix& m) { return rank(to_rational(m)); }
// exact inverse; throws ArithmeticError if singular
RatMatrix inverse(const RatMatrix& m);
// inverse of a unimodular integer matrix
IntMatrix unimodular_inverse(const IntMatrix& m);
// rational basis of the null space, as columns
RatMatrix null_space(const RatMatrix& m);

// coefficients c_0..c_n of det(x I - m)
std::vector<Integer> characteristic_polynomial(const IntMatrix& m);
// integer roots with multiplicities; returns false if some root is not an integer
bool integer_roots(std::vector<Integer> coeffs, std::vector<std::pair<Integer, int>>& roots);

IntMatrix identity(Eigen::Index n);
std::string format_matrix(const IntMatrix& m);

}  // namespace tilework
