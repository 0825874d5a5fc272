#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <Eigen/Core>

#include <compare>
#include <stdexcept>
#include <string>
#include <vector>

namespace tilework {

namespace mp = boost::multiprecision;
using Integer = mp::number<mp::gmp_int, mp::et_off>;
using Rational = mp::number<mp::gmp_rational, mp::et_off>;

struct ArithmeticError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// a + b*sqrt(d) with rational a, b. d is square-free and carried by the
// value; b == 0 marks a plain rational that combines with any field.
class FieldScalar {
public:
    FieldScalar() = default;
    FieldScalar(int v) : a_(v) {}
    FieldScalar(long v) : a_(v) {}
    FieldScalar(const Integer& v) : a_(v) {}
    FieldScalar(const Rational& v) : a_(v) {}
    FieldScalar(Rational a, Rational b, int d);

    const Rational& a() const { return a_; }
    const Rational& b() const { return b_; }
    int d() const { return d_; }
    bool is_rational() const { return b_ == 0; }
    bool is_zero() const { return a_ == 0 && b_ == 0; }

    int sign() const;
    FieldScalar conjugate() const;
    Rational norm() const;
    double to_double() const;

    FieldScalar& operator+=(const FieldScalar& o);
    FieldScalar& operator-=(const FieldScalar& o);
    FieldScalar& operator*=(const FieldScalar& o);
    FieldScalar& operator/=(const FieldScalar& o);

    friend FieldScalar operator+(FieldScalar x, const FieldScalar& y) { return x += y; }
    friend FieldScalar operator-(FieldScalar x, const FieldScalar& y) { return x -= y; }
    friend FieldScalar operator*(FieldScalar x, const FieldScalar& y) { return x *= y; }
    friend FieldScalar operator/(FieldScalar x, const FieldScalar& y) { return x /= y; }
    FieldScalar operator-() const;

    friend bool operator==(const FieldScalar& x, const FieldScalar& y);
    friend std::strong_ordering operator<=>(const FieldScalar& x, const FieldScalar& y);

private:
    static int merge_d(int d1, int d2);
    void normalize();

    Rational a_ = 0;
    Rational b_ = 0;
    int d_ = 0;
};

int compare(const FieldScalar& x, const FieldScalar& y);
FieldScalar abs(const FieldScalar& x);
FieldScalar inverse(const FieldScalar& x);
FieldScalar pow(FieldScalar x, int n);

bool is_square_free(long d);

// "p/q", "p/q+r/s√d", "-√2", ... ; rationals must be in lowest terms.
Rational parse_rational(const std::string& text);
FieldScalar parse_field(const std::string& text, int d);
std::string to_string(const Rational& r);
std::string to_string(const FieldScalar& x);

}  // namespace tilework

namespace Eigen {
template <>
struct NumTraits<tilework::FieldScalar> : GenericNumTraits<tilework::FieldScalar> {
    using Real = tilework::FieldScalar;
    using NonInteger = tilework::FieldScalar;
    using Literal = tilework::FieldScalar;
    using Nested = tilework::FieldScalar;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 8,
        AddCost = 32,
        MulCost = 64
    };
    static Real epsilon() { return Real(0); }
    static Real dummy_precision() { return Real(0); }
    static int digits10() { return 0; }
};
}  // namespace Eigen

namespace tilework {

template <class Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;
using Point = Vec2<FieldScalar>;
using PointD = Eigen::Vector2d;

template <class Scalar>
Scalar cross(const Vec2<Scalar>& u, const Vec2<Scalar>& v) {
    return u.x() * v.y() - u.y() * v.x();
}

inline PointD to_double(const Point& p) { return {p.x().to_double(), p.y().to_double()}; }

int compare(const Point& p, const Point& q);
struct PointLess {
    bool operator()(const Point& p, const Point& q) const { return compare(p, q) < 0; }
};
std::string to_string(const Point& p);

}  // namespace tilework
