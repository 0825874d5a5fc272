#include "tilework/exact.hpp"

#include <cctype>
#include <cmath>

namespace tilework {

FieldScalar::FieldScalar(Rational a, Rational b, int d) : a_(std::move(a)), b_(std::move(b)), d_(d) {
    if (b_ != 0 && (d_ < 1 || !is_square_free(d_)))
        throw ArithmeticError("field discriminant must be a square-free integer >= 1, got " + std::to_string(d_));
    normalize();
}

void FieldScalar::normalize() {
    if (d_ == 1) {
        a_ += b_;
        b_ = 0;
    }
    if (b_ == 0) d_ = 0;
}

int FieldScalar::merge_d(int d1, int d2) {
    if (d1 == 0) return d2;
    if (d2 == 0 || d1 == d2) return d1;
    throw ArithmeticError("mixing Q(sqrt" + std::to_string(d1) + ") and Q(sqrt" + std::to_string(d2) + ")");
}

int FieldScalar::sign() const {
    int sa = a_.sign(), sb = b_.sign();
    if (sb == 0) return sa;
    if (sa == 0 || sa == sb) return sb;
    // opposite signs: compare a^2 with b^2 d
    Rational lhs = a_ * a_, rhs = b_ * b_ * d_;
    if (lhs > rhs) return sa;
    if (lhs < rhs) return sb;
    return 0;
}

FieldScalar FieldScalar::conjugate() const {
    FieldScalar r = *this;
    r.b_ = -r.b_;
    return r;
}

Rational FieldScalar::norm() const { return a_ * a_ - b_ * b_ * d_; }

double FieldScalar::to_double() const {
    if (b_ == 0) return a_.convert_to<double>();
    return a_.convert_to<double>() + b_.convert_to<double>() * std::sqrt(double(d_));
}

FieldScalar& FieldScalar::operator+=(const FieldScalar& o) {
    d_ = merge_d(d_, o.d_);
    a_ += o.a_;
    b_ += o.b_;
    normalize();
    return *this;
}

FieldScalar& FieldScalar::operator-=(const FieldScalar& o) {
    d_ = merge_d(d_, o.d_);
    a_ -= o.a_;
    b_ -= o.b_;
    normalize();
    return *this;
}

FieldScalar& FieldScalar::operator*=(const FieldScalar& o) {
    int d = merge_d(d_, o.d_);
    if (b_ == 0) {
        b_ = a_ * o.b_;
        a_ *= o.a_;
    } else if (o.b_ == 0) {
        a_ *= o.a_;
        b_ *= o.a_;
    } else {
        Rational a = a_ * o.a_ + b_ * o.b_ * d;
        b_ = a_ * o.b_ + b_ * o.a_;
        a_ = std::move(a);
    }
    d_ = d;
    normalize();
    return *this;
}

FieldScalar& FieldScalar::operator/=(const FieldScalar& o) {
    if (o.is_zero()) throw ArithmeticError("division by zero");
    if (o.b_ == 0) {
        a_ /= o.a_;
        b_ /= o.a_;
        normalize();
        return *this;
    }
    Rational n = o.norm();
    *this *= o.conjugate();
    a_ /= n;
    b_ /= n;
    normalize();
    return *this;
}

FieldScalar FieldScalar::operator-() const {
    FieldScalar r = *this;
    r.a_ = -r.a_;
    r.b_ = -r.b_;
    return r;
}

bool operator==(const FieldScalar& x, const FieldScalar& y) {
    if (x.b_ != 0 && y.b_ != 0 && x.d_ != y.d_) return false;
    return x.a_ == y.a_ && x.b_ == y.b_;
}

std::strong_ordering operator<=>(const FieldScalar& x, const FieldScalar& y) {
    int c = compare(x, y);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

int compare(const FieldScalar& x, const FieldScalar& y) {
    if (x.is_rational() && y.is_rational()) return x.a() < y.a() ? -1 : x.a() > y.a() ? 1 : 0;
    return (x - y).sign();
}

FieldScalar abs(const FieldScalar& x) { return x.sign() < 0 ? -x : x; }

FieldScalar inverse(const FieldScalar& x) { return FieldScalar(1) / x; }

FieldScalar pow(FieldScalar x, int n) {
    if (n < 0) return pow(inverse(x), -n);
    FieldScalar r(1);
    while (n) {
        if (n & 1) r *= x;
        x *= x;
        n >>= 1;
    }
    return r;
}

bool is_square_free(long d) {
    if (d < 1) return false;
    for (long p = 2; p * p <= d; ++p)
        if (d % (p * p) == 0) return false;
    return true;
}

namespace {

const std::string kRoot = "\xE2\x88\x9A";  // the radical sign

std::string strip(const std::string& s) {
    std::string out;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) out += c;
    return out;
}

Integer parse_integer(const std::string& s, const std::string& whole) {
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    if (i == s.size()) throw std::invalid_argument("malformed number '" + whole + "'");
    for (std::size_t j = i; j < s.size(); ++j)
        if (!std::isdigit(static_cast<unsigned char>(s[j]))) throw std::invalid_argument("malformed number '" + whole + "'");
    return Integer(s[0] == '+' ? s.substr(1) : s);
}

}  // namespace

Rational parse_rational(const std::string& text) {
    std::string s = strip(text);
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(parse_integer(s, text));
    Integer p = parse_integer(s.substr(0, slash), text);
    std::string qs = s.substr(slash + 1);
    if (!qs.empty() && (qs[0] == '-' || qs[0] == '+')) throw std::invalid_argument("non-reduced rational '" + text + "'");
    Integer q = parse_integer(qs, text);
    if (q == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    if (q == 1 || mp::gcd(p, q) != 1) throw std::invalid_argument("non-reduced rational '" + text + "'");
    return Rational(p, q);
}

FieldScalar parse_field(const std::string& text, int d) {
    std::string s = strip(text);
    std::size_t root = s.find(kRoot);
    std::size_t root_len = kRoot.size();
    if (root == std::string::npos) {
        root = s.find("sqrt");
        root_len = 4;
    }
    if (root == std::string::npos) return FieldScalar(parse_rational(s));

    std::string rad = s.substr(root + root_len);
    if (!rad.empty() && rad.front() == '(' && rad.back() == ')') rad = rad.substr(1, rad.size() - 2);
    long radicand = parse_integer(rad, text).convert_to<long>();
    if (radicand != d)
        throw std::invalid_argument("coordinate '" + text + "' lies outside Q(sqrt" + std::to_string(d) + ")");

    std::string coeff = s.substr(0, root);
    std::size_t split = std::string::npos;
    for (std::size_t i = coeff.size(); i-- > 1;)
        if ((coeff[i] == '+' || coeff[i] == '-') && coeff[i - 1] != '/') {
            split = i;
            break;
        }
    std::string a_part = split == std::string::npos ? "" : coeff.substr(0, split);
    std::string b_part = split == std::string::npos ? coeff : coeff.substr(split);
    Rational a = a_part.empty() ? Rational(0) : parse_rational(a_part);
    Rational b;
    if (b_part.empty() || b_part == "+")
        b = 1;
    else if (b_part == "-")
        b = -1;
    else
        b = parse_rational(b_part);
    return FieldScalar(a, b, d);
}

std::string to_string(const Rational& r) {
    if (mp::denominator(r) == 1) return mp::numerator(r).str();
    return mp::numerator(r).str() + "/" + mp::denominator(r).str();
}

std::string to_string(const FieldScalar& x) {
    if (x.is_rational()) return to_string(x.a());
    Rational b = x.b();
    std::string sign = b < 0 ? "-" : "+";
    if (b < 0) b = -b;
    std::string tail = (b == 1 ? "" : to_string(b)) + kRoot + std::to_string(x.d());
    if (x.a() == 0) return (sign == "-" ? "-" : "") + tail;
    return to_string(x.a()) + sign + tail;
}

int compare(const Point& p, const Point& q) {
    int c = compare(p.x(), q.x());
    return c ? c : compare(p.y(), q.y());
}

std::string to_string(const Point& p) { return "(" + to_string(p.x()) + ", " + to_string(p.y()) + ")"; }

}  // namespace tilework
