#include "horolab/sl2.hpp"

#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace horolab {

UHPoint::UHPoint(double x_, double y_) : x(x_), y(y_) {
    if (!(y > 0.0) || !std::isfinite(y) || !std::isfinite(x))
        throw std::invalid_argument("UHPoint: need finite x and y > 0");
}

Mat2 Mat2::operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d,
            c * o.a + d * o.c, c * o.b + d * o.d};
}

Mat2 Mat2::inverse() const {
    const double dt = det();
    if (dt == 0.0 || !std::isfinite(dt)) throw std::invalid_argument("Mat2::inverse: singular matrix");
    return {d / dt, -b / dt, -c / dt, a / dt};
}

GroupElement::GroupElement(const Mat2& m) : m_(m) {
    const double dt = m_.det();
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw std::domain_error("GroupElement: determinant must be finite and positive");
    const double s = std::sqrt(dt);
    m_.a /= s;
    m_.b /= s;
    m_.c /= s;
    m_.d /= s;
}

ExactMatrix::ExactMatrix(Rational a_, Rational b_, Rational c_, Rational d_)
    : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {}

ExactMatrix ExactMatrix::operator*(const ExactMatrix& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d,
            c * o.a + d * o.c, c * o.b + d * o.d};
}

ExactMatrix ExactMatrix::inverse() const {
    const Rational dt = det();
    if (dt == 0) throw std::invalid_argument("ExactMatrix::inverse: singular matrix");
    return {d / dt, -b / dt, -c / dt, a / dt};
}

bool ExactMatrix::is_integral() const {
    return a.get_den() == 1 && b.get_den() == 1 && c.get_den() == 1 && d.get_den() == 1;
}

bool ExactMatrix::is_unimodular() const { return is_integral() && det() == 1; }

Mat2 ExactMatrix::to_mat2() const {
    return {a.get_d(), b.get_d(), c.get_d(), d.get_d()};
}

std::string ExactMatrix::str() const {
    std::ostringstream os;
    os << *this;
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const ExactMatrix& m) {
    return os << "[[" << m.a << ", " << m.b << "], [" << m.c << ", " << m.d << "]]";
}

ExactMatrix ExactMatrix::from_ints(long a_, long b_, long c_, long d_) {
    return {Rational(a_), Rational(b_), Rational(c_), Rational(d_)};
}

GroupElement make_a(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("make_a: t must be positive");
    const double s = std::sqrt(t);
    return GroupElement(Mat2{s, 0.0, 0.0, 1.0 / s});
}

GroupElement make_u(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("make_u: x must be finite");
    return GroupElement(Mat2{1.0, x, 0.0, 1.0});
}

Mat2 make_delta(double x) {
    if (x == 0.0 || !std::isfinite(x)) throw std::invalid_argument("make_delta: x must be nonzero");
    return {x, 0.0, 0.0, x};
}

ExactMatrix make_delta_exact(const Rational& x) {
    if (x == 0) throw std::invalid_argument("make_delta_exact: x must be nonzero");
    return {x, Rational(0), Rational(0), x};
}

UHPoint mobius(const Mat2& g, UHPoint z) {
    const long double a = g.a, b = g.b, c = g.c, d = g.d;
    const long double dt = a * d - b * c;
    if (!(dt > 0.0L)) throw std::invalid_argument("mobius: determinant must be positive");
    // (az+b)(conj(cz+d)) / |cz+d|^2; the imaginary part collapses to det * y.
    const long double re = c * z.x + d;
    const long double im = c * z.y;
    const long double n2 = re * re + im * im;
    const long double nx = (a * z.x + b) * re + a * z.y * im;
    const long double ny = dt * z.y;
    return UHPoint(static_cast<double>(nx / n2), static_cast<double>(ny / n2));
}

UHPoint mobius(const GroupElement& g, UHPoint z) { return mobius(g.mat(), z); }

UHPoint mobius(const ExactMatrix& g, UHPoint z) { return mobius(g.to_mat2(), z); }

bool conjugation_identity_check(double y, double x) {
    if (!(y > 0.0)) throw std::invalid_argument("conjugation_identity_check: y must be positive");
    const Mat2 ay = make_a(y).mat();
    const Mat2 lhs = ay * make_u(x).mat() * ay.inverse();
    const Mat2 rhs = make_u(x * y).mat();
    const double dev = std::max(std::max(std::fabs(lhs.a - rhs.a), std::fabs(lhs.b - rhs.b)),
                                std::max(std::fabs(lhs.c - rhs.c), std::fabs(lhs.d - rhs.d)));
    return dev <= 1e-12 * std::max(1.0, std::fabs(x * y));
}

double hyperbolic_distance(UHPoint p, UHPoint q) {
    const double dx = p.x - q.x;
    const double dy = p.y - q.y;
    const double arg = 1.0 + (dx * dx + dy * dy) / (2.0 * p.y * q.y);
    return std::acosh(arg);
}

Slope Slope::rational(long long p, long long q) {
    if (p < 1 || q < 1) throw std::invalid_argument("Slope::rational: need p >= 1 and q >= 1");
    const long long g = std::gcd(p, q);
    Slope s;
    s.rational_ = true;
    s.p_ = p / g;
    s.q_ = q / g;
    s.value_ = static_cast<long double>(s.p_) / static_cast<long double>(s.q_);
    return s;
}

Slope Slope::irrational(long double value) {
    if (!(value > 0.0L)) throw std::invalid_argument("Slope::irrational: value must be positive");
    Slope s;
    s.rational_ = false;
    s.value_ = value;
    return s;
}

Slope Slope::irrational_from_string(const std::string& decimal) {
    std::size_t pos = 0;
    long double v = 0.0L;
    try {
        v = std::stold(decimal, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("Slope: cannot parse '" + decimal + "'");
    }
    if (pos != decimal.size()) throw std::invalid_argument("Slope: trailing junk in '" + decimal + "'");
    return irrational(v);
}

long long Slope::p() const {
    if (!rational_) throw std::logic_error("Slope::p: slope is not rational");
    return p_;
}

long long Slope::q() const {
    if (!rational_) throw std::logic_error("Slope::q: slope is not rational");
    return q_;
}

}  // namespace horolab
