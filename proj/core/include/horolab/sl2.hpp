#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <string>

// 2x2 matrix algebra over doubles and over exact rationals, plus the Moebius
// action on the upper half-plane.
//
// Conventions:
//   a_t     = [[sqrt(t), 0], [0, 1/sqrt(t)]]   for t > 0
//   u_x     = [[1, x], [0, 1]]
//   delta_x = [[x, 0], [0, x]]
// Scalar matrices act trivially on H, so the Moebius action is defined for
// any real matrix with positive determinant and quotients by scalars.

namespace horolab {

using Rational = mpq_class;
using BigInt = mpz_class;

struct UHPoint {
    double x;
    double y;

    UHPoint(double x_, double y_);
};

// Plain real 2x2 matrix [[a,b],[c,d]], no determinant constraint.
struct Mat2 {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    double det() const { return a * d - b * c; }
    Mat2 operator*(const Mat2& o) const;
    Mat2 inverse() const;  // throws if det == 0
    static Mat2 identity() { return {}; }
};

// Element of SL(2,R): determinant renormalized to 1 after every construction
// and product, so |det - 1| stays <= 1e-12 across long chains of products.
class GroupElement {
  public:
    GroupElement() : m_{} {}
    explicit GroupElement(const Mat2& m);

    const Mat2& mat() const { return m_; }
    double a() const { return m_.a; }
    double b() const { return m_.b; }
    double c() const { return m_.c; }
    double d() const { return m_.d; }

    GroupElement operator*(const GroupElement& o) const { return GroupElement(m_ * o.m_); }
    GroupElement inverse() const { return GroupElement(Mat2{m_.d, -m_.b, -m_.c, m_.a}); }
    static GroupElement identity() { return GroupElement(); }

  private:
    Mat2 m_;
};

// 2x2 matrix over exact rationals.  Equality is exact; no tolerances.
struct ExactMatrix {
    Rational a, b, c, d;

    ExactMatrix() : a(1), b(0), c(0), d(1) {}
    ExactMatrix(Rational a_, Rational b_, Rational c_, Rational d_);

    Rational det() const { return a * d - b * c; }
    ExactMatrix operator*(const ExactMatrix& o) const;
    ExactMatrix inverse() const;  // throws on singular input
    bool operator==(const ExactMatrix& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
    bool operator!=(const ExactMatrix& o) const { return !(*this == o); }

    bool is_integral() const;
    bool is_unimodular() const;  // integer entries, det 1
    Mat2 to_mat2() const;
    std::string str() const;  // "[[a, b], [c, d]]"

    static ExactMatrix identity() { return ExactMatrix(); }
    static ExactMatrix from_ints(long a_, long b_, long c_, long d_);
};

std::ostream& operator<<(std::ostream& os, const ExactMatrix& m);

GroupElement make_a(double t);   // t > 0
GroupElement make_u(double x);
Mat2 make_delta(double x);       // x != 0
ExactMatrix make_delta_exact(const Rational& x);

UHPoint mobius(const Mat2& g, UHPoint z);  // requires det(g) > 0
UHPoint mobius(const GroupElement& g, UHPoint z);
UHPoint mobius(const ExactMatrix& g, UHPoint z);

// Checks a_y u_x a_y^{-1} == u_{xy} entrywise within 1e-12.
bool conjugation_identity_check(double y, double x);

double hyperbolic_distance(UHPoint p, UHPoint q);

// Slope of the second horocycle parameter.  Rationality is a tag carried by
// the value, never inferred from a float: every float is rational, so the
// rational/irrational dichotomy has to be semantic.
class Slope {
  public:
    static Slope rational(long long p, long long q);
    static Slope irrational(long double value);
    static Slope irrational_from_string(const std::string& decimal);

    bool is_rational() const { return rational_; }
    long long p() const;  // valid only when rational
    long long q() const;
    long double value() const { return value_; }

  private:
    Slope() = default;
    bool rational_ = false;
    long long p_ = 0, q_ = 0;
    long double value_ = 0.0L;
};

}  // namespace horolab
