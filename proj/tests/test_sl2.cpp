#include <doctest.h>

#include <cmath>

#include "horolab/rng.hpp"
#include "horolab/sl2.hpp"

using namespace horolab;

namespace {

double max_entry_diff(const Mat2& a, const Mat2& b) {
    return std::max(std::max(std::fabs(a.a - b.a), std::fabs(a.b - b.b)),
                    std::max(std::fabs(a.c - b.c), std::fabs(a.d - b.d)));
}

GroupElement random_element(RngStream& rng) {
    GroupElement g = make_u(rng.uniform(-2.0, 2.0)) * make_a(std::exp(rng.uniform(-1.5, 1.5)));
    const double c = rng.uniform(-1.0, 1.0);
    return g * GroupElement(Mat2{1.0, 0.0, c, 1.0});
}

}  // namespace

TEST_CASE("generator matrices match their definitions") {
    const Mat2 a1 = make_a(1.0).mat();
    CHECK(max_entry_diff(a1, Mat2::identity()) == 0.0);

    const Mat2 u0 = make_u(0.0).mat();
    CHECK(max_entry_diff(u0, Mat2::identity()) == 0.0);

    const Mat2 a4 = make_a(4.0).mat();
    CHECK(a4.a == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(a4.d == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(a4.b == 0.0);
    CHECK(a4.c == 0.0);

    CHECK_THROWS_AS(make_a(0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_a(-3.0), std::invalid_argument);
    CHECK_THROWS_AS(make_delta(0.0), std::invalid_argument);
}

TEST_CASE("mobius action basics") {
    const UHPoint z(0.3, 1.7);
    const UHPoint w = mobius(GroupElement::identity(), z);
    CHECK(w.x == doctest::Approx(z.x));
    CHECK(w.y == doctest::Approx(z.y));

    // a_{1/T} u_x . i = (x+i)/T
    for (double T : {2.0, 10.0, 1e4}) {
        for (double x : {-1.3, 0.0, 0.7}) {
            const UHPoint p = mobius(make_a(1.0 / T) * make_u(x), UHPoint(0.0, 1.0));
            CHECK(p.x == doctest::Approx(x / T).epsilon(1e-14));
            CHECK(p.y == doctest::Approx(1.0 / T).epsilon(1e-14));
        }
    }

    // i is the fixed point of the inversion
    const UHPoint fix = mobius(Mat2{0.0, -1.0, 1.0, 0.0}, UHPoint(0.0, 1.0));
    CHECK(fix.x == doctest::Approx(0.0));
    CHECK(fix.y == doctest::Approx(1.0));

    // scalar matrices act trivially
    const Mat2 d3 = make_delta(3.0);
    const UHPoint s = mobius(d3, z);
    CHECK(s.x == doctest::Approx(z.x).epsilon(1e-15));
    CHECK(s.y == doctest::Approx(z.y).epsilon(1e-15));

    CHECK_THROWS_AS(UHPoint(0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(UHPoint(0.0, -1.0), std::invalid_argument);
}

TEST_CASE("conjugation identity a_y u_x a_y^{-1} = u_{xy}") {
    CHECK(conjugation_identity_check(2.0, 3.0));
    // explicit product at y=2, x=3 equals u_6
    const Mat2 ay = make_a(2.0).mat();
    const Mat2 lhs = ay * make_u(3.0).mat() * ay.inverse();
    CHECK(max_entry_diff(lhs, make_u(6.0).mat()) <= 1e-12);

    for (double x0 : {-7.3, 0.0, 0.25, 11.0}) CHECK(conjugation_identity_check(1.0, x0));

    CHECK(conjugation_identity_check(1.0 / 3.0, -5.0));
    const Mat2 a13 = make_a(1.0 / 3.0).mat();
    const Mat2 lhs2 = a13 * make_u(-5.0).mat() * a13.inverse();
    CHECK(max_entry_diff(lhs2, make_u(-5.0 / 3.0).mat()) <= 1e-12);

    CHECK_THROWS_AS(conjugation_identity_check(0.0, 1.0), std::invalid_argument);

    RngStream rng(20240811, 0);
    for (int i = 0; i < 10000; ++i) {
        const double y = std::exp(rng.uniform(-3.0, 3.0));
        const double x = rng.uniform(-50.0, 50.0);
        CHECK(conjugation_identity_check(y, x));
    }
}

TEST_CASE("exact matrix arithmetic") {
    const ExactMatrix id = ExactMatrix::identity();
    CHECK(id.inverse() == id);

    const ExactMatrix t = ExactMatrix::from_ints(1, 1, 0, 1);
    const ExactMatrix tinv = ExactMatrix::from_ints(1, -1, 0, 1);
    CHECK(t * tinv == id);
    CHECK(t.inverse() == tinv);

    const ExactMatrix d23 = ExactMatrix::from_ints(2, 0, 0, 3);
    const ExactMatrix inv = d23.inverse();
    CHECK(inv.a == Rational(1, 2));
    CHECK(inv.d == Rational(1, 3));
    CHECK(inv * d23 == id);
    CHECK(d23 * inv == id);

    CHECK_THROWS_AS(ExactMatrix::from_ints(1, 2, 2, 4).inverse(), std::invalid_argument);

    CHECK(t.is_unimodular());
    CHECK(!d23.is_unimodular());
    CHECK(d23.is_integral());
    CHECK(!make_delta_exact(Rational(1, 2)).is_integral());

    // inverse stays exact through long products
    ExactMatrix w = id;
    const ExactMatrix s = ExactMatrix::from_ints(0, -1, 1, 0);
    for (int i = 0; i < 40; ++i) w = w * (i % 2 ? s : t);
    CHECK(w * w.inverse() == id);
    CHECK(w.det() == 1);
}

TEST_CASE("mobius composition is associative with the group law") {
    RngStream rng(7, 1);
    for (int i = 0; i < 2000; ++i) {
        const GroupElement g = random_element(rng);
        const GroupElement h = random_element(rng);
        const UHPoint z(rng.uniform(-3.0, 3.0), std::exp(rng.uniform(-2.0, 2.0)));
        const UHPoint lhs = mobius(g * h, z);
        const UHPoint rhs = mobius(g, mobius(h, z));
        CHECK(std::fabs(lhs.x - rhs.x) <= 1e-10 * std::max(1.0, std::fabs(rhs.x)));
        CHECK(std::fabs(lhs.y - rhs.y) <= 1e-10 * std::max(1.0, rhs.y));
    }
}

TEST_CASE("determinant stays pinned across one million products") {
    RngStream rng(99, 2);
    GroupElement acc = GroupElement::identity();
    const GroupElement gens[4] = {make_u(0.7), make_a(1.3), make_u(-0.4),
                                  GroupElement(Mat2{1.0, 0.0, 0.35, 1.0})};
    double worst = 0.0;
    for (int i = 0; i < 1000000; ++i) {
        acc = acc * gens[rng.next() & 3];
        worst = std::max(worst, std::fabs(acc.mat().det() - 1.0));
        // measuring det costs ~entries^2 * eps in cancellation, so keep the
        // chain in the regime where 1e-12 is resolvable at all
        const double scale = std::max(std::max(std::fabs(acc.a()), std::fabs(acc.b())),
                                      std::max(std::fabs(acc.c()), std::fabs(acc.d())));
        if (scale > 30.0) acc = GroupElement::identity();
    }
    worst = std::max(worst, std::fabs(acc.mat().det() - 1.0));
    CHECK(worst <= 1e-12);
}

TEST_CASE("slope tags and canonicalization") {
    const Slope r = Slope::rational(4, 6);
    CHECK(r.is_rational());
    CHECK(r.p() == 2);
    CHECK(r.q() == 3);
    CHECK(static_cast<double>(r.value()) == doctest::Approx(2.0 / 3.0));

    CHECK_THROWS_AS(Slope::rational(0, 3), std::invalid_argument);
    CHECK_THROWS_AS(Slope::rational(2, -1), std::invalid_argument);

    const Slope s = Slope::irrational_from_string("1.41421356237309504880");
    CHECK(!s.is_rational());
    CHECK(static_cast<double>(s.value()) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK_THROWS_AS(s.p(), std::logic_error);
    CHECK_THROWS_AS(Slope::irrational_from_string("-1.0"), std::invalid_argument);
    CHECK_THROWS_AS(Slope::irrational_from_string("1.0x"), std::invalid_argument);
}

TEST_CASE("hyperbolic distance on vertical rays") {
    CHECK(hyperbolic_distance(UHPoint(0, 1), UHPoint(0, std::exp(1.0))) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hyperbolic_distance(UHPoint(0.5, 2), UHPoint(0.5, 2)) == doctest::Approx(0.0));
}
