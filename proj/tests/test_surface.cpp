#include <doctest.h>

#include <cmath>

#include "horolab/rng.hpp"
#include "horolab/surface.hpp"

using namespace horolab;

namespace {

constexpr double kPi = 3.14159265358979323846;

ExactMatrix random_gamma(RngStream& rng, int max_len = 8) {
    const ExactMatrix S = ExactMatrix::from_ints(0, -1, 1, 0);
    const ExactMatrix T = ExactMatrix::from_ints(1, 1, 0, 1);
    const ExactMatrix Tinv = ExactMatrix::from_ints(1, -1, 0, 1);
    ExactMatrix g = ExactMatrix::identity();
    const int len = 1 + static_cast<int>(rng.next() % max_len);
    for (int i = 0; i < len; ++i) {
        switch (rng.next() % 3) {
            case 0: g = g * S; break;
            case 1: g = g * T; break;
            default: g = g * Tinv; break;
        }
    }
    return g;
}

}  // namespace

TEST_CASE("reduce on hand-picked points") {
    {
        const ReducedPoint r = reduce(UHPoint(0.0, 1.0));
        CHECK(r.z.x == doctest::Approx(0.0));
        CHECK(r.z.y == doctest::Approx(1.0));
        CHECK(r.witness == ExactMatrix::identity());
    }
    {
        // i + 5 translates back by u_{-5}
        const ReducedPoint r = reduce(UHPoint(5.0, 1.0));
        CHECK(r.z.x == doctest::Approx(0.0));
        CHECK(r.z.y == doctest::Approx(1.0));
        CHECK(r.witness == ExactMatrix::from_ints(1, -5, 0, 1));
    }
    {
        // 0.5i inverts to 2i through S
        const ReducedPoint r = reduce(UHPoint(0.0, 0.5));
        CHECK(r.z.x == doctest::Approx(0.0));
        CHECK(r.z.y == doctest::Approx(2.0));
        CHECK(r.witness == ExactMatrix::from_ints(0, -1, 1, 0));
    }
}

TEST_CASE("boundary tie rules") {
    // Re z = +1/2 maps to -1/2.
    const UHPoint a = reduce_point(UHPoint(0.5, 2.0));
    CHECK(a.x == doctest::Approx(-0.5));
    CHECK(a.y == doctest::Approx(2.0));

    // (0.6, 0.8) sits on the unit circle outside |x| <= 1/2; its orbit point
    // in F is the corner of height exactly 1.
    const UHPoint b = reduce_point(UHPoint(0.6, 0.8));
    CHECK(std::fabs(std::fabs(b.x) - 0.5) <= 1e-12);
    CHECK(b.y == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(in_fundamental_domain(b));

    const UHPoint c = reduce_point(UHPoint(-0.5, 3.0));
    CHECK(c.x == doctest::Approx(-0.5));
}

TEST_CASE("invariant height values") {
    CHECK(invariant_height(UHPoint(0.0, 1.0)) == doctest::Approx(1.0));
    // -1/(i/4) = 4i: the exact Gauss reduction of i/4 ends at height 4.
    CHECK(invariant_height(UHPoint(0.0, 0.25)) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("reduction is idempotent and Gamma-invariant") {
    RngStream rng(314159, 0);
    for (int i = 0; i < 10000; ++i) {
        const UHPoint z(rng.uniform(-8.0, 8.0), std::exp(rng.uniform(-6.0, 2.0)));
        const ReducedPoint r = reduce(z);
        CHECK(in_fundamental_domain(r.z, 1e-9));

        const UHPoint mapped = mobius(r.witness, z);
        CHECK(std::fabs(mapped.x - r.z.x) <= 1e-8);
        CHECK(std::fabs(mapped.y - r.z.y) <= 1e-8 * std::max(1.0, r.z.y));
        CHECK(r.witness.is_unimodular());

        const UHPoint again = reduce_point(r.z);
        CHECK(std::fabs(again.x - r.z.x) <= 1e-12);
        CHECK(std::fabs(again.y - r.z.y) <= 1e-12 * std::max(1.0, r.z.y));

        const ExactMatrix g = random_gamma(rng);
        const UHPoint moved = mobius(g, z);
        const UHPoint r2 = reduce_point(moved);
        // Away from boundary ties the reduced representative is unique.
        if (std::fabs(std::fabs(r.z.x) - 0.5) > 1e-6 &&
            std::fabs(r.z.x * r.z.x + r.z.y * r.z.y - 1.0) > 1e-6) {
            CHECK(std::fabs(r2.x - r.z.x) <= 1e-8);
            CHECK(std::fabs(r2.y - r.z.y) <= 1e-8 * std::max(1.0, r.z.y));
            CHECK(std::fabs(invariant_height(moved) - invariant_height(z)) <=
                  1e-9 * std::max(1.0, r.z.y));
        }
    }
}

TEST_CASE("reduce diagnostics") {
    // extreme inputs still converge: inversions only ever increase y
    const UHPoint deep = reduce_point(UHPoint(0.3, 1e-300));
    CHECK(in_fundamental_domain(deep, 1e-9));

    // the iteration cap is the failure mode, reachable through the hook
    long double x = 1e9L, y = 1.0L;
    CHECK_THROWS_AS(
        detail::reduce_core(x, y, 0, [](long double) {}, []() {}), std::runtime_error);
}

TEST_CASE("sampler matches the normalized measure") {
    RngStream rng(424242, 7);
    const int n = 1000000;
    double sum_x = 0.0, sumsq_x = 0.0;
    int cusp = 0;
    for (int i = 0; i < n; ++i) {
        const UHPoint z = sample_F(rng);
        CHECK(std::fabs(z.x) <= 0.5);
        CHECK(z.x * z.x + z.y * z.y >= 1.0 - 1e-12);
        sum_x += z.x;
        sumsq_x += z.x * z.x;
        if (z.y >= 2.0) ++cusp;
    }
    const double mean_x = sum_x / n;
    const double sd_x = std::sqrt(sumsq_x / n - mean_x * mean_x);
    CHECK(std::fabs(mean_x) <= 3.0 * sd_x / std::sqrt(double(n)));

    const double frac = double(cusp) / n;
    const double ref = 3.0 / (2.0 * kPi);  // mass of {y >= a} is 3/(pi a)
    const double se = std::sqrt(ref * (1.0 - ref) / n);
    CHECK(std::fabs(frac - ref) <= 3.0 * se);
}

TEST_CASE("quadrature reproduces closed forms") {
    {
        const QuadResult one = quad_F([](UHPoint) { return 1.0; });
        CHECK(std::fabs(one.value - 1.0) <= 1e-6);
        CHECK(!one.tail_flag);
    }
    {
        const QuadResult q2 = quad_F([](UHPoint z) { return z.y >= 2.0 ? 1.0 : 0.0; });
        CHECK(std::fabs(q2.value - 3.0 / (2.0 * kPi)) <= 1e-6);
    }
    {
        const QuadResult q1 = quad_F([](UHPoint z) { return z.y >= 1.0 ? 1.0 : 0.0; });
        CHECK(std::fabs(q1.value - 3.0 / kPi) <= 1e-6);
    }
    {
        // growth declared too strong for the cusp tail gets flagged
        const QuadResult bad = quad_F([](UHPoint z) { return z.y * z.y; }, 2.0);
        CHECK(bad.tail_flag);
    }
}

TEST_CASE("sampler and quadrature agree on a window") {
    RngStream rng(5150, 3);
    const int n = 200000;
    auto f = [](UHPoint z) { return (z.y >= 1.5 && z.y <= 3.0 && z.x >= -0.2) ? 1.0 : 0.0; };
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += f(sample_F(rng));
    const double mc = acc / n;
    const double se = std::sqrt(mc * (1.0 - mc) / n);
    const QuadResult q = quad_F(f);
    CHECK(std::fabs(mc - q.value) <= 4.0 * se);
}
