#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "horolab/hecke.hpp"
#include "horolab/rng.hpp"
#include "horolab/surface.hpp"

using namespace horolab;

namespace {

bool left_gamma_equivalent(const ExactMatrix& a, const ExactMatrix& b) {
    const ExactMatrix r = a * b.inverse();
    return r.is_unimodular();
}

// Every integer matrix with the given determinant and entries bounded by
// `bound`, used as an enumeration oracle independent of the Hermite-form
// generator.
std::vector<ExactMatrix> all_integer_matrices(long det, long bound) {
    std::vector<ExactMatrix> out;
    for (long a = -bound; a <= bound; ++a)
        for (long b = -bound; b <= bound; ++b)
            for (long c = -bound; c <= bound; ++c)
                for (long d = -bound; d <= bound; ++d)
                    if (a * d - b * c == det) out.push_back(ExactMatrix::from_ints(a, b, c, d));
    return out;
}

ExactMatrix random_gamma_word(RngStream& rng, int len) {
    const ExactMatrix S = ExactMatrix::from_ints(0, -1, 1, 0);
    const ExactMatrix T = ExactMatrix::from_ints(1, 1, 0, 1);
    const ExactMatrix Tinv = ExactMatrix::from_ints(1, -1, 0, 1);
    ExactMatrix g = ExactMatrix::identity();
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

TEST_CASE("arithmetic helper functions") {
    CHECK(psi_index(1) == 1);
    CHECK(psi_index(2) == 3);
    CHECK(psi_index(4) == 6);
    CHECK(psi_index(6) == 12);
    CHECK(psi_index(10) == 18);
    CHECK(psi_index(12) == 24);
    CHECK(psi_index(199) == 200);

    CHECK(sigma1(1) == 1);
    CHECK(sigma1(4) == 7);
    CHECK(sigma1(6) == 12);
    CHECK(sigma_power(2, 3) == 9);
    CHECK(sigma_power(6, 3) == 252);

    CHECK(is_squarefree(1));
    CHECK(is_squarefree(6));
    CHECK(!is_squarefree(4));
    CHECK(!is_squarefree(12));
}

TEST_CASE("T(1,2) equals the brute-force classification") {
    const HeckeSet hs = coset_reps_T(1, 2);
    REQUIRE(hs.reps.size() == 3);

    const std::vector<ExactMatrix> expected = {
        ExactMatrix::from_ints(1, 0, 0, 2),
        ExactMatrix::from_ints(1, 1, 0, 2),
        ExactMatrix::from_ints(2, 0, 0, 1),
    };
    for (const auto& e : expected)
        CHECK(std::find(hs.reps.begin(), hs.reps.end(), e) != hs.reps.end());

    // oracle: every det-2 integer matrix with small entries is equivalent to
    // exactly one representative
    for (const auto& m : all_integer_matrices(2, 2)) {
        int hits = 0;
        for (const auto& r : hs.reps)
            if (left_gamma_equivalent(m, r)) ++hits;
        CHECK(hits == 1);
    }
}

TEST_CASE("T(l,m) counts and inequivalence") {
    CHECK(coset_reps_T(1, 1).reps.size() == 1);
    CHECK(coset_reps_T(1, 1).reps[0] == ExactMatrix::identity());
    CHECK(coset_reps_T(1, 6).reps.size() == 12);  // psi(6)

    CHECK_THROWS_AS(coset_reps_T(2, 3), std::invalid_argument);
    CHECK_THROWS_AS(coset_reps_T(0, 2), std::invalid_argument);

    for (long n : {2L, 6L, 12L, 30L, 60L}) CHECK(coset_reps_T(1, n).reps.size() ==
                                                 static_cast<std::size_t>(psi_index(n)));

    // pairwise inequivalence is exact
    for (long n : {4L, 6L, 9L}) {
        std::vector<ExactMatrix> all;
        for (const auto& hs : coset_reps_Tn(n))
            for (const auto& r : hs.reps) all.push_back(r);
        for (std::size_t i = 0; i < all.size(); ++i)
            for (std::size_t j = i + 1; j < all.size(); ++j)
                CHECK(!left_gamma_equivalent(all[i], all[j]));
    }
}

TEST_CASE("T(n) decomposition and degree") {
    {
        const auto parts = coset_reps_Tn(6);
        REQUIRE(parts.size() == 1);  // squarefree: only (1,6)
        CHECK(parts[0].l == 1);
        CHECK(parts[0].m == 6);
        CHECK(total_reps_Tn(6) == 12);
        CHECK(sigma1(6) == 12);
    }
    {
        const auto parts = coset_reps_Tn(4);
        REQUIRE(parts.size() == 2);  // (1,4) and (2,2)
        CHECK(total_reps_Tn(4) == 7);
        CHECK(sigma1(4) == 7);
    }
    {
        const auto parts = coset_reps_Tn(1);
        REQUIRE(parts.size() == 1);
        CHECK(parts[0].reps.size() == 1);
        CHECK(parts[0].reps[0] == ExactMatrix::identity());
    }
    for (long n = 1; n <= 60; ++n) CHECK(total_reps_Tn(n) == sigma1(n));

    // completeness at a non-squarefree level: every small det-4 matrix meets
    // exactly one T(4) representative
    std::vector<ExactMatrix> t4;
    for (const auto& hs : coset_reps_Tn(4))
        for (const auto& r : hs.reps) t4.push_back(r);
    for (const auto& m : all_integer_matrices(4, 3)) {
        int hits = 0;
        for (const auto& r : t4)
            if (left_gamma_equivalent(m, r)) ++hits;
        CHECK(hits == 1);
    }
}

TEST_CASE("membership in Gamma_{p/q}") {
    CHECK(gamma_y_member(ExactMatrix::from_ints(1, 3, 0, 1), 2, 3));
    CHECK(!gamma_y_member(ExactMatrix::from_ints(1, 1, 0, 1), 2, 3));
    CHECK(gamma_y_member(ExactMatrix::identity(), 2, 3));
    CHECK(gamma_y_member(ExactMatrix::identity(), 7, 5));

    CHECK_THROWS_AS(gamma_y_member(ExactMatrix::from_ints(2, 0, 0, 2), 2, 3),
                    std::invalid_argument);
    CHECK_THROWS_AS(gamma_y_member(ExactMatrix::identity(), 2, 4), std::invalid_argument);

    // congruence fast path agrees with the exact conjugation oracle
    RngStream rng(박 0, 0);
    const long pairs[][2] = {{1, 1}, {2, 3}, {4, 1}, {5, 6}, {9, 10}, {7, 4}};
    for (const auto& pq : pairs) {
        for (int i = 0; i < 400; ++i) {
            const ExactMatrix g = random_gamma_word(rng, 1 + static_cast<int>(rng.next() % 10));
            CHECK(gamma_y_member(g, pq[0], pq[1]) ==
                  gamma_y_member_congruence(g, pq[0], pq[1]));
        }
    }
}

TEST_CASE("coset enumeration for Gamma_{p/q}") {
    {
        const CosetSystem sys = enumerate_gamma_cosets(2, 3);
        CHECK(sys.index() == 12);  // (2+1)(3+1)
    }
    {
        const CosetSystem sys = enumerate_gamma_cosets(1, 1);
        CHECK(sys.index() == 1);
        CHECK(sys.reps[0] == ExactMatrix::identity());
    }
    {
        // psi(4) = 6, diverging from (p+1)(q+1) = 10
        const CosetSystem sys = enumerate_gamma_cosets(4, 1);
        CHECK(sys.index() == 6);
        CHECK(sys.index() != (4 + 1) * (1 + 1));
    }
    CHECK_THROWS_AS(enumerate_gamma_cosets(2, 4), std::invalid_argument);

    // M = psi(pq) for coprime pairs up to 60
    for (long p = 1; p <= 60; ++p)
        for (long q = 1; p * q <= 60; ++q) {
            if (std::gcd(p, q) != 1) continue;
            CHECK(enumerate_gamma_cosets(p, q).index() == psi_index(p * q));
        }

    // representatives are unimodular and pairwise inequivalent, exactly
    for (auto [p, q] : {std::pair<long, long>{2, 3}, {4, 1}, {5, 2}}) {
        const CosetSystem sys = enumerate_gamma_cosets(p, q);
        for (const auto& h : sys.reps) CHECK(h.is_unimodular());
        for (long i = 0; i < sys.index(); ++i)
            for (long j = i + 1; j < sys.index(); ++j)
                CHECK(!gamma_y_member(sys.reps[i] * sys.reps[j].inverse(), p, q));
    }
}

TEST_CASE("Hermite normal form") {
    RngStream rng(1234, 5);
    for (int i = 0; i < 500; ++i) {
        // random positive-determinant integral matrix
        const long a = static_cast<long>(rng.next() % 9) - 4;
        const long b = static_cast<long>(rng.next() % 9) - 4;
        long c = static_cast<long>(rng.next() % 9) - 4;
        long d = static_cast<long>(rng.next() % 9) - 4;
        if (a * d - b * c <= 0) continue;
        const ExactMatrix m = ExactMatrix::from_ints(a, b, c, d);
        const ExactMatrix h = hermite_normal_form(m);

        CHECK(h.c == 0);
        CHECK(h.a > 0);
        CHECK(h.d > 0);
        CHECK(h.b >= 0);
        CHECK(h.b < h.d);
        CHECK(h.det() == m.det());
        CHECK(left_gamma_equivalent(h, m));

        // invariance under left Gamma moves
        const ExactMatrix g = random_gamma_word(rng, 6);
        CHECK(hermite_normal_form(g * m) == h);
        CHECK(hermite_normal_form(h) == h);
    }
    CHECK_THROWS_AS(hermite_normal_form(ExactMatrix::from_ints(1, 0, 0, -1)),
                    std::invalid_argument);
}

TEST_CASE("double coset identity against T(pq)") {
    CHECK(double_coset_check(2, 3) == CosetIdentity::holds);
    CHECK(double_coset_check(1, 1) == CosetIdentity::holds);
    CHECK(double_coset_check(2, 5) == CosetIdentity::holds);
    CHECK(psi_index(10) == 18);

    CHECK(double_coset_check(4, 1) == CosetIdentity::not_applicable);
    CHECK(double_coset_check(9, 2) == CosetIdentity::not_applicable);

    for (long p = 1; p <= 30; ++p)
        for (long q = 1; p * q <= 30; ++q) {
            if (std::gcd(p, q) != 1 || !is_squarefree(p * q)) continue;
            CHECK(double_coset_check(p, q) == CosetIdentity::holds);
        }
}

TEST_CASE("double coset and Hecke operator application") {
    const CosetSystem sys23 = enumerate_gamma_cosets(2, 3);
    auto one = [](UHPoint) { return 1.0; };
    CHECK(apply_double_coset(one, sys23, UHPoint(0.0, 1.0)) == doctest::Approx(12.0));
    CHECK(apply_double_coset(one, sys23, UHPoint(0.3, 0.8)) == doctest::Approx(12.0));

    const CosetSystem sys11 = enumerate_gamma_cosets(1, 1);
    auto height = [](UHPoint z) { return invariant_height(z); };
    CHECK(apply_double_coset(height, sys11, UHPoint(0.0, 1.0)) == doctest::Approx(1.0));

    CHECK(hecke_apply(one, 6, UHPoint(0.0, 1.0)) ==
          doctest::Approx(12.0 / std::sqrt(6.0)).epsilon(1e-12));
    CHECK(hecke_apply(one, 1, UHPoint(0.2, 2.0)) == doctest::Approx(1.0));
    CHECK(hecke_apply(one, 4, UHPoint(0.0, 1.0)) == doctest::Approx(3.5));
}
