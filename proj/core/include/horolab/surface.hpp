#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

#include "horolab/rng.hpp"
#include "horolab/sl2.hpp"

// Fundamental-domain reduction for SL(2,Z), the normalized hyperbolic measure
// mu = (3/pi) dx dy / y^2 on F = { |Re z| <= 1/2, |z| >= 1 }, sampling, and
// quadrature.
//
// Boundary ties are resolved so that reduction is a function: Re z = +1/2
// maps to Re z = -1/2, and on |z| = 1 the representative with Re z <= 0 is
// chosen.  All operations here are pure; sample_F consumes a caller-owned
// stream (one independent stream per worker for parallel use).

namespace horolab {

struct ReducedPoint {
    UHPoint z;            // representative in F
    ExactMatrix witness;  // element of Gamma with mobius(witness, original) = z
};

// Gauss reduction: alternate x <- x - round(x) and z <- -1/z until z lands
// in F.  Throws std::runtime_error if the iteration cap (1e5) is exceeded,
// which signals input degenerate beyond float range near y = 0.
ReducedPoint reduce(UHPoint z);

// Same point map without the witness (hot path for observables).
UHPoint reduce_point(UHPoint z);

// Internal long-double entry point; exposed for callers that carry extended
// precision through the horocycle parametrization.
UHPoint reduce_point_ld(long double x, long double y);

double invariant_height(UHPoint z);  // Im of the reduced representative

bool in_fundamental_domain(UHPoint z, double tol = 1e-9);

// Exact inverse-CDF sampler for mu restricted to F (mass 1): x = sin(theta)
// with theta uniform on [-pi/6, pi/6], then y = sqrt(1-x^2)/u with u uniform
// on (0,1].
UHPoint sample_F(RngStream& rng);

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool tail_flag = false;  // set when the declared growth makes the cusp tail unreliable
};

// Integral of f against mu over F by nested adaptive quadrature.  The y
// direction is integrated in t = 1/y, which maps the cusp tail onto a compact
// interval and carries the full cusp mass exactly.  tail_exponent declares
// the growth bound |f(x+iy)| = O(y^tail_exponent); anything >= 1 is flagged.
QuadResult quad_F(const std::function<double(UHPoint)>& f, double tail_exponent = 0.0,
                  double abs_tol = 1e-6);

// Distance between two already-reduced points as points of the surface
// (minimum over the boundary identifications of F).
double surface_distance(UHPoint u, UHPoint v);

namespace detail {
// Reduction loop on long doubles with hooks for witness accumulation.
// on_translate(n) is called for x <- x - n, on_invert() for z <- -1/z.
template <class OnTranslate, class OnInvert>
inline void reduce_core(long double& x, long double& y, long max_iter, OnTranslate&& on_translate,
                        OnInvert&& on_invert) {
    for (long it = 0; it < max_iter; ++it) {
        const long double n = std::floor(x + 0.5L);  // ties resolve Re = +1/2 -> -1/2
        if (n != 0.0L) {
            x -= n;
            on_translate(n);
        }
        const long double r2 = x * x + y * y;
        if (r2 < 1.0L) {
            const long double nx = -x / r2;
            y = y / r2;
            x = nx;
            on_invert();
            if (y == 0.0L) break;  // underflow: no further progress possible
        } else if (r2 == 1.0L && x > 0.0L) {
            x = -x;  // inversion restricted to the unit circle
            on_invert();
        } else {
            return;
        }
    }
    throw std::runtime_error(
        "reduce: iteration cap exceeded (input too close to the real axis for float range)");
}

BigInt bigint_from_integral_ld(long double v);
}  // namespace detail

}  // namespace horolab
