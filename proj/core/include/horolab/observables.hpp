#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "horolab/surface.hpp"

// Catalog of Gamma-invariant test functions on the surface and product
// observables on pairs.  Entries are built from reduction-invariant
// quantities, so invariance is structural rather than numerical; sharp
// indicators are admitted (Riemann integrability is enough for
// equidistribution testing) with an optional trapezoidal smoothing.

namespace horolab {

struct Observable {
    std::string name;
    int arity = 1;  // 1: function on X, 2: function on X x X
    std::function<double(UHPoint)> eval1;
    std::function<double(UHPoint, UHPoint)> eval2;

    std::optional<double> reference_integral;
    std::string reference_note;
    double tail_exponent = 0.0;       // growth bound |f| = O(y^tail_exponent), declared for quad_F
    double invariance_tolerance = 1e-8;

    // Set when the entry is a (numerical) Hecke eigenfunction; returns the
    // eigenvalue of T_n.
    std::function<double(long)> hecke_eigenvalue;

    // Factors, set for product observables.
    std::shared_ptr<const Observable> factor1, factor2;

    double operator()(UHPoint z) const { return eval1(z); }
    double operator()(UHPoint z1, UHPoint z2) const { return eval2(z1, z2); }
};

Observable const_observable();

// Indicator (or trapezoid with shoulder width `smoothing` inside [a,b]) of
// invariant_height in [a, b], 1 <= a < b.  Closed-form reference integral:
// (3/pi)(1/a - 1/b) sharp, with the logarithmic correction when smoothed.
Observable height_window(double a, double b, double smoothing);

// Indicator of the reduced point landing in [x_lo,x_hi] x [y_lo,y_hi] ∩ F;
// reference integral from quad_F.
Observable cell_indicator(double x_lo, double x_hi, double y_lo, double y_hi);

// Truncated real-s Eisenstein series by direct coprime-lattice summation,
// evaluated at the reduced point: E_R(z,s) = (1/2) sum over coprime (c,d),
// max(|c|,|d|) <= R, of y^s / |cz+d|^{2s}.  Requires s >= 1.5, R >= 10.
Observable eisenstein(double s, int cutoff);

Observable product_observable(const Observable& f1, const Observable& f2);

// String specs: "const", "height:a:b:w" (b may be "inf"),
// "cell:xlo:xhi:ylo:yhi", "eis:s:cutoff", "prod(A,B)".
Observable parse_observable(const std::string& spec);

// Raw truncated sum without reduction (used to study the truncation defect
// of Gamma-invariance as the cutoff grows).
double eisenstein_sum(UHPoint z, double s, int cutoff);

// Order-of-magnitude bound for the tail dropped by the cutoff.
double eisenstein_truncation_error(UHPoint z, double s, int cutoff);

// Ten reference-valued entries used by measure/quadrature cross-checks.
std::vector<Observable> standard_catalog();

}  // namespace horolab
