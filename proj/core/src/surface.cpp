#include "horolab/surface.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace horolab {

namespace {

constexpr long kMaxReduceIter = 100000;
constexpr double kPi = 3.14159265358979323846;

}  // namespace

namespace detail {

BigInt bigint_from_integral_ld(long double v) {
    bool neg = v < 0.0L;
    if (neg) v = -v;
    // Decompose into base-2^32 digits; exact for integral long doubles.
    std::vector<std::uint32_t> digits;
    while (v >= 1.0L) {
        const long double r = std::fmod(v, 4294967296.0L);
        digits.push_back(static_cast<std::uint32_t>(r));
        v = (v - r) / 4294967296.0L;
    }
    BigInt out = 0;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
        out <<= 32;
        out += *it;
    }
    return neg ? BigInt(-out) : out;
}

}  // namespace detail

ReducedPoint reduce(UHPoint z) {
    long double x = z.x, y = z.y;
    // Witness rows tracked as exact integers: translation by n maps
    // W <- u_{-n} W, inversion maps W <- S W with S = [[0,-1],[1,0]].
    BigInt wa = 1, wb = 0, wc = 0, wd = 1;
    detail::reduce_core(
        x, y, kMaxReduceIter,
        [&](long double n) {
            const BigInt k = detail::bigint_from_integral_ld(n);
            wa -= k * wc;
            wb -= k * wd;
        },
        [&]() {
            BigInt ta = -wc, tb = -wd;
            wc = wa;
            wd = wb;
            wa = ta;
            wb = tb;
        });
    if (y <= 0.0L) throw std::runtime_error("reduce: imaginary part underflowed to zero");
    ExactMatrix w{Rational(wa), Rational(wb), Rational(wc), Rational(wd)};
    return ReducedPoint{UHPoint(static_cast<double>(x), static_cast<double>(y)), std::move(w)};
}

UHPoint reduce_point(UHPoint z) { return reduce_point_ld(z.x, z.y); }

UHPoint reduce_point_ld(long double x, long double y) {
    if (!(y > 0.0L)) throw std::invalid_argument("reduce_point: y must be positive");
    detail::reduce_core(x, y, kMaxReduceIter, [](long double) {}, []() {});
    if (y <= 0.0L) throw std::runtime_error("reduce: imaginary part underflowed to zero");
    return UHPoint(static_cast<double>(x), static_cast<double>(y));
}

double invariant_height(UHPoint z) { return reduce_point(z).y; }

bool in_fundamental_domain(UHPoint z, double tol) {
    return std::fabs(z.x) <= 0.5 + tol && z.x * z.x + z.y * z.y >= 1.0 - tol;
}

UHPoint sample_F(RngStream& rng) {
    const double theta = rng.uniform(-kPi / 6.0, kPi / 6.0);
    const double x = std::sin(theta);
    const double u = rng.uniform_pos();
    const double y = std::sqrt(1.0 - x * x) / u;
    return UHPoint(x, y);
}

namespace {

// Shared across all nested adaptive calls of one quad_F invocation; the eval
// budget is a hard stop that keeps singular or adversarial integrands from
// exploding the refinement tree.
struct QuadEngine {
    long evals = 0;
    long budget = 4000000;
    double err = 0.0;
};

double simpson_rule(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adapt(const F& f, double a, double b, double fa, double fm, double fb, double whole,
             double tol, int depth, QuadEngine& eng) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    eng.evals += 2;
    const double left = simpson_rule(a, m, fa, flm, fm);
    const double right = simpson_rule(m, b, fm, frm, fb);
    const double delta = left + right - whole;
    if (depth >= 48 || eng.evals >= eng.budget ||
        (std::isfinite(delta) && std::fabs(delta) <= 15.0 * tol)) {
        eng.err += std::isfinite(delta) ? std::fabs(delta) / 15.0 : std::fabs(whole);
        return left + right + (std::isfinite(delta) ? delta / 15.0 : 0.0);
    }
    return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, eng) +
           adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, eng);
}

template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol, QuadEngine& eng) {
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    eng.evals += 3;
    const double whole = simpson_rule(a, b, fa, fm, fb);
    return adapt(f, a, b, fa, fm, fb, whole, tol, 0, eng);
}

}  // namespace

QuadResult quad_F(const std::function<double(UHPoint)>& f, double tail_exponent, double abs_tol) {
    QuadResult res;
    res.tail_flag = tail_exponent >= 1.0;

    const double inner_tol = abs_tol * 0.025;
    const double outer_tol = abs_tol * 0.2;

    QuadEngine eng;

    // Inner integral in t = 1/y over (0, 1/sqrt(1-x^2)]: dy/y^2 = -dt maps the
    // full cusp onto [0, t_split] with its mass represented exactly.  With a
    // declared growth of y^1 or faster the cusp piece diverges; it is skipped
    // and the result carries the flag.
    auto inner = [&](double x) {
        const double tmax = 1.0 / std::sqrt(1.0 - x * x);
        auto g = [&](double t) {
            const double tt = std::max(t, 1e-300);
            return f(UHPoint(x, 1.0 / tt));
        };
        const double t_split = 0.5;  // y = 2 separates cusp and bulk
        double v = adaptive_simpson(g, t_split, tmax, inner_tol, eng);
        if (!res.tail_flag) v += adaptive_simpson(g, 0.0, t_split, inner_tol, eng);
        return v;
    };

    const double raw = adaptive_simpson(inner, -0.5, 0.5, outer_tol, eng);
    res.value = (3.0 / kPi) * raw;
    res.error_estimate = (3.0 / kPi) * eng.err;
    if (eng.evals >= eng.budget) res.error_estimate = std::max(res.error_estimate, abs_tol * 100);
    if (!std::isfinite(res.value)) res.tail_flag = true;
    return res;
}

double surface_distance(UHPoint u, UHPoint v) {
    // Both arguments are assumed reduced; the same surface point can then
    // differ only by the boundary identifications x -> x +- 1 and z -> -1/z.
    double best = hyperbolic_distance(u, v);
    for (double shift : {-1.0, 1.0}) {
        best = std::min(best, hyperbolic_distance(u, UHPoint(v.x + shift, v.y)));
    }
    const double n2 = v.x * v.x + v.y * v.y;
    best = std::min(best, hyperbolic_distance(u, UHPoint(-v.x / n2, v.y / n2)));
    return best;
}

}  // namespace horolab
