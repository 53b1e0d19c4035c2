#include "horolab/observables.hpp"

#include "horolab/hecke.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace horolab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_num(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

double parse_num(const std::string& tok) {
    if (tok == "inf") return kInf;
    if (tok == "-inf") return -kInf;
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("observable spec: cannot parse number '" + tok + "'");
    }
    if (pos != tok.size())
        throw std::invalid_argument("observable spec: trailing junk in number '" + tok + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

using PairTable = std::vector<std::pair<int, int>>;

// One representative per +-(c,d): c > 0, or c == 0 and d = 1.
std::shared_ptr<const PairTable> coprime_pairs(int cutoff) {
    auto table = std::make_shared<PairTable>();
    table->emplace_back(0, 1);
    for (int c = 1; c <= cutoff; ++c)
        for (int d = -cutoff; d <= cutoff; ++d)
            if (std::gcd(c, std::abs(d)) == 1) table->emplace_back(c, d);
    return table;
}

double raw_eisenstein(const PairTable& pairs, UHPoint z, double s) {
    double sum = 0.0;
    const double x = z.x, y = z.y;
    const double ys = std::pow(y, s);
    for (const auto& [c, d] : pairs) {
        const double re = c * x + d;
        const double im = c * y;
        sum += ys / std::pow(re * re + im * im, s);
    }
    return sum;
}

}  // namespace

Observable const_observable() {
    Observable ob;
    ob.name = "const";
    ob.arity = 1;
    ob.eval1 = [](UHPoint) { return 1.0; };
    ob.reference_integral = 1.0;
    ob.reference_note = "normalization";
    ob.tail_exponent = 0.0;
    ob.hecke_eigenvalue = [](long n) {
        return static_cast<double>(sigma1(n)) / std::sqrt(static_cast<double>(n));
    };
    return ob;
}

Observable height_window(double a, double b, double smoothing) {
    if (!(a >= 1.0)) throw std::invalid_argument("height_window: need a >= 1 (cusp closed form)");
    if (!(b > a)) throw std::invalid_argument("height_window: need b > a");
    if (!(smoothing >= 0.0)) throw std::invalid_argument("height_window: smoothing must be >= 0");
    if (std::isfinite(b) && smoothing > 0.0 && !(a + smoothing <= b - smoothing))
        throw std::invalid_argument("height_window: shoulders overlap");

    Observable ob;
    ob.name = "height:" + fmt_num(a) + ":" + fmt_num(b) + ":" + fmt_num(smoothing);
    ob.arity = 1;
    const double w = smoothing;
    ob.eval1 = [a, b, w](UHPoint z) {
        const double h = invariant_height(z);
        if (h < a || h > b) return 0.0;
        if (w == 0.0) return 1.0;
        if (h < a + w) return (h - a) / w;
        if (std::isfinite(b) && h > b - w) return (b - h) / w;
        return 1.0;
    };
    // Height has density (3/pi)/h^2 on [1, inf); the trapezoid integrates to
    // a log form that recovers (3/pi)(1/a - 1/b) as w -> 0.
    double ref;
    if (w == 0.0) {
        ref = (3.0 / kPi) * (1.0 / a - (std::isfinite(b) ? 1.0 / b : 0.0));
    } else if (!std::isfinite(b)) {
        ref = (3.0 / kPi) * std::log1p(w / a) / w;
    } else {
        ref = (3.0 / kPi) * std::log((a + w) * (b - w) / (a * b)) / w;
    }
    ob.reference_integral = ref;
    ob.reference_note = "closed form";
    ob.tail_exponent = 0.0;
    return ob;
}

Observable cell_indicator(double x_lo, double x_hi, double y_lo, double y_hi) {
    if (!(x_lo < x_hi) || !(y_lo < y_hi))
        throw std::invalid_argument("cell_indicator: empty rectangle");
    const double cx_lo = std::max(x_lo, -0.5);
    const double cx_hi = std::min(x_hi, 0.5);
    if (!(cx_lo <= cx_hi)) throw std::invalid_argument("cell_indicator: rectangle misses F");
    const double max_abs_x = std::max(std::fabs(cx_lo), std::fabs(cx_hi));
    const double circle_min = std::sqrt(std::max(0.0, 1.0 - max_abs_x * max_abs_x));
    if (!(y_hi > std::max(y_lo, circle_min)))
        throw std::invalid_argument("cell_indicator: rectangle misses F");

    Observable ob;
    ob.name = "cell:" + fmt_num(x_lo) + ":" + fmt_num(x_hi) + ":" + fmt_num(y_lo) + ":" +
              fmt_num(y_hi);
    ob.arity = 1;
    ob.eval1 = [x_lo, x_hi, y_lo, y_hi](UHPoint z) {
        const UHPoint r = reduce_point(z);
        return (r.x >= x_lo && r.x <= x_hi && r.y >= y_lo && r.y <= y_hi) ? 1.0 : 0.0;
    };
    ob.tail_exponent = 0.0;
    const QuadResult qr = quad_F(ob.eval1, 0.0, 1e-7);
    ob.reference_integral = qr.value;
    ob.reference_note = "quad_F";
    return ob;
}

Observable eisenstein(double s, int cutoff) {
    if (!(s >= 1.5)) throw std::invalid_argument("eisenstein: need s >= 1.5");
    if (cutoff < 10) throw std::invalid_argument("eisenstein: need cutoff >= 10");

    auto table = coprime_pairs(cutoff);
    Observable ob;
    ob.name = "eis:" + fmt_num(s) + ":" + std::to_string(cutoff);
    ob.arity = 1;
    ob.eval1 = [table, s](UHPoint z) { return raw_eisenstein(*table, reduce_point(z), s); };
    ob.tail_exponent = s;  // E(x+iy) ~ y^s in the cusp; quad_F must flag this
    ob.invariance_tolerance = 1e-8;
    ob.hecke_eigenvalue = [s](long n) {
        double sig = 0.0;
        for (long d = 1; d <= n; ++d)
            if (n % d == 0) sig += std::pow(static_cast<double>(d), 2.0 * s - 1.0);
        return std::pow(static_cast<double>(n), 0.5 - s) * sig;
    };
    return ob;
}

Observable product_observable(const Observable& f1, const Observable& f2) {
    if (f1.arity != 1 || f2.arity != 1)
        throw std::invalid_argument("product_observable: both factors must be one-surface");
    Observable ob;
    ob.name = "prod(" + f1.name + "," + f2.name + ")";
    ob.arity = 2;
    auto p1 = std::make_shared<const Observable>(f1);
    auto p2 = std::make_shared<const Observable>(f2);
    ob.factor1 = p1;
    ob.factor2 = p2;
    ob.eval2 = [p1, p2](UHPoint z1, UHPoint z2) { return p1->eval1(z1) * p2->eval1(z2); };
    if (f1.reference_integral && f2.reference_integral) {
        ob.reference_integral = *f1.reference_integral * *f2.reference_integral;
        ob.reference_note = "product of factor references";
    }
    ob.tail_exponent = std::max(f1.tail_exponent, f2.tail_exponent);
    ob.invariance_tolerance = std::max(f1.invariance_tolerance, f2.invariance_tolerance);
    return ob;
}

Observable parse_observable(const std::string& spec) {
    std::string s;
    for (char c : spec)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw std::invalid_argument("observable spec: empty");

    if (s == "const") return const_observable();

    if (s.rfind("prod(", 0) == 0) {
        if (s.back() != ')') throw std::invalid_argument("observable spec: unbalanced prod(...)");
        const std::string inner = s.substr(5, s.size() - 6);
        int depth = 0;
        std::size_t comma = std::string::npos;
        for (std::size_t i = 0; i < inner.size(); ++i) {
            if (inner[i] == '(') ++depth;
            else if (inner[i] == ')') --depth;
            else if (inner[i] == ',' && depth == 0) {
                comma = i;
                break;
            }
        }
        if (comma == std::string::npos)
            throw std::invalid_argument("observable spec: prod needs two factors");
        return product_observable(parse_observable(inner.substr(0, comma)),
                                  parse_observable(inner.substr(comma + 1)));
    }

    const auto toks = split(s, ':');
    if (toks[0] == "height") {
        if (toks.size() != 4) throw std::invalid_argument("observable spec: height:a:b:w");
        return height_window(parse_num(toks[1]), parse_num(toks[2]), parse_num(toks[3]));
    }
    if (toks[0] == "cell") {
        if (toks.size() != 5) throw std::invalid_argument("observable spec: cell:xlo:xhi:ylo:yhi");
        return cell_indicator(parse_num(toks[1]), parse_num(toks[2]), parse_num(toks[3]),
                              parse_num(toks[4]));
    }
    if (toks[0] == "eis") {
        if (toks.size() != 3) throw std::invalid_argument("observable spec: eis:s:cutoff");
        return eisenstein(parse_num(toks[1]), static_cast<int>(parse_num(toks[2])));
    }
    throw std::invalid_argument("observable spec: unknown observable '" + spec + "'");
}

double eisenstein_sum(UHPoint z, double s, int cutoff) {
    auto table = coprime_pairs(cutoff);
    return raw_eisenstein(*table, z, s);
}

double eisenstein_truncation_error(UHPoint z, double s, int cutoff) {
    // Integral bound for the dropped tail: pair density 6/pi^2, |cz+d| >=
    // kappa * max(|c|,|d|) with kappa the smallest singular value of
    // [[1, x], [0, y]].
    const double t = 1.0 + z.x * z.x + z.y * z.y;
    const double kappa2 = 0.5 * (t - std::sqrt(std::max(0.0, t * t - 4.0 * z.y * z.y)));
    const double kappa = std::sqrt(std::max(kappa2, 1e-300));
    return (12.0 / kPi) * std::pow(z.y, s) * std::pow(kappa, -2.0 * s) *
           std::pow(static_cast<double>(cutoff), 2.0 - 2.0 * s) / (2.0 * s - 2.0);
}

std::vector<Observable> standard_catalog() {
    std::vector<Observable> cat;
    cat.push_back(const_observable());
    cat.push_back(height_window(2.0, kInf, 0.0));
    cat.push_back(height_window(1.0, kInf, 0.0));
    cat.push_back(height_window(2.0, 3.0, 0.0));
    cat.push_back(height_window(1.5, 4.0, 0.25));
    cat.push_back(height_window(3.0, 5.0, 0.0));
    cat.push_back(cell_indicator(-0.5, 0.5, 2.0, kInf));
    cat.push_back(cell_indicator(0.0, 0.5, 2.0, kInf));
    cat.push_back(cell_indicator(-0.25, 0.25, 1.0, 2.0));
    cat.push_back(cell_indicator(0.0, 0.4, 0.9, 1.3));
    return cat;
}

}  // namespace horolab
