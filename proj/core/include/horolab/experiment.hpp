#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "horolab/hecke.hpp"
#include "horolab/observables.hpp"
#include "horolab/sl2.hpp"
#include "horolab/surface.hpp"

// Measurement engine: horocycle averages over a T-schedule, the rational
// slope limit by Monte Carlo over the coset system, pointwise Hecke
// verification, and comparison reports.
//
// Pair formation: z1 = (x+i)/T and z2 = (x y + i)/T.  Algebraically
// z2 = (a_y g a_y^{-1}).i with g = a_{1/T} u_x the frame of z1.  The T->inf
// law of the pair for rational y = p/q is therefore the Haar lift of
// Gamma_{p/q}\G: z on F, then zeta uniform on the circle of hyperbolic
// radius |log y| around z (the image of the frame fiber), pushed through
// a_{p/q} h_m over the coset representatives.  At p = q the circle collapses
// and the law is the diagonal.
//
// Per-T and per-coset work is chunked into units with one RNG stream per
// unit derived from (seed, unit id); partial sums merge in unit order, so
// results are bit-identical across thread counts.

namespace horolab {

enum class Sampling { grid, uniform, lowdisc };

const char* sampling_name(Sampling s);
Sampling sampling_from_name(const std::string& name);

struct ExperimentConfig {
    Slope slope = Slope::rational(1, 1);
    double x_lo = 0.0, x_hi = 1.0;       // the interval I
    std::vector<double> T_schedule;      // strictly increasing, all > 1
    long samples = 100000;               // N per T, >= 100
    Sampling sampling = Sampling::grid;  // grid is midpoint rule in I
    std::string observable_spec = "prod(const,const)";
    std::uint64_t seed = 1;
    long mc_samples = 1000000;           // rational-limit draws per coset
};

void validate(const ExperimentConfig& cfg);

struct MCValue {
    double value = 0.0;
    double standard_error = 0.0;
};

struct TEntry {
    double T = 0.0;
    double estimate = 0.0;
    double standard_error = 0.0;
    long n = 0;
    double integral_I = 0.0;  // |I| * estimate, the unnormalized line integral
};

struct Counters {
    long long pair_evaluations = 0;
    long long mc_evaluations = 0;
};

struct RunResult {
    std::vector<TEntry> per_T;
    std::optional<double> product_ref;           // product-measure prediction
    std::optional<MCValue> rational_ref;         // coset Monte Carlo (rational slope)
    std::optional<MCValue> eigenform_ref;        // sqrt(pq) lambda(pq) / M * <f1, a.f2>
    std::optional<MCValue> matrix_coefficient;   // <f1, a_{p/q}.f2>
    long coset_count = 0;                        // M when the slope is rational
    Counters counters;
};

RunResult horocycle_run(const ExperimentConfig& cfg, int threads = 1);

MCValue rational_limit_mc(const Observable& phi, const CosetSystem& sys, long n_per_coset,
                          std::uint64_t seed, int threads = 1);
MCValue rational_limit_mc(const Observable& phi, long p, long q, long n_per_coset,
                          std::uint64_t seed, int threads = 1);

// <f1, a_{p/q}.f2> = E[ f1(z) f2(zeta) ] with zeta the frame circle point.
MCValue matrix_coefficient_mc(const Observable& f1, const Observable& f2, long p, long q,
                              long n_samples, std::uint64_t seed, int threads = 1);

struct PointwisePoint {
    UHPoint z = UHPoint(0.0, 1.0);
    double lhs = 0.0;       // sum over cosets of f2(a_{p/q} h_m . z)
    double f2_value = 0.0;
    double ratio = 0.0;     // lhs / f2(z)
};

struct PointwiseReport {
    bool applicable = true;  // false when pq is not squarefree
    long p = 1, q = 1, M = 1;
    double lambda = 0.0;     // median ratio / sqrt(pq)
    double max_abs_dev = 0.0;
    double max_rel_dev = 0.0;
    std::vector<PointwisePoint> points;
};

// Checks sum_m f2(a_{p/q} h_m . z) = sqrt(pq) * lambda * f2(z) across the
// base points, extracting lambda as the median ratio.
PointwiseReport verify_hecke_pointwise(const Observable& f2, long p, long q,
                                       const std::vector<UHPoint>& base_points);

enum class Verdict { equidistribution, rational_limit, inconclusive };

const char* verdict_name(Verdict v);
Verdict final_verdict(const RunResult& run);
std::string compare_report(const RunResult& run, const ExperimentConfig& cfg);

// (est - ref) / sqrt(se_est^2 + se_ref^2); 0 when both spreads vanish and
// the difference is zero.
double combined_z(double est, double se_est, double ref, double se_ref);

// ((x+i)/T, (x*y+i)/T) with x*y carried in extended precision and folded to
// [-1/2, 1/2) (an integer translation, i.e. a Gamma move) before rounding.
std::pair<UHPoint, UHPoint> horocycle_pair(long double x, long double y, double T);

// Point at hyperbolic distance |log(fiber_im)| from z in the frame direction
// theta: mobius(g_z k_theta, i * fiber_im).
UHPoint frame_circle_point(UHPoint z, double theta, double fiber_im);

// Distance of the reduced second coordinate from the nearest of the M
// correspondence candidates a_{p/q} h_m applied to the frame partner of the
// reduced first coordinate.  Exact algebra makes this zero; the return is
// float noise only.
double correspondence_defect(long double x, double T, const CosetSystem& sys);

}  // namespace horolab
