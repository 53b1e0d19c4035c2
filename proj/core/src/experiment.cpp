#include "horolab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace horolab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr long kChunk = 8192;

void run_units(long units, int threads, const std::function<void(long)>& fn) {
    threads = static_cast<int>(std::min<long>(std::max(threads, 1), units));
    if (threads <= 1) {
        for (long u = 0; u < units; ++u) fn(u);
        return;
    }
    std::atomic<long> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            try {
                for (long u = next.fetch_add(1); u < units; u = next.fetch_add(1)) fn(u);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

std::uint64_t bit_reverse64(std::uint64_t v) {
    v = ((v >> 1) & 0x5555555555555555ULL) | ((v & 0x5555555555555555ULL) << 1);
    v = ((v >> 2) & 0x3333333333333333ULL) | ((v & 0x3333333333333333ULL) << 2);
    v = ((v >> 4) & 0x0f0f0f0f0f0f0f0fULL) | ((v & 0x0f0f0f0f0f0f0f0fULL) << 4);
    v = ((v >> 8) & 0x00ff00ff00ff00ffULL) | ((v & 0x00ff00ff00ff00ffULL) << 8);
    v = ((v >> 16) & 0x0000ffff0000ffffULL) | ((v & 0x0000ffff0000ffffULL) << 16);
    return (v >> 32) | (v << 32);
}

struct MomentAccumulator {
    double sum = 0.0;
    double sumsq = 0.0;
    long n = 0;
    void add(double v) {
        sum += v;
        sumsq += v * v;
        ++n;
    }
    void merge(const MomentAccumulator& o) {
        sum += o.sum;
        sumsq += o.sumsq;
        n += o.n;
    }
    double mean() const { return n ? sum / n : 0.0; }
    double variance() const {
        if (n < 2) return 0.0;
        const double m = mean();
        return std::max(0.0, (sumsq - n * m * m) / (n - 1));
    }
    double standard_error() const { return n ? std::sqrt(variance() / n) : 0.0; }
};

}  // namespace

const char* sampling_name(Sampling s) {
    switch (s) {
        case Sampling::grid: return "grid";
        case Sampling::uniform: return "uniform";
        case Sampling::lowdisc: return "lowdisc";
    }
    return "grid";
}

Sampling sampling_from_name(const std::string& name) {
    if (name == "grid") return Sampling::grid;
    if (name == "uniform") return Sampling::uniform;
    if (name == "lowdisc") return Sampling::lowdisc;
    throw std::invalid_argument("sampling: expected grid|uniform|lowdisc, got '" + name + "'");
}

void validate(const ExperimentConfig& cfg) {
    if (!(cfg.x_lo < cfg.x_hi)) throw std::invalid_argument("config: need x_lo < x_hi");
    if (cfg.T_schedule.empty()) throw std::invalid_argument("config: empty T schedule");
    double prev = 1.0;
    for (double T : cfg.T_schedule) {
        if (!(T > 1.0)) throw std::invalid_argument("config: every T must exceed 1");
        if (!(T > prev) && prev != 1.0)
            throw std::invalid_argument("config: T schedule must be strictly increasing");
        prev = T;
    }
    if (cfg.samples < 100) throw std::invalid_argument("config: need N >= 100");
    if (cfg.mc_samples < 100) throw std::invalid_argument("config: need mc_N >= 100");
}

std::pair<UHPoint, UHPoint> horocycle_pair(long double x, long double y, double T) {
    if (!(T > 1.0)) throw std::invalid_argument("horocycle_pair: T must exceed 1");
    const long double Tl = static_cast<long double>(T);
    long double xy = x * y;
    x -= std::floor(x + 0.5L);
    xy -= std::floor(xy + 0.5L);
    return {UHPoint(static_cast<double>(x / Tl), static_cast<double>(1.0L / Tl)),
            UHPoint(static_cast<double>(xy / Tl), static_cast<double>(1.0L / Tl))};
}

UHPoint frame_circle_point(UHPoint z, double theta, double fiber_im) {
    const double sy = std::sqrt(z.y);
    const Mat2 gz{sy, z.x / sy, 0.0, 1.0 / sy};
    const double ct = std::cos(theta), st = std::sin(theta);
    const Mat2 k{ct, st, -st, ct};
    return mobius(gz * k, UHPoint(0.0, fiber_im));
}

RunResult horocycle_run(const ExperimentConfig& cfg, int threads) {
    validate(cfg);
    const Observable phi = parse_observable(cfg.observable_spec);
    if (phi.arity != 2)
        throw std::invalid_argument("horocycle_run: observable must be two-surface");

    const long double y = cfg.slope.value();
    const long double lo = static_cast<long double>(cfg.x_lo);
    const long double len = static_cast<long double>(cfg.x_hi) - lo;
    const long N = cfg.samples;

    std::uint64_t scramble_state = cfg.seed ^ 0xa0761d6478bd642fULL;
    const std::uint64_t lowdisc_mask = splitmix64(scramble_state);

    RunResult out;
    out.product_ref = phi.reference_integral;

    for (std::size_t ti = 0; ti < cfg.T_schedule.size(); ++ti) {
        const double T = cfg.T_schedule[ti];
        const long units = (N + kChunk - 1) / kChunk;
        std::vector<MomentAccumulator> parts(units);
        run_units(units, threads, [&](long u) {
            RngStream rng(cfg.seed, static_cast<std::uint64_t>(ti) * 0x10000ULL + u);
            MomentAccumulator acc;
            const long j0 = u * kChunk;
            const long j1 = std::min(N, j0 + kChunk);
            for (long j = j0; j < j1; ++j) {
                long double x;
                switch (cfg.sampling) {
                    case Sampling::grid:
                        x = lo + (static_cast<long double>(j) + 0.5L) * len / N;
                        break;
                    case Sampling::uniform:
                        x = lo + static_cast<long double>(rng.uniform()) * len;
                        break;
                    case Sampling::lowdisc: {
                        const std::uint64_t v =
                            bit_reverse64(static_cast<std::uint64_t>(j)) ^ lowdisc_mask;
                        x = lo + static_cast<long double>(v) * 0x1.0p-64L * len;
                        break;
                    }
                }
                const auto [z1, z2] = horocycle_pair(x, y, T);
                acc.add(phi.eval2(z1, z2));
            }
            parts[u] = acc;
        });
        MomentAccumulator total;
        for (const auto& p : parts) total.merge(p);  // fixed order: unit index
        out.per_T.push_back(TEntry{T, total.mean(), total.standard_error(), total.n,
                                   static_cast<double>(len) * total.mean()});
        out.counters.pair_evaluations += total.n;
    }

    if (cfg.slope.is_rational()) {
        const long p = static_cast<long>(cfg.slope.p());
        const long q = static_cast<long>(cfg.slope.q());
        const CosetSystem sys = enumerate_gamma_cosets(p, q);
        out.coset_count = sys.index();
        out.rational_ref =
            rational_limit_mc(phi, sys, cfg.mc_samples, cfg.seed ^ 0x9d8a7b6c5d4e3f21ULL, threads);
        out.counters.mc_evaluations += cfg.mc_samples * sys.index();
        if (phi.factor1 && phi.factor2 && phi.factor2->hecke_eigenvalue &&
            is_squarefree(p * q)) {
            const MCValue mc = matrix_coefficient_mc(*phi.factor1, *phi.factor2, p, q,
                                                     cfg.mc_samples,
                                                     cfg.seed ^ 0x4cf5ad432745937fULL, threads);
            out.matrix_coefficient = mc;
            const double lambda = phi.factor2->hecke_eigenvalue(p * q);
            const double scale =
                std::sqrt(static_cast<double>(p * q)) * lambda / static_cast<double>(sys.index());
            out.eigenform_ref = MCValue{scale * mc.value, std::fabs(scale) * mc.standard_error};
            out.counters.mc_evaluations += cfg.mc_samples;
        }
    }
    return out;
}

MCValue rational_limit_mc(const Observable& phi, const CosetSystem& sys, long n_per_coset,
                          std::uint64_t seed, int threads) {
    if (phi.arity != 2)
        throw std::invalid_argument("rational_limit_mc: observable must be two-surface");
    if (n_per_coset < 100) throw std::invalid_argument("rational_limit_mc: need N >= 100");

    const long M = sys.index();
    const Mat2 a_pq = make_a(static_cast<double>(sys.p) / static_cast<double>(sys.q)).mat();
    std::vector<Mat2> twisted;
    twisted.reserve(M);
    for (const auto& h : sys.reps) twisted.push_back(a_pq * h.to_mat2());

    const double fiber_im = static_cast<double>(sys.q) / static_cast<double>(sys.p);
    const long units_per_coset = (n_per_coset + kChunk - 1) / kChunk;
    const long total_units = M * units_per_coset;

    std::vector<MomentAccumulator> parts(total_units);
    run_units(total_units, threads, [&](long u) {
        const long m = u / units_per_coset;
        const long c = u % units_per_coset;
        RngStream rng(seed, static_cast<std::uint64_t>(u));
        MomentAccumulator acc;
        const long j0 = c * kChunk;
        const long j1 = std::min(n_per_coset, j0 + kChunk);
        for (long j = j0; j < j1; ++j) {
            const UHPoint z = sample_F(rng);
            const double theta = rng.uniform(0.0, 2.0 * kPi);
            const UHPoint zeta = frame_circle_point(z, theta, fiber_im);
            const UHPoint w = mobius(twisted[m], zeta);
            acc.add(phi.eval2(z, w));
        }
        parts[u] = acc;
    });

    double value = 0.0;
    double var_sum = 0.0;
    for (long m = 0; m < M; ++m) {
        MomentAccumulator per_coset;
        for (long c = 0; c < units_per_coset; ++c) per_coset.merge(parts[m * units_per_coset + c]);
        value += per_coset.mean();
        var_sum += per_coset.variance() / per_coset.n;
    }
    value /= M;
    const double se = std::sqrt(var_sum) / M;
    return MCValue{value, se};
}

MCValue rational_limit_mc(const Observable& phi, long p, long q, long n_per_coset,
                          std::uint64_t seed, int threads) {
    return rational_limit_mc(phi, enumerate_gamma_cosets(p, q), n_per_coset, seed, threads);
}

MCValue matrix_coefficient_mc(const Observable& f1, const Observable& f2, long p, long q,
                              long n_samples, std::uint64_t seed, int threads) {
    if (f1.arity != 1 || f2.arity != 1)
        throw std::invalid_argument("matrix_coefficient_mc: factors must be one-surface");
    if (std::gcd(p, q) != 1 || p < 1 || q < 1)
        throw std::invalid_argument("matrix_coefficient_mc: need coprime positive p, q");
    const double fiber_im = static_cast<double>(q) / static_cast<double>(p);
    const long units = (n_samples + kChunk - 1) / kChunk;
    std::vector<MomentAccumulator> parts(units);
    run_units(units, threads, [&](long u) {
        RngStream rng(seed, static_cast<std::uint64_t>(u) ^ 0x94d049bb133111ebULL);
        MomentAccumulator acc;
        const long j0 = u * kChunk;
        const long j1 = std::min(n_samples, j0 + kChunk);
        for (long j = j0; j < j1; ++j) {
            const UHPoint z = sample_F(rng);
            const double theta = rng.uniform(0.0, 2.0 * kPi);
            const UHPoint zeta = frame_circle_point(z, theta, fiber_im);
            acc.add(f1.eval1(z) * f2.eval1(zeta));
        }
        parts[u] = acc;
    });
    MomentAccumulator total;
    for (const auto& pt : parts) total.merge(pt);
    return MCValue{total.mean(), total.standard_error()};
}

PointwiseReport verify_hecke_pointwise(const Observable& f2, long p, long q,
                                       const std::vector<UHPoint>& base_points) {
    if (f2.arity != 1)
        throw std::invalid_argument("verify_hecke_pointwise: observable must be one-surface");
    if (base_points.empty())
        throw std::invalid_argument("verify_hecke_pointwise: need at least one base point");
    PointwiseReport rep;
    rep.p = p;
    rep.q = q;
    if (!is_squarefree(p * q)) {
        rep.applicable = false;
        return rep;
    }
    const CosetSystem sys = enumerate_gamma_cosets(p, q);
    rep.M = sys.index();
    const double root = std::sqrt(static_cast<double>(p * q));

    std::vector<double> ratios;
    for (const UHPoint& z : base_points) {
        PointwisePoint pt;
        pt.z = z;
        pt.lhs = apply_double_coset(f2.eval1, sys, z);
        pt.f2_value = f2.eval1(z);
        pt.ratio = pt.lhs / pt.f2_value;
        ratios.push_back(pt.ratio);
        rep.points.push_back(pt);
    }
    std::sort(ratios.begin(), ratios.end());
    const std::size_t n = ratios.size();
    const double median =
        (n % 2) ? ratios[n / 2] : 0.5 * (ratios[n / 2 - 1] + ratios[n / 2]);
    rep.lambda = median / root;
    for (const auto& pt : rep.points) {
        const double dev = std::fabs(pt.lhs - root * rep.lambda * pt.f2_value);
        rep.max_abs_dev = std::max(rep.max_abs_dev, dev);
        rep.max_rel_dev = std::max(rep.max_rel_dev, dev / std::fabs(pt.lhs));
    }
    return rep;
}

double combined_z(double est, double se_est, double ref, double se_ref) {
    const double diff = est - ref;
    const double spread = std::sqrt(se_est * se_est + se_ref * se_ref);
    if (spread == 0.0) return diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff);
    return diff / spread;
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::equidistribution: return "CONSISTENT-WITH-EQUIDISTRIBUTION";
        case Verdict::rational_limit: return "CONSISTENT-WITH-RATIONAL-LIMIT";
        case Verdict::inconclusive: return "INCONCLUSIVE";
    }
    return "INCONCLUSIVE";
}

Verdict final_verdict(const RunResult& run) {
    if (run.per_T.empty()) return Verdict::inconclusive;
    const TEntry& e = run.per_T.back();
    std::optional<double> zp, zr;
    if (run.product_ref)
        zp = combined_z(e.estimate, e.standard_error, *run.product_ref, 0.0);
    if (run.rational_ref)
        zr = combined_z(e.estimate, e.standard_error, run.rational_ref->value,
                        run.rational_ref->standard_error);
    const bool p_ok = zp && std::fabs(*zp) <= 3.0;
    const bool r_ok = zr && std::fabs(*zr) <= 3.0;
    if (r_ok && zp && std::fabs(*zp) > 3.0) return Verdict::rational_limit;
    if (p_ok) return Verdict::equidistribution;
    if (r_ok) return Verdict::rational_limit;
    return Verdict::inconclusive;
}

std::string compare_report(const RunResult& run, const ExperimentConfig& cfg) {
    std::ostringstream os;
    os.precision(10);
    const double len = cfg.x_hi - cfg.x_lo;
    os << "observable " << cfg.observable_spec << ", slope ";
    if (cfg.slope.is_rational())
        os << cfg.slope.p() << "/" << cfg.slope.q();
    else
        os << "irrational " << static_cast<double>(cfg.slope.value());
    os << ", |I| = " << len << ", sampling " << sampling_name(cfg.sampling) << "\n";

    for (const auto& e : run.per_T) {
        os << "T=" << e.T << "  estimate=" << e.estimate << "  stderr=" << e.standard_error
           << "  n=" << e.n << "  int_I=" << e.integral_I;
        if (run.product_ref)
            os << "  z_product=" << combined_z(e.estimate, e.standard_error, *run.product_ref, 0.0);
        if (run.rational_ref)
            os << "  z_rational="
               << combined_z(e.estimate, e.standard_error, run.rational_ref->value,
                             run.rational_ref->standard_error);
        if (run.eigenform_ref)
            os << "  z_eigenform="
               << combined_z(e.estimate, e.standard_error, run.eigenform_ref->value,
                             run.eigenform_ref->standard_error);
        os << "\n";
    }
    if (run.product_ref) os << "product_ref=" << *run.product_ref << "\n";
    if (run.rational_ref)
        os << "rational_ref=" << run.rational_ref->value << " +- "
           << run.rational_ref->standard_error << "  (M=" << run.coset_count << ")\n";
    if (run.eigenform_ref)
        os << "eigenform_ref=" << run.eigenform_ref->value << " +- "
           << run.eigenform_ref->standard_error << "\n";
    if (run.matrix_coefficient)
        os << "matrix_coefficient=" << run.matrix_coefficient->value << " +- "
           << run.matrix_coefficient->standard_error << "\n";
    os << "verdict: " << verdict_name(final_verdict(run)) << "\n";
    return os.str();
}

double correspondence_defect(long double x, double T, const CosetSystem& sys) {
    const long p = sys.p, q = sys.q;
    const long double y = static_cast<long double>(p) / static_cast<long double>(q);

    long double xf = x - std::floor(x + 0.5L);
    const auto [z1, z2] = horocycle_pair(x, y, T);

    // Frame of z1 after the same fold: a_{1/T} u_{xf}.
    const long double sT = std::sqrt(static_cast<long double>(T));
    const Mat2 g1{static_cast<double>(1.0L / sT), static_cast<double>(xf / sT), 0.0,
                  static_cast<double>(sT)};

    const ReducedPoint r1 = reduce(z1);
    const Mat2 frame = r1.witness.to_mat2() * g1;  // maps i to the reduced representative
    const double fiber_im = static_cast<double>(q) / static_cast<double>(p);
    const UHPoint zeta = mobius(frame, UHPoint(0.0, fiber_im));

    const UHPoint z2r = reduce_point(z2);
    const Mat2 a_pq = make_a(static_cast<double>(p) / static_cast<double>(q)).mat();
    double best = INFINITY;
    for (const auto& h : sys.reps) {
        const UHPoint cand = reduce_point(mobius(a_pq * h.to_mat2(), zeta));
        best = std::min(best, surface_distance(z2r, cand));
    }
    return best;
}

}  // namespace horolab
