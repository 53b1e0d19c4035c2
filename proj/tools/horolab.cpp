// horolab command-line front end.
//
// Subcommands: reduce, hecke reps|index|check, run, limit, eigcheck.
// Exit codes: 0 success (verdicts are data, not status), 2 invalid
// input/config, 3 numerical failure.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "horolab/config.hpp"
#include "horolab/experiment.hpp"
#include "horolab/hecke.hpp"
#include "horolab/version.hpp"

namespace {

using namespace horolab;

std::optional<std::uint64_t> env_seed() {
    const char* e = std::getenv("HOROLAB_SEED");
    if (!e) return std::nullopt;
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(e, &pos);
    if (pos != std::string(e).size())
        throw std::invalid_argument("HOROLAB_SEED: not an unsigned integer");
    return v;
}

int default_threads() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

std::vector<UHPoint> parse_points(const std::string& spec) {
    // "x,y;x,y;..."
    std::vector<UHPoint> pts;
    std::istringstream is(spec);
    std::string item;
    while (std::getline(is, item, ';')) {
        const auto comma = item.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("points: expected x,y pairs separated by ';'");
        pts.emplace_back(std::stod(item.substr(0, comma)), std::stod(item.substr(comma + 1)));
    }
    if (pts.empty()) throw std::invalid_argument("points: empty list");
    return pts;
}

void cmd_reduce(double x, double y) {
    const ReducedPoint r = reduce(UHPoint(x, y));
    std::cout << "reduced: x=" << format_full(r.z.x) << " y=" << format_full(r.z.y) << "\n";
    std::cout << "witness: " << r.witness.str() << "\n";
}

void cmd_hecke_reps(long l, long m) {
    const HeckeSet hs = coset_reps_T(l, m);
    std::cout << "T(" << l << "," << m << "): " << hs.reps.size() << " representatives\n";
    for (const auto& r : hs.reps) std::cout << "  " << r.str() << "\n";
}

void cmd_hecke_index(long p, long q) {
    const CosetSystem sys = enumerate_gamma_cosets(p, q);
    const long psi = psi_index(p * q);
    const long paper = (p + 1) * (q + 1);
    std::cout << "p=" << p << " q=" << q << "\n";
    std::cout << "M(enumerated)=" << sys.index() << " psi(pq)=" << psi
              << " (p+1)(q+1)=" << paper << "  "
              << (sys.index() == paper ? "AGREES" : "DISAGREES") << "\n";
}

void cmd_hecke_check(long p, long q) {
    switch (double_coset_check(p, q)) {
        case CosetIdentity::holds:
            std::cout << "double coset identity: holds (" << psi_index(p * q)
                      << " <-> " << sigma1(p * q) << " bijection)\n";
            break;
        case CosetIdentity::fails:
            std::cout << "double coset identity: FAILS\n";
            break;
        case CosetIdentity::not_applicable:
            std::cout << "double coset identity: not applicable (pq not squarefree; "
                         "T(pq) strictly contains the double coset)\n";
            break;
    }
}

void cmd_run(const std::string& config_path, const std::string& out_dir,
             std::optional<std::uint64_t> seed_flag, int threads) {
    std::ifstream in(config_path);
    if (!in) throw std::invalid_argument("cannot open config file '" + config_path + "'");
    RunConfig cfg = parse_run_config(in);
    if (seed_flag) {
        cfg.experiment.seed = *seed_flag;
    } else if (!cfg.seed_in_file) {
        if (auto es = env_seed()) cfg.experiment.seed = *es;
    }

    const std::string started = iso_timestamp_now();
    const RunResult run = horocycle_run(cfg.experiment, threads);
    const std::string finished = iso_timestamp_now();

    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    {
        std::ofstream os(fs::path(out_dir) / "run.csv");
        write_run_csv(os, cfg, run);
    }
    {
        std::ofstream os(fs::path(out_dir) / "run.gnuplot");
        write_gnuplot(os, cfg, run, "run.csv");
    }
    if (cfg.experiment.slope.is_rational()) {
        std::ofstream os(fs::path(out_dir) / "rational_limit.csv");
        write_rational_csv(os, cfg, run);
    }
    {
        std::ofstream os(fs::path(out_dir) / "manifest.txt");
        write_manifest(os, cfg, &run, started, finished, threads);
    }

    std::cout << compare_report(run, cfg.experiment);
    std::cout << "outputs written to " << out_dir << " (manifest " << manifest_hash(cfg) << ")\n";
}

void cmd_limit(long p, long q, const std::string& obs, long n, std::uint64_t seed, int threads) {
    const Observable phi = parse_observable(obs);
    if (phi.arity != 2) throw std::invalid_argument("limit: observable must be two-surface");
    const CosetSystem sys = enumerate_gamma_cosets(p, q);
    const MCValue v = rational_limit_mc(phi, sys, n, seed, threads);
    std::cout << "p=" << p << " q=" << q << " M=" << sys.index() << " N=" << n << "\n";
    std::cout << "rational_limit=" << format_full(v.value) << " stderr="
              << format_full(v.standard_error) << "\n";
}

void cmd_eigcheck(long p, long q, const std::string& obs, const std::string& points_spec) {
    const Observable f2 = parse_observable(obs);
    const auto pts = parse_points(points_spec);
    const PointwiseReport rep = verify_hecke_pointwise(f2, p, q, pts);
    if (!rep.applicable) {
        std::cout << "eigcheck: not applicable (pq=" << p * q << " not squarefree)\n";
        return;
    }
    std::cout << "p=" << p << " q=" << q << " M=" << rep.M << " observable=" << f2.name << "\n";
    for (const auto& pt : rep.points)
        std::cout << "  z=" << format_full(pt.z.x) << "+" << format_full(pt.z.y)
                  << "i  lhs=" << format_full(pt.lhs) << "  f2=" << format_full(pt.f2_value)
                  << "  ratio=" << format_full(pt.ratio) << "\n";
    std::cout << "lambda(" << p * q << ")=" << format_full(rep.lambda)
              << "  sqrt(pq)*lambda=" << format_full(rep.lambda * std::sqrt(double(p * q)))
              << "\n";
    std::cout << "max_abs_dev=" << format_full(rep.max_abs_dev)
              << "  max_rel_dev=" << format_full(rep.max_rel_dev) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"horolab: pairs of expanding horocycle arcs on the modular surface, "
                 "with exact Hecke double-coset arithmetic for rational slopes"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    // reduce
    double rx = 0.0, ry = 0.0;
    auto* reduce_cmd = app.add_subcommand("reduce", "reduce a point to the fundamental domain");
    reduce_cmd->add_option("x", rx, "real part")->required();
    reduce_cmd->add_option("y", ry, "imaginary part (> 0)")->required();

    // hecke
    auto* hecke_cmd = app.add_subcommand("hecke", "double coset tables and checks");
    hecke_cmd->require_subcommand(1);
    long hl = 1, hm = 1, hp = 1, hq = 1;
    auto* reps_cmd = hecke_cmd->add_subcommand("reps", "list T(l,m) representatives");
    reps_cmd->add_option("l", hl)->required();
    reps_cmd->add_option("m", hm)->required();
    auto* index_cmd = hecke_cmd->add_subcommand("index", "coset count M vs psi(pq) vs (p+1)(q+1)");
    index_cmd->add_option("p", hp)->required();
    index_cmd->add_option("q", hq)->required();
    auto* check_cmd = hecke_cmd->add_subcommand("check", "double coset <-> T(pq) bijection");
    check_cmd->add_option("p", hp)->required();
    check_cmd->add_option("q", hq)->required();

    // run
    std::string config_path, out_dir = "out";
    std::optional<std::uint64_t> seed_flag;
    int threads = default_threads();
    auto* run_cmd = app.add_subcommand("run", "execute a configured experiment");
    run_cmd->add_option("config", config_path, "path to horolab-config v1 file")->required();
    run_cmd->add_option("--out", out_dir, "output directory");
    run_cmd->add_option("--seed", seed_flag, "override the run seed");
    run_cmd->add_option("--threads", threads, "worker cap");

    // limit
    long lp = 1, lq = 1, ln = 1000000;
    std::string limit_obs;
    std::optional<std::uint64_t> limit_seed;
    int limit_threads = default_threads();
    auto* limit_cmd = app.add_subcommand("limit", "direct rational-limit Monte Carlo");
    limit_cmd->add_option("p", lp)->required();
    limit_cmd->add_option("q", lq)->required();
    limit_cmd->add_option("observable", limit_obs, "two-surface observable spec")->required();
    limit_cmd->add_option("-N,--samples", ln, "draws per coset");
    limit_cmd->add_option("--seed", limit_seed);
    limit_cmd->add_option("--threads", limit_threads);

    // eigcheck
    long ep = 2, eq = 3;
    std::string eig_obs = "eis:2:200";
    std::string eig_points = "0,1;1,1.3;-0.3,2";
    auto* eig_cmd = app.add_subcommand("eigcheck", "pointwise Hecke eigenfunction identity");
    eig_cmd->add_option("p", ep)->required();
    eig_cmd->add_option("q", eq)->required();
    eig_cmd->add_option("--obs", eig_obs, "one-surface observable spec");
    eig_cmd->add_option("--points", eig_points, "base points 'x,y;x,y;...'");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*reduce_cmd) {
            cmd_reduce(rx, ry);
        } else if (*hecke_cmd) {
            if (*reps_cmd) cmd_hecke_reps(hl, hm);
            if (*index_cmd) cmd_hecke_index(hp, hq);
            if (*check_cmd) cmd_hecke_check(hp, hq);
        } else if (*run_cmd) {
            cmd_run(config_path, out_dir, seed_flag, threads);
        } else if (*limit_cmd) {
            std::uint64_t seed = 1;
            if (limit_seed) {
                seed = *limit_seed;
            } else if (auto es = env_seed()) {
                seed = *es;
            }
            cmd_limit(lp, lq, limit_obs, ln, seed, limit_threads);
        } else if (*eig_cmd) {
            cmd_eigcheck(ep, eq, eig_obs, eig_points);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
