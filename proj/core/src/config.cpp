#include "horolab/config.hpp"

#include "horolab/version.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace horolab {

namespace {

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

double parse_double(const std::string& tok, const char* key) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("config: bad number for ") + key);
    }
    if (pos != tok.size())
        throw std::invalid_argument(std::string("config: trailing junk in ") + key);
    return v;
}

long parse_long(const std::string& tok, const char* key) {
    std::size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(tok, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("config: bad integer for ") + key);
    }
    if (pos != tok.size())
        throw std::invalid_argument(std::string("config: trailing junk in ") + key);
    return v;
}

}  // namespace

RunConfig parse_run_config(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("config: empty input");
    if (line != "horolab-config v1")
        throw std::invalid_argument("config: expected header 'horolab-config v1'");

    RunConfig cfg;
    bool have_slope = false, have_interval = false, have_T = false, have_N = false,
         have_sampling = false, have_observable = false;

    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: expected key=value, got '" + line + "'");
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);

        if (key == "slope") {
            const auto toks = split_ws(val);
            if (toks.size() != 2) throw std::invalid_argument("config: slope needs tag and value");
            if (toks[0] == "rational") {
                const auto slash = toks[1].find('/');
                if (slash == std::string::npos)
                    throw std::invalid_argument("config: rational slope must be p/q");
                const long p = parse_long(toks[1].substr(0, slash), "slope");
                const long q = parse_long(toks[1].substr(slash + 1), "slope");
                cfg.experiment.slope = Slope::rational(p, q);
            } else if (toks[0] == "irrational") {
                cfg.experiment.slope = Slope::irrational_from_string(toks[1]);
            } else {
                throw std::invalid_argument("config: slope tag must be rational|irrational");
            }
            have_slope = true;
        } else if (key == "interval") {
            const auto toks = split_ws(val);
            if (toks.size() != 2) throw std::invalid_argument("config: interval needs two numbers");
            cfg.experiment.x_lo = parse_double(toks[0], "interval");
            cfg.experiment.x_hi = parse_double(toks[1], "interval");
            have_interval = true;
        } else if (key == "T") {
            cfg.experiment.T_schedule.clear();
            for (const auto& t : split_ws(val))
                cfg.experiment.T_schedule.push_back(parse_double(t, "T"));
            have_T = true;
        } else if (key == "N") {
            cfg.experiment.samples = parse_long(val, "N");
            have_N = true;
        } else if (key == "sampling") {
            cfg.experiment.sampling = sampling_from_name(val);
            have_sampling = true;
        } else if (key == "observable") {
            parse_observable(val);  // reject invalid specs at parse time
            cfg.experiment.observable_spec = val;
            have_observable = true;
        } else if (key == "seed") {
            std::size_t pos = 0;
            cfg.experiment.seed = std::stoull(val, &pos);
            if (pos != val.size()) throw std::invalid_argument("config: trailing junk in seed");
            cfg.seed_in_file = true;
        } else if (key == "mc_N") {
            cfg.experiment.mc_samples = parse_long(val, "mc_N");
        } else {
            throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }
    if (!have_slope || !have_interval || !have_T || !have_N || !have_sampling || !have_observable)
        throw std::invalid_argument(
            "config: missing one of slope/interval/T/N/sampling/observable");
    validate(cfg.experiment);
    return cfg;
}

RunConfig parse_run_config_text(const std::string& text) {
    std::istringstream is(text);
    return parse_run_config(is);
}

std::string serialize_run_config(const RunConfig& cfg) {
    std::ostringstream os;
    os << "horolab-config v1\n";
    if (cfg.experiment.slope.is_rational())
        os << "slope=rational " << cfg.experiment.slope.p() << "/" << cfg.experiment.slope.q()
           << "\n";
    else
        os << "slope=irrational " << format_full_ld(cfg.experiment.slope.value()) << "\n";
    os << "interval=" << format_full(cfg.experiment.x_lo) << " " << format_full(cfg.experiment.x_hi)
       << "\n";
    os << "T=";
    for (std::size_t i = 0; i < cfg.experiment.T_schedule.size(); ++i)
        os << (i ? " " : "") << format_full(cfg.experiment.T_schedule[i]);
    os << "\n";
    os << "N=" << cfg.experiment.samples << "\n";
    os << "sampling=" << sampling_name(cfg.experiment.sampling) << "\n";
    os << "observable=" << cfg.experiment.observable_spec << "\n";
    os << "seed=" << cfg.experiment.seed << "\n";
    os << "mc_N=" << cfg.experiment.mc_samples << "\n";
    return os.str();
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string manifest_hash(const RunConfig& cfg) {
    const std::string payload = std::string(kVersion) + "\n" + serialize_run_config(cfg);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(payload)));
    return buf;
}

std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_full_ld(long double v) {
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%.21Lg", v);
    return buf;
}

namespace {

std::string opt_field(const std::optional<double>& v) {
    return v ? format_full(*v) : std::string();
}

}  // namespace

void write_run_csv(std::ostream& os, const RunConfig& cfg, const RunResult& run) {
    os << "# horolab-run v1 version=" << kVersion << " manifest=" << manifest_hash(cfg) << "\n";
    os << "T,estimate,stderr,N,product_ref,rational_ref,z_product,z_rational\n";
    for (const auto& e : run.per_T) {
        std::optional<double> zp, zr, pr, rr;
        if (run.product_ref) {
            pr = *run.product_ref;
            zp = combined_z(e.estimate, e.standard_error, *run.product_ref, 0.0);
        }
        if (run.rational_ref) {
            rr = run.rational_ref->value;
            zr = combined_z(e.estimate, e.standard_error, run.rational_ref->value,
                            run.rational_ref->standard_error);
        }
        os << format_full(e.T) << "," << format_full(e.estimate) << ","
           << format_full(e.standard_error) << "," << e.n << "," << opt_field(pr) << ","
           << opt_field(rr) << "," << opt_field(zp) << "," << opt_field(zr) << "\n";
    }
}

void write_rational_csv(std::ostream& os, const RunConfig& cfg, const RunResult& run) {
    os << "# horolab-rational-limit v1 version=" << kVersion << " manifest=" << manifest_hash(cfg)
       << "\n";
    os << "p,q,M,mc_N,value,stderr,eigenform_value,eigenform_stderr,matcoef_value,matcoef_stderr\n";
    if (!run.rational_ref) return;
    const auto& s = cfg.experiment.slope;
    os << s.p() << "," << s.q() << "," << run.coset_count << "," << cfg.experiment.mc_samples
       << "," << format_full(run.rational_ref->value) << ","
       << format_full(run.rational_ref->standard_error);
    if (run.eigenform_ref)
        os << "," << format_full(run.eigenform_ref->value) << ","
           << format_full(run.eigenform_ref->standard_error);
    else
        os << ",,";
    if (run.matrix_coefficient)
        os << "," << format_full(run.matrix_coefficient->value) << ","
           << format_full(run.matrix_coefficient->standard_error);
    else
        os << ",,";
    os << "\n";
}

void write_gnuplot(std::ostream& os, const RunConfig& cfg, const RunResult& run,
                   const std::string& csv_name) {
    os << "# horolab-gnuplot v1 version=" << kVersion << " manifest=" << manifest_hash(cfg)
       << "\n";
    os << "set datafile separator ','\n";
    os << "set logscale x\n";
    os << "set xlabel 'T'\n";
    os << "set ylabel 'estimate'\n";
    os << "plot '" << csv_name << "' using 1:2:3 with yerrorlines title 'horocycle average'";
    if (run.product_ref)
        os << ", \\\n     " << format_full(*run.product_ref) << " title 'product measure'";
    if (run.rational_ref)
        os << ", \\\n     " << format_full(run.rational_ref->value) << " title 'rational limit'";
    os << "\n";
}

void write_manifest(std::ostream& os, const RunConfig& cfg, const RunResult* run,
                    const std::string& started, const std::string& finished, int threads) {
    os << "horolab-manifest v1\n";
    os << "hash=" << manifest_hash(cfg) << "\n";
    os << "version=" << kVersion << "\n";
    os << "started=" << started << "\n";
    os << "finished=" << finished << "\n";
    os << "threads=" << threads << "\n";
    if (run) {
        if (cfg.experiment.slope.is_rational()) os << "M=" << run->coset_count << "\n";
        os << "pair_evaluations=" << run->counters.pair_evaluations << "\n";
        os << "mc_evaluations=" << run->counters.mc_evaluations << "\n";
    }
    os << "config-begin\n" << serialize_run_config(cfg) << "config-end\n";
}

std::string iso_timestamp_now() {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::tm tm_utc;
    gmtime_r(&now, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

}  // namespace horolab
