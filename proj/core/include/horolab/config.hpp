#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "horolab/experiment.hpp"

// Flat key=value run configuration ("horolab-config v1"), canonical
// serialization, the run manifest, and CSV / gnuplot emission.
//
// Serialization is canonical: serialize(parse(serialize(c))) is byte
// identical to serialize(c).  All numeric CSV fields carry 17 significant
// digits.  Every output file embeds the manifest hash (FNV-1a over version
// and canonical config), so results are traceable to their exact inputs.

namespace horolab {

struct RunConfig {
    ExperimentConfig experiment;
    bool seed_in_file = false;  // whether the parsed text carried a seed line
};

RunConfig parse_run_config(std::istream& in);
RunConfig parse_run_config_text(const std::string& text);

std::string serialize_run_config(const RunConfig& cfg);

std::uint64_t fnv1a64(std::string_view data);
std::string manifest_hash(const RunConfig& cfg);

std::string format_full(double v);        // %.17g
std::string format_full_ld(long double v);  // %.21Lg

void write_run_csv(std::ostream& os, const RunConfig& cfg, const RunResult& run);
void write_rational_csv(std::ostream& os, const RunConfig& cfg, const RunResult& run);
void write_gnuplot(std::ostream& os, const RunConfig& cfg, const RunResult& run,
                   const std::string& csv_name);
void write_manifest(std::ostream& os, const RunConfig& cfg, const RunResult* run,
                    const std::string& started, const std::string& finished, int threads);

std::string iso_timestamp_now();

}  // namespace horolab
