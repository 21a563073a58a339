#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "cran/channel.hpp"
#include "cran/decoder_model.hpp"
#include "cran/mcs.hpp"
#include "cran/montecarlo.hpp"

namespace cran::config {

// Raised for malformed files, unknown keys (strict mode), type mismatches and
// cross-field inconsistencies. Messages are single-line and name the key and
// line involved.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A fully resolved configuration: raw values are parsed, units converted at
// the boundary (dB inputs to linear), domain objects constructed and
// validated. The original dB-domain scalars are retained for echoing.
struct ParsedConfig {
    decoder_model::ComplexityModelParams params;
    mcs::McsTable table;
    channel::ChannelSpec channel = channel::FixedRayleigh{10.0};

    double margin = 1.0;  // linear
    double margin_db = 0.0;
    double eps_hat = 0.1;
    std::int64_t n_c = 1;
    std::int64_t n_trials = 1000000;
    std::uint64_t seed = 1;

    montecarlo::SimMode sim_mode = montecarlo::SimMode::model_driven;
    bool exact_form = false;
    std::optional<std::string> pmf_path;
    std::optional<decoder_model::TransportBlockGeometry> geometry;

    // Raw echo data.
    double nu_db = 0.2;
    std::string mcs_mode = "equally_spaced";
    int n_r = 27;
    double gamma_first_db = -6.4;
    double gamma_last_db = 17.6;
    std::string table_path;
    std::string channel_kind = "fixed_rayleigh";
    double gamma_bar_db = 10.0;
    double gamma_ud_db = 0.0;
    double eta = 2.0;
    double s = 0.1;

    std::map<std::string, std::string> given;  // keys present in the file
    std::vector<std::string> defaulted_keys;   // canonical keys left at defaults
};

// Parses `key = value` lines ('#' starts a comment, blank lines ignored).
// In strict mode unknown keys are an error; otherwise they are ignored.
ParsedConfig parse_config_text(const std::string& text, bool strict);

// Convenience wrapper: reads the file and parses it. A missing config path
// is an error; an empty string selects the all-defaults configuration.
ParsedConfig load_config(const std::string& path, bool strict);

// Configuration echo for output metadata: every effective value, with
// dB-domain quantities carried in both dB and linear form. Deliberately
// excludes any execution detail (worker counts etc.) so that output is
// invariant under parallelism settings.
nlohmann::json metadata_echo(const ParsedConfig& cfg);

// Assembles the Monte Carlo configuration (loading the iteration pmf from
// pmf_path when the data-driven mode is selected).
montecarlo::SimConfig make_sim_config(const ParsedConfig& cfg);

}  // namespace cran::config
