#include "cran/config.hpp"

#include <array>
#include <fstream>
#include <sstream>
#include <string_view>

namespace cran::config {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void type_error(const std::string& key, const char* want, const std::string& got,
                             int line) {
    throw ConfigError("config error: key '" + key + "' expects " + want + ", got '" + got +
                      "' (line " + std::to_string(line) + ")");
}

double parse_double(const std::string& key, const std::string& value, int line) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) type_error(key, "a number", value, line);
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        type_error(key, "a number", value, line);
    }
}

std::int64_t parse_int(const std::string& key, const std::string& value, int line) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(value, &pos);
        if (pos != value.size()) type_error(key, "an integer", value, line);
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        type_error(key, "an integer", value, line);
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value, int line) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(value, &pos);
        if (pos != value.size() || value.find('-') != std::string::npos) {
            type_error(key, "an unsigned integer", value, line);
        }
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        type_error(key, "an unsigned integer", value, line);
    }
}

bool parse_bool(const std::string& key, const std::string& value, int line) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    type_error(key, "a boolean (true/false)", value, line);
}

constexpr std::array<std::string_view, 19> kCanonicalKeys = {
    "model.zeta",        "model.k_prime",       "model.nu_db",        "model.eps_channel",
    "mcs.mode",          "mcs.n_r",             "mcs.gamma_first_db", "mcs.gamma_last_db",
    "mcs.table_path",    "channel.kind",        "channel.gamma_bar_db",
    "channel.gamma_ud_db", "channel.eta",       "channel.s",          "run.margin_db",
    "run.eps_hat",       "run.n_c",             "run.n_trials",       "run.seed"};

struct GeometryDraft {
    std::optional<int> d_k, c_k, s_re, l_max;
    bool any() const { return d_k || c_k || s_re || l_max; }
    bool all() const { return d_k && c_k && s_re && l_max; }
};

// Applies one key. Returns false when the key is not recognized.
bool apply_key(ParsedConfig& p, GeometryDraft& geom, const std::string& key,
               const std::string& value, int line) {
    if (key == "model.zeta") {
        p.params.zeta = parse_double(key, value, line);
    } else if (key == "model.k_prime") {
        p.params.k_prime = parse_double(key, value, line);
    } else if (key == "model.nu_db") {
        p.nu_db = parse_double(key, value, line);
    } else if (key == "model.eps_channel") {
        p.params.eps_channel = parse_double(key, value, line);
    } else if (key == "mcs.mode") {
        if (value != "equally_spaced" && value != "file") {
            type_error(key, "one of equally_spaced|file", value, line);
        }
        p.mcs_mode = value;
    } else if (key == "mcs.n_r") {
        p.n_r = static_cast<int>(parse_int(key, value, line));
    } else if (key == "mcs.gamma_first_db") {
        p.gamma_first_db = parse_double(key, value, line);
    } else if (key == "mcs.gamma_last_db") {
        p.gamma_last_db = parse_double(key, value, line);
    } else if (key == "mcs.table_path") {
        p.table_path = value;
    } else if (key == "channel.kind") {
        if (value != "fixed_rayleigh" && value != "pathloss_fpc") {
            type_error(key, "one of fixed_rayleigh|pathloss_fpc", value, line);
        }
        p.channel_kind = value;
    } else if (key == "channel.gamma_bar_db") {
        p.gamma_bar_db = parse_double(key, value, line);
    } else if (key == "channel.gamma_ud_db") {
        p.gamma_ud_db = parse_double(key, value, line);
    } else if (key == "channel.eta") {
        p.eta = parse_double(key, value, line);
    } else if (key == "channel.s") {
        p.s = parse_double(key, value, line);
    } else if (key == "run.margin_db") {
        p.margin_db = parse_double(key, value, line);
    } else if (key == "run.eps_hat") {
        p.eps_hat = parse_double(key, value, line);
    } else if (key == "run.n_c") {
        p.n_c = parse_int(key, value, line);
    } else if (key == "run.n_trials") {
        p.n_trials = parse_int(key, value, line);
    } else if (key == "run.seed") {
        p.seed = parse_u64(key, value, line);
    } else if (key == "sim.mode") {
        if (value == "model_driven") {
            p.sim_mode = montecarlo::SimMode::model_driven;
        } else if (value == "lte_data_driven") {
            p.sim_mode = montecarlo::SimMode::lte_data_driven;
        } else {
            type_error(key, "one of model_driven|lte_data_driven", value, line);
        }
    } else if (key == "sim.exact_form") {
        p.exact_form = parse_bool(key, value, line);
    } else if (key == "sim.pmf_path") {
        p.pmf_path = value;
    } else if (key == "sim.d_k") {
        geom.d_k = static_cast<int>(parse_int(key, value, line));
    } else if (key == "sim.c_k") {
        geom.c_k = static_cast<int>(parse_int(key, value, line));
    } else if (key == "sim.s_re") {
        geom.s_re = static_cast<int>(parse_int(key, value, line));
    } else if (key == "sim.l_max") {
        geom.l_max = static_cast<int>(parse_int(key, value, line));
    } else {
        return false;
    }
    return true;
}

bool key_is_relevant(const ParsedConfig& p, std::string_view key) {
    if (key == "mcs.table_path") return p.mcs_mode == "file";
    if (key == "mcs.n_r" || key == "mcs.gamma_first_db" || key == "mcs.gamma_last_db") {
        return p.mcs_mode == "equally_spaced";
    }
    if (key == "channel.gamma_bar_db") return p.channel_kind == "fixed_rayleigh";
    if (key == "channel.gamma_ud_db" || key == "channel.eta" || key == "channel.s") {
        return p.channel_kind == "pathloss_fpc";
    }
    return true;
}

}  // namespace

ParsedConfig parse_config_text(const std::string& text, bool strict) {
    ParsedConfig p;
    GeometryDraft geom;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string stripped = trim(raw);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config parse error at line " + std::to_string(line) +
                              ": expected 'key = value'");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("config parse error at line " + std::to_string(line) +
                              ": empty key");
        }
        if (!apply_key(p, geom, key, value, line)) {
            if (strict) {
                throw ConfigError("config error: unknown key '" + key + "' (line " +
                                  std::to_string(line) + ")");
            }
            continue;
        }
        p.given[key] = value;
    }

    if (geom.any() && !geom.all()) {
        throw ConfigError(
            "config error: sim.d_k, sim.c_k, sim.s_re and sim.l_max must be given together");
    }
    if (geom.all()) {
        p.geometry = decoder_model::TransportBlockGeometry{*geom.d_k, *geom.c_k, *geom.s_re,
                                                           *geom.l_max};
    }

    // Resolve units and build the validated domain objects.
    p.params.nu = mcs::db_to_linear(p.nu_db);
    decoder_model::validate_params(p.params);
    if (p.mcs_mode == "file") {
        if (p.table_path.empty()) {
            throw ConfigError("config error: mcs.mode = file requires mcs.table_path");
        }
        p.table = mcs::load_table(p.table_path);
        p.table.nu = mcs::db_to_linear(p.nu_db);
        mcs::validate_table(p.table);
    } else {
        p.table = mcs::make_equally_spaced_table(p.n_r, p.gamma_first_db, p.gamma_last_db,
                                                 p.nu_db);
    }
    if (p.channel_kind == "fixed_rayleigh") {
        p.channel = channel::FixedRayleigh{mcs::db_to_linear(p.gamma_bar_db)};
    } else {
        p.channel = channel::PathLossFpc{mcs::db_to_linear(p.gamma_ud_db), p.eta, p.s};
    }
    channel::validate_spec(p.channel);
    if (!(p.margin_db >= 0.0)) {
        throw std::invalid_argument("run.margin_db must be >= 0");
    }
    p.margin = mcs::db_to_linear(p.margin_db);
    if (!(p.eps_hat > 0.0 && p.eps_hat < 1.0)) {
        throw std::invalid_argument("run.eps_hat must be in (0,1)");
    }
    if (p.n_c < 1) throw std::invalid_argument("run.n_c must be >= 1");
    if (p.n_trials < 1) throw std::invalid_argument("run.n_trials must be >= 1");

    for (const std::string_view key : kCanonicalKeys) {
        if (!key_is_relevant(p, key)) continue;
        if (p.given.find(std::string(key)) == p.given.end()) {
            p.defaulted_keys.emplace_back(key);
        }
    }
    return p;
}

ParsedConfig load_config(const std::string& path, bool strict) {
    if (path.empty()) return parse_config_text("", strict);
    std::ifstream in(path);
    if (!in) throw ConfigError("config error: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), strict);
}

nlohmann::json metadata_echo(const ParsedConfig& cfg) {
    nlohmann::json j;
    j["model"] = {{"zeta", cfg.params.zeta},
                  {"k_prime", cfg.params.k_prime},
                  {"nu_db", cfg.nu_db},
                  {"nu_linear", cfg.params.nu},
                  {"eps_channel", cfg.params.eps_channel}};
    nlohmann::json m = {{"mode", cfg.mcs_mode}, {"n_r", cfg.table.size()}};
    if (cfg.mcs_mode == "file") {
        m["table_path"] = cfg.table_path;
    } else {
        m["gamma_first_db"] = cfg.gamma_first_db;
        m["gamma_last_db"] = cfg.gamma_last_db;
    }
    j["mcs"] = m;
    nlohmann::json ch = {{"kind", cfg.channel_kind}};
    if (cfg.channel_kind == "fixed_rayleigh") {
        ch["gamma_bar_db"] = cfg.gamma_bar_db;
        ch["gamma_bar_linear"] = mcs::db_to_linear(cfg.gamma_bar_db);
    } else {
        ch["gamma_ud_db"] = cfg.gamma_ud_db;
        ch["gamma_ud_linear"] = mcs::db_to_linear(cfg.gamma_ud_db);
        ch["eta"] = cfg.eta;
        ch["s"] = cfg.s;
    }
    j["channel"] = ch;
    j["run"] = {{"margin_db", cfg.margin_db}, {"margin_linear", cfg.margin},
                {"eps_hat", cfg.eps_hat},     {"n_c", cfg.n_c},
                {"n_trials", cfg.n_trials},   {"seed", cfg.seed}};
    nlohmann::json sim = {
        {"mode", cfg.sim_mode == montecarlo::SimMode::model_driven ? "model_driven"
                                                                   : "lte_data_driven"},
        {"exact_form", cfg.exact_form}};
    if (cfg.pmf_path) sim["pmf_path"] = *cfg.pmf_path;
    if (cfg.geometry) {
        sim["d_k"] = cfg.geometry->d_k;
        sim["c_k"] = cfg.geometry->c_k;
        sim["s_re"] = cfg.geometry->s_re;
        sim["l_max"] = cfg.geometry->l_max;
    }
    j["sim"] = sim;
    j["defaulted_keys"] = cfg.defaulted_keys;
    return j;
}

montecarlo::SimConfig make_sim_config(const ParsedConfig& cfg) {
    montecarlo::SimConfig sim;
    sim.channel = cfg.channel;
    sim.table = cfg.table;
    sim.params = cfg.params;
    sim.margin = cfg.margin;
    sim.n_trials = cfg.n_trials;
    sim.n_c = cfg.n_c;
    sim.eps_hat = cfg.eps_hat;
    sim.seed = cfg.seed;
    sim.mode = cfg.sim_mode;
    sim.exact_form = cfg.exact_form;
    if (cfg.sim_mode == montecarlo::SimMode::lte_data_driven) {
        if (!cfg.pmf_path) {
            throw ConfigError("config error: sim.mode = lte_data_driven requires sim.pmf_path");
        }
        sim.pmf = decoder_model::load_iteration_pmf(*cfg.pmf_path);
        if (!cfg.geometry) {
            throw ConfigError(
                "config error: sim.mode = lte_data_driven requires sim.d_k, sim.c_k, sim.s_re "
                "and sim.l_max");
        }
        sim.geometry = cfg.geometry;
    }
    return sim;
}

}  // namespace cran::config
