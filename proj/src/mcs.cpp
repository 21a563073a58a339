#include "cran/mcs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cran::mcs {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

void validate_table(const McsTable& table) {
    if (table.entries.empty()) {
        throw std::invalid_argument("mcs table invalid: entries empty");
    }
    if (!(table.nu > 1.0)) {
        throw std::invalid_argument("mcs table invalid: nu not > 1");
    }
    for (std::size_t i = 0; i < table.entries.size(); ++i) {
        const McsEntry& e = table.entries[i];
        if (e.index != static_cast<int>(i) + 1) {
            throw std::invalid_argument("mcs table invalid: indices not contiguous from 1");
        }
        if (!(e.threshold_snr > 0.0)) {
            throw std::invalid_argument("mcs table invalid: threshold not positive");
        }
        if (!(e.rate_bits_pcu > 0.0)) {
            throw std::invalid_argument("mcs table invalid: rate not positive");
        }
        if (i > 0) {
            if (!(e.threshold_snr > table.entries[i - 1].threshold_snr)) {
                throw std::invalid_argument(
                    "mcs table invalid: thresholds not strictly increasing");
            }
            if (!(e.rate_bits_pcu > table.entries[i - 1].rate_bits_pcu)) {
                throw std::invalid_argument("mcs table invalid: rates not strictly increasing");
            }
        }
    }
}

McsTable make_equally_spaced_table(int n_r, double gamma_first_db, double gamma_last_db,
                                   double nu_db) {
    if (n_r < 1) throw std::invalid_argument("make_equally_spaced_table: n_r must be >= 1");
    if (!(nu_db > 0.0)) throw std::invalid_argument("make_equally_spaced_table: nu_db must be > 0");
    if (n_r >= 2 && !(gamma_first_db < gamma_last_db)) {
        throw std::invalid_argument(
            "make_equally_spaced_table: gamma_first_db must be < gamma_last_db for n_r >= 2");
    }
    McsTable table;
    table.nu = db_to_linear(nu_db);
    table.source = TableSource::equally_spaced;
    table.entries.reserve(static_cast<std::size_t>(n_r));
    const double step = (n_r >= 2) ? (gamma_last_db - gamma_first_db) / (n_r - 1) : 0.0;
    for (int k = 0; k < n_r; ++k) {
        const double th_db = gamma_first_db + step * k;
        McsEntry e;
        e.index = k + 1;
        e.threshold_snr = db_to_linear(th_db);
        e.rate_bits_pcu = std::log2(1.0 + e.threshold_snr / table.nu);
        table.entries.push_back(e);
    }
    validate_table(table);
    return table;
}

RateSelection rate_select(double gamma, double margin, const McsTable& table) {
    if (!(gamma > 0.0)) throw std::invalid_argument("rate_select: gamma must be > 0");
    if (!(margin > 0.0)) throw std::invalid_argument("rate_select: margin must be > 0");
    const double x = gamma / margin;
    // Count thresholds strictly below x: t_k < x <= t_{k+1} selects index k.
    auto it = std::lower_bound(
        table.entries.begin(), table.entries.end(), x,
        [](const McsEntry& e, double v) { return e.threshold_snr < v; });
    const int below = static_cast<int>(it - table.entries.begin());
    RateSelection sel;
    if (below == 0) {
        sel.index = 1;
        sel.rate_bits_pcu = table.rate(1);
        sel.below_first_threshold = true;
        return sel;
    }
    sel.index = std::min(below, table.size());
    sel.rate_bits_pcu = table.rate(sel.index);
    return sel;
}

bool below_first_threshold(double gamma, double margin, const McsTable& table) {
    return gamma / margin <= table.first_threshold();
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    std::stringstream ss(line);
    while (std::getline(ss, cur, ',')) {
        // Trim surrounding whitespace.
        const auto b = cur.find_first_not_of(" \t\r");
        const auto e = cur.find_last_not_of(" \t\r");
        fields.push_back(b == std::string::npos ? std::string() : cur.substr(b, e - b + 1));
    }
    return fields;
}

double parse_double(const std::string& s, int line_no, const char* what) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw std::runtime_error("mcs csv parse error at line " + std::to_string(line_no) +
                                 ": bad " + what + " '" + s + "'");
    }
    if (pos != s.size()) {
        throw std::runtime_error("mcs csv parse error at line " + std::to_string(line_no) +
                                 ": trailing characters in " + what + " '" + s + "'");
    }
    return v;
}

}  // namespace

McsTable load_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("mcs csv parse error: cannot open '" + path + "'");
    McsTable table;
    table.source = TableSource::loaded_from_file;
    table.nu = db_to_linear(0.2);  // loaded tables carry rates as data; nu kept at the default
    std::string line;
    int line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            saw_header = true;
            if (line.rfind("index", 0) != 0) {
                throw std::runtime_error("mcs csv parse error at line " + std::to_string(line_no) +
                                         ": missing 'index,threshold_db,rate_bits_pcu' header");
            }
            continue;
        }
        const auto f = split_fields(line);
        if (f.size() != 3 && f.size() != 5) {
            throw std::runtime_error("mcs csv parse error at line " + std::to_string(line_no) +
                                     ": expected 3 or 5 fields, got " + std::to_string(f.size()));
        }
        McsEntry e;
        e.index = static_cast<int>(parse_double(f[0], line_no, "index"));
        e.threshold_snr = db_to_linear(parse_double(f[1], line_no, "threshold_db"));
        e.rate_bits_pcu = parse_double(f[2], line_no, "rate_bits_pcu");
        if (f.size() == 5) {
            e.d_k = parse_double(f[3], line_no, "d_k");
            e.c_k = parse_double(f[4], line_no, "c_k");
        }
        table.entries.push_back(e);
    }
    if (!saw_header || table.entries.empty()) {
        throw std::runtime_error("mcs csv parse error at line " + std::to_string(line_no) +
                                 ": no data rows");
    }
    validate_table(table);
    return table;
}

void save_table(const McsTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("mcs csv: cannot write '" + path + "'");
    const bool with_geometry =
        std::any_of(table.entries.begin(), table.entries.end(),
                    [](const McsEntry& e) { return e.d_k.has_value() && e.c_k.has_value(); });
    out << (with_geometry ? "index,threshold_db,rate_bits_pcu,d_k,c_k\n"
                          : "index,threshold_db,rate_bits_pcu\n");
    char buf[256];
    for (const McsEntry& e : table.entries) {
        if (with_geometry) {
            std::snprintf(buf, sizeof buf, "%d,%.12g,%.12g,%.12g,%.12g\n", e.index,
                          linear_to_db(e.threshold_snr), e.rate_bits_pcu, e.d_k.value_or(0.0),
                          e.c_k.value_or(0.0));
        } else {
            std::snprintf(buf, sizeof buf, "%d,%.12g,%.12g\n", e.index,
                          linear_to_db(e.threshold_snr), e.rate_bits_pcu);
        }
        out << buf;
    }
}

}  // namespace cran::mcs
