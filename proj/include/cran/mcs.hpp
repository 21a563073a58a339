#pragma once

// Modulation-and-coding tables: the rate model R_k = log2(1 + threshold/nu),
// equally spaced dB construction, CSV persistence, and margin-aware rate
// selection.

#include <optional>
#include <string>
#include <vector>

namespace cran::mcs {

struct McsEntry {
    int index = 1;                // 1-based position within the table
    double threshold_snr = 0.0;   // linear SNR activating this scheme
    double rate_bits_pcu = 0.0;   // code rate in bits per channel use
    std::optional<double> d_k;    // information bits per code block
    std::optional<double> c_k;    // code blocks per transport block
};

enum class TableSource { equally_spaced, loaded_from_file };

struct McsTable {
    std::vector<McsEntry> entries;
    double nu = 1.0;  // linear SNR gap of the rate model, > 1
    TableSource source = TableSource::equally_spaced;

    int size() const { return static_cast<int>(entries.size()); }
    // 1-based accessors matching the index convention of the entries.
    double threshold(int k) const { return entries[static_cast<std::size_t>(k - 1)].threshold_snr; }
    double rate(int k) const { return entries[static_cast<std::size_t>(k - 1)].rate_bits_pcu; }
    double first_threshold() const { return entries.front().threshold_snr; }
    double last_threshold() const { return entries.back().threshold_snr; }
};

// Throws std::invalid_argument naming the violated invariant: entries
// non-empty, indices contiguous from 1, thresholds positive and strictly
// increasing, rates positive and strictly increasing, nu > 1.
void validate_table(const McsTable& table);

// n_r thresholds equally spaced in dB on [gamma_first_db, gamma_last_db]
// inclusive, rates from R_k = log2(1 + threshold/nu) in linear units.
// Requires n_r >= 1, nu_db > 0, and gamma_first_db < gamma_last_db when
// n_r >= 2 (n_r == 1 yields a single entry at gamma_first_db).
McsTable make_equally_spaced_table(int n_r, double gamma_first_db,
                                   double gamma_last_db, double nu_db);

struct RateSelection {
    int index = 1;
    double rate_bits_pcu = 0.0;
    bool below_first_threshold = false;  // gamma/margin <= first threshold
};

// Piecewise-constant selection against margin-scaled thresholds:
//   x = gamma/margin; x <= t_1        -> (1, R_1) with below flag set;
//   t_k < x <= t_{k+1}                -> (k, R_k);
//   x > t_last                        -> (N, R_N).
// Satisfies rate_select(gamma, margin) == rate_select(gamma/margin, 1).
RateSelection rate_select(double gamma, double margin, const McsTable& table);

// Companion predicate for the zero-complexity no-transmission convention.
bool below_first_threshold(double gamma, double margin, const McsTable& table);

// CSV persistence: header `index,threshold_db,rate_bits_pcu[,d_k,c_k]`, lines
// starting with '#' are comments, rows sorted by index. load_table throws
// std::runtime_error carrying the offending line number on parse errors and
// std::invalid_argument on validation errors. The rate-threshold relation is
// NOT enforced on loaded tables (rates may come from link-level simulation);
// strictly increasing thresholds and rates are always enforced.
McsTable load_table(const std::string& path);
void save_table(const McsTable& table, const std::string& path);

double db_to_linear(double db);
double linear_to_db(double lin);

}  // namespace cran::mcs
