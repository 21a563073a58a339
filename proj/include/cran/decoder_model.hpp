#pragma once

// Decoder complexity model: closed-form bit-iterations-per-channel-use cost
// of a capacity-approaching iterative decoder, the decoding-gap function, and
// the empirical complexity computed from measured iteration statistics.

#include <string>
#include <vector>

#include "cran/mcs.hpp"

namespace cran::decoder_model {

struct ComplexityModelParams {
    double zeta = 6.0;               // decoder-graph connectivity, > 2
    double k_prime = 0.2;            // complexity fit constant, > 0
    double nu = 1.0471285480508996;  // linear rate-model gap (0.2 dB), > 1
    double eps_channel = 0.1;        // channel outage constraint, in (0,1)
};

// Throws std::invalid_argument naming the violated invariant.
void validate_params(const ComplexityModelParams& p);

// K = -K'/log10(eps_channel) > 0.
double k_of_eps(const ComplexityModelParams& p);

// Squared gap scale of the complexity bracket: G^2 = (zeta-2)/(K zeta).
double g_squared(const ComplexityModelParams& p);

// Per-iteration information gain of the decoder graph: log2(zeta - 1).
double log2_zeta_minus_1(const ComplexityModelParams& p);

// Decoding gap l = log2(1 + gamma) - r(gamma, margin) for the scheme picked
// by rate_select. Strictly positive in the transmission region when nu > 1
// and margin >= 1. Throws std::domain_error in the no-transmission region
// (gamma/margin <= first threshold).
double gap(double gamma, double margin, const mcs::McsTable& table);

// Complexity in bit-iterations per channel use: 0 below the first
// margin-scaled threshold, otherwise r/log2(zeta-1) * [log2(G^2) - 2 log2 l]
// clamped below at 0. exact_form evaluates the unapproximated bracket
// r/log2(zeta-1) * log2(G^2/l^2 + 2/zeta) instead.
double complexity(double gamma, double margin, const ComplexityModelParams& p,
                  const mcs::McsTable& table, bool exact_form = false);

// Diagnostic companion carrying the unclamped value and selection state.
struct ComplexityDetail {
    double value = 0.0;         // primary (clamped) result
    double unclamped = 0.0;     // bracket value before the clamp at 0
    double gap = 0.0;           // decoding gap l (0 when not transmitting)
    double rate_bits_pcu = 0.0;
    int mcs_index = 0;          // 0 in the no-transmission region
    bool transmitting = false;
    bool clamped = false;
};
ComplexityDetail complexity_detail(double gamma, double margin,
                                   const ComplexityModelParams& p,
                                   const mcs::McsTable& table, bool exact_form = false);

struct TransportBlockGeometry {
    int d_k = 1;    // information bits per code block
    int c_k = 1;    // code blocks per transport block
    int s_re = 1;   // channel uses per transport block
    int l_max = 1;  // decoder iteration cap
};
void validate_geometry(const TransportBlockGeometry& g);

// Model complexity with an optional one-iteration floor d_k*c_k/s_re applied
// in the transmission region (off in the primary model; provided for
// sensitivity studies when geometry is available).
double complexity_with_iteration_floor(double gamma, double margin,
                                       const ComplexityModelParams& p,
                                       const mcs::McsTable& table,
                                       const TransportBlockGeometry& geom,
                                       bool exact_form = false);

// Measured iteration statistics on a (mcs index, snr) grid. Each grid point
// carries the code-block outage probability eps_cb and the pmf of the
// iteration count over 1..l_max conditioned on successful decoding.
struct IterationPmfPoint {
    int mcs_index = 1;
    double snr_db = 0.0;
    double eps_cb = 0.0;
    std::vector<double> pmf;  // P{L = i}, i = 1..l_max
};

struct IterationPmf {
    std::vector<IterationPmfPoint> points;
    int l_max = 1;
};

// Throws std::invalid_argument if any pmf vector does not sum to 1 +- 1e-9,
// has negative entries, has length != l_max, or eps_cb is outside [0,1].
void validate_pmf(const IterationPmf& pmf);

// Load `mcs_index,snr_db,eps_cb,p1,...,pLmax` CSV; header row mandatory;
// l_max inferred from the column count; '#' lines are comments. Throws
// std::runtime_error with the line number on parse errors.
IterationPmf load_iteration_pmf(const std::string& path);

// Nearest grid point for (mcs_index, snr_db); snr match must be within
// 0.05 dB or std::out_of_range is thrown.
const IterationPmfPoint& lookup_pmf(const IterationPmf& pmf, int mcs_index, double snr_db);

// Empirical complexity d_k*c_k*E[L]/s_re with the outage mass assigned l_max
// iterations: E[L] = (1 - eps_cb) * sum_i i*p_i + eps_cb * l_max.
double empirical_complexity(const TransportBlockGeometry& geom, const IterationPmf& pmf,
                            int mcs_index, double snr_db);

}  // namespace cran::decoder_model
