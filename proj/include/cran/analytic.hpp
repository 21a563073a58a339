#pragma once

// Closed-form and semi-analytical metrics: expected complexity and its
// variance under Rayleigh fading (piecewise-linearized closed forms with
// quadrature oracles), path-loss moment integration, the complexity CDF and
// its inversion, Gaussian-approximation outage complexity, computational
// gain and diversity, average rate, and the complexity-rate tradeoff.

#include <vector>

#include "cran/channel.hpp"
#include "cran/decoder_model.hpp"
#include "cran/mcs.hpp"

namespace cran::analytic {

using decoder_model::ComplexityModelParams;
using mcs::McsTable;

// Piecewise linearization of the decoding gap on one rate-selection interval
// in true-SNR space. The linearized gap a*gamma + b matches the true gap at
// both endpoints and stays positive on the interval interior.
struct LinearizedInterval {
    int k = 1;           // MCS index
    double a = 0.0;      // gap slope
    double b = 0.0;      // gap intercept
    double lower = 0.0;  // margin-scaled interval edges in true-SNR space
    double upper = 0.0;  // last interval truncated at the tail-mass cutoff
    double rate = 0.0;   // R_k
};

// Linearize the gap over every selection interval; the last interval is
// truncated where the exponential tail mass falls below tail_mass.
std::vector<LinearizedInterval> linearize_gap(const McsTable& table, double margin,
                                              double gamma_bar, double tail_mass = 1e-12);

// Closed-form partial integrals against the exponential density with mean
// gamma_bar over one linearized interval (each validated against adaptive
// quadrature of the same linearized integrand to 1e-8 relative):
//   i1: log2(G^2) * P{interval}
//   i2: -2 E[log2(linearized gap); interval]
//   i4: E[log2^2(linearized gap / G); interval]
double integral_i1(const ComplexityModelParams& params, const LinearizedInterval& iv,
                   double gamma_bar);
double integral_i2(const ComplexityModelParams& params, const LinearizedInterval& iv,
                   double gamma_bar);
double integral_i4(const ComplexityModelParams& params, const LinearizedInterval& iv,
                   double gamma_bar);

// Expected complexity / variance / second moment under fixed-average
// Rayleigh fading via the linearized closed forms.
double expected_complexity_fixed(const ComplexityModelParams& params, const McsTable& table,
                                 double margin, double gamma_bar);
double variance_complexity_fixed(const ComplexityModelParams& params, const McsTable& table,
                                 double margin, double gamma_bar);
double second_moment_complexity_fixed(const ComplexityModelParams& params,
                                      const McsTable& table, double margin, double gamma_bar);

// Largest relative deviation between the closed-form i1/i2/i4 and adaptive
// quadrature of their linearized integrands across all intervals; used by
// the validation suite (> 1e-8 signals a sign-resolution bug).
double linearized_oracle_deviation(const ComplexityModelParams& params, const McsTable& table,
                                   double margin, double gamma_bar);

// First and second conditional moments of the TRUE clamped complexity under
// exponential fading with mean gamma_bar, by adaptive quadrature (no
// linearization). Zero-complexity draws below the first threshold count with
// weight but contribute nothing, so these are unconditioned moments.
struct ConditionalMoments {
    double mean = 0.0;
    double second_moment = 0.0;
};
ConditionalMoments true_conditional_moments(const ComplexityModelParams& params,
                                            const McsTable& table, double margin,
                                            double gamma_bar, double rel_tol = 1e-11);

// Moments over random user position: outer integral of the per-position
// conditional moments against the disk density 2*omega. The linearized
// closed forms are NOT used inside (they lose accuracy as the conditional
// mean SNR grows near the cell center); the true-integrand quadrature is.
// Two variance conventions are carried:
//   variance_total  -- law of total variance (matches iid Monte Carlo trials)
//   variance_within -- mean of the per-position conditional variances
//                     (the convention behind the reference multi-cell curves)
struct PathLossMoments {
    double mean = 0.0;
    double variance_total = 0.0;
    double variance_within = 0.0;
    double second_moment = 0.0;
    double p_transmission = 0.0;  // probability of the transmission region
};
PathLossMoments moments_pathloss(const ComplexityModelParams& params, const McsTable& table,
                                 double margin, const channel::PathLossFpc& spec);

// Channel-generic moment helper: fixed Rayleigh uses the true-integrand
// quadrature at gamma_bar; path loss defers to moments_pathloss.
PathLossMoments channel_moments(const ComplexityModelParams& params, const McsTable& table,
                                double margin, const channel::ChannelSpec& spec);

enum class CdfConditioning { on_transmission, unconditioned };

// CDF of the complexity at threshold c_thr >= 0. Interval edges are
// margin-scaled; the within-interval complexity cutoff 2^(dR + R_k) - 1 is
// evaluated in true-SNR space (the decoding gap uses the true SNR), which is
// the reading confirmed by Monte Carlo. Conditioned on transmission by
// default; the unconditioned variant adds the no-transmission mass at 0.
double complexity_cdf(const ComplexityModelParams& params, const McsTable& table, double margin,
                      const channel::ChannelSpec& spec, double c_thr,
                      CdfConditioning cond = CdfConditioning::on_transmission);

// Smallest budget C with 1 - F_C(C) <= eps_hat, by bisection to 1e-9.
double outage_complexity_single(const ComplexityModelParams& params, const McsTable& table,
                                double margin, const channel::ChannelSpec& spec, double eps_hat,
                                CdfConditioning cond = CdfConditioning::on_transmission);

// 1 - (1 - eps_hat)^n_c.
double per_cell_constraint(double eps_hat, double n_c);

// Gaussian-approximation per-cell outage budget:
//   mean + sqrt(variance/n_c) * sqrt(2) * inv_erf(2 (1-eps_hat)^{n_c} - 1),
// evaluated stably for any continuous n_c >= 1 (log-domain deep tail).
double outage_complexity_clt(double mean, double variance, double eps_hat, double n_c);

// n_c -> infinity limit: mean - sqrt(2 * variance * ln(1/(1-eps_hat))).
double outage_complexity_asymptotic(double mean, double variance, double eps_hat);

// Gaussian probability that the pooled complexity of n_c cells exceeds
// n_c * c_max: 0.5 * erfc(z/sqrt(2)), z = (c_max - mean) * sqrt(n_c/variance).
// variance == 0 degenerates to a step function.
double computational_outage_prob(double mean, double variance, double n_c, double c_max);

// Pooling gain: single-cell budget over the per-cell n_c budget. Both
// readings of the numerator are carried: the exact single-cell CDF inversion
// (which matches the reference curves) and the Gaussian budget at n_c = 1.
// Denominators use the within-position variance convention. n_c may be
// +infinity for the asymptote.
struct GainReport {
    double value = 0.0;            // exact-inversion numerator (figure-matching)
    double value_clt = 0.0;        // Gaussian numerator at n_c = 1
    double numerator_exact = 0.0;  // outage_complexity_single, conditioned
    double numerator_clt = 0.0;    // outage_complexity_clt at n_c = 1
    double denominator = 0.0;      // per-cell budget at n_c (or the asymptote)
    bool unbounded = false;        // denominator <= 0
};
GainReport computational_gain(const ComplexityModelParams& params, const McsTable& table,
                              double margin, const channel::ChannelSpec& spec, double eps_hat,
                              double n_c);

// Decay rate of the computational outage probability in the number of pooled
// cells, -d log10(eps_comp)/d n_c at n_c = 1, by central difference with
// step 1e-3 on the continuous-n_c Gaussian extension. Four variants are
// carried (budget source x outage reading); `value` is the plain reading
// with the Gaussian budget, which depends on eps_hat alone.
struct DiversityReport {
    double value = 0.0;                  // system outage, Gaussian n_c=1 budget
    double percell_clt_budget = 0.0;     // per-cell-normalized outage, same budget
    double system_exact_budget = 0.0;    // system outage, exact unconditioned budget
    double percell_exact_budget = 0.0;   // per-cell outage, exact unconditioned budget
    double c_max_clt = 0.0;
    double c_max_exact = 0.0;
    bool infinite = false;               // degenerate variance sentinel
};
DiversityReport computational_diversity(const ComplexityModelParams& params,
                                        const McsTable& table, double margin,
                                        const channel::ChannelSpec& spec, double eps_hat);

// Expected selected rate sum_k R_k * P{interval k} over the channel.
double average_rate(const McsTable& table, double margin, const channel::ChannelSpec& spec);

// Numerator convention for the complexity-rate tradeoff: the reference
// curves differentiate the rate of a Rayleigh reference link whose mean SNR
// equals gamma_ud (rayleigh_reference); channel_rate differentiates the rate
// over the actual channel instead.
enum class RateSource { rayleigh_reference, channel_rate };
enum class VarianceConvention { within_position, total_law };

// d E[R]/d margin over d C_out/d margin, both by central differences with
// step 0.02 dB on the dB axis; n_c may be +infinity for the asymptote.
double complexity_rate_tradeoff(const ComplexityModelParams& params, const McsTable& table,
                                const channel::ChannelSpec& spec, double eps_hat, double n_c,
                                double margin,
                                RateSource rate_source = RateSource::rayleigh_reference,
                                VarianceConvention var_conv = VarianceConvention::within_position);

enum class MethodTag { closed_form, quadrature, clt, cdf_inversion };
const char* method_tag_name(MethodTag tag);

// One-stop summary with per-field method tags and an input echo.
struct MetricsReport {
    double expected_complexity = 0.0;  // bit-iter pcu
    double variance_complexity = 0.0;  // (bit-iter pcu)^2
    double outage_complexity = 0.0;    // bit-iter pcu, per cell
    double expected_rate = 0.0;        // bits pcu
    MethodTag expected_complexity_method = MethodTag::closed_form;
    MethodTag variance_complexity_method = MethodTag::closed_form;
    MethodTag outage_complexity_method = MethodTag::cdf_inversion;
    MethodTag expected_rate_method = MethodTag::closed_form;
    ComplexityModelParams params;
    channel::ChannelSpec channel = channel::FixedRayleigh{};
    double margin = 1.0;
    double eps_hat = 0.1;
    double n_c = 1.0;
};
MetricsReport compute_metrics(const ComplexityModelParams& params, const McsTable& table,
                              double margin, const channel::ChannelSpec& spec, double eps_hat,
                              double n_c);

}  // namespace cran::analytic
