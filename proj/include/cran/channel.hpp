#pragma once

// SNR distributions: fixed-average Rayleigh fading, and uniform-disk user
// placement with distance path loss under fractional power control.

#include <variant>

#include "cran/rng.hpp"

namespace cran::channel {

struct FixedRayleigh {
    double gamma_bar = 1.0;  // linear mean SNR, > 0
};

struct PathLossFpc {
    double gamma_ud = 1.0;  // linear mean SNR at unit distance, > 0
    double eta = 2.0;       // path-loss exponent, > 0
    double s = 0.0;         // power-control compensation factor, in [0,1)
};

using ChannelSpec = std::variant<FixedRayleigh, PathLossFpc>;

// Throws std::invalid_argument naming the violated invariant.
void validate_spec(const ChannelSpec& spec);

// Full-compensation degeneracy: eta*(1-s) <= 1e-6 collapses the path-loss
// model to fixed Rayleigh fading at gamma_ud (avoids alpha overflow).
bool is_degenerate_fpc(const PathLossFpc& spec);

// alpha = 2/(eta(1-s)).
double alpha_of(const PathLossFpc& spec);

// CDF of the SNR. FixedRayleigh: 1 - exp(-gamma/gamma_bar). PathLossFpc:
// 1 - alpha u^(-alpha) glow(alpha, u) with u = gamma/gamma_ud, where glow is
// the lower incomplete gamma function; evaluated by series for tiny u.
double snr_cdf(const ChannelSpec& spec, double gamma);

// Density consistent with snr_cdf (integrates to 1 within 1e-6).
double snr_pdf(const ChannelSpec& spec, double gamma);

// One SNR draw. FixedRayleigh: inverse-CDF exponential. PathLossFpc:
// composite -- radius r = sqrt(U) (density 2w on [0,1]), conditional mean
// gamma_ud * r^(-eta(1-s)), then an exponential draw with that mean.
double sample_snr(const ChannelSpec& spec, rng::TrialStream& stream);

// Mean SNR at normalized distance omega in (0,1]: gamma_ud * omega^(-eta(1-s)).
double conditional_mean_snr(const PathLossFpc& spec, double omega);

}  // namespace cran::channel
