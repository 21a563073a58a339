#include "cran/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "cran/specfun.hpp"

namespace cran::channel {

void validate_spec(const ChannelSpec& spec) {
    if (const auto* fr = std::get_if<FixedRayleigh>(&spec)) {
        if (!(fr->gamma_bar > 0.0)) {
            throw std::invalid_argument("channel spec invalid: gamma_bar not > 0");
        }
        return;
    }
    const auto& pl = std::get<PathLossFpc>(spec);
    if (!(pl.gamma_ud > 0.0)) throw std::invalid_argument("channel spec invalid: gamma_ud not > 0");
    if (!(pl.eta > 0.0)) throw std::invalid_argument("channel spec invalid: eta not > 0");
    if (!(pl.s >= 0.0 && pl.s < 1.0)) {
        throw std::invalid_argument("channel spec invalid: s not in [0,1)");
    }
}

bool is_degenerate_fpc(const PathLossFpc& spec) { return spec.eta * (1.0 - spec.s) <= 1e-6; }

double alpha_of(const PathLossFpc& spec) { return 2.0 / (spec.eta * (1.0 - spec.s)); }

double conditional_mean_snr(const PathLossFpc& spec, double omega) {
    return spec.gamma_ud * std::pow(omega, -spec.eta * (1.0 - spec.s));
}

namespace {

// F(u) = alpha*u/(alpha+1) - alpha*u^2/(2(alpha+2)) + ... for tiny u, where
// the closed form 1 - alpha u^(-alpha) glow(alpha,u) loses all digits.
double pathloss_cdf_small_u(double alpha, double u) {
    double term = u;       // u^n / n!
    double sum = 0.0;
    for (int n = 1; n <= 30; ++n) {
        const double add = alpha * term / (alpha + n);
        sum += (n % 2 == 1) ? add : -add;
        term *= u / (n + 1);
        if (std::fabs(term) < 1e-20 * std::fabs(sum)) break;
    }
    return sum;
}

// pdf(u)*gamma_ud = alpha/(alpha+1) - alpha*u/(alpha+2) + alpha*u^2/(2(alpha+3)) - ...
double pathloss_pdf_small_u(double alpha, double u) {
    double term = 1.0;  // u^n / n!
    double sum = 0.0;
    for (int n = 0; n <= 30; ++n) {
        const double add = alpha * term / (alpha + n + 1.0);
        sum += (n % 2 == 0) ? add : -add;
        term *= u / (n + 1);
        if (std::fabs(term) < 1e-20 * std::fabs(sum)) break;
    }
    return sum;
}

}  // namespace

double snr_cdf(const ChannelSpec& spec, double gamma) {
    if (gamma < 0.0) throw std::domain_error("snr_cdf: gamma must be >= 0");
    if (const auto* fr = std::get_if<FixedRayleigh>(&spec)) {
        return -std::expm1(-gamma / fr->gamma_bar);
    }
    const auto& pl = std::get<PathLossFpc>(spec);
    if (is_degenerate_fpc(pl)) return -std::expm1(-gamma / pl.gamma_ud);
    if (gamma == 0.0) return 0.0;
    const double alpha = alpha_of(pl);
    const double u = gamma / pl.gamma_ud;
    if (u < 1e-4) return pathloss_cdf_small_u(alpha, u);
    const double glow = specfun::incomplete_gamma_lower(alpha, u).value;
    return 1.0 - alpha * std::pow(u, -alpha) * glow;
}

double snr_pdf(const ChannelSpec& spec, double gamma) {
    if (!(gamma > 0.0)) throw std::domain_error("snr_pdf: gamma must be > 0");
    if (const auto* fr = std::get_if<FixedRayleigh>(&spec)) {
        return std::exp(-gamma / fr->gamma_bar) / fr->gamma_bar;
    }
    const auto& pl = std::get<PathLossFpc>(spec);
    if (is_degenerate_fpc(pl)) return std::exp(-gamma / pl.gamma_ud) / pl.gamma_ud;
    const double alpha = alpha_of(pl);
    const double u = gamma / pl.gamma_ud;
    if (u < 1e-4) return pathloss_pdf_small_u(alpha, u) / pl.gamma_ud;
    const double glow = specfun::incomplete_gamma_lower(alpha, u).value;
    const double v = alpha * alpha * std::pow(u, -alpha - 1.0) * glow - alpha * std::exp(-u) / u;
    return v / pl.gamma_ud;
}

double sample_snr(const ChannelSpec& spec, rng::TrialStream& stream) {
    if (const auto* fr = std::get_if<FixedRayleigh>(&spec)) {
        return stream.next_exponential(fr->gamma_bar);
    }
    const auto& pl = std::get<PathLossFpc>(spec);
    if (is_degenerate_fpc(pl)) return stream.next_exponential(pl.gamma_ud);
    const double r = std::sqrt(stream.next_uniform());
    return stream.next_exponential(conditional_mean_snr(pl, r));
}

}  // namespace cran::channel
