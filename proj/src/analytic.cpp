#include "cran/analytic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "cran/quadrature.hpp"
#include "cran/specfun.hpp"

namespace cran::analytic {

namespace {

constexpr double kLn2 = 0.69314718055994530942;
constexpr double kInvSqrt2 = 0.70710678118654752440;

struct ModelConsts {
    double g2 = 0.0;       // G^2 = (zeta-2)/(K zeta)
    double g = 0.0;        // G
    double log2_g2 = 0.0;  // log2(G^2)
    double l2zm1 = 0.0;    // log2(zeta-1)
};

ModelConsts consts_of(const ComplexityModelParams& p) {
    ModelConsts c;
    c.g2 = decoder_model::g_squared(p);
    c.g = std::sqrt(c.g2);
    c.log2_g2 = std::log2(c.g2);
    c.l2zm1 = decoder_model::log2_zeta_minus_1(p);
    return c;
}

// e^mu * int_mu^inf E1(u)/u du. The power-series closed form loses digits to
// cancellation as mu grows (its terms peak near e^mu/sqrt(mu)/mu^2), so it is
// used only up to mu = 11; beyond that the scaled integrand is quadratured
// directly, which is stable for arbitrarily large mu.
double tail_integral_scaled(double mu) {
    if (!(mu > 0.0)) throw std::domain_error("tail_integral_scaled: mu must be > 0");
    if (mu <= 11.0) {
        const double lg = specfun::euler_gamma + std::log(mu);
        const double t = 0.5 * (lg * lg + specfun::zeta2) + specfun::series_sum_nn2(-mu).value;
        return std::exp(mu) * t;
    }
    auto f = [mu](double v) {
        return std::exp(-v) * specfun::exp_integral_e1_scaled(mu + v) / (mu + v);
    };
    return quadrature::integrate(f, 0.0, 80.0, 1e-13).value;
}

// Antiderivative of log2^2((a x + b)/G) * exp(-x/gbar)/gbar over the
// linearized interval, expressed with overflow-safe scaled factors
// (every exponential appears as exp(-x/gbar) <= 1 times a scaled function).
double i4_antiderivative(double x, const LinearizedInterval& iv, double gamma_bar,
                         const ModelConsts& cc) {
    const double ef = std::exp(-x / gamma_bar);
    if (ef == 0.0) return 0.0;
    const double t = iv.a * x + iv.b;
    const double mu = t / (iv.a * gamma_bar);
    const double log2_tg = std::log2(t / cc.g);
    const double a_const = 2.0 / (kLn2 * kLn2);
    const double e1s = specfun::exp_integral_e1_scaled(mu);
    const double ts = tail_integral_scaled(mu);
    return ef * (a_const * (-ts - e1s * std::log(t / cc.g)) - log2_tg * log2_tg);
}

double integrate_checked(const std::function<double(double)>& f, double a, double b,
                         double rel_tol, const char* what) {
    const quadrature::QuadResult q = quadrature::integrate(f, a, b, rel_tol);
    if (!(q.est_abs_error <= 1e-5 * (std::fabs(q.value) + 1e-9))) {
        throw std::runtime_error(std::string(what) + ": quadrature failed to converge");
    }
    return q.value;
}

// The decoding gap at the lower edge of interval k is
// log2(1 + margin*th_k) - log2(1 + th_k/nu), which stays positive for every
// threshold iff margin*nu > 1. Below that the model selects rates the true
// SNR cannot support and the gap goes negative; reject such margins at the
// API boundary rather than letting a downstream special function fail.
// (Margins slightly below 1 are inside the domain thanks to the rate law's
// own SNR margin nu; difference stencils at zero back-off rely on this.)
void require_margin(double margin, const McsTable& table, const char* what) {
    if (!(margin > 0.0 && std::isfinite(margin) && table.nu * margin > 1.0)) {
        throw std::invalid_argument(
            std::string(what) +
            ": margin must be a finite power back-off with margin*nu > 1 so the decoding "
            "gap stays positive");
    }
}

}  // namespace

std::vector<LinearizedInterval> linearize_gap(const McsTable& table, double margin,
                                              double gamma_bar, double tail_mass) {
    require_margin(margin, table, "linearize_gap");
    if (!(gamma_bar > 0.0)) throw std::invalid_argument("linearize_gap: gamma_bar must be > 0");
    if (!(tail_mass > 0.0 && tail_mass < 1.0)) {
        throw std::invalid_argument("linearize_gap: tail_mass must be in (0,1)");
    }
    const int n = table.size();
    const double gamma_max = margin * table.last_threshold() - gamma_bar * std::log(tail_mass);
    std::vector<LinearizedInterval> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) {
        LinearizedInterval iv;
        iv.k = k;
        iv.rate = table.rate(k);
        iv.lower = margin * table.threshold(k);
        iv.upper = (k < n) ? margin * table.threshold(k + 1) : gamma_max;
        const double gap_lo = std::log2(1.0 + iv.lower) - iv.rate;
        const double gap_hi = std::log2(1.0 + iv.upper) - iv.rate;
        iv.a = (gap_hi - gap_lo) / (iv.upper - iv.lower);
        iv.b = gap_lo - iv.a * iv.lower;
        out.push_back(iv);
    }
    return out;
}

double integral_i1(const ComplexityModelParams& params, const LinearizedInterval& iv,
                   double gamma_bar) {
    const ModelConsts cc = consts_of(params);
    return cc.log2_g2 * (std::exp(-iv.lower / gamma_bar) - std::exp(-iv.upper / gamma_bar));
}

double integral_i2(const ComplexityModelParams&, const LinearizedInterval& iv,
                   double gamma_bar) {
    const double ef_lo = std::exp(-iv.lower / gamma_bar);
    const double ef_hi = std::exp(-iv.upper / gamma_bar);
    const double t_lo = iv.a * iv.lower + iv.b;
    const double t_hi = iv.a * iv.upper + iv.b;
    const double agb = iv.a * gamma_bar;
    // Boundary term from integration by parts, plus the E1 correction. The
    // e^beta E1(tau) products are evaluated through the identity
    // e^beta E1(tau) = e^(-x/gbar) * [e^tau E1(tau)], which never overflows.
    const double boundary = 2.0 * std::log2(t_hi) * ef_hi - 2.0 * std::log2(t_lo) * ef_lo;
    const double e1_hi = (ef_hi == 0.0) ? 0.0
                                        : ef_hi * specfun::exp_integral_e1_scaled(t_hi / agb);
    const double e1_lo = (ef_lo == 0.0) ? 0.0
                                        : ef_lo * specfun::exp_integral_e1_scaled(t_lo / agb);
    return boundary + (2.0 / kLn2) * (e1_hi - e1_lo);
}

double integral_i4(const ComplexityModelParams& params, const LinearizedInterval& iv,
                   double gamma_bar) {
    const ModelConsts cc = consts_of(params);
    return i4_antiderivative(iv.upper, iv, gamma_bar, cc) -
           i4_antiderivative(iv.lower, iv, gamma_bar, cc);
}

double expected_complexity_fixed(const ComplexityModelParams& params, const McsTable& table,
                                 double margin, double gamma_bar) {
    const ModelConsts cc = consts_of(params);
    double sum = 0.0;
    for (const LinearizedInterval& iv : linearize_gap(table, margin, gamma_bar)) {
        sum += iv.rate / cc.l2zm1 *
               (integral_i1(params, iv, gamma_bar) + integral_i2(params, iv, gamma_bar));
    }
    return sum;
}

double second_moment_complexity_fixed(const ComplexityModelParams& params,
                                      const McsTable& table, double margin, double gamma_bar) {
    const ModelConsts cc = consts_of(params);
    double sum = 0.0;
    for (const LinearizedInterval& iv : linearize_gap(table, margin, gamma_bar)) {
        const double scale = 2.0 * iv.rate / cc.l2zm1;
        sum += scale * scale * integral_i4(params, iv, gamma_bar);
    }
    return sum;
}

double variance_complexity_fixed(const ComplexityModelParams& params, const McsTable& table,
                                 double margin, double gamma_bar) {
    const double mean = expected_complexity_fixed(params, table, margin, gamma_bar);
    return second_moment_complexity_fixed(params, table, margin, gamma_bar) - mean * mean;
}

double linearized_oracle_deviation(const ComplexityModelParams& params, const McsTable& table,
                                   double margin, double gamma_bar) {
    const ModelConsts cc = consts_of(params);
    const auto intervals = linearize_gap(table, margin, gamma_bar);
    // Scale floors: an interval whose integral is a vanishing fraction of the
    // family total cannot meaningfully be compared in relative terms.
    double scale1 = 0.0, scale2 = 0.0, scale4 = 0.0;
    std::vector<std::array<double, 3>> quads;
    quads.reserve(intervals.size());
    for (const LinearizedInterval& iv : intervals) {
        auto pdf = [gamma_bar](double x) { return std::exp(-x / gamma_bar) / gamma_bar; };
        auto f1 = [&](double x) { return cc.log2_g2 * pdf(x); };
        auto f2 = [&](double x) { return -2.0 * std::log2(iv.a * x + iv.b) * pdf(x); };
        auto f4 = [&](double x) {
            const double l2 = std::log2((iv.a * x + iv.b) / cc.g);
            return l2 * l2 * pdf(x);
        };
        const double q1 = quadrature::integrate(f1, iv.lower, iv.upper, 1e-12).value;
        const double q2 = quadrature::integrate(f2, iv.lower, iv.upper, 1e-12).value;
        const double q4 = quadrature::integrate(f4, iv.lower, iv.upper, 1e-12).value;
        quads.push_back({q1, q2, q4});
        scale1 += std::fabs(q1);
        scale2 += std::fabs(q2);
        scale4 += std::fabs(q4);
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        const LinearizedInterval& iv = intervals[i];
        const double c1 = integral_i1(params, iv, gamma_bar);
        const double c2 = integral_i2(params, iv, gamma_bar);
        const double c4 = integral_i4(params, iv, gamma_bar);
        worst = std::max(worst, std::fabs(c1 - quads[i][0]) /
                                    std::max(std::fabs(quads[i][0]), 1e-12 * scale1 + 1e-300));
        worst = std::max(worst, std::fabs(c2 - quads[i][1]) /
                                    std::max(std::fabs(quads[i][1]), 1e-12 * scale2 + 1e-300));
        worst = std::max(worst, std::fabs(c4 - quads[i][2]) /
                                    std::max(std::fabs(quads[i][2]), 1e-12 * scale4 + 1e-300));
    }
    return worst;
}

ConditionalMoments true_conditional_moments(const ComplexityModelParams& params,
                                            const McsTable& table, double margin,
                                            double gamma_bar, double rel_tol) {
    ConditionalMoments m;
    require_margin(margin, table, "true_conditional_moments");
    if (std::isinf(gamma_bar)) return m;  // vanishing density everywhere finite
    if (!(gamma_bar > 0.0)) {
        throw std::invalid_argument("true_conditional_moments: gamma_bar must be > 0");
    }
    const ModelConsts cc = consts_of(params);
    const int n = table.size();
    for (int k = 1; k <= n; ++k) {
        const double r = table.rate(k);
        const double lo = margin * table.threshold(k);
        // The clamp boundary within this interval: gap == G at
        // gamma = 2^(R_k + G) - 1; the integrand is identically 0 beyond.
        const double clamp_edge = std::exp2(r + cc.g) - 1.0;
        double hi = (k < n) ? margin * table.threshold(k + 1)
                            : margin * table.last_threshold() + 40.0 * gamma_bar;
        hi = std::min(hi, clamp_edge);
        if (!(hi > lo)) continue;
        const double scale = r / cc.l2zm1;
        auto c_of = [&](double g) {
            const double l = std::log2(1.0 + g) - r;
            const double c = scale * (cc.log2_g2 - 2.0 * std::log2(l));
            return c > 0.0 ? c : 0.0;
        };
        auto f1 = [&](double g) { return c_of(g) * std::exp(-g / gamma_bar) / gamma_bar; };
        auto f2 = [&](double g) {
            const double c = c_of(g);
            return c * c * std::exp(-g / gamma_bar) / gamma_bar;
        };
        m.mean += quadrature::integrate(f1, lo, hi, rel_tol).value;
        m.second_moment += quadrature::integrate(f2, lo, hi, rel_tol).value;
    }
    return m;
}

PathLossMoments moments_pathloss(const ComplexityModelParams& params, const McsTable& table,
                                 double margin, const channel::PathLossFpc& spec) {
    require_margin(margin, table, "moments_pathloss");
    channel::validate_spec(channel::ChannelSpec{spec});
    PathLossMoments out;
    if (channel::is_degenerate_fpc(spec)) {
        const ConditionalMoments cm =
            true_conditional_moments(params, table, margin, spec.gamma_ud);
        out.mean = cm.mean;
        out.second_moment = cm.second_moment;
        out.variance_total = cm.second_moment - cm.mean * cm.mean;
        out.variance_within = out.variance_total;
        out.p_transmission = std::exp(-margin * table.first_threshold() / spec.gamma_ud);
        return out;
    }
    const double expo = spec.eta * (1.0 - spec.s);
    // The three outer integrands share inner evaluations; memoize per omega.
    std::unordered_map<double, ConditionalMoments> cache;
    auto inner = [&](double w) -> ConditionalMoments {
        auto it = cache.find(w);
        if (it != cache.end()) return it->second;
        ConditionalMoments cm;
        if (w > 0.0) {
            const double gbar = spec.gamma_ud * std::pow(w, -expo);
            cm = true_conditional_moments(params, table, margin, gbar);
        }
        cache.emplace(w, cm);
        return cm;
    };
    const std::function<double(double)> f_mean = [&](double w) { return inner(w).mean * 2.0 * w; };
    const std::function<double(double)> f_m2 = [&](double w) {
        return inner(w).second_moment * 2.0 * w;
    };
    const std::function<double(double)> f_mean_sq = [&](double w) {
        const double m1 = inner(w).mean;
        return m1 * m1 * 2.0 * w;
    };
    const double mean = integrate_checked(f_mean, 0.0, 1.0, 1e-9, "moments_pathloss");
    const double m2 = integrate_checked(f_m2, 0.0, 1.0, 1e-9, "moments_pathloss");
    const double mean_sq_avg = integrate_checked(f_mean_sq, 0.0, 1.0, 1e-9, "moments_pathloss");
    out.mean = mean;
    out.second_moment = m2;
    out.variance_total = m2 - mean * mean;
    out.variance_within = m2 - mean_sq_avg;
    out.p_transmission =
        1.0 - channel::snr_cdf(channel::ChannelSpec{spec}, margin * table.first_threshold());
    return out;
}

PathLossMoments channel_moments(const ComplexityModelParams& params, const McsTable& table,
                                double margin, const channel::ChannelSpec& spec) {
    if (const auto* fr = std::get_if<channel::FixedRayleigh>(&spec)) {
        PathLossMoments out;
        const ConditionalMoments cm =
            true_conditional_moments(params, table, margin, fr->gamma_bar);
        out.mean = cm.mean;
        out.second_moment = cm.second_moment;
        out.variance_total = cm.second_moment - cm.mean * cm.mean;
        out.variance_within = out.variance_total;
        out.p_transmission = std::exp(-margin * table.first_threshold() / fr->gamma_bar);
        return out;
    }
    return moments_pathloss(params, table, margin, std::get<channel::PathLossFpc>(spec));
}

double complexity_cdf(const ComplexityModelParams& params, const McsTable& table, double margin,
                      const channel::ChannelSpec& spec, double c_thr, CdfConditioning cond) {
    require_margin(margin, table, "complexity_cdf");
    if (!(c_thr >= 0.0)) throw std::domain_error("complexity_cdf: c_thr must be >= 0");
    const ModelConsts cc = consts_of(params);
    const int n = table.size();
    double num = 0.0;
    for (int k = 1; k <= n; ++k) {
        const double r = table.rate(k);
        const double lo = margin * table.threshold(k);
        // Complexity <= c_thr within interval k iff the decoding gap exceeds
        // dr = G * 2^(-c log2(zeta-1)/(2 R_k)), i.e. gamma >= 2^(dr+R_k) - 1.
        // The gap is a function of the true SNR, so the cutoff is NOT
        // margin-scaled (interval edges are).
        const double dr = cc.g * std::exp2(-c_thr * cc.l2zm1 / (2.0 * r));
        const double cut = std::exp2(dr + r) - 1.0;
        double gamma_min = std::max(lo, cut);
        double f_hi = 1.0;
        if (k < n) {
            const double hi = margin * table.threshold(k + 1);
            gamma_min = std::min(gamma_min, hi);
            f_hi = channel::snr_cdf(spec, hi);
        }
        num += f_hi - channel::snr_cdf(spec, gamma_min);
    }
    const double f_first = channel::snr_cdf(spec, margin * table.first_threshold());
    if (cond == CdfConditioning::unconditioned) return f_first + num;
    const double p_tx = 1.0 - f_first;
    if (!(p_tx > 0.0)) return 1.0;  // no transmission mass: trivially all <= c
    return num / p_tx;
}

double outage_complexity_single(const ComplexityModelParams& params, const McsTable& table,
                                double margin, const channel::ChannelSpec& spec, double eps_hat,
                                CdfConditioning cond) {
    if (!(eps_hat > 0.0 && eps_hat < 1.0)) {
        throw std::invalid_argument("outage_complexity_single: eps_hat must be in (0,1)");
    }
    const double target = 1.0 - eps_hat;
    auto cdf = [&](double c) { return complexity_cdf(params, table, margin, spec, c, cond); };
    if (cdf(0.0) >= target) return 0.0;
    double lo = 0.0;
    double hi = 64.0;
    int guard = 0;
    while (cdf(hi) < target) {
        lo = hi;
        hi *= 2.0;
        if (++guard > 40) {
            throw std::runtime_error("outage_complexity_single: failed to bracket the quantile");
        }
    }
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        (cdf(mid) >= target ? hi : lo) = mid;
    }
    return hi;
}

double per_cell_constraint(double eps_hat, double n_c) {
    if (!(eps_hat > 0.0 && eps_hat < 1.0)) {
        throw std::invalid_argument("per_cell_constraint: eps_hat must be in (0,1)");
    }
    if (!(n_c >= 1.0)) throw std::invalid_argument("per_cell_constraint: n_c must be >= 1");
    return -std::expm1(n_c * std::log1p(-eps_hat));
}

double outage_complexity_clt(double mean, double variance, double eps_hat, double n_c) {
    if (!(variance >= 0.0)) {
        throw std::invalid_argument("outage_complexity_clt: variance must be >= 0");
    }
    if (!(eps_hat > 0.0 && eps_hat < 1.0)) {
        throw std::invalid_argument("outage_complexity_clt: eps_hat must be in (0,1)");
    }
    if (!(n_c >= 1.0)) throw std::invalid_argument("outage_complexity_clt: n_c must be >= 1");
    if (variance == 0.0) return mean;
    return mean + std::sqrt(variance / n_c) * specfun::gaussian_budget_scale(eps_hat, n_c);
}

double outage_complexity_asymptotic(double mean, double variance, double eps_hat) {
    if (!(variance >= 0.0)) {
        throw std::invalid_argument("outage_complexity_asymptotic: variance must be >= 0");
    }
    if (!(eps_hat > 0.0 && eps_hat < 1.0)) {
        throw std::invalid_argument("outage_complexity_asymptotic: eps_hat must be in (0,1)");
    }
    return mean - std::sqrt(-2.0 * variance * std::log1p(-eps_hat));
}

double computational_outage_prob(double mean, double variance, double n_c, double c_max) {
    if (!(variance >= 0.0)) {
        throw std::invalid_argument("computational_outage_prob: variance must be >= 0");
    }
    if (!(n_c > 0.0)) throw std::invalid_argument("computational_outage_prob: n_c must be > 0");
    if (variance == 0.0) {
        if (c_max > mean) return 0.0;
        if (c_max < mean) return 1.0;
        return 0.5;
    }
    const double z = (c_max - mean) * std::sqrt(n_c / variance);
    return 0.5 * std::erfc(z * kInvSqrt2);
}

GainReport computational_gain(const ComplexityModelParams& params, const McsTable& table,
                              double margin, const channel::ChannelSpec& spec, double eps_hat,
                              double n_c) {
    if (!(n_c >= 1.0)) throw std::invalid_argument("computational_gain: n_c must be >= 1");
    const PathLossMoments m = channel_moments(params, table, margin, spec);
    GainReport g;
    g.numerator_exact = outage_complexity_single(params, table, margin, spec, eps_hat,
                                                 CdfConditioning::on_transmission);
    g.numerator_clt = outage_complexity_clt(m.mean, m.variance_within, eps_hat, 1.0);
    g.denominator = std::isinf(n_c)
                        ? outage_complexity_asymptotic(m.mean, m.variance_within, eps_hat)
                        : outage_complexity_clt(m.mean, m.variance_within, eps_hat, n_c);
    if (!(g.denominator > 0.0)) {
        g.unbounded = true;
        return g;
    }
    g.value = g.numerator_exact / g.denominator;
    g.value_clt = g.numerator_clt / g.denominator;
    return g;
}

DiversityReport computational_diversity(const ComplexityModelParams& params,
                                        const McsTable& table, double margin,
                                        const channel::ChannelSpec& spec, double eps_hat) {
    const PathLossMoments m = channel_moments(params, table, margin, spec);
    DiversityReport d;
    const double var = m.variance_within;
    d.c_max_clt = outage_complexity_clt(m.mean, var, eps_hat, 1.0);
    d.c_max_exact = outage_complexity_single(params, table, margin, spec, eps_hat,
                                             CdfConditioning::unconditioned);
    if (var <= 0.0) {
        d.infinite = true;
        const double inf = std::numeric_limits<double>::infinity();
        d.value = d.percell_clt_budget = d.system_exact_budget = d.percell_exact_budget = inf;
        return d;
    }
    auto log10_system = [&](double c_max, double n) {
        return std::log10(computational_outage_prob(m.mean, var, n, c_max));
    };
    auto log10_percell = [&](double c_max, double n) {
        const double sys = computational_outage_prob(m.mean, var, n, c_max);
        return std::log10(-std::expm1(std::log1p(-sys) / n));
    };
    const double h = 1e-3;
    auto decay_rate = [&](auto&& f, double c_max) {
        return -(f(c_max, 1.0 + h) - f(c_max, 1.0 - h)) / (2.0 * h);
    };
    d.value = decay_rate(log10_system, d.c_max_clt);
    d.percell_clt_budget = decay_rate(log10_percell, d.c_max_clt);
    d.system_exact_budget = decay_rate(log10_system, d.c_max_exact);
    d.percell_exact_budget = decay_rate(log10_percell, d.c_max_exact);
    return d;
}

double average_rate(const McsTable& table, double margin, const channel::ChannelSpec& spec) {
    require_margin(margin, table, "average_rate");
    const int n = table.size();
    double sum = 0.0;
    for (int k = 1; k <= n; ++k) {
        const double f_lo = channel::snr_cdf(spec, margin * table.threshold(k));
        const double f_hi =
            (k < n) ? channel::snr_cdf(spec, margin * table.threshold(k + 1)) : 1.0;
        sum += table.rate(k) * (f_hi - f_lo);
    }
    return sum;
}

double complexity_rate_tradeoff(const ComplexityModelParams& params, const McsTable& table,
                                const channel::ChannelSpec& spec, double eps_hat, double n_c,
                                double margin, RateSource rate_source,
                                VarianceConvention var_conv) {
    const double margin_db = mcs::linear_to_db(margin);
    const double h_db = 0.02;
    const double m_plus = mcs::db_to_linear(margin_db + h_db);
    const double m_minus = mcs::db_to_linear(margin_db - h_db);

    channel::ChannelSpec rate_channel = spec;
    if (rate_source == RateSource::rayleigh_reference) {
        if (const auto* pl = std::get_if<channel::PathLossFpc>(&spec)) {
            rate_channel = channel::FixedRayleigh{pl->gamma_ud};
        }
    }
    const double d_rate = (average_rate(table, m_plus, rate_channel) -
                           average_rate(table, m_minus, rate_channel)) /
                          (2.0 * h_db);

    auto outage_at = [&](double m) {
        const PathLossMoments mm = channel_moments(params, table, m, spec);
        const double var = (var_conv == VarianceConvention::within_position)
                               ? mm.variance_within
                               : mm.variance_total;
        return std::isinf(n_c) ? outage_complexity_asymptotic(mm.mean, var, eps_hat)
                               : outage_complexity_clt(mm.mean, var, eps_hat, n_c);
    };
    const double d_outage = (outage_at(m_plus) - outage_at(m_minus)) / (2.0 * h_db);
    if (d_outage == 0.0) {
        throw std::runtime_error("complexity_rate_tradeoff: zero outage-complexity derivative");
    }
    return d_rate / d_outage;
}

const char* method_tag_name(MethodTag tag) {
    switch (tag) {
        case MethodTag::closed_form: return "closed_form";
        case MethodTag::quadrature: return "quadrature";
        case MethodTag::clt: return "clt";
        case MethodTag::cdf_inversion: return "cdf_inversion";
    }
    return "unknown";
}

MetricsReport compute_metrics(const ComplexityModelParams& params, const McsTable& table,
                              double margin, const channel::ChannelSpec& spec, double eps_hat,
                              double n_c) {
    MetricsReport r;
    r.params = params;
    r.channel = spec;
    r.margin = margin;
    r.eps_hat = eps_hat;
    r.n_c = n_c;
    if (const auto* fr = std::get_if<channel::FixedRayleigh>(&spec)) {
        r.expected_complexity = expected_complexity_fixed(params, table, margin, fr->gamma_bar);
        r.variance_complexity = variance_complexity_fixed(params, table, margin, fr->gamma_bar);
        r.expected_complexity_method = MethodTag::closed_form;
        r.variance_complexity_method = MethodTag::closed_form;
    } else {
        const PathLossMoments m =
            moments_pathloss(params, table, margin, std::get<channel::PathLossFpc>(spec));
        r.expected_complexity = m.mean;
        r.variance_complexity = m.variance_total;
        r.expected_complexity_method = MethodTag::quadrature;
        r.variance_complexity_method = MethodTag::quadrature;
    }
    if (n_c <= 1.0) {
        r.outage_complexity = outage_complexity_single(params, table, margin, spec, eps_hat);
        r.outage_complexity_method = MethodTag::cdf_inversion;
    } else {
        const PathLossMoments m = channel_moments(params, table, margin, spec);
        r.outage_complexity =
            std::isinf(n_c)
                ? outage_complexity_asymptotic(m.mean, m.variance_within, eps_hat)
                : outage_complexity_clt(m.mean, m.variance_within, eps_hat, n_c);
        r.outage_complexity_method = MethodTag::clt;
    }
    r.expected_rate = average_rate(table, margin, spec);
    r.expected_rate_method = MethodTag::closed_form;
    return r;
}

}  // namespace cran::analytic
