#pragma once

// Scalar special functions used by the analytic layer: exponential integral,
// incomplete gamma, the power series sum_{n>=1} y^n/(n! n^2), and the inverse
// error function. All routines are pure and reentrant.

namespace cran::specfun {

// Natural-log Euler-Mascheroni constant, 20-digit literal.
inline constexpr double euler_gamma = 0.57721566490153286061;

// zeta(2) = pi^2/6, stored exactly in terms of pi.
inline constexpr double zeta2 = 3.14159265358979323846 * 3.14159265358979323846 / 6.0;

struct SpecFunResult {
    double value = 0.0;
    double est_abs_error = 0.0;
};

// E1(x) = int_x^inf e^(-t)/t dt for x > 0. Absolute error <= 1e-12 on
// [1e-8, 700]; returns 0 once e^(-x)/x underflows. Throws std::domain_error
// for x <= 0.
SpecFunResult exp_integral_e1(double x);

// e^x * E1(x): overflow-safe companion used when E1 appears multiplied by a
// large exponential. Valid for all x > 0.
double exp_integral_e1_scaled(double x);

// Lower incomplete gamma: int_0^x e^(-t) t^(a-1) dt, relative error <= 1e-10.
// Throws std::domain_error for a <= 0 or x < 0.
SpecFunResult incomplete_gamma_lower(double a, double x);

// Upper companion: Gamma(a) - lower(a, x).
SpecFunResult incomplete_gamma_upper(double a, double x);

// sum_{n>=1} y^n/(n! n^2) by direct summation until the term magnitude falls
// below 1e-16 of the partial sum. Total on finite reals.
SpecFunResult series_sum_nn2(double y);

// x with erf(x) = y, |y| < 1, absolute error <= 1e-12. Seeded by a truncated
// power series (<= 25 terms) and refined by <= 6 Newton steps on erf.
// Throws std::domain_error for |y| >= 1.
SpecFunResult inv_erf(double y);

// The truncated series seed alone (no Newton polish); exposed for tests that
// bound its tail behaviour.
double inv_erf_series_seed(double y, int max_terms = 25);

// z > 0 with erfc(z) = exp(log_q), valid for arbitrarily negative log_q
// (log-domain evaluation for deep-tail Gaussian quantiles). Requires
// log_q < log(1) = 0 with exp(log_q) < 1.
double inv_erfc_from_log(double log_q);

// sqrt(2) * inv_erf(2*(1-eps)^n - 1), evaluated stably for any n >= 0
// (including n large enough that (1-eps)^n underflows). This is the z-score
// multiplying sigma/sqrt(n) in the Gaussian budget formula.
double gaussian_budget_scale(double eps_hat, double n_c);

}  // namespace cran::specfun
