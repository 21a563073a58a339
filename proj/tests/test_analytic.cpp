#include <cmath>
#include <limits>
#include <stdexcept>

#include "doctest.h"

#include "cran/analytic.hpp"
#include "cran/channel.hpp"
#include "cran/decoder_model.hpp"
#include "cran/mcs.hpp"
#include "cran/quadrature.hpp"
#include "cran/rng.hpp"
#include "test_util.hpp"

using namespace cran;
using testutil::abs_dev;
using testutil::rel_dev;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const decoder_model::ComplexityModelParams kParams{};

mcs::McsTable table_n(int n_r) {
    return mcs::make_equally_spaced_table(n_r, -6.4, 17.6, 0.2);
}

const channel::ChannelSpec kRayleigh10{channel::FixedRayleigh{10.0}};
const channel::ChannelSpec kPathLoss{channel::PathLossFpc{1.0, 2.0, 0.1}};

}  // namespace

TEST_SUITE("analytic") {

TEST_CASE("closed-form moments: frozen regression values") {
    // Expected complexity at 10 dB mean SNR, no back-off.
    CHECK(rel_dev(analytic::expected_complexity_fixed(kParams, table_n(10), 1.0, 10.0),
                  5.5047302831467722) < 1e-10);
    CHECK(rel_dev(analytic::expected_complexity_fixed(kParams, table_n(30), 1.0, 10.0),
                  8.3792656646620944) < 1e-10);
    CHECK(rel_dev(analytic::expected_complexity_fixed(kParams, table_n(50), 1.0, 10.0),
                  9.4417612177522976) < 1e-10);
    // Variances on the decibel scale.
    CHECK(abs_dev(10.0 * std::log10(analytic::variance_complexity_fixed(
                             kParams, table_n(10), 1.0, 10.0)),
                  11.263997108943064) < 1e-8);
    CHECK(abs_dev(10.0 * std::log10(analytic::variance_complexity_fixed(
                             kParams, table_n(30), mcs::db_to_linear(0.9), 10.0)),
                  5.9972478503685975) < 1e-8);
}

TEST_CASE("closed-form interval integrals match quadrature of their integrands") {
    // Deterministic corners plus 100 random parameter draws.
    for (int nr : {10, 27, 50}) {
        for (double mdb : {0.0, 0.9}) {
            for (double gdb : {0.0, 10.0, 15.0}) {
                const double dev = analytic::linearized_oracle_deviation(
                    kParams, table_n(nr), mcs::db_to_linear(mdb), mcs::db_to_linear(gdb));
                CAPTURE(nr);
                CAPTURE(mdb);
                CAPTURE(gdb);
                CHECK(dev < 1e-8);
            }
        }
    }
    rng::TrialStream stream(424242, 0);
    for (int draw = 0; draw < 100; ++draw) {
        const int nr = 5 + static_cast<int>(stream.next_uniform() * 46.0);
        const double mdb = stream.next_uniform();                   // 0 .. 1 dB
        const double gdb = -5.0 + 17.0 * stream.next_uniform();    // -5 .. 12 dB
        const double dev = analytic::linearized_oracle_deviation(
            kParams, table_n(nr), mcs::db_to_linear(mdb), mcs::db_to_linear(gdb));
        CAPTURE(draw);
        CAPTURE(nr);
        CAPTURE(mdb);
        CAPTURE(gdb);
        CHECK(dev < 1e-8);
    }
}

TEST_CASE("closed-form moments track the true (clamped) integrand at high resolution") {
    // With many schemes the chord linearization of the gap is tight: the
    // closed forms and direct quadrature of the exact sawtooth integrand
    // agree to within a couple percent.
    const auto t = table_n(50);
    const auto true_m = analytic::true_conditional_moments(kParams, t, 1.0, 10.0);
    const double mean_cf = analytic::expected_complexity_fixed(kParams, t, 1.0, 10.0);
    const double var_cf = analytic::variance_complexity_fixed(kParams, t, 1.0, 10.0);
    const double true_var = true_m.second_moment - true_m.mean * true_m.mean;
    CHECK(rel_dev(mean_cf, true_m.mean) < 0.02);
    CHECK(rel_dev(var_cf, true_var) < 0.02);
}

TEST_CASE("single-cell outage inversion: frozen values and round trip") {
    CHECK(rel_dev(analytic::outage_complexity_single(kParams, table_n(10), 1.0, kRayleigh10,
                                                     0.1),
                  10.064298944855182) < 1e-9);
    CHECK(rel_dev(analytic::outage_complexity_single(kParams, table_n(50), 1.0, kRayleigh10,
                                                     0.1),
                  14.891122066940625) < 1e-9);
    for (double eps : {0.02, 0.1, 0.35}) {
        const double c = analytic::outage_complexity_single(kParams, table_n(27), 1.0,
                                                            kRayleigh10, eps);
        CHECK(abs_dev(analytic::complexity_cdf(kParams, table_n(27), 1.0, kRayleigh10, c),
                      1.0 - eps) < 1e-9);
    }
    // Nonincreasing in the outage budget.
    double prev = kInf;
    for (double eps = 0.02; eps < 0.5; eps += 0.03) {
        const double c = analytic::outage_complexity_single(kParams, table_n(27), 1.0,
                                                            kRayleigh10, eps);
        CHECK(c <= prev);
        prev = c;
    }
}

TEST_CASE("complexity CDF: range, monotonicity and the no-transmission atom") {
    const auto t = table_n(27);
    const double f0 =
        analytic::complexity_cdf(kParams, t, 1.0, kRayleigh10, 0.0,
                                 analytic::CdfConditioning::unconditioned);
    // The mass at zero is the sub-threshold region plus the deep tail of the
    // top interval where the model clamps at zero (gap >= G, i.e. SNR beyond
    // 2^(R_N + G) - 1). The tail term is ~3e-9 here, so getting agreement to
    // 1e-9 relative confirms both pieces are handled.
    const double g = std::sqrt(decoder_model::g_squared(kParams));
    const double clamp_edge = std::exp2(t.rate(t.size()) + g) - 1.0;
    const double expected_f0 = channel::snr_cdf(kRayleigh10, t.first_threshold()) +
                               (1.0 - channel::snr_cdf(kRayleigh10, clamp_edge));
    CHECK(rel_dev(f0, expected_f0) < 1e-9);
    double prev = 0.0;
    for (double c = 0.0; c <= 40.0; c += 0.25) {
        const double f = analytic::complexity_cdf(kParams, t, 1.0, kRayleigh10, c,
                                                  analytic::CdfConditioning::unconditioned);
        CHECK(f >= prev - 1e-13);
        CHECK(f >= 0.0);
        CHECK(f <= 1.0 + 1e-12);
        prev = f;
    }
    CHECK(abs_dev(prev, 1.0) < 1e-6);
    // Conditioned variant rescales by the transmission probability.
    const double c_mid = 6.0;
    const double p_tx = 1.0 - channel::snr_cdf(kRayleigh10, t.first_threshold());
    const double cond = analytic::complexity_cdf(kParams, t, 1.0, kRayleigh10, c_mid);
    const double unc = analytic::complexity_cdf(kParams, t, 1.0, kRayleigh10, c_mid,
                                                analytic::CdfConditioning::unconditioned);
    CHECK(rel_dev(unc, (1.0 - p_tx) + p_tx * cond) < 1e-12);
    CHECK_THROWS_AS(analytic::complexity_cdf(kParams, t, 1.0, kRayleigh10, -1.0),
                    std::domain_error);
}

TEST_CASE("expected rate: frozen values and monotone decrease in the back-off") {
    const double m01 = mcs::db_to_linear(0.1);
    CHECK(rel_dev(analytic::average_rate(table_n(10), m01, kRayleigh10),
                  2.4871032111758438) < 1e-10);
    CHECK(rel_dev(analytic::average_rate(table_n(50), m01, kRayleigh10),
                  2.7598690269731114) < 1e-10);
    double prev = kInf;
    for (double mdb = 0.0; mdb <= 1.0; mdb += 0.1) {
        const double r = analytic::average_rate(table_n(27), mcs::db_to_linear(mdb),
                                                kRayleigh10);
        CHECK(r <= prev + 1e-13);
        prev = r;
    }
}

TEST_CASE("outage complexity decreases with the back-off margin") {
    double prev = kInf;
    for (double mdb = 0.0; mdb <= 1.0; mdb += 0.1) {
        const double c = analytic::outage_complexity_single(
            kParams, table_n(27), mcs::db_to_linear(mdb), kRayleigh10, 0.1);
        CHECK(c <= prev + 1e-12);
        prev = c;
    }
}

TEST_CASE("position-averaged moments: frozen values and law-of-total-variance split") {
    const auto m = analytic::channel_moments(kParams, table_n(27), 1.0, kPathLoss);
    CHECK(rel_dev(m.mean, 4.4799816279750111) < 1e-8);
    CHECK(rel_dev(m.variance_total, 11.034196531615439) < 1e-8);
    CHECK(rel_dev(m.variance_within, 7.624464792422561) < 1e-8);
    // Within-position variance can never exceed the total variance, and the
    // second moment ties the two readings together.
    CHECK(m.variance_within <= m.variance_total);
    CHECK(rel_dev(m.second_moment, m.variance_total + m.mean * m.mean) < 1e-10);
    // Fixed Rayleigh has no between-position spread.
    const auto f = analytic::channel_moments(kParams, table_n(27), 1.0, kRayleigh10);
    CHECK(rel_dev(f.variance_within, f.variance_total) < 1e-12);
}

TEST_CASE("pooled budgets: frozen values, round trip and limits") {
    const auto m = analytic::channel_moments(kParams, table_n(27), 1.0, kPathLoss);
    CHECK(rel_dev(analytic::outage_complexity_clt(m.mean, m.variance_within, 0.1, 100.0),
                  3.3640402650808272) < 1e-9);
    CHECK(rel_dev(analytic::outage_complexity_asymptotic(m.mean, m.variance_within, 0.1),
                  3.2124505300175823) < 1e-9);
    // Round trip through the pooled outage probability.
    for (double eps : {0.01, 0.1, 0.3}) {
        for (double nc : {1.0, 7.0, 100.0, 10000.0}) {
            const double c = analytic::outage_complexity_clt(5.0, 4.0, eps, nc);
            const double eps_sys = analytic::computational_outage_prob(5.0, 4.0, nc, c);
            CHECK(abs_dev(eps_sys, -std::expm1(nc * std::log1p(-eps))) < 1e-9);
        }
    }
    // Nonincreasing in the pool size; converges to the asymptote.
    double prev = kInf;
    for (double nc : {1.0, 2.0, 5.0, 20.0, 100.0, 1e4, 1e6}) {
        const double c = analytic::outage_complexity_clt(m.mean, m.variance_within, 0.1, nc);
        CHECK(c <= prev);
        prev = c;
    }
    CHECK(abs_dev(prev, analytic::outage_complexity_asymptotic(m.mean, m.variance_within,
                                                               0.1)) < 1e-3);
    // Degenerate variance pins the budget at the mean.
    CHECK(analytic::outage_complexity_clt(5.0, 0.0, 0.1, 10.0) == 5.0);
    // Per-cell constraint complement.
    CHECK(rel_dev(analytic::per_cell_constraint(0.1, 2.0), 0.19) < 1e-14);
}

TEST_CASE("pooling gain: frozen values, normalization and monotonicity") {
    const auto t = table_n(27);
    const auto g1 = analytic::computational_gain(kParams, t, 1.0, kPathLoss, 0.1, 1.0);
    CHECK(g1.value_clt == 1.0);  // per definition at a single cell
    CHECK(rel_dev(g1.numerator_exact, 9.1807783511876551) < 1e-9);
    const auto g2 = analytic::computational_gain(kParams, t, 1.0, kPathLoss, 0.1, 2.0);
    CHECK(rel_dev(g2.value, 1.4821886348359454) < 1e-9);
    const auto ga = analytic::computational_gain(kParams, t, 1.0, kPathLoss, 0.1, kInf);
    CHECK(rel_dev(ga.value, 2.8578738459631339) < 1e-9);
    double prev = 0.0;
    for (double nc : {1.0, 2.0, 5.0, 20.0, 100.0, 1000.0}) {
        const auto g = analytic::computational_gain(kParams, t, 1.0, kPathLoss, 0.1, nc);
        CHECK(g.value >= prev);
        CHECK(g.value_clt >= 1.0 - 1e-12);
        CHECK(g.value <= ga.value + 1e-9);
        prev = g.value;
    }
}

TEST_CASE("pooling diversity: frozen values and degenerate sentinel") {
    const auto t = table_n(27);
    const auto d1 = analytic::computational_diversity(kParams, t, 1.0, kPathLoss, 0.1);
    CHECK(rel_dev(d1.value, 0.48838623733349351) < 1e-8);
    CHECK(rel_dev(d1.percell_exact_budget, 1.1063721031130402) < 1e-8);
    const auto d3 = analytic::computational_diversity(kParams, t, 1.0, kPathLoss, 1e-3);
    CHECK(rel_dev(d3.value, 2.2594367500490264) < 1e-8);
    CHECK(rel_dev(d3.percell_exact_budget, 7.721965281296761) < 1e-8);
    CHECK(!d1.infinite);
    // A back-off so large that no scheme ever activates: zero variance, so
    // the decay rate diverges.
    const auto dd = analytic::computational_diversity(kParams, t, 1e9, kRayleigh10, 0.1);
    CHECK(dd.infinite);
}

TEST_CASE("complexity-rate tradeoff: frozen values and source equivalence") {
    const auto t = table_n(27);
    CHECK(rel_dev(analytic::complexity_rate_tradeoff(kParams, t, kPathLoss, 0.1, 2.0, 1.0),
                  0.022770240533909244) < 1e-8);
    CHECK(rel_dev(analytic::complexity_rate_tradeoff(kParams, t, kPathLoss, 0.1, kInf,
                                                     mcs::db_to_linear(0.9)),
                  0.12124359792768347) < 1e-8);
    // On a fixed Rayleigh channel the reference link IS the channel, so both
    // numerator sources coincide.
    const double a = analytic::complexity_rate_tradeoff(kParams, t, kRayleigh10, 0.1, 2.0,
                                                        1.0, analytic::RateSource::rayleigh_reference);
    const double b = analytic::complexity_rate_tradeoff(kParams, t, kRayleigh10, 0.1, 2.0,
                                                        1.0, analytic::RateSource::channel_rate);
    CHECK(rel_dev(a, b) < 1e-12);
    CHECK(a > 0.0);
}

TEST_CASE("metrics summary: method tags follow the configuration") {
    const auto fixed = analytic::compute_metrics(kParams, table_n(10), 1.0, kRayleigh10,
                                                 0.1, 1.0);
    CHECK(fixed.expected_complexity_method == analytic::MethodTag::closed_form);
    CHECK(fixed.variance_complexity_method == analytic::MethodTag::closed_form);
    CHECK(fixed.outage_complexity_method == analytic::MethodTag::cdf_inversion);
    CHECK(rel_dev(fixed.expected_complexity, 5.5047302831467722) < 1e-10);
    CHECK(rel_dev(fixed.outage_complexity, 10.064298944855182) < 1e-9);

    const auto pooled = analytic::compute_metrics(kParams, table_n(27), 1.0, kPathLoss,
                                                  0.1, 100.0);
    CHECK(pooled.expected_complexity_method == analytic::MethodTag::quadrature);
    CHECK(pooled.outage_complexity_method == analytic::MethodTag::clt);
    CHECK(rel_dev(pooled.outage_complexity, 3.3640402650808272) < 1e-9);
    CHECK(std::string(analytic::method_tag_name(analytic::MethodTag::clt)) == "clt");
}

TEST_CASE("degenerate and error paths") {
    CHECK_THROWS_AS(analytic::expected_complexity_fixed(kParams, table_n(10), 0.5, 10.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(analytic::outage_complexity_single(kParams, table_n(10), 1.0,
                                                       kRayleigh10, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(analytic::outage_complexity_clt(5.0, 4.0, 1.0, 2.0),
                    std::invalid_argument);
    // Infinite mean SNR: every draw lands beyond the last threshold, in the
    // clamp region, so the conditional moments vanish.
    const auto m = analytic::true_conditional_moments(kParams, table_n(10), 1.0, kInf);
    CHECK(m.mean == 0.0);
    CHECK(m.second_moment == 0.0);
}

}  // TEST_SUITE
