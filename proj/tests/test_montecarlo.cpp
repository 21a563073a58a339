#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "cran/analytic.hpp"
#include "cran/channel.hpp"
#include "cran/montecarlo.hpp"
#include "cran/rng.hpp"
#include "test_util.hpp"

using namespace cran;
using testutil::abs_dev;
using testutil::rel_dev;

namespace {

montecarlo::SimConfig base_config() {
    montecarlo::SimConfig cfg;
    cfg.table = mcs::make_equally_spaced_table(27, -6.4, 17.6, 0.2);
    cfg.channel = channel::ChannelSpec{channel::FixedRayleigh{10.0}};
    cfg.n_trials = 40000;
    cfg.n_c = 4;
    cfg.seed = 7;
    return cfg;
}

}  // namespace

TEST_SUITE("montecarlo") {

TEST_CASE("results are byte-identical across worker counts and vs the serial path") {
    const auto cfg = base_config();
    const auto serial = montecarlo::run_serial(cfg);
    const auto w1 = montecarlo::run(cfg, 1);
    const auto w4 = montecarlo::run(cfg, 4);
    const std::string js = montecarlo::to_json(cfg, serial);
    CHECK(js == montecarlo::to_json(cfg, w1));
    CHECK(js == montecarlo::to_json(cfg, w4));
    // And a different seed changes the outcome (the stream is really keyed).
    auto cfg2 = cfg;
    cfg2.seed = 8;
    CHECK(montecarlo::to_json(cfg2, montecarlo::run(cfg2, 4)) != js);
}

TEST_CASE("trial statistics agree with quadrature moments of the model") {
    auto cfg = base_config();
    cfg.n_trials = 200000;
    cfg.n_c = 1;
    const auto s = montecarlo::run(cfg, 0);
    const auto m = analytic::channel_moments(cfg.params, cfg.table, cfg.margin, cfg.channel);
    // Unconditioned mean/variance within a few sampling standard errors.
    const double se_mean = std::sqrt(m.variance_total / static_cast<double>(cfg.n_trials));
    CHECK(abs_dev(s.mean_complexity, m.mean) < 5.0 * se_mean);
    CHECK(rel_dev(s.var_complexity, m.variance_total) < 0.03);
    // Transmission counter matches the sub-threshold mass.
    const double p_tx = 1.0 - channel::snr_cdf(cfg.channel, cfg.table.first_threshold());
    CHECK(abs_dev(static_cast<double>(s.n_transmitting) / static_cast<double>(s.n_trials),
                  p_tx) < 0.005);
}

TEST_CASE("empirical complexity law matches the analytic CDF (KS)") {
    auto cfg = base_config();
    cfg.n_trials = 100000;
    cfg.n_c = 1;
    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(cfg.n_trials));
    for (std::int64_t i = 0; i < cfg.n_trials; ++i) {
        rng::TrialStream stream(cfg.seed, static_cast<std::uint64_t>(i));
        const double g = channel::sample_snr(cfg.channel, stream);
        samples.push_back(mcs::below_first_threshold(g, cfg.margin, cfg.table)
                              ? 0.0
                              : decoder_model::complexity(g, cfg.margin, cfg.params,
                                                          cfg.table));
    }
    std::sort(samples.begin(), samples.end());
    CHECK(testutil::ks_complexity(samples, cfg.params, cfg.table, cfg.margin, cfg.channel) <
          0.015);
}

TEST_CASE("group-mean budget approaches the Gaussian budget as cells pool") {
    auto cfg = base_config();
    cfg.n_trials = 400000;
    cfg.n_c = 100;
    cfg.eps_hat = 0.1;
    const auto s = montecarlo::run(cfg, 0);
    const auto m = analytic::channel_moments(cfg.params, cfg.table, cfg.margin, cfg.channel);
    const double clt = analytic::outage_complexity_clt(m.mean, m.variance_within, cfg.eps_hat,
                                                       static_cast<double>(cfg.n_c));
    CHECK(rel_dev(s.outage_complexity_percell, clt) < 0.05);
    CHECK(rel_dev(s.outage_complexity_group_sum,
                  s.outage_complexity_percell * static_cast<double>(cfg.n_c)) < 1e-12);
    // The budget quantile is carried in the quantile list too.
    const double p_budget = std::pow(1.0 - cfg.eps_hat, static_cast<double>(cfg.n_c));
    bool found = false;
    for (const auto& q : s.group_sum_quantiles) {
        if (std::fabs(q.probability - p_budget) < 1e-12) {
            found = true;
            CHECK(rel_dev(q.value, s.outage_complexity_group_sum) < 1e-12);
        }
    }
    CHECK(found);
}

TEST_CASE("data-driven mode: a point-mass pmf reproduces the deterministic cost") {
    montecarlo::SimConfig cfg = base_config();
    cfg.mode = montecarlo::SimMode::lte_data_driven;
    cfg.n_trials = 20000;
    cfg.n_c = 1;
    cfg.geometry = decoder_model::TransportBlockGeometry{1320, 6, 3300, 8};
    decoder_model::IterationPmf pmf;
    pmf.l_max = 8;
    for (int k = 1; k <= cfg.table.size(); ++k) {
        decoder_model::IterationPmfPoint pt;
        pt.mcs_index = k;
        pt.snr_db = mcs::linear_to_db(cfg.table.threshold(k)) + 0.5;
        pt.eps_cb = 0.0;
        pt.pmf.assign(8, 0.0);
        pt.pmf[4] = 1.0;  // always exactly 5 iterations
        pmf.points.push_back(pt);
    }
    cfg.pmf = pmf;
    const auto s = montecarlo::run(cfg, 0);
    // Every transmitting trial costs d_k * c_k * 5 / s_re.
    const double want = 1320.0 * 6.0 * 5.0 / 3300.0;
    CHECK(rel_dev(s.mean_complexity_tx, want) < 1e-10);
    CHECK(std::fabs(s.var_complexity_tx) < 1e-9);
    // All-outage draws pin the cost at the iteration cap instead.
    for (auto& pt : cfg.pmf->points) pt.eps_cb = 1.0;
    const auto s2 = montecarlo::run(cfg, 0);
    CHECK(rel_dev(s2.mean_complexity_tx, 1320.0 * 6.0 * 8.0 / 3300.0) < 1e-10);
}

TEST_CASE("interpolated quantiles and confidence intervals") {
    const std::vector<double> sorted{1.0, 2.0, 3.0, 4.0};
    CHECK(montecarlo::quantile_sorted(sorted, 0.0) == 1.0);
    CHECK(montecarlo::quantile_sorted(sorted, 1.0) == 4.0);
    CHECK(abs_dev(montecarlo::quantile_sorted(sorted, 0.5), 2.5) < 1e-15);
    CHECK(abs_dev(montecarlo::quantile_sorted(sorted, 1.0 / 3.0), 2.0) < 1e-12);

    const auto mi = montecarlo::mean_confidence(10.0, 4.0, 400, 0.95);
    CHECK(abs_dev(mi.upper - mi.lower, 2.0 * 1.9599639845400545 * 0.1) < 1e-9);
    CHECK(abs_dev(0.5 * (mi.upper + mi.lower), 10.0) < 1e-12);

    std::vector<double> big;
    for (int i = 1; i <= 1000; ++i) big.push_back(static_cast<double>(i));
    const auto qi = montecarlo::quantile_confidence(big, 0.9, 0.95);
    CHECK(qi.lower <= montecarlo::quantile_sorted(big, 0.9));
    CHECK(qi.upper >= montecarlo::quantile_sorted(big, 0.9));
    CHECK(qi.upper - qi.lower < 60.0);  // ~ +-2 sd of the rank, sd ~ 9.5
}

TEST_CASE("configuration validation names the violated requirement") {
    auto cfg = base_config();
    cfg.n_trials = 41;  // not divisible by n_c = 4
    CHECK_THROWS_AS(montecarlo::validate_config(cfg), std::invalid_argument);
    cfg = base_config();
    cfg.eps_hat = 0.0;
    CHECK_THROWS_AS(montecarlo::validate_config(cfg), std::invalid_argument);
    cfg = base_config();
    cfg.mode = montecarlo::SimMode::lte_data_driven;  // pmf and geometry missing
    CHECK_THROWS_AS(montecarlo::validate_config(cfg), std::invalid_argument);
    cfg = base_config();
    cfg.margin = 0.0;
    CHECK_THROWS_AS(montecarlo::validate_config(cfg), std::invalid_argument);
}

TEST_CASE("deterministic trial streams: keyed by seed and trial index") {
    rng::TrialStream a(5, 17), b(5, 17), c(5, 18), d(6, 17);
    const double ua = a.next_uniform();
    CHECK(ua == b.next_uniform());
    CHECK(ua != c.next_uniform());
    CHECK(ua != d.next_uniform());
    // Uniform draws live in [0, 1).
    rng::TrialStream s(123, 0);
    for (int i = 0; i < 10000; ++i) {
        const double u = s.next_uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    // Exponential draws have the requested mean (law of large numbers).
    rng::TrialStream e(321, 0);
    double acc = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) acc += e.next_exponential(3.0);
    CHECK(rel_dev(acc / n, 3.0) < 0.02);
}

}  // TEST_SUITE
