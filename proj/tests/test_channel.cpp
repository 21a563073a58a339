#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "cran/channel.hpp"
#include "cran/quadrature.hpp"
#include "cran/rng.hpp"
#include "test_util.hpp"

using namespace cran;
using testutil::abs_dev;
using testutil::rel_dev;

TEST_SUITE("channel") {

TEST_CASE("fixed Rayleigh law: CDF, density mass and hazard") {
    const channel::ChannelSpec spec{channel::FixedRayleigh{10.0}};
    CHECK(channel::snr_cdf(spec, 0.0) == 0.0);
    CHECK(rel_dev(channel::snr_cdf(spec, 10.0), 1.0 - std::exp(-1.0)) < 1e-14);
    auto pdf = [&](double g) { return channel::snr_pdf(spec, g); };
    const double mass = quadrature::integrate(pdf, 0.0, 400.0, 1e-11).value +
                        (1.0 - channel::snr_cdf(spec, 400.0));
    CHECK(abs_dev(mass, 1.0) < 1e-6);
    // pdf = (1 - CDF)/gamma_bar for the exponential law.
    for (double g : {0.1, 1.0, 7.0, 30.0}) {
        CHECK(rel_dev(channel::snr_pdf(spec, g),
                      (1.0 - channel::snr_cdf(spec, g)) / 10.0) < 1e-13);
    }
}

TEST_CASE("position-averaged law: closed form against direct quadrature") {
    const channel::PathLossFpc pl{1.0, 2.0, 0.1};
    const channel::ChannelSpec spec{pl};
    const double expo = pl.eta * (1.0 - pl.s);
    for (double g : {0.01, 0.3, 1.0, 4.0, 20.0, 100.0}) {
        auto integrand = [&](double w) {
            return 2.0 * w * std::exp(-(g / pl.gamma_ud) * std::pow(w, expo));
        };
        const double want = 1.0 - quadrature::integrate(integrand, 0.0, 1.0, 1e-12).value;
        CAPTURE(g);
        CHECK(abs_dev(channel::snr_cdf(spec, g), want) < 1e-9);
    }
    // Density integrates to one (power tail completed in closed form).
    auto pdf = [&](double g) { return channel::snr_pdf(spec, g); };
    const double mass = quadrature::integrate(pdf, 0.0, 2000.0, 1e-10).value +
                        (1.0 - channel::snr_cdf(spec, 2000.0));
    CHECK(abs_dev(mass, 1.0) < 1e-6);
}

TEST_CASE("conditional mean SNR follows the compensated path loss") {
    const channel::PathLossFpc pl{2.5, 3.0, 0.4};
    for (double w : {0.2, 0.5, 0.9, 1.0}) {
        CHECK(rel_dev(channel::conditional_mean_snr(pl, w),
                      2.5 * std::pow(w, -3.0 * (1.0 - 0.4))) < 1e-14);
    }
}

TEST_CASE("full compensation collapses the law onto the fixed Rayleigh one") {
    const channel::PathLossFpc nearly{3.0, 2.0, 0.999};
    const channel::ChannelSpec spec{nearly};
    const channel::ChannelSpec fixed{channel::FixedRayleigh{3.0}};
    double worst = 0.0;
    for (double g = 0.1; g < 30.0; g += 0.37) {
        worst = std::max(worst, std::fabs(channel::snr_cdf(spec, g) -
                                          channel::snr_cdf(fixed, g)));
    }
    CHECK(worst < 1e-2);
    CHECK(channel::is_degenerate_fpc(channel::PathLossFpc{3.0, 2.0, 1.0 - 1e-9}));
    CHECK(!channel::is_degenerate_fpc(nearly));
}

TEST_CASE("sampler reproduces its own law (KS over 200k draws)") {
    for (const channel::ChannelSpec& spec :
         {channel::ChannelSpec{channel::FixedRayleigh{10.0}},
          channel::ChannelSpec{channel::PathLossFpc{1.0, 2.0, 0.1}}}) {
        std::vector<double> draws;
        const int n = 200000;
        draws.reserve(n);
        for (int i = 0; i < n; ++i) {
            rng::TrialStream stream(99, static_cast<std::uint64_t>(i));
            draws.push_back(channel::sample_snr(spec, stream));
        }
        std::sort(draws.begin(), draws.end());
        const double ks = testutil::ks_continuous(
            draws, [&](double g) { return channel::snr_cdf(spec, g); });
        CHECK(ks < 0.01);
    }
}

TEST_CASE("specification validation") {
    CHECK_NOTHROW(channel::validate_spec(channel::ChannelSpec{channel::FixedRayleigh{1.0}}));
    CHECK_THROWS_AS(channel::validate_spec(channel::ChannelSpec{channel::FixedRayleigh{0.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        channel::validate_spec(channel::ChannelSpec{channel::PathLossFpc{1.0, -2.0, 0.1}}),
        std::invalid_argument);
    CHECK_THROWS_AS(
        channel::validate_spec(channel::ChannelSpec{channel::PathLossFpc{1.0, 2.0, 1.5}}),
        std::invalid_argument);
    CHECK_THROWS_AS(
        channel::validate_spec(channel::ChannelSpec{channel::PathLossFpc{1.0, 2.0, 1.0}}),
        std::invalid_argument);
}

}  // TEST_SUITE
