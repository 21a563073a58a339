#pragma once

// Shared helpers for the unit and acceptance suites.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "cran/analytic.hpp"
#include "cran/channel.hpp"
#include "cran/decoder_model.hpp"
#include "cran/mcs.hpp"

namespace testutil {

inline double rel_dev(double got, double want) {
    return std::fabs(got - want) / std::fabs(want);
}

inline double abs_dev(double got, double want) { return std::fabs(got - want); }

// Kolmogorov-Smirnov distance between an ascending sample and a continuous
// CDF evaluated through `cdf`.
template <typename Cdf>
double ks_continuous(const std::vector<double>& sorted, Cdf&& cdf) {
    const double n = static_cast<double>(sorted.size());
    double ks = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        ks = std::max(ks, std::fabs((static_cast<double>(i) + 1.0) / n - f));
        ks = std::max(ks, std::fabs(f - static_cast<double>(i) / n));
    }
    return ks;
}

// Kolmogorov-Smirnov distance between an ascending complexity sample and the
// unconditioned analytic complexity law, which has an atom at zero (the
// no-transmission mass). Ties are walked as blocks; the lower empirical step
// at the atom is compared against the left limit F(0-) = 0.
inline double ks_complexity(const std::vector<double>& sorted,
                            const cran::decoder_model::ComplexityModelParams& params,
                            const cran::mcs::McsTable& table, double margin,
                            const cran::channel::ChannelSpec& spec) {
    const double n = static_cast<double>(sorted.size());
    double ks = 0.0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
        const double f = cran::analytic::complexity_cdf(
            params, table, margin, spec, sorted[i],
            cran::analytic::CdfConditioning::unconditioned);
        const double f_minus = sorted[i] == 0.0 ? 0.0 : f;
        ks = std::max(ks, std::fabs((static_cast<double>(j) + 1.0) / n - f));
        ks = std::max(ks, std::fabs(f_minus - static_cast<double>(i) / n));
        i = j + 1;
    }
    return ks;
}

}  // namespace testutil
