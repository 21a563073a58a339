#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cran/channel.hpp"
#include "cran/decoder_model.hpp"
#include "cran/mcs.hpp"

namespace cran::montecarlo {

enum class SimMode { model_driven, lte_data_driven };

struct SimConfig {
    channel::ChannelSpec channel = channel::FixedRayleigh{10.0};
    mcs::McsTable table;
    decoder_model::ComplexityModelParams params;
    double margin = 1.0;           // linear back-off factor, > 0
    std::int64_t n_trials = 1000000;
    std::int64_t n_c = 1;          // cells aggregated per group
    double eps_hat = 0.1;          // outage target used for the empirical budget
    std::uint64_t seed = 1;
    SimMode mode = SimMode::model_driven;
    bool exact_form = false;       // model-driven only: use the un-expanded complexity form
    std::optional<decoder_model::IterationPmf> pmf;               // lte_data_driven only
    std::optional<decoder_model::TransportBlockGeometry> geometry;  // lte_data_driven only
};

// Throws std::invalid_argument naming the violated requirement.
void validate_config(const SimConfig& cfg);

struct QuantilePoint {
    double probability = 0.0;
    double value = 0.0;
};

struct TrialStats {
    // Unconditioned statistics: non-transmitting trials contribute zero
    // complexity and zero rate.
    double mean_complexity = 0.0;
    double var_complexity = 0.0;  // unbiased sample variance
    double mean_rate = 0.0;
    // Conditioned on transmission (trials at or below the first threshold
    // excluded).
    double mean_complexity_tx = 0.0;
    double var_complexity_tx = 0.0;
    // Empirical per-cell processing budget: the quantile of per-group mean
    // complexity at probability (1 - eps_hat)^n_c, so that a group of n_c
    // independent cells meets the per-cell outage target.
    double outage_complexity_percell = 0.0;
    // Same budget expressed for the whole group (n_c times the per-cell one).
    double outage_complexity_group_sum = 0.0;
    // Quantiles of the group-sum complexity (probabilities include the
    // standard set plus the budget probability above).
    std::vector<QuantilePoint> group_sum_quantiles;
    std::int64_t n_trials = 0;
    std::int64_t n_groups = 0;
    std::int64_t n_transmitting = 0;
    std::uint64_t seed = 0;
};

// Parallel driver. `workers` <= 0 uses the runtime default thread count.
// Results are byte-identical for any worker count and identical to
// run_serial: every trial draws from its own counter-derived stream and the
// reduction is performed serially in trial order.
TrialStats run(const SimConfig& cfg, int workers = 0);

// Single-threaded reference implementation (kept for differential testing).
TrialStats run_serial(const SimConfig& cfg);

// Interpolated order statistic (linear interpolation between adjacent order
// statistics) on an ascending sample; probability is clamped to [0,1].
double quantile_sorted(const std::vector<double>& sorted, double probability);

struct Interval {
    double lower = 0.0;
    double upper = 0.0;
};

// Normal-approximation two-sided confidence interval for a sample mean.
Interval mean_confidence(double mean, double variance, std::int64_t n, double level);

// Distribution-free confidence interval for a quantile from binomial
// order-statistic rank bounds (normal approximation to the ranks).
Interval quantile_confidence(const std::vector<double>& sorted, double probability,
                             double level);

// Stable-key JSON rendering of the result (keys are emitted in sorted order,
// values use shortest round-trip formatting, so output is deterministic).
std::string to_json(const SimConfig& cfg, const TrialStats& stats);

}  // namespace cran::montecarlo
