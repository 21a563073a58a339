#include "cran/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "json.hpp"

#include "cran/rng.hpp"
#include "cran/specfun.hpp"

namespace cran::montecarlo {

namespace {

struct TrialOutcome {
    double complexity = 0.0;
    double rate = 0.0;
    bool transmitting = false;
};

int draw_iterations(const std::vector<double>& pmf, double u) {
    double cum = 0.0;
    for (std::size_t i = 0; i < pmf.size(); ++i) {
        cum += pmf[i];
        if (u <= cum) return static_cast<int>(i) + 1;
    }
    return static_cast<int>(pmf.size());
}

const decoder_model::IterationPmfPoint* nearest_pmf_point(
    const decoder_model::IterationPmf& pmf, int mcs_index, double snr_db) {
    const decoder_model::IterationPmfPoint* best = nullptr;
    double best_dist = std::numeric_limits<double>::infinity();
    for (const auto& pt : pmf.points) {
        if (pt.mcs_index != mcs_index) continue;
        const double d = std::fabs(pt.snr_db - snr_db);
        if (d < best_dist) {
            best_dist = d;
            best = &pt;
        }
    }
    return best;
}

TrialOutcome simulate_trial(const SimConfig& cfg, std::int64_t t) {
    rng::TrialStream stream(cfg.seed, static_cast<std::uint64_t>(t));
    const double gamma = channel::sample_snr(cfg.channel, stream);
    const mcs::RateSelection sel = mcs::rate_select(gamma, cfg.margin, cfg.table);
    if (sel.below_first_threshold) return {};
    TrialOutcome out;
    out.transmitting = true;
    out.rate = sel.rate_bits_pcu;
    if (cfg.mode == SimMode::model_driven) {
        out.complexity =
            decoder_model::complexity(gamma, cfg.margin, cfg.params, cfg.table, cfg.exact_form);
    } else {
        const decoder_model::TransportBlockGeometry& geom = *cfg.geometry;
        const decoder_model::IterationPmfPoint* pt =
            nearest_pmf_point(*cfg.pmf, sel.index, mcs::linear_to_db(gamma));
        // validate_config guarantees a point exists for every table index.
        std::int64_t iter_sum = 0;
        for (int cb = 0; cb < geom.c_k; ++cb) {
            if (stream.next_uniform() < pt->eps_cb) {
                iter_sum += cfg.pmf->l_max;  // early-termination failure: worst case
            } else {
                iter_sum += draw_iterations(pt->pmf, stream.next_uniform());
            }
        }
        out.complexity = static_cast<double>(geom.d_k) * static_cast<double>(iter_sum) /
                         static_cast<double>(geom.s_re);
    }
    return out;
}

TrialStats reduce(const SimConfig& cfg, const std::vector<double>& comp,
                  const std::vector<double>& rate, const std::vector<unsigned char>& tx) {
    TrialStats s;
    const std::int64_t n = static_cast<std::int64_t>(comp.size());
    s.n_trials = n;
    s.seed = cfg.seed;
    s.n_groups = n / cfg.n_c;

    double sum_c = 0.0, sum_r = 0.0, sum_tx = 0.0;
    std::int64_t n_tx = 0;
    for (std::int64_t i = 0; i < n; ++i) {
        sum_c += comp[i];
        sum_r += rate[i];
        if (tx[i]) {
            ++n_tx;
            sum_tx += comp[i];
        }
    }
    s.mean_complexity = sum_c / static_cast<double>(n);
    s.mean_rate = sum_r / static_cast<double>(n);
    s.n_transmitting = n_tx;

    double ss = 0.0, ss_tx = 0.0;
    const double mean_tx = n_tx > 0 ? sum_tx / static_cast<double>(n_tx) : 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        const double d = comp[i] - s.mean_complexity;
        ss += d * d;
        if (tx[i]) {
            const double dt = comp[i] - mean_tx;
            ss_tx += dt * dt;
        }
    }
    s.var_complexity = n > 1 ? ss / static_cast<double>(n - 1) : 0.0;
    s.mean_complexity_tx = mean_tx;
    s.var_complexity_tx = n_tx > 1 ? ss_tx / static_cast<double>(n_tx - 1) : 0.0;

    const double nc = static_cast<double>(cfg.n_c);
    std::vector<double> group_means(static_cast<std::size_t>(s.n_groups));
    for (std::int64_t g = 0; g < s.n_groups; ++g) {
        double acc = 0.0;
        for (std::int64_t i = g * cfg.n_c; i < (g + 1) * cfg.n_c; ++i) acc += comp[i];
        group_means[static_cast<std::size_t>(g)] = acc / nc;
    }
    std::sort(group_means.begin(), group_means.end());

    const double p_budget = std::pow(1.0 - cfg.eps_hat, nc);
    s.outage_complexity_percell = quantile_sorted(group_means, p_budget);
    s.outage_complexity_group_sum = nc * s.outage_complexity_percell;
    for (const double p : {0.5, 0.75, 0.9, 0.95, 0.99, p_budget}) {
        s.group_sum_quantiles.push_back({p, nc * quantile_sorted(group_means, p)});
    }
    return s;
}

}  // namespace

void validate_config(const SimConfig& cfg) {
    channel::validate_spec(cfg.channel);
    mcs::validate_table(cfg.table);
    decoder_model::validate_params(cfg.params);
    if (!(cfg.margin > 0.0)) {
        throw std::invalid_argument("sim config invalid: margin must be > 0");
    }
    if (cfg.n_c < 1) throw std::invalid_argument("sim config invalid: n_c must be >= 1");
    if (cfg.n_trials < cfg.n_c) {
        throw std::invalid_argument("sim config invalid: n_trials must be >= n_c");
    }
    if (cfg.n_trials % cfg.n_c != 0) {
        throw std::invalid_argument("sim config invalid: n_trials must be a multiple of n_c");
    }
    if (!(cfg.eps_hat > 0.0 && cfg.eps_hat < 1.0)) {
        throw std::invalid_argument("sim config invalid: eps_hat must be in (0,1)");
    }
    if (cfg.mode == SimMode::lte_data_driven) {
        if (!cfg.pmf.has_value()) {
            throw std::invalid_argument("sim config invalid: lte mode requires an iteration pmf");
        }
        if (!cfg.geometry.has_value()) {
            throw std::invalid_argument(
                "sim config invalid: lte mode requires a transport block geometry");
        }
        decoder_model::validate_pmf(*cfg.pmf);
        decoder_model::validate_geometry(*cfg.geometry);
        if (cfg.geometry->l_max != cfg.pmf->l_max) {
            throw std::invalid_argument(
                "sim config invalid: geometry l_max does not match pmf l_max");
        }
        for (int k = 1; k <= cfg.table.size(); ++k) {
            if (nearest_pmf_point(*cfg.pmf, k, 0.0) == nullptr) {
                throw std::invalid_argument(
                    "sim config invalid: iteration pmf has no point for mcs index " +
                    std::to_string(k));
            }
        }
    }
}

TrialStats run(const SimConfig& cfg, int workers) {
    validate_config(cfg);
    const std::int64_t n = cfg.n_trials;
    std::vector<double> comp(static_cast<std::size_t>(n));
    std::vector<double> rate(static_cast<std::size_t>(n));
    std::vector<unsigned char> tx(static_cast<std::size_t>(n));
#ifdef _OPENMP
    const int nthreads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(nthreads)
    for (std::int64_t t = 0; t < n; ++t) {
        const TrialOutcome o = simulate_trial(cfg, t);
        comp[static_cast<std::size_t>(t)] = o.complexity;
        rate[static_cast<std::size_t>(t)] = o.rate;
        tx[static_cast<std::size_t>(t)] = o.transmitting ? 1 : 0;
    }
#else
    (void)workers;
    for (std::int64_t t = 0; t < n; ++t) {
        const TrialOutcome o = simulate_trial(cfg, t);
        comp[static_cast<std::size_t>(t)] = o.complexity;
        rate[static_cast<std::size_t>(t)] = o.rate;
        tx[static_cast<std::size_t>(t)] = o.transmitting ? 1 : 0;
    }
#endif
    return reduce(cfg, comp, rate, tx);
}

TrialStats run_serial(const SimConfig& cfg) {
    validate_config(cfg);
    const std::int64_t n = cfg.n_trials;
    std::vector<double> comp(static_cast<std::size_t>(n));
    std::vector<double> rate(static_cast<std::size_t>(n));
    std::vector<unsigned char> tx(static_cast<std::size_t>(n));
    for (std::int64_t t = 0; t < n; ++t) {
        const TrialOutcome o = simulate_trial(cfg, t);
        comp[static_cast<std::size_t>(t)] = o.complexity;
        rate[static_cast<std::size_t>(t)] = o.rate;
        tx[static_cast<std::size_t>(t)] = o.transmitting ? 1 : 0;
    }
    return reduce(cfg, comp, rate, tx);
}

double quantile_sorted(const std::vector<double>& sorted, double probability) {
    if (sorted.empty()) throw std::invalid_argument("quantile_sorted: empty sample");
    const double p = std::clamp(probability, 0.0, 1.0);
    const double h = p * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

Interval mean_confidence(double mean, double variance, std::int64_t n, double level) {
    if (n < 1) throw std::invalid_argument("mean_confidence: n must be >= 1");
    if (!(variance >= 0.0)) throw std::invalid_argument("mean_confidence: variance must be >= 0");
    if (!(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("mean_confidence: level must be in (0,1)");
    }
    const double z = std::sqrt(2.0) * specfun::inv_erf(level).value;
    const double half = z * std::sqrt(variance / static_cast<double>(n));
    return {mean - half, mean + half};
}

Interval quantile_confidence(const std::vector<double>& sorted, double probability,
                             double level) {
    if (sorted.empty()) throw std::invalid_argument("quantile_confidence: empty sample");
    if (!(probability > 0.0 && probability < 1.0)) {
        throw std::invalid_argument("quantile_confidence: probability must be in (0,1)");
    }
    if (!(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("quantile_confidence: level must be in (0,1)");
    }
    const double n = static_cast<double>(sorted.size());
    const double z = std::sqrt(2.0) * specfun::inv_erf(level).value;
    const double mid = n * probability;
    const double sd = std::sqrt(n * probability * (1.0 - probability));
    const auto clamp_rank = [&](double r) {
        return static_cast<std::size_t>(
            std::clamp(r, 1.0, n));  // 1-based order-statistic rank
    };
    const std::size_t lo = clamp_rank(std::floor(mid - z * sd));
    const std::size_t hi = clamp_rank(std::ceil(mid + z * sd) + 1.0);
    return {sorted[lo - 1], sorted[hi - 1]};
}

std::string to_json(const SimConfig& cfg, const TrialStats& stats) {
    nlohmann::json j;
    j["mean_complexity"] = stats.mean_complexity;
    j["var_complexity"] = stats.var_complexity;
    j["mean_rate"] = stats.mean_rate;
    j["mean_complexity_tx"] = stats.mean_complexity_tx;
    j["var_complexity_tx"] = stats.var_complexity_tx;
    j["outage_complexity_percell"] = stats.outage_complexity_percell;
    j["outage_complexity_group_sum"] = stats.outage_complexity_group_sum;
    nlohmann::json q = nlohmann::json::array();
    for (const QuantilePoint& qp : stats.group_sum_quantiles) {
        q.push_back({{"probability", qp.probability}, {"value", qp.value}});
    }
    j["quantiles"] = q;
    j["n_trials"] = stats.n_trials;
    j["n_groups"] = stats.n_groups;
    j["n_transmitting"] = stats.n_transmitting;
    j["n_c"] = cfg.n_c;
    j["eps_hat"] = cfg.eps_hat;
    j["margin_linear"] = cfg.margin;
    j["mode"] = cfg.mode == SimMode::model_driven ? "model_driven" : "lte_data_driven";
    j["seed"] = stats.seed;
    return j.dump(2) + "\n";
}

}  // namespace cran::montecarlo
