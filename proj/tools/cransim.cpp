// Command-line experiment runner: analytic sweeps, Monte Carlo simulation and
// a self-contained numeric validation battery, emitting CSV or JSON.
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"

#include "cran/analytic.hpp"
#include "cran/channel.hpp"
#include "cran/config.hpp"
#include "cran/decoder_model.hpp"
#include "cran/mcs.hpp"
#include "cran/montecarlo.hpp"
#include "cran/quadrature.hpp"
#include "cran/rng.hpp"
#include "cran/specfun.hpp"

namespace {

using cran::analytic::CdfConditioning;
using cran::config::ParsedConfig;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt12(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct OutputTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

void write_csv(std::ostream& out, const OutputTable& t) {
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        out << (c ? "," : "") << t.columns[c];
    }
    out << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << (c ? "," : "") << fmt12(row[c]);
        }
        out << "\n";
    }
}

void write_json(std::ostream& out, const OutputTable& t, const nlohmann::json& metadata) {
    nlohmann::json j;
    j["metadata"] = metadata;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : t.rows) {
        nlohmann::json r;
        for (std::size_t c = 0; c < row.size(); ++c) r[t.columns[c]] = row[c];
        rows.push_back(r);
    }
    j["rows"] = rows;
    out << j.dump(2) << "\n";
}

// Evaluates one row per grid index in parallel; rows land at their grid
// position, so output order (and content) is independent of the worker count.
template <typename Fn>
std::vector<std::vector<double>> compute_rows(std::int64_t n, int workers, Fn&& fn) {
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(n));
    bool failed = false;
    std::string message;
#ifdef _OPENMP
    const int nt = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nt)
#endif
    for (std::int64_t i = 0; i < n; ++i) {
        bool skip;
#ifdef _OPENMP
#pragma omp critical
#endif
        skip = failed;
        if (skip) continue;
        try {
            rows[static_cast<std::size_t>(i)] = fn(i);
        } catch (const std::exception& e) {
#ifdef _OPENMP
#pragma omp critical
#endif
            {
                if (!failed) {
                    failed = true;
                    message = e.what();
                }
            }
        }
    }
    if (failed) throw std::runtime_error(message);
    return rows;
}

OutputTable experiment_sweep_snr(const ParsedConfig& cfg, int workers) {
    OutputTable t;
    t.columns = {"gamma_bar_db",
                 "expected_complexity_bmops_pcu",
                 "variance_complexity_bmops_pcu2",
                 "variance_complexity_db",
                 "outage_complexity_bmops_pcu",
                 "expected_rate_bits_pcu"};
    const double lo = -10.0, hi = 20.0, step = 0.05;
    const std::int64_t n = static_cast<std::int64_t>(std::llround((hi - lo) / step)) + 1;
    t.rows = compute_rows(n, workers, [&](std::int64_t i) {
        const double gdb = lo + static_cast<double>(i) * step;
        const cran::channel::ChannelSpec ch{
            cran::channel::FixedRayleigh{cran::mcs::db_to_linear(gdb)}};
        const auto m = cran::analytic::compute_metrics(cfg.params, cfg.table, cfg.margin, ch,
                                                       cfg.eps_hat,
                                                       static_cast<double>(cfg.n_c));
        return std::vector<double>{gdb,
                                   m.expected_complexity,
                                   m.variance_complexity,
                                   10.0 * std::log10(m.variance_complexity),
                                   m.outage_complexity,
                                   m.expected_rate};
    });
    return t;
}

OutputTable experiment_sweep_nr(const ParsedConfig& cfg, int workers) {
    OutputTable t;
    t.columns = {"n_r_count",
                 "margin_db",
                 "expected_complexity_bmops_pcu",
                 "variance_complexity_bmops_pcu2",
                 "variance_complexity_db",
                 "outage_complexity_bmops_pcu",
                 "expected_rate_bits_pcu"};
    const std::vector<double> margins_db = {0.0, 0.4, 0.9};
    const int nr_lo = 10, nr_hi = 50;
    const std::int64_t n = static_cast<std::int64_t>(nr_hi - nr_lo + 1) *
                           static_cast<std::int64_t>(margins_db.size());
    t.rows = compute_rows(n, workers, [&](std::int64_t i) {
        const int nr = nr_lo + static_cast<int>(i / margins_db.size());
        const double mdb = margins_db[static_cast<std::size_t>(i % margins_db.size())];
        const auto table =
            cran::mcs::make_equally_spaced_table(nr, cfg.gamma_first_db, cfg.gamma_last_db,
                                                 cfg.nu_db);
        const double margin = cran::mcs::db_to_linear(mdb);
        const auto m = cran::analytic::compute_metrics(cfg.params, table, margin, cfg.channel,
                                                       cfg.eps_hat,
                                                       static_cast<double>(cfg.n_c));
        return std::vector<double>{static_cast<double>(nr),
                                   mdb,
                                   m.expected_complexity,
                                   m.variance_complexity,
                                   10.0 * std::log10(m.variance_complexity),
                                   m.outage_complexity,
                                   m.expected_rate};
    });
    return t;
}

const std::vector<double>& nc_grid() {
    static const std::vector<double> g = {1,  2,  3,  5,   7,   10,  15,  20,  30,
                                          50, 70, 100, 150, 200, 300, 500, 700, 1000};
    return g;
}

OutputTable experiment_sweep_nc(const ParsedConfig& cfg, int workers) {
    OutputTable t;
    t.columns = {"n_c_count",
                 "is_asymptotic_flag",
                 "outage_complexity_percell_bmops_pcu",
                 "per_cell_constraint_prob",
                 "expected_complexity_bmops_pcu",
                 "variance_within_bmops_pcu2",
                 "variance_total_bmops_pcu2"};
    const auto m = cran::analytic::channel_moments(cfg.params, cfg.table, cfg.margin,
                                                   cfg.channel);
    const auto& grid = nc_grid();
    const std::int64_t n = static_cast<std::int64_t>(grid.size()) + 1;
    t.rows = compute_rows(n, workers, [&](std::int64_t i) -> std::vector<double> {
        if (i == static_cast<std::int64_t>(grid.size())) {
            const double asym = cran::analytic::outage_complexity_asymptotic(
                m.mean, m.variance_within, cfg.eps_hat);
            return {0.0, 1.0, asym, 1.0, m.mean, m.variance_within, m.variance_total};
        }
        const double nc = grid[static_cast<std::size_t>(i)];
        const double c = cran::analytic::outage_complexity_clt(m.mean, m.variance_within,
                                                               cfg.eps_hat, nc);
        return {nc,
                0.0,
                c,
                cran::analytic::per_cell_constraint(cfg.eps_hat, nc),
                m.mean,
                m.variance_within,
                m.variance_total};
    });
    return t;
}

OutputTable experiment_gain(const ParsedConfig& cfg, int workers) {
    OutputTable t;
    t.columns = {"n_c_count",          "is_asymptotic_flag",
                 "gain_exact_ratio",   "gain_clt_ratio",
                 "gain_unbounded_flag", "numerator_exact_bmops_pcu",
                 "numerator_clt_bmops_pcu", "denominator_bmops_pcu"};
    const auto& grid = nc_grid();
    const std::int64_t n = static_cast<std::int64_t>(grid.size()) + 1;
    t.rows = compute_rows(n, workers, [&](std::int64_t i) {
        const bool asym = i == static_cast<std::int64_t>(grid.size());
        const double nc = asym ? kInf : grid[static_cast<std::size_t>(i)];
        const auto g = cran::analytic::computational_gain(cfg.params, cfg.table, cfg.margin,
                                                          cfg.channel, cfg.eps_hat, nc);
        return std::vector<double>{asym ? 0.0 : nc,
                                   asym ? 1.0 : 0.0,
                                   g.unbounded ? 0.0 : g.value,
                                   g.unbounded ? 0.0 : g.value_clt,
                                   g.unbounded ? 1.0 : 0.0,
                                   g.numerator_exact,
                                   g.numerator_clt,
                                   g.denominator};
    });
    return t;
}

OutputTable experiment_diversity(const ParsedConfig& cfg, int workers) {
    OutputTable t;
    t.columns = {"eps_hat_prob",
                 "diversity_system_clt_dec_per_cell",
                 "diversity_percell_clt_dec_per_cell",
                 "diversity_system_exact_dec_per_cell",
                 "diversity_percell_exact_dec_per_cell",
                 "c_max_clt_bmops_pcu",
                 "c_max_exact_bmops_pcu"};
    const std::int64_t n = 21;  // log10(eps) from -3 to -1 in 0.1 steps
    t.rows = compute_rows(n, workers, [&](std::int64_t i) {
        const double eps = std::pow(10.0, -3.0 + 0.1 * static_cast<double>(i));
        const auto d = cran::analytic::computational_diversity(cfg.params, cfg.table,
                                                               cfg.margin, cfg.channel, eps);
        return std::vector<double>{eps,
                                   d.value,
                                   d.percell_clt_budget,
                                   d.system_exact_budget,
                                   d.percell_exact_budget,
                                   d.c_max_clt,
                                   d.c_max_exact};
    });
    return t;
}

OutputTable experiment_crt(const ParsedConfig& cfg, int workers) {
    OutputTable t;
    t.columns = {"margin_db", "n_c_count", "is_asymptotic_flag",
                 "crt_rayleigh_rate_bits_per_bmop", "crt_channel_rate_bits_per_bmop"};
    const std::int64_t n_margins = 10;  // 0 .. 0.9 dB
    const std::int64_t n = n_margins * 2;
    t.rows = compute_rows(n, workers, [&](std::int64_t i) {
        const double mdb = 0.1 * static_cast<double>(i / 2);
        const bool asym = (i % 2) == 1;
        const double nc = asym ? kInf : static_cast<double>(cfg.n_c);
        const double margin = cran::mcs::db_to_linear(mdb);
        const double ray = cran::analytic::complexity_rate_tradeoff(
            cfg.params, cfg.table, cfg.channel, cfg.eps_hat, nc, margin,
            cran::analytic::RateSource::rayleigh_reference);
        const double chn = cran::analytic::complexity_rate_tradeoff(
            cfg.params, cfg.table, cfg.channel, cfg.eps_hat, nc, margin,
            cran::analytic::RateSource::channel_rate);
        return std::vector<double>{mdb, asym ? 0.0 : nc, asym ? 1.0 : 0.0, ray, chn};
    });
    return t;
}

OutputTable experiment_simulate(const ParsedConfig& cfg, int workers,
                                cran::montecarlo::TrialStats* stats_out) {
    const auto sim = cran::config::make_sim_config(cfg);
    const auto s = cran::montecarlo::run(sim, workers);
    if (stats_out) *stats_out = s;
    OutputTable t;
    t.columns = {"mean_complexity_bmops_pcu",
                 "var_complexity_bmops_pcu2",
                 "mean_rate_bits_pcu",
                 "mean_complexity_tx_bmops_pcu",
                 "var_complexity_tx_bmops_pcu2",
                 "outage_complexity_percell_bmops_pcu",
                 "outage_complexity_group_sum_bmops_pcu",
                 "group_sum_q50_bmops_pcu",
                 "group_sum_q75_bmops_pcu",
                 "group_sum_q90_bmops_pcu",
                 "group_sum_q95_bmops_pcu",
                 "group_sum_q99_bmops_pcu",
                 "group_sum_qbudget_bmops_pcu",
                 "n_trials_count",
                 "n_groups_count",
                 "n_transmitting_count",
                 "seed_u64"};
    std::vector<double> row = {s.mean_complexity,
                               s.var_complexity,
                               s.mean_rate,
                               s.mean_complexity_tx,
                               s.var_complexity_tx,
                               s.outage_complexity_percell,
                               s.outage_complexity_group_sum};
    for (const auto& q : s.group_sum_quantiles) row.push_back(q.value);
    row.push_back(static_cast<double>(s.n_trials));
    row.push_back(static_cast<double>(s.n_groups));
    row.push_back(static_cast<double>(s.n_transmitting));
    row.push_back(static_cast<double>(s.seed));
    t.rows.push_back(row);
    return t;
}

// Kolmogorov-Smirnov distance between an ascending complexity sample and the
// analytic complexity law. The law has an atom at zero (the no-transmission
// mass), so ties are walked as blocks and the lower empirical step at the
// atom is compared against the left limit F(0-) = 0 rather than F(0).
double complexity_ks(const std::vector<double>& sorted, const ParsedConfig& cfg) {
    const double n = static_cast<double>(sorted.size());
    double ks = 0.0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
        const double fc = cran::analytic::complexity_cdf(cfg.params, cfg.table, cfg.margin,
                                                         cfg.channel, sorted[i],
                                                         CdfConditioning::unconditioned);
        const double f_minus = sorted[i] == 0.0 ? 0.0 : fc;
        ks = std::max(ks, std::fabs((static_cast<double>(j) + 1.0) / n - fc));
        ks = std::max(ks, std::fabs(f_minus - static_cast<double>(i) / n));
        i = j + 1;
    }
    return ks;
}

// ---------------------------------------------------------------------------
// validate: self-contained oracle battery. Prints one line per check.
// ---------------------------------------------------------------------------
struct ValidateState {
    std::ostream& out;
    int failures = 0;
    void check(const std::string& name, double value, double bound) {
        const bool ok = value <= bound && std::isfinite(value);
        if (!ok) ++failures;
        out << (ok ? "[ok]   " : "[FAIL] ") << name << ": " << fmt12(value)
            << " (bound " << fmt12(bound) << ")\n";
    }
};

int run_validate(std::ostream& out, const ParsedConfig& cfg) {
    using namespace cran;
    ValidateState v{out};

    // Special functions against externally computed high-precision values.
    struct Pin {
        const char* name;
        double got;
        double want;
    };
    const Pin pins[] = {
        {"e1(1.0)", specfun::exp_integral_e1(1.0).value, 0.21938393439552027368},
        {"e1(0.5)", specfun::exp_integral_e1(0.5).value, 0.55977359477616081175},
        {"e1_scaled(25)", specfun::exp_integral_e1_scaled(25.0),
         0.038514698844904022},
        {"glow(2,1)", specfun::incomplete_gamma_lower(2.0, 1.0).value,
         0.26424111765711535681},
        {"series_sum_nn2(1)", specfun::series_sum_nn2(1.0).value, 1.1464990725286430},
        {"series_sum_nn2(-1)", specfun::series_sum_nn2(-1.0).value, -0.89121279811130230},
        {"inv_erf(0.8)", specfun::inv_erf(0.8).value, 0.90619380243682322},
    };
    for (const Pin& p : pins) {
        v.check(std::string("specfun ") + p.name + " rel dev",
                std::fabs(p.got - p.want) / std::fabs(p.want), 1e-10);
    }
    {
        double worst = 0.0;
        for (double y = -0.9999; y < 1.0; y += 0.0101) {
            worst = std::max(worst, std::fabs(std::erf(specfun::inv_erf(y).value) - y));
        }
        v.check("inv_erf round trip abs dev", worst, 1e-10);
        double worst_g = 0.0;
        for (double a : {0.3, 1.0, 2.5, 7.0}) {
            for (double x : {0.1, 1.0, 5.0, 20.0}) {
                const double tot = specfun::incomplete_gamma_lower(a, x).value +
                                   specfun::incomplete_gamma_upper(a, x).value;
                worst_g = std::max(worst_g, std::fabs(tot / std::tgamma(a) - 1.0));
            }
        }
        v.check("gamma complement rel dev", worst_g, 1e-12);
        double worst_e1 = 0.0;  // sandwich e^-x/(x+1) < E1(x) < e^-x/x
        for (double x : {0.2, 1.0, 3.0, 10.0, 50.0, 300.0}) {
            const double e1 = specfun::exp_integral_e1(x).value;
            const bool inside = e1 > std::exp(-x) / (x + 1.0) && e1 < std::exp(-x) / x;
            worst_e1 = std::max(worst_e1, inside ? 0.0 : 1.0);
        }
        v.check("e1 envelope violations", worst_e1, 0.0);
    }

    // Closed-form interval integrals against quadrature of their integrands.
    {
        double worst = 0.0;
        for (int nr : {10, 27, 50}) {
            const auto table = mcs::make_equally_spaced_table(nr, cfg.gamma_first_db,
                                                              cfg.gamma_last_db, cfg.nu_db);
            for (double mdb : {0.0, 0.9}) {
                for (double gdb : {0.0, 10.0, 15.0}) {
                    worst = std::max(worst, analytic::linearized_oracle_deviation(
                                                cfg.params, table, mcs::db_to_linear(mdb),
                                                mcs::db_to_linear(gdb)));
                }
            }
        }
        v.check("interval integrals closed vs quadrature rel dev", worst, 1e-8);
    }

    // Gaussian budget round trip and asymptote agreement.
    {
        double worst = 0.0;
        for (double eps : {0.01, 0.1, 0.3}) {
            for (double nc : {1.0, 7.0, 100.0, 10000.0}) {
                const double c = analytic::outage_complexity_clt(5.0, 4.0, eps, nc);
                const double eps_sys = analytic::computational_outage_prob(5.0, 4.0, nc, c);
                const double want_sys = -std::expm1(nc * std::log1p(-eps));
                worst = std::max(worst, std::fabs(eps_sys - want_sys));
            }
        }
        v.check("clt budget round trip abs dev", worst, 1e-9);
        const auto m = analytic::channel_moments(cfg.params, cfg.table, cfg.margin,
                                                 cfg.channel);
        const double clt6 = analytic::outage_complexity_clt(m.mean, m.variance_within,
                                                            cfg.eps_hat, 1e6);
        const double asym = analytic::outage_complexity_asymptotic(m.mean, m.variance_within,
                                                                   cfg.eps_hat);
        v.check("asymptote vs clt(1e6) abs dev", std::fabs(clt6 - asym), 1e-3);
    }

    // Position-averaged SNR law: closed form vs direct quadrature; density mass.
    {
        const channel::PathLossFpc pl{1.0, 2.0, 0.1};
        const channel::ChannelSpec spec{pl};
        const double expo = pl.eta * (1.0 - pl.s);
        double worst = 0.0;
        for (double g : {0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0}) {
            auto f = [&](double w) {
                return 2.0 * w * std::exp(-(g / pl.gamma_ud) * std::pow(w, expo));
            };
            const double want = 1.0 - quadrature::integrate(f, 0.0, 1.0, 1e-12).value;
            worst = std::max(worst, std::fabs(channel::snr_cdf(spec, g) - want));
        }
        v.check("pathloss snr cdf closed vs quadrature abs dev", worst, 1e-8);
        // The position-averaged law has a power-law tail, so integrate the
        // density over a finite window and complete it with the closed-form
        // tail mass.
        auto pdf = [&](double g) { return channel::snr_pdf(spec, g); };
        const double mass = quadrature::integrate(pdf, 0.0, 2000.0, 1e-10).value +
                            (1.0 - channel::snr_cdf(spec, 2000.0));
        v.check("pathloss snr pdf mass dev from 1", std::fabs(mass - 1.0), 1e-6);
        const channel::ChannelSpec fixed{channel::FixedRayleigh{10.0}};
        auto pdf_f = [&](double g) { return channel::snr_pdf(fixed, g); };
        const double mass_f = quadrature::integrate(pdf_f, 0.0, 400.0, 1e-10).value +
                              (1.0 - channel::snr_cdf(fixed, 400.0));
        v.check("rayleigh snr pdf mass dev from 1", std::fabs(mass_f - 1.0), 1e-6);
    }

    // Complexity quantile inversion consistency.
    {
        double worst = 0.0;
        for (double eps : {0.01, 0.1, 0.4}) {
            const double c = analytic::outage_complexity_single(cfg.params, cfg.table,
                                                                cfg.margin, cfg.channel, eps);
            const double back = analytic::complexity_cdf(cfg.params, cfg.table, cfg.margin,
                                                         cfg.channel, c);
            worst = std::max(worst, std::fabs(back - (1.0 - eps)));
        }
        v.check("single-cell inversion round trip abs dev", worst, 1e-9);
    }

    // Monte Carlo empirical complexity law vs the analytic CDF (fast variant).
    {
        montecarlo::SimConfig sim;
        sim.channel = cfg.channel;
        sim.table = cfg.table;
        sim.params = cfg.params;
        sim.margin = cfg.margin;
        sim.n_trials = 200000;
        sim.n_c = 1;
        sim.eps_hat = cfg.eps_hat;
        sim.seed = cfg.seed;
        std::vector<double> samples;
        samples.reserve(static_cast<std::size_t>(sim.n_trials));
        for (std::int64_t i = 0; i < sim.n_trials; ++i) {
            rng::TrialStream stream(sim.seed, static_cast<std::uint64_t>(i));
            const double gamma = channel::sample_snr(sim.channel, stream);
            const auto sel = mcs::rate_select(gamma, sim.margin, sim.table);
            samples.push_back(sel.below_first_threshold
                                  ? 0.0
                                  : decoder_model::complexity(gamma, sim.margin, sim.params,
                                                              sim.table));
        }
        std::sort(samples.begin(), samples.end());
        const double ks = complexity_ks(samples, cfg);
        v.check("monte carlo complexity law KS (2e5 trials)", ks, 0.01);
    }

    out << (v.failures == 0 ? "validate: all checks passed\n"
                            : "validate: " + std::to_string(v.failures) + " check(s) failed\n");
    return v.failures == 0 ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"complexity-rate analysis toolkit"};
    std::string config_path;
    std::string experiment;
    std::string out_path = "-";
    std::string format = "csv";
    std::uint64_t seed = 0;
    bool seed_given = false;
    int workers = 0;
    bool strict = false;
    app.add_option("--config", config_path, "configuration file (key = value lines)");
    app.add_option("--experiment", experiment,
                   "one of sweep_snr|sweep_nr|sweep_nc|gain|diversity|crt|simulate|validate")
        ->required();
    app.add_option("--out", out_path, "output path ('-' for stdout)");
    app.add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--seed", seed, "override run.seed")->each([&](const std::string&) {
        seed_given = true;
    });
    app.add_option("--workers", workers, "worker threads (0 = runtime default)");
    app.add_flag("--strict", strict, "reject unknown configuration keys");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        ParsedConfig cfg = cran::config::load_config(config_path, strict);
        if (seed_given) cfg.seed = seed;

        std::ofstream file_out;
        std::ostream* out = &std::cout;
        if (out_path != "-") {
            file_out.open(out_path, std::ios::binary);
            if (!file_out) {
                std::cerr << "error: cannot open output path '" << out_path << "'\n";
                return 2;
            }
            out = &file_out;
        }

        if (experiment == "validate") {
            return run_validate(*out, cfg);
        }

        OutputTable table;
        cran::montecarlo::TrialStats sim_stats;
        bool is_simulate = false;
        if (experiment == "sweep_snr") {
            table = experiment_sweep_snr(cfg, workers);
        } else if (experiment == "sweep_nr") {
            table = experiment_sweep_nr(cfg, workers);
        } else if (experiment == "sweep_nc") {
            table = experiment_sweep_nc(cfg, workers);
        } else if (experiment == "gain") {
            table = experiment_gain(cfg, workers);
        } else if (experiment == "diversity") {
            table = experiment_diversity(cfg, workers);
        } else if (experiment == "crt") {
            table = experiment_crt(cfg, workers);
        } else if (experiment == "simulate") {
            table = experiment_simulate(cfg, workers, &sim_stats);
            is_simulate = true;
        } else {
            std::cerr << "error: unknown experiment '" << experiment
                      << "' (expected sweep_snr|sweep_nr|sweep_nc|gain|diversity|crt|simulate|"
                         "validate)\n";
            return 2;
        }

        if (format == "csv") {
            write_csv(*out, table);
        } else {
            nlohmann::json metadata = cran::config::metadata_echo(cfg);
            metadata["experiment"] = experiment;
            metadata["format_version"] = "1";
            if (is_simulate) {
                metadata["simulation"] = nlohmann::json::parse(
                    cran::montecarlo::to_json(cran::config::make_sim_config(cfg), sim_stats));
            }
            write_json(*out, table, metadata);
        }
        return 0;
    } catch (const cran::config::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: validation: " << e.what() << "\n";
        return 3;
    } catch (const std::domain_error& e) {
        std::cerr << "error: validation: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: numeric: " << e.what() << "\n";
        return 4;
    }
}
