#include "cran/decoder_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace cran::decoder_model {

void validate_params(const ComplexityModelParams& p) {
    if (!(p.zeta > 2.0)) throw std::invalid_argument("complexity params invalid: zeta not > 2");
    if (!(p.k_prime > 0.0)) throw std::invalid_argument("complexity params invalid: k_prime not > 0");
    if (!(p.nu > 1.0)) throw std::invalid_argument("complexity params invalid: nu not > 1");
    if (!(p.eps_channel > 0.0 && p.eps_channel < 1.0)) {
        throw std::invalid_argument("complexity params invalid: eps_channel not in (0,1)");
    }
}

double k_of_eps(const ComplexityModelParams& p) {
    if (!(p.eps_channel > 0.0 && p.eps_channel < 1.0)) {
        throw std::invalid_argument("k_of_eps: eps_channel not in (0,1)");
    }
    return -p.k_prime / std::log10(p.eps_channel);
}

double g_squared(const ComplexityModelParams& p) {
    return (p.zeta - 2.0) / (k_of_eps(p) * p.zeta);
}

double log2_zeta_minus_1(const ComplexityModelParams& p) { return std::log2(p.zeta - 1.0); }

double gap(double gamma, double margin, const mcs::McsTable& table) {
    const mcs::RateSelection sel = mcs::rate_select(gamma, margin, table);
    if (sel.below_first_threshold) {
        throw std::domain_error("gap: no-transmission region (gamma/margin <= first threshold)");
    }
    return std::log2(1.0 + gamma) - sel.rate_bits_pcu;
}

ComplexityDetail complexity_detail(double gamma, double margin, const ComplexityModelParams& p,
                                   const mcs::McsTable& table, bool exact_form) {
    ComplexityDetail d;
    const mcs::RateSelection sel = mcs::rate_select(gamma, margin, table);
    if (sel.below_first_threshold) return d;
    d.transmitting = true;
    d.mcs_index = sel.index;
    d.rate_bits_pcu = sel.rate_bits_pcu;
    d.gap = std::log2(1.0 + gamma) - sel.rate_bits_pcu;
    const double g2 = g_squared(p);
    const double scale = sel.rate_bits_pcu / log2_zeta_minus_1(p);
    if (exact_form) {
        d.unclamped = scale * std::log2(g2 / (d.gap * d.gap) + 2.0 / p.zeta);
    } else {
        d.unclamped = scale * (std::log2(g2) - 2.0 * std::log2(d.gap));
    }
    d.clamped = d.unclamped < 0.0;
    d.value = d.clamped ? 0.0 : d.unclamped;
    return d;
}

double complexity(double gamma, double margin, const ComplexityModelParams& p,
                  const mcs::McsTable& table, bool exact_form) {
    return complexity_detail(gamma, margin, p, table, exact_form).value;
}

void validate_geometry(const TransportBlockGeometry& g) {
    if (g.d_k <= 0 || g.c_k <= 0 || g.s_re <= 0 || g.l_max <= 0) {
        throw std::invalid_argument("transport block geometry invalid: all fields must be > 0");
    }
}

double complexity_with_iteration_floor(double gamma, double margin,
                                       const ComplexityModelParams& p,
                                       const mcs::McsTable& table,
                                       const TransportBlockGeometry& geom, bool exact_form) {
    validate_geometry(geom);
    const ComplexityDetail d = complexity_detail(gamma, margin, p, table, exact_form);
    if (!d.transmitting) return 0.0;
    const double floor = static_cast<double>(geom.d_k) * geom.c_k / geom.s_re;
    return std::max(d.value, floor);
}

void validate_pmf(const IterationPmf& pmf) {
    if (pmf.l_max < 1) throw std::invalid_argument("iteration pmf invalid: l_max < 1");
    for (const IterationPmfPoint& pt : pmf.points) {
        if (static_cast<int>(pt.pmf.size()) != pmf.l_max) {
            throw std::invalid_argument("iteration pmf invalid: vector length != l_max");
        }
        if (!(pt.eps_cb >= 0.0 && pt.eps_cb <= 1.0)) {
            throw std::invalid_argument("iteration pmf invalid: eps_cb not in [0,1]");
        }
        double sum = 0.0;
        for (double v : pt.pmf) {
            if (v < 0.0) throw std::invalid_argument("iteration pmf invalid: negative entry");
            sum += v;
        }
        if (std::fabs(sum - 1.0) > 1e-9) {
            throw std::invalid_argument("iteration pmf invalid: vector does not sum to 1");
        }
    }
}

IterationPmf load_iteration_pmf(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("iteration pmf parse error: cannot open '" + path + "'");
    IterationPmf pmf;
    std::string line;
    int line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        {
            std::stringstream ss(line);
            std::string cur;
            while (std::getline(ss, cur, ',')) fields.push_back(cur);
        }
        if (!saw_header) {
            saw_header = true;
            if (fields.size() < 4 || fields[0] != "mcs_index") {
                throw std::runtime_error("iteration pmf parse error at line " +
                                         std::to_string(line_no) +
                                         ": missing 'mcs_index,snr_db,eps_cb,p1,...' header");
            }
            pmf.l_max = static_cast<int>(fields.size()) - 3;
            continue;
        }
        if (static_cast<int>(fields.size()) != pmf.l_max + 3) {
            throw std::runtime_error("iteration pmf parse error at line " +
                                     std::to_string(line_no) + ": expected " +
                                     std::to_string(pmf.l_max + 3) + " fields");
        }
        IterationPmfPoint pt;
        try {
            pt.mcs_index = std::stoi(fields[0]);
            pt.snr_db = std::stod(fields[1]);
            pt.eps_cb = std::stod(fields[2]);
            pt.pmf.reserve(static_cast<std::size_t>(pmf.l_max));
            for (int i = 0; i < pmf.l_max; ++i) {
                pt.pmf.push_back(std::stod(fields[static_cast<std::size_t>(i) + 3]));
            }
        } catch (const std::exception&) {
            throw std::runtime_error("iteration pmf parse error at line " +
                                     std::to_string(line_no) + ": bad numeric field");
        }
        pmf.points.push_back(std::move(pt));
    }
    if (!saw_header || pmf.points.empty()) {
        throw std::runtime_error("iteration pmf parse error: no data rows in '" + path + "'");
    }
    validate_pmf(pmf);
    return pmf;
}

const IterationPmfPoint& lookup_pmf(const IterationPmf& pmf, int mcs_index, double snr_db) {
    const IterationPmfPoint* best = nullptr;
    double best_dist = std::numeric_limits<double>::infinity();
    for (const IterationPmfPoint& pt : pmf.points) {
        if (pt.mcs_index != mcs_index) continue;
        const double dist = std::fabs(pt.snr_db - snr_db);
        if (dist < best_dist) {
            best_dist = dist;
            best = &pt;
        }
    }
    if (best == nullptr || best_dist > 0.05) {
        throw std::out_of_range("iteration pmf lookup: no grid point for mcs " +
                                std::to_string(mcs_index) + " within 0.05 dB of " +
                                std::to_string(snr_db) + " dB");
    }
    return *best;
}

double empirical_complexity(const TransportBlockGeometry& geom, const IterationPmf& pmf,
                            int mcs_index, double snr_db) {
    validate_geometry(geom);
    const IterationPmfPoint& pt = lookup_pmf(pmf, mcs_index, snr_db);
    double mean_iter = 0.0;
    for (int i = 0; i < static_cast<int>(pt.pmf.size()); ++i) {
        mean_iter += (i + 1.0) * pt.pmf[static_cast<std::size_t>(i)];
    }
    const double e_l = (1.0 - pt.eps_cb) * mean_iter + pt.eps_cb * pmf.l_max;
    return static_cast<double>(geom.d_k) * geom.c_k * e_l / geom.s_re;
}

}  // namespace cran::decoder_model
