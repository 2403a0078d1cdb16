#include "rgs/analytics.hpp"

#include <cmath>
#include <stdexcept>

#include "rgs/rankstats.hpp"

namespace rgs {

double p_fail(double spacing_km, double attenuation_km) {
    if (spacing_km <= 0.0 || attenuation_km <= 0.0) {
        throw std::invalid_argument("p_fail: lengths must be positive");
    }
    return 1.0 - 0.5 * std::exp(-spacing_km / attenuation_km);
}

double loss_rate(double spacing_km, double attenuation_km) {
    if (spacing_km <= 0.0 || attenuation_km <= 0.0) {
        throw std::invalid_argument("loss_rate: lengths must be positive");
    }
    return -std::expm1(-spacing_km / (2.0 * attenuation_km));
}

double r_rrgs(double spacing_km, double attenuation_km, std::size_t k, std::size_t n,
              const BranchVector& b, const EpsDFn& eps_fn) {
    if (k == 0 || n < k) {
        throw std::invalid_argument("r_rrgs: need 1 <= k <= n");
    }
    double pf = p_fail(spacing_km, attenuation_km);
    double eps = loss_rate(spacing_km, attenuation_km);
    double px = p_x(b, eps);
    double pz = p_z(b, eps);
    double sum = 0.0;
    double carry = 0.0;
    for (std::size_t nt = 0; nt <= n; ++nt) {
        double term = (1.0 - eps_fn(k, nt)) * binom_pmf(nt, n, 1.0 - pf) *
                      std::pow(px, 2.0 * static_cast<double>(nt)) *
                      std::pow(pz, 2.0 * static_cast<double>(n - nt));
        if (term < 1e-300) {
            continue;
        }
        double y = term - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return sum;
}

double r_rrgs(double spacing_km, double attenuation_km, std::size_t k, std::size_t n,
              const BranchVector& b) {
    return r_rrgs(spacing_km, attenuation_km, k, n, b,
                  [](std::size_t kk, std::size_t nt) { return eps_d(kk, nt); });
}

double ps_rrgs(const ChainConfig& cfg) {
    double eps = loss_rate(cfg.spacing_km, cfg.attenuation_km);
    double px = p_x(cfg.branch, eps);
    double pz = p_z(cfg.branch, eps);
    double ends = std::pow(0.5 * (px + pz), 2.0 * static_cast<double>(cfg.k));
    double r = r_rrgs(cfg.spacing_km, cfg.attenuation_km, cfg.k, cfg.n, cfg.branch);
    return ends * std::pow(r, static_cast<double>(cfg.n_repeaters));
}

double r_crgs(double spacing_km, double attenuation_km, std::size_t n, const BranchVector& b) {
    if (n == 0) {
        throw std::invalid_argument("r_crgs: n must be positive");
    }
    double pf = p_fail(spacing_km, attenuation_km);
    double eps = loss_rate(spacing_km, attenuation_km);
    double px = p_x(b, eps);
    double pz = p_z(b, eps);
    return (1.0 - std::pow(pf, static_cast<double>(n))) * px * px *
           std::pow(pz, 2.0 * static_cast<double>(n - 1));
}

double ps_crgs(double spacing_km, double attenuation_km, double length_km, std::size_t n,
               const BranchVector& b) {
    double segments = length_km / spacing_km;
    auto nr = static_cast<std::size_t>(std::llround(segments)) - 1;
    if (std::abs(segments - std::round(segments)) > 1e-9) {
        throw std::invalid_argument("ps_crgs: L must be a multiple of L0");
    }
    double eps = loss_rate(spacing_km, attenuation_km);
    double px = p_x(b, eps);
    double pz = p_z(b, eps);
    double ends = std::pow(0.5 * (px + pz), 2.0);
    double r = r_crgs(spacing_km, attenuation_km, n, b);
    return ends * std::pow(r, static_cast<double>(nr));
}

namespace {

std::size_t repeaters_for(double length_over_att, double spacing_over_att) {
    double segments = length_over_att / spacing_over_att;
    double rounded = std::round(segments);
    if (std::abs(segments - rounded) > 1e-9 || rounded < 1.0) {
        throw std::invalid_argument("sweep: L must be a positive multiple of L0");
    }
    return static_cast<std::size_t>(rounded) - 1;
}

} // namespace

std::vector<RatePoint> sweep_rrgs(const SweepGrid& grid) {
    if (grid.n_values.empty() || grid.k_values.empty() || grid.lengths_over_att.empty()) {
        throw std::invalid_argument("sweep: empty grid");
    }
    // Attenuation length fixes the unit; only ratios matter.
    double att = 1.0;
    double l0 = grid.spacing_over_att * att;
    double pf = p_fail(l0, att);
    double eps = loss_rate(l0, att);
    double px = p_x(grid.branch, eps);
    double pz = p_z(grid.branch, eps);
    std::vector<RatePoint> points;
    for (double lr : grid.lengths_over_att) {
        std::size_t nr = repeaters_for(lr, grid.spacing_over_att);
        for (std::size_t n : grid.n_values) {
            for (std::size_t k : grid.k_values) {
                if (k > n) {
                    continue;
                }
                RatePoint pt;
                pt.n = n;
                pt.k = k;
                pt.length_over_att = lr;
                pt.n_repeaters = nr;
                pt.p_f = pf;
                pt.eps = eps;
                pt.r_station = r_rrgs(l0, att, k, n, grid.branch);
                double ends = std::pow(0.5 * (px + pz), 2.0 * static_cast<double>(k));
                pt.p_s = ends * std::pow(pt.r_station, static_cast<double>(nr));
                pt.expected_ebits = pt.p_s * static_cast<double>(k);
                pt.rate_per_photon = pt.expected_ebits / static_cast<double>(n);
                points.push_back(pt);
            }
        }
    }
    return points;
}

std::vector<RatePoint> sweep_crgs(const SweepGrid& grid) {
    if (grid.n_values.empty() || grid.lengths_over_att.empty()) {
        throw std::invalid_argument("sweep: empty grid");
    }
    double att = 1.0;
    double l0 = grid.spacing_over_att * att;
    double pf = p_fail(l0, att);
    double eps = loss_rate(l0, att);
    std::vector<RatePoint> points;
    for (double lr : grid.lengths_over_att) {
        std::size_t nr = repeaters_for(lr, grid.spacing_over_att);
        for (std::size_t n : grid.n_values) {
            RatePoint pt;
            pt.n = n;
            pt.k = 1;
            pt.length_over_att = lr;
            pt.n_repeaters = nr;
            pt.p_f = pf;
            pt.eps = eps;
            pt.r_station = r_crgs(l0, att, n, grid.branch);
            pt.p_s = ps_crgs(l0, att, lr * att, n, grid.branch);
            pt.expected_ebits = pt.p_s;
            pt.rate_per_photon = pt.p_s / static_cast<double>(n);
            points.push_back(pt);
        }
    }
    return points;
}

} // namespace rgs
