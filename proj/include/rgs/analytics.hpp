#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "rgs/protocol.hpp"
#include "rgs/treecode.hpp"

namespace rgs {

// Fusion failure probability over one repeater interval: 1 - e^{-L0/L_att}/2.
double p_fail(double spacing_km, double attenuation_km);

// Photon loss over half an interval: 1 - e^{-L0/(2 L_att)}.
double loss_rate(double spacing_km, double attenuation_km);

using EpsDFn = std::function<double(std::size_t, std::size_t)>;

// Per-station success rate of the erasure-coded scheme: full-rank survival
// combined with every required logical X/Z measurement succeeding.
double r_rrgs(double spacing_km, double attenuation_km, std::size_t k, std::size_t n,
              const BranchVector& b);
double r_rrgs(double spacing_km, double attenuation_km, std::size_t k, std::size_t n,
              const BranchVector& b, const EpsDFn& eps_fn);

// Whole-chain success probability of the erasure-coded scheme.
double ps_rrgs(const ChainConfig& cfg);

// Complete-graph scheme: per-station rate and whole-chain success.
double r_crgs(double spacing_km, double attenuation_km, std::size_t n, const BranchVector& b);
double ps_crgs(double spacing_km, double attenuation_km, double length_km, std::size_t n,
               const BranchVector& b);

struct RatePoint {
    std::size_t n = 0;
    std::size_t k = 0;
    double length_over_att = 0.0;
    std::size_t n_repeaters = 0;
    double p_f = 0.0;
    double eps = 0.0;
    double r_station = 0.0;
    double p_s = 0.0;
    double expected_ebits = 0.0;
    double rate_per_photon = 0.0;
};

struct SweepGrid {
    std::vector<std::size_t> n_values;
    std::vector<std::size_t> k_values;        // ignored by the CRGS sweep
    std::vector<double> lengths_over_att;     // L / L_att
    double spacing_over_att = 0.1;            // L0 / L_att
    BranchVector branch{{5, 11, 4}};
};

std::vector<RatePoint> sweep_rrgs(const SweepGrid& grid);
std::vector<RatePoint> sweep_crgs(const SweepGrid& grid);

} // namespace rgs
