#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rgs/bitmatrix.hpp"
#include "rgs/tableau.hpp"
#include "rgs/treecode.hpp"

namespace rgs {

// Physical and code parameters of one repeater chain.
struct ChainConfig {
    double length_km = 0.0;      // Alice-Bob distance L
    double spacing_km = 0.0;     // repeater interval L0
    double attenuation_km = 0.0; // L_att
    std::size_t n_repeaters = 0; // N_R
    std::size_t n = 0;           // photons per code block
    std::size_t k = 0;           // logical qubits per block
    BranchVector branch{{1}};    // tree code, analytic use only
    std::uint64_t seed = 0;

    // Throws on inconsistent geometry; returns warnings (e.g. rate above
    // erasure capacity) without failing.
    std::vector<std::string> validate() const;
};

// Vertex bookkeeping for one RGS: arm i on either side is a first-leaf
// vertex plus its dangling second leaf.
struct RgsArmMap {
    std::size_t base = 0;
    std::size_t n_left = 0;
    std::size_t n_right = 0;

    std::size_t left1(std::size_t i) const { return base + i; }
    std::size_t left2(std::size_t i) const { return base + n_left + i; }
    std::size_t right1(std::size_t j) const { return base + 2 * n_left + j; }
    std::size_t right2(std::size_t j) const { return base + 2 * n_left + n_right + j; }
    std::size_t total() const { return 2 * (n_left + n_right); }
};

struct RgsGraph {
    BitMatrix adjacency;
    RgsArmMap arms;
};

// Unencoded RGS for generator matrices on both sides: inner edges follow
// g_left^T g_right, and every first leaf gets a dangling second leaf.
RgsGraph build_rgs_adjacency(const BitMatrix& g_left, const BitMatrix& g_right);

struct StationOutcome {
    std::size_t station = 0;
    std::vector<std::uint8_t> fusion_successes; // one flag per arm
    BitVec x_tilde;                             // green-node X outcomes, kept arms in order
    std::optional<BitVec> m;                    // decoded logical readout
};

// End-of-chain corrections implied by the measurement records.
struct PauliFrame {
    BitVec x_corr;
    BitVec z_corr;
    bool hadamard = false;
};

PauliFrame corrections_from_m(const std::vector<BitVec>& m_list, std::size_t n_repeaters,
                              std::size_t k);

struct TrialResult {
    std::vector<StationOutcome> stations;
    PauliFrame frame;
    bool all_full_rank = false;
    bool decode_failed = false;
    bool verified = false;
};

// Decides fusion success at (station, arm); the default samples p_f.
using FusionSampler = std::function<bool(std::size_t station, std::size_t arm, Rng& rng)>;

// Exact stabilizer-level run of the whole chain: builds every RGS in one
// tableau, resolves fusions arm by arm, measures green nodes, decodes each
// m_a and checks the corrected end pairs against |Phi+>^k.
TrialResult simulate_chain(const ChainConfig& cfg, const std::vector<BitMatrix>& g_list,
                           Rng& rng);
TrialResult simulate_chain(const ChainConfig& cfg, const std::vector<BitMatrix>& g_list,
                           Rng& rng, const FusionSampler& sampler);

std::string trial_to_json(const TrialResult& trial);

} // namespace rgs
