#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "rgs/bitmatrix.hpp"
#include "rgs/rng.hpp"

namespace rgs {

// Regular parity-check code. A block-permutation construction leaves
// col_weight - 1 dependent rows in H, so the true dimension exceeds the
// design k; `k` below is the actual dimension n - rank(H).
struct LdpcCode {
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t col_weight = 0;
    std::size_t row_weight = 0;
    BitMatrix h;
    BitMatrix g;                         // k x n, H G^T = 0
    std::vector<std::size_t> info_cols;  // codeword positions carrying the info word
};

struct BsecParams {
    double p_bsc = 0.0; // flip probability of surviving bits
    double p_bec = 0.0; // erasure probability
};

enum class Symbol : std::uint8_t { Zero = 0, One = 1, Erased = 2 };

// Gallager ensemble: col_weight stacked permutation blocks, resampled a few
// times to cut down 4-cycles. Throws when the degrees are infeasible.
LdpcCode gallager_construct(std::size_t n, std::size_t design_k, std::size_t col_weight,
                            Rng& rng, std::size_t resample_attempts = 40);

// Nullspace generator for an arbitrary parity-check matrix, systematic on the
// recorded free columns.
struct GeneratorResult {
    BitMatrix g;
    std::vector<std::size_t> info_cols;
};
GeneratorResult generator_from_parity(const BitMatrix& h);

BitVec encode(const LdpcCode& code, const BitVec& info);

std::vector<Symbol> bsec_channel(const BitVec& codeword, const BsecParams& params, Rng& rng);

struct BpResult {
    bool success = false;
    BitVec codeword;
    BitVec info;
    std::size_t iterations = 0;
};

// Serial-schedule sum-product decoder; erased symbols start with zero
// likelihood. Success means some iterate satisfied every parity check.
BpResult bp_decode(const LdpcCode& code, const std::vector<Symbol>& received,
                   const BsecParams& params, std::size_t max_iters = 100);

// Shannon capacity of the combined flip-plus-erasure channel.
double capacity_bsec(const BsecParams& params);

struct McResult {
    std::size_t trials = 0;
    std::size_t failures = 0;
    double failure_rate = 0.0;
    double ci_low = 0.0;  // 95% Wilson interval
    double ci_high = 0.0;
};

// Failure = decoder gives up or returns the wrong information word.
McResult logical_error_mc(const LdpcCode& code, const BsecParams& params, std::size_t trials,
                          Rng& rng);

} // namespace rgs
