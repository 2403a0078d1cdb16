#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "rgs/rng.hpp"

namespace rgs {

using BitVec = std::vector<std::uint8_t>;

// Dense matrix over GF(2), rows packed into 64-bit words.
class BitMatrix {
  public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols);

    static BitMatrix identity(std::size_t n);
    static BitMatrix from_rows(std::initializer_list<std::initializer_list<int>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t words_per_row() const { return words_; }

    bool get(std::size_t r, std::size_t c) const;
    void set(std::size_t r, std::size_t c, bool v);

    const std::uint64_t* row(std::size_t r) const { return bits_.data() + r * words_; }
    std::uint64_t* row(std::size_t r) { return bits_.data() + r * words_; }

    void xor_row_into(std::size_t src, std::size_t dst);
    void xor_col_into(std::size_t src, std::size_t dst);
    void swap_rows(std::size_t a, std::size_t b);

    BitMatrix transposed() const;
    std::size_t rank() const;
    bool is_zero() const;

    bool operator==(const BitMatrix& other) const;
    std::string str() const;

  private:
    void check_bounds(std::size_t r, std::size_t c) const;

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> bits_;
};

BitMatrix operator*(const BitMatrix& a, const BitMatrix& b);

// Matrix with every entry an independent fair coin flip.
BitMatrix sample_uniform(std::size_t rows, std::size_t cols, Rng& rng);

// Column selection for erasure experiments: the surviving column indices,
// strictly increasing.
class ErasurePattern {
  public:
    explicit ErasurePattern(std::vector<std::size_t> kept);
    static ErasurePattern keep_all(std::size_t n);
    static ErasurePattern sample(std::size_t n, double erase_prob, Rng& rng);

    const std::vector<std::size_t>& kept() const { return kept_; }
    std::size_t size() const { return kept_.size(); }

  private:
    std::vector<std::size_t> kept_;
};

BitMatrix erase_columns(const BitMatrix& g, const ErasurePattern& pattern);

// Solves m * gt = x for the unique m when gt has full row rank.
// Returns nullopt when x is not in the row space. Throws std::invalid_argument
// when gt is rank deficient (callers are expected to have checked).
std::optional<BitVec> solve_left(const BitMatrix& gt, const BitVec& x);

// One elementary column operation: XOR the source column into the target.
struct ColumnStep {
    std::size_t source;
    std::size_t target;
    bool operator==(const ColumnStep&) const = default;
};

struct GammaNormalization {
    BitMatrix q;                    // invertible, gamma * q == [I_k | 0]
    std::vector<ColumnStep> steps;  // replaying on I yields q
};

// Finds an invertible q with gamma * q = [I | 0]; gamma must have full row
// rank. Pivots are picked lowest-index-first so results are deterministic.
GammaNormalization normalize_gamma(const BitMatrix& gamma);

// Factors an invertible matrix into elementary column XOR steps; replaying
// the list on the identity reproduces q exactly.
std::vector<ColumnStep> decompose_invertible(const BitMatrix& q);

BitMatrix apply_column_steps(BitMatrix m, const std::vector<ColumnStep>& steps);

} // namespace rgs
