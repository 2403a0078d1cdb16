#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rgs/bitmatrix.hpp"
#include "rgs/rng.hpp"

namespace rgs {

enum class Pauli : std::uint8_t { X, Y, Z };

// Sparse Pauli word: a list of (qubit, operator) factors, implicit +1 sign.
struct PauliWord {
    std::vector<std::pair<std::size_t, Pauli>> factors;

    static PauliWord single(std::size_t q, Pauli p) { return {{{q, p}}}; }
    static PauliWord pair(std::size_t q1, Pauli p1, std::size_t q2, Pauli p2) {
        return {{{q1, p1}, {q2, p2}}};
    }
};

enum class MeasureBasis : std::uint8_t { X, Z, Fusion };

struct MeasurementRecord {
    std::vector<std::size_t> qubits;
    MeasureBasis basis;
    std::vector<int> outcomes; // fusion: {x_out, z_out}; failure: one X bit per qubit
    bool fused;
};

// Stabilizer rows in reduced echelon form plus their signs; equal states
// produce identical canonical forms.
struct CanonicalForm {
    std::size_t n_qubits = 0;
    std::vector<std::uint64_t> rows; // packed x|z bits, row-major
    std::vector<std::uint8_t> signs;
    bool operator==(const CanonicalForm&) const = default;
};

// CHP-style stabilizer tableau with destabilizer rows, packed into words.
// Qubits are never removed; finished ones are marked dead and any further
// gate or measurement touching them is an error.
class Tableau {
  public:
    explicit Tableau(std::size_t n_qubits);

    // |G> for a simple graph: X block identity, Z block the adjacency,
    // all signs +.
    static Tableau graph_state(const BitMatrix& adjacency);

    std::size_t n_qubits() const { return n_; }
    bool alive(std::size_t q) const;
    void mark_dead(std::size_t q);
    std::size_t alive_count() const;

    void apply_cnot(std::size_t control, std::size_t target);
    void apply_cz(std::size_t a, std::size_t b);
    void apply_h(std::size_t q);
    void apply_x(std::size_t q);
    void apply_z(std::size_t q);

    // Measures a Hermitian Pauli word. Deterministic outcomes leave the state
    // unchanged; random ones update the group and consume one rng draw.
    int measure(const PauliWord& word, Rng& rng);

    // Sign of the word if (+/-)word stabilizes the state, nullopt otherwise.
    // Does not modify the tableau.
    std::optional<int> deterministic_sign(const PauliWord& word) const;

    // True iff every listed pair is stabilized by +XX and +ZZ. Requires the
    // listed qubits alive and everything else dead.
    bool is_bell_pairs(const std::vector<std::pair<std::size_t, std::size_t>>& pairs) const;

    CanonicalForm canonical_stabilizers() const;

    // Canonical form of the reduced state on the alive qubits only: rows
    // supported on dead qubits are eliminated first and dropped, so the
    // result does not depend on past measurement outcomes.
    CanonicalForm canonical_live_state() const;

    // Rows pairwise commute and stay independent; used by tests.
    bool invariants_ok() const;

    std::string str() const;

  private:
    struct PackedPauli {
        std::vector<std::uint64_t> x;
        std::vector<std::uint64_t> z;
    };

    std::uint64_t* row_x(std::size_t r) { return bits_.data() + r * stride_; }
    std::uint64_t* row_z(std::size_t r) { return bits_.data() + r * stride_ + words_; }
    const std::uint64_t* row_x(std::size_t r) const { return bits_.data() + r * stride_; }
    const std::uint64_t* row_z(std::size_t r) const { return bits_.data() + r * stride_ + words_; }

    bool anticommutes(std::size_t r, const PackedPauli& p) const;
    void row_mult(std::size_t dst, std::size_t src);
    PackedPauli pack(const PauliWord& word, bool check_alive) const;
    CanonicalForm canonicalize(const std::vector<std::size_t>& column_order,
                               std::size_t drop_leading) const;

    static int phase_contrib(const std::uint64_t* x1, const std::uint64_t* z1,
                             const std::uint64_t* x2, const std::uint64_t* z2,
                             std::size_t words);

    std::size_t n_ = 0;
    std::size_t words_ = 0;
    std::size_t stride_ = 0;
    std::vector<std::uint64_t> bits_;  // 2n rows: destabilizers then stabilizers
    std::vector<std::uint8_t> signs_;  // 2n sign bits
    std::vector<std::uint8_t> alive_;
};

// Type-II fusion on two dangling qubits. On success jointly measures XX and
// ZZ (outcomes recorded in that order); on failure measures X on each qubit.
// Both qubits are dead afterwards.
MeasurementRecord fuse(Tableau& t, std::size_t q1, std::size_t q2, bool success, Rng& rng);

// After a successful fusion: measures X on q3 (consuming it) and applies
// Z^(s3 + s_f) to q4. With s_f the fusion ZZ outcome this restores the
// contracted graph state whenever the fusion XX outcome was +1; the XX=-1
// branch needs the extra neighbor corrections applied by the caller.
MeasurementRecord post_fusion_cleanup(Tableau& t, std::size_t q3, std::size_t q4, int s_f,
                                      Rng& rng);

} // namespace rgs
