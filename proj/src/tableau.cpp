#include "rgs/tableau.hpp"

#include <bit>
#include <cassert>
#include <stdexcept>

namespace rgs {

namespace {

int parity_and(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < words; ++w) {
        acc ^= a[w] & b[w];
    }
    return std::popcount(acc) & 1;
}

} // namespace

Tableau::Tableau(std::size_t n_qubits)
    : n_(n_qubits),
      words_((n_qubits + 63) / 64),
      stride_(2 * ((n_qubits + 63) / 64)),
      bits_(2 * n_qubits * stride_, 0),
      signs_(2 * n_qubits, 0),
      alive_(n_qubits, 1) {
    if (n_ == 0) {
        throw std::invalid_argument("Tableau: need at least one qubit");
    }
    // |0...0>: destabilizers X_i, stabilizers Z_i.
    for (std::size_t i = 0; i < n_; ++i) {
        row_x(i)[i / 64] |= 1ULL << (i % 64);
        row_z(n_ + i)[i / 64] |= 1ULL << (i % 64);
    }
}

Tableau Tableau::graph_state(const BitMatrix& adjacency) {
    std::size_t n = adjacency.rows();
    if (adjacency.cols() != n) {
        throw std::invalid_argument("graph_state: adjacency must be square");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (adjacency.get(i, i)) {
            throw std::invalid_argument("graph_state: nonzero diagonal");
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            if (adjacency.get(i, j) != adjacency.get(j, i)) {
                throw std::invalid_argument("graph_state: adjacency not symmetric");
            }
        }
    }
    Tableau t(n);
    // Destabilizers Z_i, stabilizers X_i prod_{j in N(i)} Z_j, signs +.
    std::fill(t.bits_.begin(), t.bits_.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
        t.row_z(i)[i / 64] |= 1ULL << (i % 64);
        t.row_x(n + i)[i / 64] |= 1ULL << (i % 64);
        for (std::size_t j = 0; j < n; ++j) {
            if (adjacency.get(i, j)) {
                t.row_z(n + i)[j / 64] |= 1ULL << (j % 64);
            }
        }
    }
    return t;
}

bool Tableau::alive(std::size_t q) const {
    if (q >= n_) {
        throw std::out_of_range("Tableau: qubit index out of range");
    }
    return alive_[q] != 0;
}

void Tableau::mark_dead(std::size_t q) {
    if (q >= n_) {
        throw std::out_of_range("Tableau: qubit index out of range");
    }
    alive_[q] = 0;
}

std::size_t Tableau::alive_count() const {
    std::size_t c = 0;
    for (auto a : alive_) {
        c += a;
    }
    return c;
}

void Tableau::apply_cnot(std::size_t control, std::size_t target) {
    if (control == target) {
        throw std::invalid_argument("apply_cnot: control equals target");
    }
    if (!alive(control) || !alive(target)) {
        throw std::invalid_argument("apply_cnot: dead qubit");
    }
    std::size_t cw = control / 64, tw = target / 64;
    std::uint64_t cm = 1ULL << (control % 64), tm = 1ULL << (target % 64);
    for (std::size_t r = 0; r < 2 * n_; ++r) {
        std::uint64_t* x = row_x(r);
        std::uint64_t* z = row_z(r);
        bool xc = x[cw] & cm, zc = z[cw] & cm;
        bool xt = x[tw] & tm, zt = z[tw] & tm;
        if (xc && zt && (xt == zc)) {
            signs_[r] ^= 1;
        }
        if (xc) {
            x[tw] ^= tm;
        }
        if (zt) {
            z[cw] ^= cm;
        }
    }
}

void Tableau::apply_cz(std::size_t a, std::size_t b) {
    if (a == b) {
        throw std::invalid_argument("apply_cz: identical qubits");
    }
    if (!alive(a) || !alive(b)) {
        throw std::invalid_argument("apply_cz: dead qubit");
    }
    std::size_t aw = a / 64, bw = b / 64;
    std::uint64_t am = 1ULL << (a % 64), bm = 1ULL << (b % 64);
    for (std::size_t r = 0; r < 2 * n_; ++r) {
        std::uint64_t* x = row_x(r);
        std::uint64_t* z = row_z(r);
        bool xa = x[aw] & am, za = z[aw] & am;
        bool xb = x[bw] & bm, zb = z[bw] & bm;
        if (xa && xb && (za != zb)) {
            signs_[r] ^= 1;
        }
        if (xb) {
            z[aw] ^= am;
        }
        if (xa) {
            z[bw] ^= bm;
        }
    }
}

void Tableau::apply_h(std::size_t q) {
    if (!alive(q)) {
        throw std::invalid_argument("apply_h: dead qubit");
    }
    std::size_t w = q / 64;
    std::uint64_t m = 1ULL << (q % 64);
    for (std::size_t r = 0; r < 2 * n_; ++r) {
        std::uint64_t* x = row_x(r);
        std::uint64_t* z = row_z(r);
        bool xb = x[w] & m, zb = z[w] & m;
        if (xb && zb) {
            signs_[r] ^= 1;
        }
        if (xb != zb) {
            x[w] ^= m;
            z[w] ^= m;
        }
    }
}

void Tableau::apply_x(std::size_t q) {
    if (!alive(q)) {
        throw std::invalid_argument("apply_x: dead qubit");
    }
    std::size_t w = q / 64;
    std::uint64_t m = 1ULL << (q % 64);
    for (std::size_t r = 0; r < 2 * n_; ++r) {
        if (row_z(r)[w] & m) {
            signs_[r] ^= 1;
        }
    }
}

void Tableau::apply_z(std::size_t q) {
    if (!alive(q)) {
        throw std::invalid_argument("apply_z: dead qubit");
    }
    std::size_t w = q / 64;
    std::uint64_t m = 1ULL << (q % 64);
    for (std::size_t r = 0; r < 2 * n_; ++r) {
        if (row_x(r)[w] & m) {
            signs_[r] ^= 1;
        }
    }
}

// Exponent of i collected when multiplying the row Pauli (x2,z2) onto (x1,z1),
// word-parallel. Positive cases contribute +1 each, negative ones -1.
int Tableau::phase_contrib(const std::uint64_t* x1, const std::uint64_t* z1,
                           const std::uint64_t* x2, const std::uint64_t* z2,
                           std::size_t words) {
    int total = 0;
    for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t a = x1[w], b = z1[w], c = x2[w], d = z2[w];
        std::uint64_t plus = (a & b & ~c & d) | (a & ~b & c & d) | (~a & b & c & ~d);
        std::uint64_t minus = (a & b & c & ~d) | (a & ~b & ~c & d) | (~a & b & c & d);
        total += std::popcount(plus) - std::popcount(minus);
    }
    return total;
}

void Tableau::row_mult(std::size_t dst, std::size_t src) {
    int phase = 2 * signs_[dst] + 2 * signs_[src] +
                phase_contrib(row_x(src), row_z(src), row_x(dst), row_z(dst), words_);
    phase &= 3;
    assert(phase == 0 || phase == 2);
    signs_[dst] = static_cast<std::uint8_t>(phase >> 1);
    for (std::size_t w = 0; w < words_; ++w) {
        row_x(dst)[w] ^= row_x(src)[w];
        row_z(dst)[w] ^= row_z(src)[w];
    }
}

Tableau::PackedPauli Tableau::pack(const PauliWord& word, bool check_alive) const {
    if (word.factors.empty()) {
        throw std::invalid_argument("Pauli word is empty");
    }
    PackedPauli p{std::vector<std::uint64_t>(words_, 0), std::vector<std::uint64_t>(words_, 0)};
    for (const auto& [q, op] : word.factors) {
        if (q >= n_) {
            throw std::out_of_range("Pauli word: qubit index out of range");
        }
        if (check_alive && !alive_[q]) {
            throw std::invalid_argument("Pauli word touches a dead qubit");
        }
        std::uint64_t m = 1ULL << (q % 64);
        if ((p.x[q / 64] & m) || (p.z[q / 64] & m)) {
            throw std::invalid_argument("Pauli word: repeated qubit");
        }
        if (op == Pauli::X || op == Pauli::Y) {
            p.x[q / 64] |= m;
        }
        if (op == Pauli::Z || op == Pauli::Y) {
            p.z[q / 64] |= m;
        }
    }
    return p;
}

bool Tableau::anticommutes(std::size_t r, const PackedPauli& p) const {
    return (parity_and(row_x(r), p.z.data(), words_) ^
            parity_and(row_z(r), p.x.data(), words_)) != 0;
}

int Tableau::measure(const PauliWord& word, Rng& rng) {
    PackedPauli p = pack(word, true);
    std::size_t pivot = 2 * n_;
    for (std::size_t r = n_; r < 2 * n_; ++r) {
        if (anticommutes(r, p)) {
            pivot = r;
            break;
        }
    }
    if (pivot == 2 * n_) {
        // Commutes with the whole group: deterministic outcome, no update.
        auto sign = deterministic_sign(word);
        assert(sign.has_value());
        return *sign;
    }
    for (std::size_t r = 0; r < 2 * n_; ++r) {
        if (r != pivot && r != pivot - n_ && anticommutes(r, p)) {
            row_mult(r, pivot);
        }
    }
    // Old stabilizer becomes the destabilizer partner; the measured word,
    // signed by the outcome, replaces it.
    std::size_t partner = pivot - n_;
    for (std::size_t w = 0; w < words_; ++w) {
        row_x(partner)[w] = row_x(pivot)[w];
        row_z(partner)[w] = row_z(pivot)[w];
    }
    signs_[partner] = signs_[pivot];
    int outcome = static_cast<int>(rng() & 1);
    for (std::size_t w = 0; w < words_; ++w) {
        row_x(pivot)[w] = p.x[w];
        row_z(pivot)[w] = p.z[w];
    }
    signs_[pivot] = static_cast<std::uint8_t>(outcome);
    return outcome;
}

std::optional<int> Tableau::deterministic_sign(const PauliWord& word) const {
    PackedPauli p = pack(word, false);
    for (std::size_t r = n_; r < 2 * n_; ++r) {
        if (anticommutes(r, p)) {
            return std::nullopt;
        }
    }
    // Accumulate the stabilizer rows flagged by anticommuting destabilizers;
    // the result must reproduce the word bit for bit.
    std::vector<std::uint64_t> sx(words_, 0), sz(words_, 0);
    int phase = 0;
    for (std::size_t i = 0; i < n_; ++i) {
        if (anticommutes(i, p)) {
            phase += 2 * signs_[n_ + i] +
                     phase_contrib(row_x(n_ + i), row_z(n_ + i), sx.data(), sz.data(), words_);
            for (std::size_t w = 0; w < words_; ++w) {
                sx[w] ^= row_x(n_ + i)[w];
                sz[w] ^= row_z(n_ + i)[w];
            }
        }
    }
    for (std::size_t w = 0; w < words_; ++w) {
        if (sx[w] != p.x[w] || sz[w] != p.z[w]) {
            return std::nullopt; // not in the group (only possible with dead qubits)
        }
    }
    phase &= 3;
    assert(phase == 0 || phase == 2);
    return phase >> 1;
}

bool Tableau::is_bell_pairs(
    const std::vector<std::pair<std::size_t, std::size_t>>& pairs) const {
    std::vector<std::uint8_t> listed(n_, 0);
    for (const auto& [a, b] : pairs) {
        if (!alive(a) || !alive(b)) {
            throw std::invalid_argument("is_bell_pairs: dead qubit listed");
        }
        listed[a] = listed[b] = 1;
    }
    for (std::size_t q = 0; q < n_; ++q) {
        if (alive_[q] && !listed[q]) {
            throw std::invalid_argument("is_bell_pairs: unlisted qubit still alive");
        }
    }
    for (const auto& [a, b] : pairs) {
        auto sx = deterministic_sign(PauliWord::pair(a, Pauli::X, b, Pauli::X));
        auto sz = deterministic_sign(PauliWord::pair(a, Pauli::Z, b, Pauli::Z));
        if (!sx || *sx != 0 || !sz || *sz != 0) {
            return false;
        }
    }
    return true;
}

CanonicalForm Tableau::canonicalize(const std::vector<std::size_t>& column_order,
                                    std::size_t drop_leading) const {
    // Work on a copy of the stabilizer half with phase-tracked row ops.
    std::size_t stride = 2 * words_;
    std::vector<std::uint64_t> rows(n_ * stride);
    std::vector<std::uint8_t> signs(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t w = 0; w < words_; ++w) {
            rows[i * stride + w] = row_x(n_ + i)[w];
            rows[i * stride + words_ + w] = row_z(n_ + i)[w];
        }
        signs[i] = signs_[n_ + i];
    }
    auto bit_at = [&](std::size_t r, std::size_t col) {
        return (rows[r * stride + col / 64] >> (col % 64)) & 1ULL;
    };
    auto mult = [&](std::size_t dst, std::size_t src) {
        int phase = 2 * signs[dst] + 2 * signs[src] +
                    phase_contrib(&rows[src * stride], &rows[src * stride + words_],
                                  &rows[dst * stride], &rows[dst * stride + words_], words_);
        phase &= 3;
        assert(phase == 0 || phase == 2);
        signs[dst] = static_cast<std::uint8_t>(phase >> 1);
        for (std::size_t w = 0; w < stride; ++w) {
            rows[dst * stride + w] ^= rows[src * stride + w];
        }
    };
    std::size_t r = 0;
    std::size_t keep_from = 0;
    for (std::size_t oi = 0; oi < column_order.size() && r < n_; ++oi) {
        std::size_t bitcol = column_order[oi];
        std::size_t pivot = r;
        while (pivot < n_ && !bit_at(pivot, bitcol)) {
            ++pivot;
        }
        if (pivot == n_) {
            continue;
        }
        if (pivot != r) {
            for (std::size_t w = 0; w < stride; ++w) {
                std::swap(rows[pivot * stride + w], rows[r * stride + w]);
            }
            std::swap(signs[pivot], signs[r]);
        }
        for (std::size_t i = 0; i < n_; ++i) {
            if (i != r && bit_at(i, bitcol)) {
                mult(i, r);
            }
        }
        ++r;
        if (oi < drop_leading) {
            keep_from = r;
        }
    }
    // Rows with pivots inside the leading block carry measurement byproducts
    // on discarded qubits; echelon form puts zeros left of every pivot, so
    // the remaining rows are exactly the reduced state's group.
    CanonicalForm out;
    out.n_qubits = n_;
    out.rows.assign(rows.begin() + static_cast<std::ptrdiff_t>(keep_from * stride), rows.end());
    out.signs.assign(signs.begin() + static_cast<std::ptrdiff_t>(keep_from), signs.end());
    return out;
}

CanonicalForm Tableau::canonical_stabilizers() const {
    std::vector<std::size_t> order;
    order.reserve(2 * n_);
    for (std::size_t q = 0; q < n_; ++q) {
        order.push_back(q);
    }
    for (std::size_t q = 0; q < n_; ++q) {
        order.push_back(words_ * 64 + q);
    }
    return canonicalize(order, 0);
}

CanonicalForm Tableau::canonical_live_state() const {
    std::vector<std::size_t> order;
    order.reserve(2 * n_);
    std::size_t dead_cols = 0;
    for (std::size_t q = 0; q < n_; ++q) {
        if (!alive_[q]) {
            order.push_back(q);
            order.push_back(words_ * 64 + q);
            dead_cols += 2;
        }
    }
    for (std::size_t q = 0; q < n_; ++q) {
        if (alive_[q]) {
            order.push_back(q);
        }
    }
    for (std::size_t q = 0; q < n_; ++q) {
        if (alive_[q]) {
            order.push_back(words_ * 64 + q);
        }
    }
    return canonicalize(order, dead_cols);
}

bool Tableau::invariants_ok() const {
    // All 2n rows commute except destabilizer i with stabilizer i.
    for (std::size_t a = 0; a < 2 * n_; ++a) {
        for (std::size_t b = a + 1; b < 2 * n_; ++b) {
            int anti = parity_and(row_x(a), row_z(b), words_) ^
                       parity_and(row_z(a), row_x(b), words_);
            bool partners = (b == a + n_);
            if (anti != (partners ? 1 : 0)) {
                return false;
            }
        }
    }
    // Stabilizer rows independent over GF(2).
    BitMatrix m(n_, 2 * n_);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t q = 0; q < n_; ++q) {
            std::uint64_t mask = 1ULL << (q % 64);
            if (row_x(n_ + i)[q / 64] & mask) {
                m.set(i, q, true);
            }
            if (row_z(n_ + i)[q / 64] & mask) {
                m.set(i, n_ + q, true);
            }
        }
    }
    return m.rank() == n_;
}

std::string Tableau::str() const {
    std::string s;
    for (std::size_t i = n_; i < 2 * n_; ++i) {
        s += signs_[i] ? '-' : '+';
        for (std::size_t q = 0; q < n_; ++q) {
            std::uint64_t mask = 1ULL << (q % 64);
            bool x = row_x(i)[q / 64] & mask;
            bool z = row_z(i)[q / 64] & mask;
            s += x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
        }
        s += '\n';
    }
    return s;
}

MeasurementRecord fuse(Tableau& t, std::size_t q1, std::size_t q2, bool success, Rng& rng) {
    if (q1 == q2) {
        throw std::invalid_argument("fuse: identical qubits");
    }
    if (!t.alive(q1) || !t.alive(q2)) {
        throw std::invalid_argument("fuse: dead qubit");
    }
    MeasurementRecord rec{{q1, q2}, MeasureBasis::Fusion, {}, success};
    if (success) {
        int x_out = t.measure(PauliWord::pair(q1, Pauli::X, q2, Pauli::X), rng);
        int z_out = t.measure(PauliWord::pair(q1, Pauli::Z, q2, Pauli::Z), rng);
        rec.outcomes = {x_out, z_out};
    } else {
        rec.basis = MeasureBasis::X;
        int s1 = t.measure(PauliWord::single(q1, Pauli::X), rng);
        int s2 = t.measure(PauliWord::single(q2, Pauli::X), rng);
        rec.outcomes = {s1, s2};
    }
    t.mark_dead(q1);
    t.mark_dead(q2);
    return rec;
}

MeasurementRecord post_fusion_cleanup(Tableau& t, std::size_t q3, std::size_t q4, int s_f,
                                      Rng& rng) {
    if (!t.alive(q3)) {
        throw std::invalid_argument("post_fusion_cleanup: dead qubit");
    }
    int s3 = t.measure(PauliWord::single(q3, Pauli::X), rng);
    t.mark_dead(q3);
    if ((s3 ^ s_f) & 1) {
        t.apply_z(q4);
    }
    return MeasurementRecord{{q3}, MeasureBasis::X, {s3}, true};
}

} // namespace rgs
