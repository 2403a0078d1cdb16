#pragma once

// Dense state-vector simulator used as an independent oracle for the
// stabilizer tableau on small systems. Deliberately naive.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "rgs/bitmatrix.hpp"
#include "rgs/tableau.hpp"

namespace rgs::test {

class StateVector {
  public:
    explicit StateVector(std::size_t n) : n_(n), amp_(std::size_t{1} << n, 0.0) {
        amp_[0] = 1.0;
    }

    static StateVector graph_state(const BitMatrix& adj) {
        std::size_t n = adj.rows();
        StateVector sv(n);
        for (std::size_t q = 0; q < n; ++q) {
            sv.apply_h(q);
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (adj.get(i, j)) {
                    sv.apply_cz(i, j);
                }
            }
        }
        return sv;
    }

    std::size_t n_qubits() const { return n_; }

    void apply_h(std::size_t q) {
        std::size_t bit = std::size_t{1} << q;
        double inv = 1.0 / std::sqrt(2.0);
        for (std::size_t s = 0; s < amp_.size(); ++s) {
            if (s & bit) {
                continue;
            }
            auto a = amp_[s];
            auto b = amp_[s | bit];
            amp_[s] = inv * (a + b);
            amp_[s | bit] = inv * (a - b);
        }
    }

    void apply_x(std::size_t q) {
        std::size_t bit = std::size_t{1} << q;
        for (std::size_t s = 0; s < amp_.size(); ++s) {
            if (!(s & bit)) {
                std::swap(amp_[s], amp_[s | bit]);
            }
        }
    }

    void apply_z(std::size_t q) {
        std::size_t bit = std::size_t{1} << q;
        for (std::size_t s = 0; s < amp_.size(); ++s) {
            if (s & bit) {
                amp_[s] = -amp_[s];
            }
        }
    }

    void apply_cz(std::size_t a, std::size_t b) {
        std::size_t mask = (std::size_t{1} << a) | (std::size_t{1} << b);
        for (std::size_t s = 0; s < amp_.size(); ++s) {
            if ((s & mask) == mask) {
                amp_[s] = -amp_[s];
            }
        }
    }

    void apply_cnot(std::size_t c, std::size_t t) {
        std::size_t cb = std::size_t{1} << c;
        std::size_t tb = std::size_t{1} << t;
        for (std::size_t s = 0; s < amp_.size(); ++s) {
            if ((s & cb) && !(s & tb)) {
                std::swap(amp_[s], amp_[s | tb]);
            }
        }
    }

    // Applies the Pauli word to a copy and returns it.
    StateVector with_pauli(const PauliWord& word) const {
        StateVector out = *this;
        for (const auto& [q, p] : word.factors) {
            std::size_t bit = std::size_t{1} << q;
            for (std::size_t s = 0; s < out.amp_.size(); ++s) {
                if (p == Pauli::Z) {
                    if (s & bit) {
                        out.amp_[s] = -out.amp_[s];
                    }
                }
            }
            if (p == Pauli::X) {
                out.apply_x(q);
            } else if (p == Pauli::Y) {
                StateVector tmp = out;
                tmp.apply_x(q);
                for (std::size_t s = 0; s < tmp.amp_.size(); ++s) {
                    std::complex<double> i(0.0, 1.0);
                    tmp.amp_[s] *= (s & bit) ? i : -i;
                }
                out = tmp;
            }
        }
        return out;
    }

    std::complex<double> inner(const StateVector& other) const {
        std::complex<double> acc = 0.0;
        for (std::size_t s = 0; s < amp_.size(); ++s) {
            acc += std::conj(amp_[s]) * other.amp_[s];
        }
        return acc;
    }

    std::complex<double> pauli_expectation(const PauliWord& word) const {
        return inner(with_pauli(word));
    }

    // Probability of outcome s for the word, i.e. |(I + (-1)^s P)/2 psi|^2.
    double outcome_probability(const PauliWord& word, int s) const {
        double e = pauli_expectation(word).real();
        return 0.5 * (1.0 + (s ? -1.0 : 1.0) * e);
    }

    // Projects onto the outcome and renormalizes; throws on zero probability.
    void project(const PauliWord& word, int s) {
        StateVector flipped = with_pauli(word);
        double sign = s ? -1.0 : 1.0;
        for (std::size_t i = 0; i < amp_.size(); ++i) {
            amp_[i] = 0.5 * (amp_[i] + sign * flipped.amp_[i]);
        }
        double norm = 0.0;
        for (const auto& a : amp_) {
            norm += std::norm(a);
        }
        if (norm < 1e-12) {
            throw std::runtime_error("project: impossible outcome");
        }
        double inv = 1.0 / std::sqrt(norm);
        for (auto& a : amp_) {
            a *= inv;
        }
    }

    // Checks that every canonical stabilizer row fixes this state.
    bool stabilized_by(const Tableau& t) const {
        auto canon = t.canonical_stabilizers();
        std::size_t n = canon.n_qubits;
        std::size_t words = (n + 63) / 64;
        for (std::size_t r = 0; r < n; ++r) {
            PauliWord word;
            for (std::size_t q = 0; q < n; ++q) {
                bool x = (canon.rows[r * 2 * words + q / 64] >> (q % 64)) & 1;
                bool z = (canon.rows[r * 2 * words + words + q / 64] >> (q % 64)) & 1;
                if (x && z) {
                    word.factors.push_back({q, Pauli::Y});
                } else if (x) {
                    word.factors.push_back({q, Pauli::X});
                } else if (z) {
                    word.factors.push_back({q, Pauli::Z});
                }
            }
            if (word.factors.empty()) {
                continue;
            }
            double want = canon.signs[r] ? -1.0 : 1.0;
            auto e = pauli_expectation(word);
            if (std::abs(e.real() - want) > 1e-9 || std::abs(e.imag()) > 1e-9) {
                return false;
            }
        }
        return true;
    }

  private:
    std::size_t n_;
    std::vector<std::complex<double>> amp_;
};

} // namespace rgs::test
