#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace rgs {

// Branch vector (b_0, ..., b_m) of a tree code. Level-l vertices have b_l
// children each; the level-0 root is virtual and carries no photon.
class BranchVector {
  public:
    explicit BranchVector(std::vector<std::size_t> branches);

    const std::vector<std::size_t>& branches() const { return branches_; }
    std::size_t depth() const { return branches_.size(); } // m + 1 entries
    std::size_t branch(std::size_t level) const;           // 0 past the end

    // Photons in the tree: b_0 + b_0 b_1 + ...
    std::size_t physical_size() const;
    // Including the virtual root.
    std::size_t total_size() const { return physical_size() + 1; }

  private:
    std::vector<std::size_t> branches_;
};

// Indirect-Z success probabilities R_0..R_m, solved from the bottom level up.
std::vector<double> r_levels(const BranchVector& b, double eps);

// Success probability of a logical Z measurement at photon loss rate eps.
double p_z(const BranchVector& b, double eps);

// Success probability of a logical X measurement at photon loss rate eps.
double p_x(const BranchVector& b, double eps);

// Exhaustive enumeration over all loss patterns, tallied by loss count so a
// single pass serves every eps. Independent oracle for the recursion above.
struct BruteForceTally {
    std::size_t n_photons = 0;
    std::vector<double> x_wins; // index: number of lost photons
    std::vector<double> z_wins;

    double eval_x(double eps) const;
    double eval_z(double eps) const;
};

// Throws when the tree holds more than max_photons qubits (default 20).
BruteForceTally brute_force_tally(const BranchVector& b, std::size_t max_photons = 20);

std::pair<double, double> brute_force_px_pz(const BranchVector& b, double eps,
                                            std::size_t max_photons = 20);

} // namespace rgs
