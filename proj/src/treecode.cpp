#include "rgs/treecode.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace rgs {

BranchVector::BranchVector(std::vector<std::size_t> branches) : branches_(std::move(branches)) {
    if (branches_.empty()) {
        throw std::invalid_argument("BranchVector: empty");
    }
    for (std::size_t b : branches_) {
        if (b == 0) {
            throw std::invalid_argument("BranchVector: entries must be >= 1");
        }
    }
    std::size_t level = 1;
    std::size_t total = 0;
    for (std::size_t b : branches_) {
        if (level > (1ULL << 40) / b) {
            throw std::invalid_argument("BranchVector: tree size overflows");
        }
        level *= b;
        total += level;
        if (total > (1ULL << 40)) {
            throw std::invalid_argument("BranchVector: tree size overflows");
        }
    }
}

std::size_t BranchVector::branch(std::size_t level) const {
    return level < branches_.size() ? branches_[level] : 0;
}

std::size_t BranchVector::physical_size() const {
    std::size_t level = 1;
    std::size_t total = 0;
    for (std::size_t b : branches_) {
        level *= b;
        total += level;
    }
    return total;
}

std::vector<double> r_levels(const BranchVector& b, double eps) {
    if (eps < 0.0 || eps > 1.0) {
        throw std::invalid_argument("r_levels: eps outside [0, 1]");
    }
    std::size_t m = b.depth() - 1;
    // R_l for l in [0, m+2]; entries beyond m are 0.
    std::vector<double> r(m + 3, 0.0);
    for (std::size_t li = 0; li <= m; ++li) {
        std::size_t l = m - li;
        double inner = std::pow(1.0 - eps + eps * r[l + 2], static_cast<double>(b.branch(l + 1)));
        double fail_one = 1.0 - (1.0 - eps) * inner;
        r[l] = 1.0 - std::pow(fail_one, static_cast<double>(b.branch(l)));
        if (r[l] < 0.0) {
            r[l] = 0.0;
        }
        if (r[l] > 1.0) {
            r[l] = 1.0;
        }
    }
    r.resize(m + 1);
    return r;
}

namespace {

double r_at(const BranchVector& b, double eps, std::size_t level) {
    auto r = r_levels(b, eps);
    return level < r.size() ? r[level] : 0.0;
}

} // namespace

double p_z(const BranchVector& b, double eps) {
    double r1 = r_at(b, eps, 1);
    return std::pow(1.0 - eps + eps * r1, static_cast<double>(b.branch(0)));
}

double p_x(const BranchVector& b, double eps) {
    auto r = r_levels(b, eps);
    double r1 = r.size() > 1 ? r[1] : 0.0;
    double r2 = r.size() > 2 ? r[2] : 0.0;
    double b0 = static_cast<double>(b.branch(0));
    double head = std::pow(1.0 - eps + eps * r1, b0) - std::pow(eps * r1, b0);
    double tail = std::pow(1.0 - eps + eps * r2, static_cast<double>(b.branch(1)));
    double v = head * tail;
    if (v < 0.0) {
        v = 0.0;
    }
    return v;
}

namespace {

// Flat tree layout in BFS order: per node its children occupy a contiguous
// index range.
struct TreeShape {
    std::size_t n = 0;
    std::vector<std::size_t> child_begin;
    std::vector<std::size_t> child_end;
    std::size_t level1_count = 0; // nodes 0..level1_count-1 are level 1
};

TreeShape layout(const BranchVector& b) {
    TreeShape shape;
    shape.level1_count = b.branch(0);
    std::size_t level_start = 0;
    std::size_t level_count = shape.level1_count;
    shape.n = level_count;
    std::vector<std::pair<std::size_t, std::size_t>> levels; // (start, count)
    levels.push_back({level_start, level_count});
    for (std::size_t l = 1; l < b.depth(); ++l) {
        level_start = shape.n;
        level_count = levels.back().second * b.branch(l);
        shape.n += level_count;
        levels.push_back({level_start, level_count});
    }
    shape.child_begin.assign(shape.n, 0);
    shape.child_end.assign(shape.n, 0);
    for (std::size_t l = 0; l + 1 < levels.size(); ++l) {
        auto [start, count] = levels[l];
        auto [cstart, ccount] = levels[l + 1];
        std::size_t per = ccount / count;
        for (std::size_t i = 0; i < count; ++i) {
            shape.child_begin[start + i] = cstart + i * per;
            shape.child_end[start + i] = cstart + (i + 1) * per;
        }
    }
    return shape;
}

} // namespace

double BruteForceTally::eval_x(double eps) const {
    double total = 0.0;
    for (std::size_t c = 0; c < x_wins.size(); ++c) {
        total += x_wins[c] * std::pow(eps, static_cast<double>(c)) *
                 std::pow(1.0 - eps, static_cast<double>(n_photons - c));
    }
    return total;
}

double BruteForceTally::eval_z(double eps) const {
    double total = 0.0;
    for (std::size_t c = 0; c < z_wins.size(); ++c) {
        total += z_wins[c] * std::pow(eps, static_cast<double>(c)) *
                 std::pow(1.0 - eps, static_cast<double>(n_photons - c));
    }
    return total;
}

BruteForceTally brute_force_tally(const BranchVector& b, std::size_t max_photons) {
    TreeShape shape = layout(b);
    if (shape.n > max_photons) {
        throw std::invalid_argument("brute_force_tally: tree too large to enumerate");
    }
    BruteForceTally tally;
    tally.n_photons = shape.n;
    tally.x_wins.assign(shape.n + 1, 0.0);
    tally.z_wins.assign(shape.n + 1, 0.0);

    std::vector<std::uint8_t> zable(shape.n), indirect(shape.n);
    std::uint64_t patterns = 1ULL << shape.n;
    for (std::uint64_t mask = 0; mask < patterns; ++mask) {
        auto lost = [&](std::size_t i) { return (mask >> i) & 1ULL; };
        // Children come after parents in BFS order, so walk back to front.
        // A node is Z-measurable if received, or indirectly via one received
        // child whose own children are all Z-measurable.
        for (std::size_t ri = 0; ri < shape.n; ++ri) {
            std::size_t i = shape.n - 1 - ri;
            std::uint8_t ind = 0;
            for (std::size_t c = shape.child_begin[i]; c < shape.child_end[i] && !ind; ++c) {
                if (lost(c)) {
                    continue;
                }
                std::uint8_t all = 1;
                for (std::size_t d = shape.child_begin[c]; d < shape.child_end[c]; ++d) {
                    if (!zable[d]) {
                        all = 0;
                        break;
                    }
                }
                ind = all;
            }
            indirect[i] = ind;
            zable[i] = ind || !lost(i);
        }

        bool z_ok = true;
        for (std::size_t i = 0; i < shape.level1_count; ++i) {
            if (!zable[i]) {
                z_ok = false;
                break;
            }
        }

        // Logical X: scan level 1 in order; the first received photon is
        // measured in X and commits. Everything before it must be indirectly
        // Z-measurable, its children and everything after directly or
        // indirectly Z-measurable.
        bool x_ok = false;
        std::size_t chosen = shape.level1_count;
        bool prefix_ok = true;
        for (std::size_t i = 0; i < shape.level1_count; ++i) {
            if (!lost(i)) {
                chosen = i;
                break;
            }
            if (!indirect[i]) {
                prefix_ok = false;
                break;
            }
        }
        if (chosen < shape.level1_count && prefix_ok) {
            x_ok = true;
            for (std::size_t c = shape.child_begin[chosen]; c < shape.child_end[chosen]; ++c) {
                if (!zable[c]) {
                    x_ok = false;
                    break;
                }
            }
            for (std::size_t i = chosen + 1; x_ok && i < shape.level1_count; ++i) {
                if (!zable[i]) {
                    x_ok = false;
                }
            }
        }

        int lost_count = std::popcount(mask);
        if (x_ok) {
            tally.x_wins[static_cast<std::size_t>(lost_count)] += 1.0;
        }
        if (z_ok) {
            tally.z_wins[static_cast<std::size_t>(lost_count)] += 1.0;
        }
    }
    return tally;
}

std::pair<double, double> brute_force_px_pz(const BranchVector& b, double eps,
                                            std::size_t max_photons) {
    auto tally = brute_force_tally(b, max_photons);
    return {tally.eval_x(eps), tally.eval_z(eps)};
}

} // namespace rgs
