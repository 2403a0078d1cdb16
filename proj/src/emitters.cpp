#include "rgs/emitters.hpp"

#include <algorithm>
#include <stdexcept>

namespace rgs {

std::size_t cut_rank(const BitMatrix& adjacency, const std::vector<std::size_t>& subset) {
    std::size_t n = adjacency.rows();
    std::vector<std::uint8_t> in_subset(n, 0);
    for (std::size_t v : subset) {
        if (v >= n) {
            throw std::invalid_argument("cut_rank: vertex outside the graph");
        }
        if (in_subset[v]) {
            throw std::invalid_argument("cut_rank: repeated vertex");
        }
        in_subset[v] = 1;
    }
    std::vector<std::size_t> complement;
    for (std::size_t v = 0; v < n; ++v) {
        if (!in_subset[v]) {
            complement.push_back(v);
        }
    }
    BitMatrix block(subset.size(), complement.size());
    for (std::size_t i = 0; i < subset.size(); ++i) {
        for (std::size_t j = 0; j < complement.size(); ++j) {
            if (adjacency.get(subset[i], complement[j])) {
                block.set(i, j, true);
            }
        }
    }
    return block.rank();
}

std::vector<std::size_t> height_function(const BitMatrix& adjacency,
                                         const EmissionOrdering& ordering) {
    std::size_t n = adjacency.rows();
    if (ordering.size() != n) {
        throw std::invalid_argument("height_function: ordering must cover every vertex");
    }
    std::vector<std::size_t> h(n + 1, 0);
    std::vector<std::size_t> prefix;
    prefix.reserve(n);
    for (std::size_t x = 1; x <= n; ++x) {
        prefix.push_back(ordering[x - 1]);
        h[x] = cut_rank(adjacency, prefix);
    }
    return h;
}

std::size_t height_max(const BitMatrix& adjacency, const EmissionOrdering& ordering) {
    auto h = height_function(adjacency, ordering);
    return *std::max_element(h.begin(), h.end());
}

EmissionOrdering ordering_a(const RgsArmMap& arms) {
    EmissionOrdering order;
    order.reserve(arms.total());
    for (std::size_t i = 0; i < arms.n_left; ++i) {
        order.push_back(arms.left1(i));
        order.push_back(arms.left2(i));
    }
    for (std::size_t j = 0; j < arms.n_right; ++j) {
        order.push_back(arms.right1(j));
        order.push_back(arms.right2(j));
    }
    return order;
}

EmissionOrdering ordering_b(const RgsArmMap& arms) {
    EmissionOrdering order;
    order.reserve(arms.total());
    std::size_t upper = std::max(arms.n_left, arms.n_right);
    for (std::size_t i = 0; i < upper; ++i) {
        if (i < arms.n_left) {
            order.push_back(arms.left1(i));
            order.push_back(arms.left2(i));
        }
        if (i < arms.n_right) {
            order.push_back(arms.right1(i));
            order.push_back(arms.right2(i));
        }
    }
    return order;
}

EmissionOrdering greedy_ordering(const BitMatrix& adjacency) {
    std::size_t n = adjacency.rows();
    EmissionOrdering order;
    std::vector<std::uint8_t> emitted(n, 0);
    std::vector<std::size_t> prefix;
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t best = n;
        std::size_t best_rank = n + 1;
        for (std::size_t v = 0; v < n; ++v) {
            if (emitted[v]) {
                continue;
            }
            prefix.push_back(v);
            std::size_t r = cut_rank(adjacency, prefix);
            prefix.pop_back();
            if (r < best_rank) {
                best_rank = r;
                best = v;
            }
        }
        emitted[best] = 1;
        prefix.push_back(best);
        order.push_back(best);
    }
    return order;
}

BitMatrix build_crgs_adjacency(std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("build_crgs_adjacency: n must be positive");
    }
    std::size_t inner = 2 * n;
    BitMatrix adj(2 * inner, 2 * inner);
    for (std::size_t i = 0; i < inner; ++i) {
        for (std::size_t j = i + 1; j < inner; ++j) {
            adj.set(i, j, true);
            adj.set(j, i, true);
        }
        adj.set(i, inner + i, true);
        adj.set(inner + i, i, true);
    }
    return adj;
}

EmissionOrdering crgs_arm_ordering(std::size_t n) {
    EmissionOrdering order;
    std::size_t inner = 2 * n;
    for (std::size_t i = 0; i < inner; ++i) {
        order.push_back(i);
        order.push_back(inner + i);
    }
    return order;
}

} // namespace rgs
