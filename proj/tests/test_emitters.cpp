#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "rgs/emitters.hpp"

using namespace rgs;

namespace {

BitMatrix path_adjacency(std::size_t n) {
    BitMatrix a(n, n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        a.set(i, i + 1, true);
        a.set(i + 1, i, true);
    }
    return a;
}

BitMatrix complete_adjacency(std::size_t n) {
    BitMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) {
                a.set(i, j, true);
            }
        }
    }
    return a;
}

// Random generator pair with full-rank biadjacency product.
RgsGraph random_rgs(std::size_t k, std::size_t n, Rng& rng) {
    while (true) {
        auto gl = sample_uniform(k, n, rng);
        auto gr = sample_uniform(k, n, rng);
        if (gl.rank() == k && gr.rank() == k &&
            (gl.transposed() * gr).rank() == k) {
            return build_rgs_adjacency(gl, gr);
        }
    }
}

} // namespace

TEST_CASE("cut rank basics") {
    SUBCASE("complete graph always cuts to one") {
        auto adj = complete_adjacency(6);
        CHECK(cut_rank(adj, {0}) == 1);
        CHECK(cut_rank(adj, {0, 1, 2}) == 1);
        CHECK(cut_rank(adj, {1, 3, 5}) == 1);
    }
    SUBCASE("empty subset") {
        CHECK(cut_rank(complete_adjacency(4), {}) == 0);
    }
    SUBCASE("disjoint edges cut pairwise") {
        std::size_t k = 3;
        BitMatrix adj(2 * k, 2 * k);
        for (std::size_t i = 0; i < k; ++i) {
            adj.set(i, k + i, true);
            adj.set(k + i, i, true);
        }
        CHECK(cut_rank(adj, {0, 1, 2}) == k);
    }
    SUBCASE("symmetry under complementation") {
        Rng rng(3);
        for (int round = 0; round < 20; ++round) {
            std::size_t n = 5 + uniform_index(rng, 4);
            BitMatrix adj(n, n);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = i + 1; j < n; ++j) {
                    if (rng() & 1) {
                        adj.set(i, j, true);
                        adj.set(j, i, true);
                    }
                }
            }
            std::vector<std::size_t> subset, complement;
            for (std::size_t v = 0; v < n; ++v) {
                if (rng() & 1) {
                    subset.push_back(v);
                } else {
                    complement.push_back(v);
                }
            }
            CHECK(cut_rank(adj, subset) == cut_rank(adj, complement));
        }
    }
    SUBCASE("invalid subsets rejected") {
        CHECK_THROWS_AS(cut_rank(complete_adjacency(3), {5}), std::invalid_argument);
        CHECK_THROWS_AS(cut_rank(complete_adjacency(3), {1, 1}), std::invalid_argument);
    }
}

TEST_CASE("height function") {
    SUBCASE("path emitted end to end needs one emitter") {
        auto adj = path_adjacency(6);
        EmissionOrdering order = {0, 1, 2, 3, 4, 5};
        auto h = height_function(adj, order);
        CHECK(h.front() == 0);
        CHECK(h.back() == 0);
        CHECK(*std::max_element(h.begin(), h.end()) == 1);
    }
    SUBCASE("steps change by at most one") {
        Rng rng(11);
        auto rgs = random_rgs(2, 5, rng);
        auto order = ordering_a(rgs.arms);
        auto h = height_function(rgs.adjacency, order);
        for (std::size_t x = 0; x + 1 < h.size(); ++x) {
            long diff = static_cast<long>(h[x + 1]) - static_cast<long>(h[x]);
            CHECK(diff <= 1);
            CHECK(diff >= -1);
        }
    }
    SUBCASE("ordering must be a permutation") {
        CHECK_THROWS_AS(height_function(path_adjacency(3), {0, 1}), std::invalid_argument);
    }
}

TEST_CASE("complete-graph resource state needs two emitters") {
    for (std::size_t n : {2, 3, 4}) {
        auto adj = build_crgs_adjacency(n);
        CHECK(height_max(adj, crgs_arm_ordering(n)) == 2);
    }
    // The greedy baseline matches on a small instance.
    auto adj = build_crgs_adjacency(2);
    CHECK(height_max(adj, greedy_ordering(adj)) == 2);
}

TEST_CASE("ordering a stays within k plus one") {
    Rng rng(71);
    for (std::size_t k = 1; k <= 4; ++k) {
        for (std::size_t n = k + 2; n <= 9; n += 3) {
            auto rgs = random_rgs(k, n, rng);
            auto h = height_max(rgs.adjacency, ordering_a(rgs.arms));
            CHECK(h >= k);
            CHECK(h <= k + 1);
        }
    }
}

TEST_CASE("ordering b stays within 2k plus one") {
    Rng rng(72);
    for (std::size_t k = 1; k <= 4; ++k) {
        for (std::size_t n = k + 2; n <= 9; n += 3) {
            auto rgs = random_rgs(k, n, rng);
            CHECK(height_max(rgs.adjacency, ordering_b(rgs.arms)) <= 2 * k + 1);
        }
    }
}

TEST_CASE("rank one all-ones code behaves like the complete-bipartite state") {
    auto g = BitMatrix::from_rows({{1, 1, 1, 1}});
    auto rgs = build_rgs_adjacency(g, g);
    CHECK(height_max(rgs.adjacency, ordering_a(rgs.arms)) == 2);
}

TEST_CASE("boundary rgs heights are reported for ordering a") {
    // Imbalanced arms: k on the left, n on the right.
    Rng rng(73);
    auto gl = BitMatrix::identity(3);
    BitMatrix gr(1, 1);
    do {
        gr = sample_uniform(3, 7, rng);
    } while (gr.rank() < 3);
    auto rgs = build_rgs_adjacency(gl, gr);
    auto h = height_max(rgs.adjacency, ordering_a(rgs.arms));
    CHECK(h >= 3);
    CHECK(h <= 4);
}
