#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "rgs/tableau.hpp"
#include "statevector.hpp"

using namespace rgs;
using rgs::test::StateVector;

namespace {

BitMatrix path_adjacency(std::size_t n) {
    BitMatrix a(n, n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        a.set(i, i + 1, true);
        a.set(i + 1, i, true);
    }
    return a;
}

BitMatrix random_adjacency(std::size_t n, Rng& rng) {
    BitMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (rng() & 1) {
                a.set(i, j, true);
                a.set(j, i, true);
            }
        }
    }
    return a;
}

} // namespace

TEST_CASE("graph state construction and validation") {
    SUBCASE("empty graph stabilized by single X's") {
        Tableau t = Tableau::graph_state(BitMatrix(3, 3));
        for (std::size_t q = 0; q < 3; ++q) {
            auto s = t.deterministic_sign(PauliWord::single(q, Pauli::X));
            REQUIRE(s.has_value());
            CHECK(*s == 0);
        }
    }
    SUBCASE("one edge gives XZ and ZX") {
        auto adj = BitMatrix::from_rows({{0, 1}, {1, 0}});
        Tableau t = Tableau::graph_state(adj);
        auto s1 = t.deterministic_sign(PauliWord::pair(0, Pauli::X, 1, Pauli::Z));
        auto s2 = t.deterministic_sign(PauliWord::pair(0, Pauli::Z, 1, Pauli::X));
        REQUIRE(s1.has_value());
        REQUIRE(s2.has_value());
        CHECK(*s1 == 0);
        CHECK(*s2 == 0);
        // XX is not in the group of the edge state.
        CHECK_FALSE(t.deterministic_sign(PauliWord::pair(0, Pauli::X, 1, Pauli::X)).has_value());
    }
    SUBCASE("stabilizer generator measures deterministically zero") {
        Tableau t = Tableau::graph_state(path_adjacency(4));
        Rng rng(3);
        PauliWord k2{{{1, Pauli::X}, {0, Pauli::Z}, {2, Pauli::Z}}};
        CHECK(t.measure(k2, rng) == 0);
    }
    SUBCASE("bad adjacency rejected") {
        auto asym = BitMatrix::from_rows({{0, 1}, {0, 0}});
        CHECK_THROWS_AS(Tableau::graph_state(asym), std::invalid_argument);
        auto diag = BitMatrix::from_rows({{1, 0}, {0, 0}});
        CHECK_THROWS_AS(Tableau::graph_state(diag), std::invalid_argument);
    }
}

TEST_CASE("cnot conjugation") {
    SUBCASE("involution") {
        Rng rng(17);
        Tableau t = Tableau::graph_state(random_adjacency(5, rng));
        Tableau before = t;
        t.apply_cnot(1, 3);
        t.apply_cnot(1, 3);
        CHECK(t.canonical_stabilizers() == before.canonical_stabilizers());
    }
    SUBCASE("|+>|0> maps to the expected stabilizers") {
        Tableau t(2); // |00>
        t.apply_h(0);  // stabilizers X0, Z1
        t.apply_cnot(0, 1);
        auto sxx = t.deterministic_sign(PauliWord::pair(0, Pauli::X, 1, Pauli::X));
        auto szz = t.deterministic_sign(PauliWord::pair(0, Pauli::Z, 1, Pauli::Z));
        REQUIRE(sxx.has_value());
        REQUIRE(szz.has_value());
        CHECK(*sxx == 0);
        CHECK(*szz == 0);
    }
    SUBCASE("invariants preserved on random states") {
        Rng rng(29);
        Tableau t = Tableau::graph_state(random_adjacency(6, rng));
        for (int step = 0; step < 30; ++step) {
            std::size_t c = uniform_index(rng, 6);
            std::size_t d = uniform_index(rng, 6);
            if (c == d) {
                continue;
            }
            t.apply_cnot(c, d);
            REQUIRE(t.invariants_ok());
        }
    }
    SUBCASE("errors") {
        Tableau t(3);
        CHECK_THROWS_AS(t.apply_cnot(1, 1), std::invalid_argument);
        t.mark_dead(2);
        CHECK_THROWS_AS(t.apply_cnot(0, 2), std::invalid_argument);
    }
}

TEST_CASE("single qubit measurements") {
    SUBCASE("X on |+> deterministic") {
        Tableau t(1);
        t.apply_h(0);
        Rng rng(1);
        CHECK(t.measure(PauliWord::single(0, Pauli::X), rng) == 0);
    }
    SUBCASE("Z on |+> uniform over seeded trials") {
        int ones = 0;
        const int trials = 10000;
        Rng rng(12345);
        for (int i = 0; i < trials; ++i) {
            Tableau t(1);
            t.apply_h(0);
            ones += t.measure(PauliWord::single(0, Pauli::Z), rng);
        }
        double mean = static_cast<double>(ones) / trials;
        double sigma = std::sqrt(0.25 / trials);
        CHECK(std::abs(mean - 0.5) < 3.0 * sigma);
    }
    SUBCASE("measurement touching a dead qubit throws") {
        Tableau t(2);
        t.mark_dead(0);
        Rng rng(4);
        CHECK_THROWS_AS(t.measure(PauliWord::single(0, Pauli::Z), rng), std::invalid_argument);
    }
}

TEST_CASE("tableau agrees with the dense oracle on random circuits") {
    Rng rng(987);
    for (int round = 0; round < 40; ++round) {
        std::size_t n = 2 + uniform_index(rng, 4); // up to 5 qubits
        auto adj = random_adjacency(n, rng);
        Tableau t = Tableau::graph_state(adj);
        StateVector sv = StateVector::graph_state(adj);
        REQUIRE(sv.stabilized_by(t));
        for (int step = 0; step < 8; ++step) {
            int what = static_cast<int>(uniform_index(rng, 4));
            if (what == 0) {
                std::size_t c = uniform_index(rng, n), d = uniform_index(rng, n);
                if (c == d) {
                    continue;
                }
                t.apply_cnot(c, d);
                sv.apply_cnot(c, d);
            } else if (what == 1) {
                std::size_t q = uniform_index(rng, n);
                t.apply_h(q);
                sv.apply_h(q);
            } else if (what == 2) {
                std::size_t q = uniform_index(rng, n);
                t.apply_z(q);
                sv.apply_z(q);
            } else {
                std::size_t q = uniform_index(rng, n);
                Pauli p = static_cast<Pauli>(uniform_index(rng, 3));
                PauliWord word = PauliWord::single(q, p);
                // Outcome probability must match before we commit to it.
                auto det = t.deterministic_sign(word);
                int outcome = t.measure(word, rng);
                double prob = sv.outcome_probability(word, outcome);
                if (det.has_value()) {
                    CHECK(prob == doctest::Approx(1.0).epsilon(1e-9));
                } else {
                    CHECK(prob == doctest::Approx(0.5).epsilon(1e-9));
                }
                sv.project(word, outcome);
            }
            REQUIRE(t.invariants_ok());
            REQUIRE(sv.stabilized_by(t));
        }
    }
}

TEST_CASE("fusion success on two 2-qubit paths leaves a Bell pair") {
    // Vertices: a-1 and b-2; fuse the dangling ends 1 and 2.
    auto adj = BitMatrix::from_rows({{0, 1, 0, 0},   // a
                                     {1, 0, 0, 0},   // 1
                                     {0, 0, 0, 1},   // b
                                     {0, 0, 1, 0}}); // 2
    int seen = 0;
    for (std::uint64_t seed = 0; seed < 64 && seen != 0b1111; ++seed) {
        Tableau t = Tableau::graph_state(adj);
        Rng rng(seed);
        auto rec = fuse(t, 1, 3, true, rng);
        int x_out = rec.outcomes[0], z_out = rec.outcomes[1];
        seen |= 1 << (2 * x_out + z_out);
        // Expected post-state: Bell pair on (a, b) up to the recorded signs.
        auto sxx = t.deterministic_sign(PauliWord::pair(0, Pauli::X, 2, Pauli::X));
        auto szz = t.deterministic_sign(PauliWord::pair(0, Pauli::Z, 2, Pauli::Z));
        REQUIRE(sxx.has_value());
        REQUIRE(szz.has_value());
        CHECK(*szz == x_out); // ZaZb carries the XX readout
        CHECK(*sxx == z_out); // XaXb carries the ZZ readout
    }
    CHECK(seen == 0b1111); // all four outcome combinations exercised
}

TEST_CASE("fusion failure leaves Z eigenstates behind") {
    auto adj = BitMatrix::from_rows({{0, 1, 0, 0},
                                     {1, 0, 0, 0},
                                     {0, 0, 0, 1},
                                     {0, 0, 1, 0}});
    Tableau t = Tableau::graph_state(adj);
    Rng rng(5);
    auto rec = fuse(t, 1, 3, false, rng);
    REQUIRE(rec.outcomes.size() == 2);
    auto za = t.deterministic_sign(PauliWord::single(0, Pauli::Z));
    auto zb = t.deterministic_sign(PauliWord::single(2, Pauli::Z));
    REQUIRE(za.has_value());
    REQUIRE(zb.has_value());
    CHECK(*za == rec.outcomes[0]);
    CHECK(*zb == rec.outcomes[1]);
}

TEST_CASE("fusing the two halves of a Bell pair is deterministic") {
    Tableau t(2);
    t.apply_h(0);
    t.apply_cnot(0, 1); // |Phi+>
    Rng rng(7);
    auto rec = fuse(t, 0, 1, true, rng);
    CHECK(rec.outcomes[0] == 0);
    CHECK(rec.outcomes[1] == 0);
}

namespace {

// Minimal fusion instance: a-3-1 and 2-4-b. Returns the tableau after
// fuse(1,2) + cleanup(3,4) with the XX=-1 correction applied to q3's former
// box neighbors, plus the observed outcomes.
struct FusionRun {
    Tableau t;
    int x_out, z_out, s3;
};

FusionRun run_minimal_fusion(std::uint64_t seed) {
    // indices: a=0, q3=1, q1=2, q2=3, q4=4, b=5
    BitMatrix adj(6, 6);
    auto connect = [&](std::size_t i, std::size_t j) {
        adj.set(i, j, true);
        adj.set(j, i, true);
    };
    connect(0, 1);
    connect(1, 2);
    connect(3, 4);
    connect(4, 5);
    Tableau t = Tableau::graph_state(adj);
    Rng rng(seed);
    auto rec = fuse(t, 2, 3, true, rng);
    auto cleanup = post_fusion_cleanup(t, 1, 4, rec.outcomes[1], rng);
    if (rec.outcomes[0]) {
        t.apply_z(0); // neighbor of q3 other than the fused leaf
    }
    return {std::move(t), rec.outcomes[0], rec.outcomes[1], cleanup.outcomes[0]};
}

} // namespace

TEST_CASE("fusion plus cleanup reproduces the bridged graph for every outcome") {
    // Target graph: a-4-b with vertices 1, 2, 3 consumed.
    std::set<std::pair<int, int>> combos;
    CanonicalForm reference;
    bool have_reference = false;
    for (std::uint64_t seed = 0; seed < 80 && combos.size() < 8; ++seed) {
        auto run = run_minimal_fusion(seed);
        combos.insert({2 * run.x_out + run.z_out, run.s3});
        // Check against the explicit stabilizers of the bridged graph.
        auto k_a = run.t.deterministic_sign(PauliWord::pair(0, Pauli::X, 4, Pauli::Z));
        auto k_b = run.t.deterministic_sign(PauliWord::pair(5, Pauli::X, 4, Pauli::Z));
        PauliWord k4{{{4, Pauli::X}, {0, Pauli::Z}, {5, Pauli::Z}}};
        auto k_mid = run.t.deterministic_sign(k4);
        REQUIRE(k_a.has_value());
        REQUIRE(k_b.has_value());
        REQUIRE(k_mid.has_value());
        CHECK(*k_a == 0);
        CHECK(*k_b == 0);
        CHECK(*k_mid == 0);
        // All runs collapse to the same canonical state on the live qubits.
        auto canon = run.t.canonical_live_state();
        if (!have_reference) {
            reference = canon;
            have_reference = true;
        } else {
            CHECK(canon == reference);
        }
    }
    // (x_out, z_out) and s3 cover enough combinations to trust the claim.
    CHECK(combos.size() >= 6);
}

TEST_CASE("cleanup without corrections matches the dense oracle prediction") {
    // Spot check via brute force: search a seed with all outcomes zero and
    // verify the final state equals the bridged graph state exactly.
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        auto run = run_minimal_fusion(seed);
        if (run.x_out || run.z_out || run.s3) {
            continue;
        }
        BitMatrix bridged(6, 6);
        bridged.set(0, 4, true);
        bridged.set(4, 0, true);
        bridged.set(4, 5, true);
        bridged.set(5, 4, true);
        StateVector sv = StateVector::graph_state(bridged);
        // Consumed qubits ended in |+> (X measured, outcome 0) or got fused;
        // compare only the stabilizers on the live qubits.
        auto sxa = run.t.deterministic_sign(PauliWord::pair(0, Pauli::X, 4, Pauli::Z));
        REQUIRE(sxa.has_value());
        CHECK(*sxa == 0);
        PauliWord k4{{{4, Pauli::X}, {0, Pauli::Z}, {5, Pauli::Z}}};
        CHECK(sv.pauli_expectation(k4).real() == doctest::Approx(1.0));
        return;
    }
    FAIL("no all-zero-outcome seed found");
}

TEST_CASE("random graph fusions are outcome independent after corrections") {
    Rng meta(4242);
    for (int round = 0; round < 50; ++round) {
        std::size_t boxes = 2 + uniform_index(meta, 3); // box vertices per side
        std::size_t n = 2 * boxes + 4;
        // Layout: [0, boxes) left box, boxes..boxes+1 are q3, q1;
        // next two are q2, q4, then the right box.
        std::size_t q3 = boxes, q1 = boxes + 1, q2 = boxes + 2, q4 = boxes + 3;
        BitMatrix adj(n, n);
        auto connect = [&](std::size_t i, std::size_t j) {
            adj.set(i, j, true);
            adj.set(j, i, true);
        };
        std::vector<std::size_t> left_attach, right_attach;
        for (std::size_t v = 0; v < boxes; ++v) {
            if (meta() & 1) {
                connect(v, q3);
                left_attach.push_back(v);
            }
            std::size_t w = boxes + 4 + v;
            if (meta() & 1) {
                connect(w, q4);
                right_attach.push_back(w);
            }
        }
        // Random internal box edges.
        for (std::size_t v = 0; v < boxes; ++v) {
            for (std::size_t w = v + 1; w < boxes; ++w) {
                if (meta() & 1) {
                    connect(v, w);
                    connect(boxes + 4 + v, boxes + 4 + w);
                }
            }
        }
        connect(q3, q1);
        connect(q4, q2);

        CanonicalForm reference;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            Tableau t = Tableau::graph_state(adj);
            Rng rng(seed * 31 + 1);
            auto rec = fuse(t, q1, q2, true, rng);
            post_fusion_cleanup(t, q3, q4, rec.outcomes[1], rng);
            if (rec.outcomes[0]) {
                for (std::size_t v : left_attach) {
                    t.apply_z(v);
                }
            }
            auto canon = t.canonical_live_state();
            if (seed == 0) {
                reference = canon;
            } else {
                REQUIRE(canon == reference);
            }
        }
    }
}

TEST_CASE("is_bell_pairs accepts fresh pairs and rejects corrupted ones") {
    auto make_bells = [](std::size_t k) {
        Tableau t(2 * k);
        for (std::size_t i = 0; i < k; ++i) {
            t.apply_h(2 * i);
            t.apply_cnot(2 * i, 2 * i + 1);
        }
        return t;
    };
    Tableau good = make_bells(3);
    std::vector<std::pair<std::size_t, std::size_t>> pairs = {{0, 1}, {2, 3}, {4, 5}};
    CHECK(good.is_bell_pairs(pairs));

    Tableau flipped = make_bells(3);
    flipped.apply_z(2);
    CHECK_FALSE(flipped.is_bell_pairs(pairs));

    Tableau undead = make_bells(2);
    CHECK_THROWS_AS(undead.is_bell_pairs({{0, 1}}), std::invalid_argument);

    Tableau dead = make_bells(1);
    dead.mark_dead(1);
    CHECK_THROWS_AS(dead.is_bell_pairs({{0, 1}}), std::invalid_argument);
}

TEST_CASE("identical seeds give identical outcome sequences") {
    auto run = [](std::uint64_t seed) {
        Rng rng(seed);
        Rng meta(5);
        Tableau t = Tableau::graph_state(random_adjacency(6, meta));
        std::vector<int> outs;
        for (std::size_t q = 0; q < 6; ++q) {
            outs.push_back(t.measure(PauliWord::single(q, Pauli::Z), rng));
        }
        return outs;
    };
    CHECK(run(400) == run(400));
}
