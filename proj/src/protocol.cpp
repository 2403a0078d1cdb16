#include "rgs/protocol.hpp"

#include <cassert>
#include <cmath>
#include <set>
#include <stdexcept>

#include "json.hpp"

#include "rgs/analytics.hpp"

namespace rgs {

std::vector<std::string> ChainConfig::validate() const {
    if (length_km <= 0.0 || spacing_km <= 0.0 || attenuation_km <= 0.0) {
        throw std::invalid_argument("ChainConfig: lengths must be positive");
    }
    if (k == 0 || n == 0) {
        throw std::invalid_argument("ChainConfig: k and n must be positive");
    }
    double segments = static_cast<double>(n_repeaters + 1);
    if (std::abs(length_km - segments * spacing_km) > 1e-6 * spacing_km) {
        throw std::invalid_argument("ChainConfig: L != (N_R + 1) * L0");
    }
    std::vector<std::string> warnings;
    double pf = p_fail(spacing_km, attenuation_km);
    if (static_cast<double>(n) * (1.0 - pf) <= static_cast<double>(k)) {
        warnings.push_back("code rate k/n exceeds the erasure capacity 1 - p_f");
    }
    return warnings;
}

RgsGraph build_rgs_adjacency(const BitMatrix& g_left, const BitMatrix& g_right) {
    if (g_left.rows() != g_right.rows()) {
        throw std::invalid_argument("build_rgs_adjacency: row counts differ");
    }
    RgsGraph g;
    g.arms.base = 0;
    g.arms.n_left = g_left.cols();
    g.arms.n_right = g_right.cols();
    std::size_t n = g.arms.total();
    g.adjacency = BitMatrix(n, n);
    auto connect = [&](std::size_t a, std::size_t b) {
        g.adjacency.set(a, b, true);
        g.adjacency.set(b, a, true);
    };
    for (std::size_t i = 0; i < g.arms.n_left; ++i) {
        connect(g.arms.left1(i), g.arms.left2(i));
    }
    for (std::size_t j = 0; j < g.arms.n_right; ++j) {
        connect(g.arms.right1(j), g.arms.right2(j));
    }
    BitMatrix inner = g_left.transposed() * g_right;
    for (std::size_t i = 0; i < inner.rows(); ++i) {
        for (std::size_t j = 0; j < inner.cols(); ++j) {
            if (inner.get(i, j)) {
                connect(g.arms.left1(i), g.arms.right1(j));
            }
        }
    }
    return g;
}

PauliFrame corrections_from_m(const std::vector<BitVec>& m_list, std::size_t n_repeaters,
                              std::size_t k) {
    if (m_list.size() != n_repeaters) {
        throw std::invalid_argument("corrections_from_m: need one record per station");
    }
    PauliFrame frame;
    frame.x_corr.assign(k, 0);
    frame.z_corr.assign(k, 0);
    frame.hadamard = (n_repeaters % 2 == 0);
    for (std::size_t a = 1; a <= n_repeaters; ++a) {
        const BitVec& m = m_list[a - 1];
        if (m.size() != k) {
            throw std::invalid_argument("corrections_from_m: record length mismatch");
        }
        for (std::size_t i = 0; i < k; ++i) {
            if (a % 2 == 0) {
                frame.z_corr[i] ^= m[i];
            } else {
                frame.x_corr[i] ^= m[i];
            }
        }
    }
    return frame;
}

namespace {

// Classical mirror of the evolving graph: kept exactly in sync with the
// tableau so measurement corrections know the current neighborhoods.
struct LiveGraph {
    std::vector<std::set<std::size_t>> adj;

    explicit LiveGraph(const BitMatrix& m) : adj(m.rows()) {
        for (std::size_t i = 0; i < m.rows(); ++i) {
            for (std::size_t j = 0; j < m.cols(); ++j) {
                if (m.get(i, j)) {
                    adj[i].insert(j);
                }
            }
        }
    }

    void remove_vertex(std::size_t v) {
        for (std::size_t u : adj[v]) {
            adj[u].erase(v);
        }
        adj[v].clear();
    }

    void add_edge(std::size_t a, std::size_t b) {
        adj[a].insert(b);
        adj[b].insert(a);
    }
};

// Z-prunes a vertex already collapsed onto a Z eigenstate with known
// outcome: flips the neighbors' frames and deletes it from the live graph.
void prune_collapsed(Tableau& t, LiveGraph& cur, std::size_t v, int outcome, Rng& rng) {
    if (outcome) {
        for (std::size_t u : cur.adj[v]) {
            t.apply_z(u);
        }
    }
    // The collapse makes this Z measurement deterministic: no rng draw.
    [[maybe_unused]] int check = t.measure(PauliWord::single(v, Pauli::Z), rng);
    t.mark_dead(v);
    cur.remove_vertex(v);
    assert(check == outcome);
}

} // namespace

TrialResult simulate_chain(const ChainConfig& cfg, const std::vector<BitMatrix>& g_list,
                           Rng& rng) {
    double pf = p_fail(cfg.spacing_km, cfg.attenuation_km);
    return simulate_chain(cfg, g_list, rng,
                          [pf](std::size_t, std::size_t, Rng& r) { return bernoulli(r, 1.0 - pf); });
}

TrialResult simulate_chain(const ChainConfig& cfg, const std::vector<BitMatrix>& g_list,
                           Rng& rng, const FusionSampler& sampler) {
    cfg.validate();
    std::size_t nr = cfg.n_repeaters;
    std::size_t k = cfg.k;
    std::size_t n = cfg.n;
    if (g_list.size() != nr) {
        throw std::invalid_argument("simulate_chain: need N_R generator matrices");
    }
    for (const auto& g : g_list) {
        if (g.rows() != k || g.cols() != n) {
            throw std::invalid_argument("simulate_chain: generator matrix shape mismatch");
        }
    }
    BitMatrix id_k = BitMatrix::identity(k);
    auto g_at = [&](std::size_t a) -> const BitMatrix& {
        return (a == 0 || a == nr + 1) ? id_k : g_list[a - 1];
    };

    // One arm map per resource state, vertices numbered consecutively.
    std::vector<RgsArmMap> blocks(nr + 1);
    std::size_t total = 0;
    for (std::size_t a = 0; a <= nr; ++a) {
        blocks[a].base = total;
        blocks[a].n_left = g_at(a).cols();
        blocks[a].n_right = g_at(a + 1).cols();
        total += blocks[a].total();
    }
    BitMatrix adj(total, total);
    for (std::size_t a = 0; a <= nr; ++a) {
        const RgsArmMap& arms = blocks[a];
        auto connect = [&](std::size_t u, std::size_t v) {
            adj.set(u, v, true);
            adj.set(v, u, true);
        };
        for (std::size_t i = 0; i < arms.n_left; ++i) {
            connect(arms.left1(i), arms.left2(i));
        }
        for (std::size_t j = 0; j < arms.n_right; ++j) {
            connect(arms.right1(j), arms.right2(j));
        }
        BitMatrix inner = g_at(a).transposed() * g_at(a + 1);
        for (std::size_t i = 0; i < inner.rows(); ++i) {
            for (std::size_t j = 0; j < inner.cols(); ++j) {
                if (inner.get(i, j)) {
                    connect(arms.left1(i), arms.right1(j));
                }
            }
        }
    }

    Tableau t = Tableau::graph_state(adj);
    LiveGraph cur(adj);
    TrialResult trial;
    trial.stations.resize(nr);

    // Resolve each fusion arm completely before moving on; that keeps the
    // state an exact graph state of the contracted graph throughout.
    for (std::size_t a = 1; a <= nr; ++a) {
        const RgsArmMap& left_rgs = blocks[a - 1];
        const RgsArmMap& right_rgs = blocks[a];
        StationOutcome& station = trial.stations[a - 1];
        station.station = a;
        station.fusion_successes.assign(n, 0);
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t q1 = left_rgs.right2(j);
            std::size_t q3 = left_rgs.right1(j);
            std::size_t q2 = right_rgs.left2(j);
            std::size_t q4 = right_rgs.left1(j);
            bool success = sampler(a, j, rng);
            station.fusion_successes[j] = success ? 1 : 0;
            MeasurementRecord rec = fuse(t, q1, q2, success, rng);
            cur.remove_vertex(q1);
            cur.remove_vertex(q2);
            if (success) {
                int x_out = rec.outcomes[0];
                int z_out = rec.outcomes[1];
                std::vector<std::size_t> moved(cur.adj[q3].begin(), cur.adj[q3].end());
                post_fusion_cleanup(t, q3, q4, z_out, rng);
                // The XX = -1 fusion branch shows up as a sign on every
                // stabilizer whose vertex was rewired from q3 to q4.
                if (x_out) {
                    for (std::size_t v : moved) {
                        t.apply_z(v);
                    }
                }
                cur.remove_vertex(q3);
                for (std::size_t v : moved) {
                    cur.add_edge(v, q4);
                }
            } else {
                // The failed fusion X-measured both second leaves, which
                // collapses the first leaves onto Z eigenstates; pruning them
                // removes the whole arm.
                prune_collapsed(t, cur, q3, rec.outcomes[0], rng);
                prune_collapsed(t, cur, q4, rec.outcomes[1], rng);
            }
        }
    }

    // The end parties never fuse, so their dangling second leaves are pruned.
    auto prune_leaf = [&](std::size_t leaf, std::size_t owner) {
        int s = t.measure(PauliWord::single(leaf, Pauli::Z), rng);
        if (s) {
            t.apply_z(owner);
        }
        t.mark_dead(leaf);
        cur.remove_vertex(leaf);
    };
    for (std::size_t i = 0; i < k; ++i) {
        prune_leaf(blocks[0].left2(i), blocks[0].left1(i));
        prune_leaf(blocks[nr].right2(i), blocks[nr].right1(i));
    }

    // Green-node X measurements, stations then arms in ascending order.
    for (std::size_t a = 1; a <= nr; ++a) {
        StationOutcome& station = trial.stations[a - 1];
        for (std::size_t j = 0; j < n; ++j) {
            if (!station.fusion_successes[j]) {
                continue;
            }
            std::size_t q = blocks[a].left1(j);
            int s = t.measure(PauliWord::single(q, Pauli::X), rng);
            station.x_tilde.push_back(static_cast<std::uint8_t>(s));
            t.mark_dead(q);
            cur.remove_vertex(q);
        }
    }

    // Decode m_a from the surviving columns of each generator matrix.
    trial.all_full_rank = true;
    std::vector<BitVec> m_list;
    for (std::size_t a = 1; a <= nr; ++a) {
        StationOutcome& station = trial.stations[a - 1];
        std::vector<std::size_t> kept;
        for (std::size_t j = 0; j < n; ++j) {
            if (station.fusion_successes[j]) {
                kept.push_back(j);
            }
        }
        BitMatrix gt = erase_columns(g_at(a), ErasurePattern(std::move(kept)));
        if (gt.rank() != k) {
            trial.all_full_rank = false;
            continue;
        }
        auto m = solve_left(gt, station.x_tilde);
        if (!m) {
            trial.decode_failed = true;
            continue;
        }
        station.m = *m;
        m_list.push_back(*m);
    }
    if (!trial.all_full_rank || trial.decode_failed || m_list.size() != nr) {
        trial.decode_failed = true;
        return trial;
    }

    trial.frame = corrections_from_m(m_list, nr, k);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t alice = blocks[0].left1(i);
        // The recorded frame acts outermost, so undo it first; the Hadamard
        // of even-length chains comes off last.
        if (trial.frame.z_corr[i]) {
            t.apply_z(alice);
        }
        if (trial.frame.x_corr[i]) {
            t.apply_x(alice);
        }
        if (trial.frame.hadamard) {
            t.apply_h(alice);
        }
        pairs.push_back({alice, blocks[nr].right1(i)});
    }
    trial.verified = t.is_bell_pairs(pairs);
    return trial;
}

std::string trial_to_json(const TrialResult& trial) {
    nlohmann::ordered_json j;
    j["stations"] = nlohmann::ordered_json::array();
    for (const auto& s : trial.stations) {
        nlohmann::ordered_json js;
        js["station"] = s.station;
        js["fusion_successes"] = s.fusion_successes;
        js["x_tilde"] = s.x_tilde;
        if (s.m) {
            js["m"] = *s.m;
        } else {
            js["m"] = nullptr;
        }
        j["stations"].push_back(js);
    }
    j["frame"] = {{"x_corr", trial.frame.x_corr},
                  {"z_corr", trial.frame.z_corr},
                  {"hadamard", trial.frame.hadamard}};
    j["all_full_rank"] = trial.all_full_rank;
    j["decode_failed"] = trial.decode_failed;
    j["verified"] = trial.verified;
    return j.dump();
}

} // namespace rgs
