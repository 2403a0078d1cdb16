#include "rgs/ldpc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rgs {

namespace {

constexpr double kLlrClamp = 25.0;

// Column pairs sharing two or more checks, the 4-cycle count of the Tanner
// graph. Computed over row pairs for speed.
std::size_t four_cycle_score(const BitMatrix& h) {
    std::size_t score = 0;
    for (std::size_t a = 0; a < h.rows(); ++a) {
        for (std::size_t b = a + 1; b < h.rows(); ++b) {
            std::size_t overlap = 0;
            const std::uint64_t* ra = h.row(a);
            const std::uint64_t* rb = h.row(b);
            for (std::size_t w = 0; w < h.words_per_row(); ++w) {
                overlap += static_cast<std::size_t>(std::popcount(ra[w] & rb[w]));
            }
            if (overlap >= 2) {
                score += overlap * (overlap - 1) / 2;
            }
        }
    }
    return score;
}

BitMatrix sample_gallager_h(std::size_t n, std::size_t rows_per_block, std::size_t col_weight,
                            std::size_t row_weight, Rng& rng) {
    BitMatrix h(rows_per_block * col_weight, n);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t blk = 0; blk < col_weight; ++blk) {
        if (blk > 0) {
            for (std::size_t i = n; i > 1; --i) {
                std::size_t j = uniform_index(rng, i);
                std::swap(perm[i - 1], perm[j]);
            }
        }
        for (std::size_t r = 0; r < rows_per_block; ++r) {
            for (std::size_t c = 0; c < row_weight; ++c) {
                h.set(blk * rows_per_block + r, perm[r * row_weight + c], true);
            }
        }
    }
    return h;
}

} // namespace

LdpcCode gallager_construct(std::size_t n, std::size_t design_k, std::size_t col_weight,
                            Rng& rng, std::size_t resample_attempts) {
    if (n == 0 || design_k == 0 || design_k >= n || col_weight == 0) {
        throw std::invalid_argument("gallager_construct: bad parameters");
    }
    std::size_t m = n - design_k;
    if (m % col_weight != 0 || (n * col_weight) % m != 0) {
        throw std::invalid_argument("gallager_construct: infeasible degree pair");
    }
    std::size_t rows_per_block = m / col_weight;
    std::size_t row_weight = (n * col_weight) / m;
    if (rows_per_block * row_weight != n) {
        throw std::invalid_argument("gallager_construct: infeasible degree pair");
    }

    BitMatrix best = sample_gallager_h(n, rows_per_block, col_weight, row_weight, rng);
    std::size_t best_score = four_cycle_score(best);
    for (std::size_t attempt = 1; attempt < resample_attempts && best_score > 0; ++attempt) {
        BitMatrix cand = sample_gallager_h(n, rows_per_block, col_weight, row_weight, rng);
        std::size_t score = four_cycle_score(cand);
        if (score < best_score) {
            best = cand;
            best_score = score;
        }
    }

    LdpcCode code;
    code.n = n;
    code.col_weight = col_weight;
    code.row_weight = row_weight;
    code.h = std::move(best);
    auto gen = generator_from_parity(code.h);
    code.g = std::move(gen.g);
    code.info_cols = std::move(gen.info_cols);
    code.k = code.g.rows();
    return code;
}

GeneratorResult generator_from_parity(const BitMatrix& h) {
    std::size_t m = h.rows();
    std::size_t n = h.cols();
    if (n == 0 || m == 0) {
        throw std::invalid_argument("generator_from_parity: empty matrix");
    }
    // Reduced echelon form; free columns index the information word.
    BitMatrix w = h;
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        std::size_t p = r;
        while (p < m && !w.get(p, c)) {
            ++p;
        }
        if (p == m) {
            continue;
        }
        w.swap_rows(p, r);
        for (std::size_t i = 0; i < m; ++i) {
            if (i != r && w.get(i, c)) {
                w.xor_row_into(r, i);
            }
        }
        pivot_col.push_back(c);
        ++r;
    }
    std::size_t rank = pivot_col.size();
    if (rank == n) {
        throw std::invalid_argument("generator_from_parity: code has dimension zero");
    }
    std::vector<bool> is_pivot(n, false);
    for (std::size_t c : pivot_col) {
        is_pivot[c] = true;
    }
    GeneratorResult out;
    out.g = BitMatrix(n - rank, n);
    std::size_t gi = 0;
    for (std::size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) {
            continue;
        }
        out.info_cols.push_back(f);
        out.g.set(gi, f, true);
        for (std::size_t pr = 0; pr < rank; ++pr) {
            if (w.get(pr, f)) {
                out.g.set(gi, pivot_col[pr], true);
            }
        }
        ++gi;
    }
    return out;
}

BitVec encode(const LdpcCode& code, const BitVec& info) {
    if (info.size() != code.k) {
        throw std::invalid_argument("encode: info length mismatch");
    }
    BitVec c(code.n, 0);
    for (std::size_t i = 0; i < code.k; ++i) {
        if (info[i]) {
            for (std::size_t j = 0; j < code.n; ++j) {
                c[j] ^= code.g.get(i, j) ? 1 : 0;
            }
        }
    }
    return c;
}

std::vector<Symbol> bsec_channel(const BitVec& codeword, const BsecParams& params, Rng& rng) {
    if (params.p_bsc < 0.0 || params.p_bsc > 1.0 || params.p_bec < 0.0 || params.p_bec > 1.0) {
        throw std::invalid_argument("bsec_channel: probabilities outside [0, 1]");
    }
    std::vector<Symbol> out(codeword.size());
    for (std::size_t i = 0; i < codeword.size(); ++i) {
        if (bernoulli(rng, params.p_bec)) {
            out[i] = Symbol::Erased;
        } else {
            int bit = codeword[i] & 1;
            if (bernoulli(rng, params.p_bsc)) {
                bit ^= 1;
            }
            out[i] = bit ? Symbol::One : Symbol::Zero;
        }
    }
    return out;
}

BpResult bp_decode(const LdpcCode& code, const std::vector<Symbol>& received,
                   const BsecParams& params, std::size_t max_iters) {
    if (received.size() != code.n) {
        throw std::invalid_argument("bp_decode: received length mismatch");
    }
    std::size_t m = code.h.rows();
    std::vector<std::vector<std::size_t>> check_vars(m);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < code.n; ++c) {
            if (code.h.get(r, c)) {
                check_vars[r].push_back(c);
            }
        }
    }

    double channel_llr = kLlrClamp;
    if (params.p_bsc > 0.0 && params.p_bsc < 1.0) {
        channel_llr = std::log((1.0 - params.p_bsc) / params.p_bsc);
        channel_llr = std::clamp(channel_llr, -kLlrClamp, kLlrClamp);
    }
    std::vector<double> prior(code.n, 0.0);
    for (std::size_t i = 0; i < code.n; ++i) {
        switch (received[i]) {
            case Symbol::Zero: prior[i] = channel_llr; break;
            case Symbol::One: prior[i] = -channel_llr; break;
            case Symbol::Erased: prior[i] = 0.0; break;
        }
    }

    // Edge arrays: edge e belongs to check edge_check[e] and variable
    // edge_var[e]; messages live on edges.
    std::vector<std::size_t> edge_check, edge_var;
    std::vector<std::vector<std::size_t>> check_edges(m), var_edges(code.n);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c : check_vars[r]) {
            check_edges[r].push_back(edge_check.size());
            var_edges[c].push_back(edge_check.size());
            edge_check.push_back(r);
            edge_var.push_back(c);
        }
    }
    std::size_t n_edges = edge_check.size();
    std::vector<double> c2v(n_edges, 0.0);

    BitVec hard(code.n, 0);
    auto parity_ok = [&]() {
        for (std::size_t r = 0; r < m; ++r) {
            int p = 0;
            for (std::size_t c : check_vars[r]) {
                p ^= hard[c];
            }
            if (p) {
                return false;
            }
        }
        return true;
    };

    BpResult res;
    std::vector<double> belief(prior);
    std::vector<double> tanh_buf, fresh;
    for (std::size_t iter = 0; iter < max_iters; ++iter) {
        // Serial (layered) sum-product: each check consumes the current
        // beliefs and its new messages take effect immediately.
        for (std::size_t r = 0; r < m; ++r) {
            const auto& edges = check_edges[r];
            std::size_t d = edges.size();
            tanh_buf.resize(d);
            fresh.resize(d);
            for (std::size_t e = 0; e < d; ++e) {
                double v2c = std::clamp(belief[edge_var[edges[e]]] - c2v[edges[e]],
                                        -kLlrClamp, kLlrClamp);
                tanh_buf[e] = std::tanh(0.5 * v2c);
            }
            // Explicit leave-one-out products: erased inputs are exact
            // zeros, so dividing the full product out is not an option.
            for (std::size_t e = 0; e < d; ++e) {
                double prod = 1.0;
                for (std::size_t e2 = 0; e2 < d; ++e2) {
                    if (e2 != e) {
                        prod *= tanh_buf[e2];
                    }
                }
                prod = std::clamp(prod, -1.0 + 1e-15, 1.0 - 1e-15);
                fresh[e] = 2.0 * std::atanh(prod);
            }
            for (std::size_t e = 0; e < d; ++e) {
                belief[edge_var[edges[e]]] += fresh[e] - c2v[edges[e]];
                c2v[edges[e]] = fresh[e];
            }
        }
        for (std::size_t v = 0; v < code.n; ++v) {
            hard[v] = belief[v] < 0.0 ? 1 : 0;
        }
        if (parity_ok()) {
            res.success = true;
            res.iterations = iter + 1;
            res.codeword = hard;
            res.info.resize(code.k);
            for (std::size_t i = 0; i < code.k; ++i) {
                res.info[i] = hard[code.info_cols[i]];
            }
            return res;
        }
    }
    res.iterations = max_iters;
    return res;
}

double capacity_bsec(const BsecParams& params) {
    if (params.p_bsc < 0.0 || params.p_bsc > 0.5) {
        throw std::invalid_argument("capacity_bsec: p_bsc outside [0, 0.5]");
    }
    double h2 = 0.0;
    if (params.p_bsc > 0.0) {
        double p = params.p_bsc;
        h2 = -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
    }
    return (1.0 - h2) * (1.0 - params.p_bec);
}

McResult logical_error_mc(const LdpcCode& code, const BsecParams& params, std::size_t trials,
                          Rng& rng) {
    if (trials == 0) {
        throw std::invalid_argument("logical_error_mc: need at least one trial");
    }
    McResult res;
    res.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        BitVec info(code.k);
        for (auto& b : info) {
            b = static_cast<std::uint8_t>(rng() & 1);
        }
        BitVec cw = encode(code, info);
        auto rx = bsec_channel(cw, params, rng);
        auto decoded = bp_decode(code, rx, params);
        if (!decoded.success || decoded.info != info) {
            ++res.failures;
        }
    }
    double p = static_cast<double>(res.failures) / static_cast<double>(trials);
    res.failure_rate = p;
    double z = 1.959963984540054;
    double nn = static_cast<double>(trials);
    double denom = 1.0 + z * z / nn;
    double center = (p + z * z / (2.0 * nn)) / denom;
    double half = z * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn)) / denom;
    res.ci_low = std::max(0.0, center - half);
    res.ci_high = std::min(1.0, center + half);
    return res;
}

} // namespace rgs
