#include "rgs/bitmatrix.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace rgs {

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), words_((cols + 63) / 64), bits_(rows * words_, 0) {}

BitMatrix BitMatrix::identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m.set(i, i, true);
    }
    return m;
}

BitMatrix BitMatrix::from_rows(std::initializer_list<std::initializer_list<int>> rows) {
    std::size_t r = rows.size();
    std::size_t c = r == 0 ? 0 : rows.begin()->size();
    BitMatrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != c) {
            throw std::invalid_argument("BitMatrix::from_rows: ragged rows");
        }
        std::size_t j = 0;
        for (int v : row) {
            m.set(i, j, v != 0);
            ++j;
        }
        ++i;
    }
    return m;
}

void BitMatrix::check_bounds(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) {
        throw std::out_of_range("BitMatrix: index out of range");
    }
}

bool BitMatrix::get(std::size_t r, std::size_t c) const {
    check_bounds(r, c);
    return (bits_[r * words_ + c / 64] >> (c % 64)) & 1ULL;
}

void BitMatrix::set(std::size_t r, std::size_t c, bool v) {
    check_bounds(r, c);
    std::uint64_t mask = 1ULL << (c % 64);
    if (v) {
        bits_[r * words_ + c / 64] |= mask;
    } else {
        bits_[r * words_ + c / 64] &= ~mask;
    }
}

void BitMatrix::xor_row_into(std::size_t src, std::size_t dst) {
    if (src >= rows_ || dst >= rows_) {
        throw std::out_of_range("BitMatrix::xor_row_into: row out of range");
    }
    const std::uint64_t* s = row(src);
    std::uint64_t* d = row(dst);
    for (std::size_t w = 0; w < words_; ++w) {
        d[w] ^= s[w];
    }
}

void BitMatrix::xor_col_into(std::size_t src, std::size_t dst) {
    if (src >= cols_ || dst >= cols_) {
        throw std::out_of_range("BitMatrix::xor_col_into: column out of range");
    }
    for (std::size_t r = 0; r < rows_; ++r) {
        if (get(r, src)) {
            set(r, dst, !get(r, dst));
        }
    }
}

void BitMatrix::swap_rows(std::size_t a, std::size_t b) {
    if (a >= rows_ || b >= rows_) {
        throw std::out_of_range("BitMatrix::swap_rows: row out of range");
    }
    if (a == b) {
        return;
    }
    std::uint64_t* ra = row(a);
    std::uint64_t* rb = row(b);
    for (std::size_t w = 0; w < words_; ++w) {
        std::swap(ra[w], rb[w]);
    }
}

BitMatrix BitMatrix::transposed() const {
    BitMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t w = 0; w < words_; ++w) {
            std::uint64_t word = bits_[r * words_ + w];
            while (word) {
                int b = std::countr_zero(word);
                word &= word - 1;
                t.set(w * 64 + static_cast<std::size_t>(b), r, true);
            }
        }
    }
    return t;
}

std::size_t BitMatrix::rank() const {
    BitMatrix work = *this;
    std::size_t r = 0;
    for (std::size_t c = 0; c < work.cols_ && r < work.rows_; ++c) {
        std::size_t pivot = r;
        while (pivot < work.rows_ && !work.get(pivot, c)) {
            ++pivot;
        }
        if (pivot == work.rows_) {
            continue;
        }
        work.swap_rows(pivot, r);
        for (std::size_t i = r + 1; i < work.rows_; ++i) {
            if (work.get(i, c)) {
                work.xor_row_into(r, i);
            }
        }
        ++r;
    }
    return r;
}

bool BitMatrix::is_zero() const {
    for (std::uint64_t w : bits_) {
        if (w != 0) {
            return false;
        }
    }
    return true;
}

bool BitMatrix::operator==(const BitMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && bits_ == other.bits_;
}

std::string BitMatrix::str() const {
    std::string s;
    for (std::size_t r = 0; r < rows_; ++r) {
        s += '[';
        for (std::size_t c = 0; c < cols_; ++c) {
            s += get(r, c) ? '1' : '0';
            if (c + 1 < cols_) {
                s += ' ';
            }
        }
        s += "]\n";
    }
    return s;
}

BitMatrix operator*(const BitMatrix& a, const BitMatrix& b) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("BitMatrix product: dimension mismatch");
    }
    BitMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        std::uint64_t* dst = c.row(i);
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (a.get(i, j)) {
                const std::uint64_t* src = b.row(j);
                for (std::size_t w = 0; w < b.words_per_row(); ++w) {
                    dst[w] ^= src[w];
                }
            }
        }
    }
    return c;
}

BitMatrix sample_uniform(std::size_t rows, std::size_t cols, Rng& rng) {
    if (rows == 0 || cols == 0) {
        throw std::invalid_argument("sample_uniform: empty shape");
    }
    BitMatrix m(rows, cols);
    std::size_t words = m.words_per_row();
    std::uint64_t tail_mask = (cols % 64 == 0) ? ~0ULL : ((1ULL << (cols % 64)) - 1);
    for (std::size_t r = 0; r < rows; ++r) {
        std::uint64_t* p = m.row(r);
        for (std::size_t w = 0; w < words; ++w) {
            p[w] = rng();
        }
        p[words - 1] &= tail_mask;
    }
    return m;
}

ErasurePattern::ErasurePattern(std::vector<std::size_t> kept) : kept_(std::move(kept)) {
    for (std::size_t i = 1; i < kept_.size(); ++i) {
        if (kept_[i] <= kept_[i - 1]) {
            throw std::invalid_argument("ErasurePattern: indices must be strictly increasing");
        }
    }
}

ErasurePattern ErasurePattern::keep_all(std::size_t n) {
    std::vector<std::size_t> kept(n);
    for (std::size_t i = 0; i < n; ++i) {
        kept[i] = i;
    }
    return ErasurePattern(std::move(kept));
}

ErasurePattern ErasurePattern::sample(std::size_t n, double erase_prob, Rng& rng) {
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < n; ++i) {
        if (!bernoulli(rng, erase_prob)) {
            kept.push_back(i);
        }
    }
    return ErasurePattern(std::move(kept));
}

BitMatrix erase_columns(const BitMatrix& g, const ErasurePattern& pattern) {
    for (std::size_t c : pattern.kept()) {
        if (c >= g.cols()) {
            throw std::out_of_range("erase_columns: kept index out of range");
        }
    }
    BitMatrix out(g.rows(), pattern.size());
    for (std::size_t r = 0; r < g.rows(); ++r) {
        for (std::size_t j = 0; j < pattern.size(); ++j) {
            out.set(r, j, g.get(r, pattern.kept()[j]));
        }
    }
    return out;
}

std::optional<BitVec> solve_left(const BitMatrix& gt, const BitVec& x) {
    std::size_t k = gt.rows();
    std::size_t nt = gt.cols();
    if (x.size() != nt) {
        throw std::invalid_argument("solve_left: dimension mismatch");
    }
    // Solve gt^T m^T = x^T by elimination on the augmented system.
    BitMatrix aug(nt, k + 1);
    for (std::size_t r = 0; r < nt; ++r) {
        for (std::size_t c = 0; c < k; ++c) {
            aug.set(r, c, gt.get(c, r));
        }
        aug.set(r, k, x[r] != 0);
    }
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_row(k, nt);
    for (std::size_t c = 0; c < k && rank < nt; ++c) {
        std::size_t pivot = rank;
        while (pivot < nt && !aug.get(pivot, c)) {
            ++pivot;
        }
        if (pivot == nt) {
            continue;
        }
        aug.swap_rows(pivot, rank);
        for (std::size_t r = 0; r < nt; ++r) {
            if (r != rank && aug.get(r, c)) {
                aug.xor_row_into(rank, r);
            }
        }
        pivot_row[c] = rank;
        ++rank;
    }
    if (rank < k) {
        throw std::invalid_argument("solve_left: generator matrix is rank deficient");
    }
    // Any leftover row with a set augmented bit marks an inconsistent system.
    for (std::size_t r = rank; r < nt; ++r) {
        if (aug.get(r, k)) {
            return std::nullopt;
        }
    }
    BitVec m(k, 0);
    for (std::size_t c = 0; c < k; ++c) {
        m[c] = aug.get(pivot_row[c], k) ? 1 : 0;
    }
    return m;
}

namespace {

// Shared Jordan-style column reduction. Clears each row with a fresh pivot
// column and returns the pivot positions; remaining columns end up zero.
std::vector<std::size_t> column_reduce(BitMatrix& w, std::vector<ColumnStep>& steps,
                                       const char* who) {
    std::size_t k = w.rows();
    std::size_t m = w.cols();
    std::vector<bool> used(m, false);
    std::vector<std::size_t> pivot(k);
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t p = m;
        for (std::size_t c = 0; c < m; ++c) {
            if (!used[c] && w.get(i, c)) {
                p = c;
                break;
            }
        }
        if (p == m) {
            throw std::invalid_argument(std::string(who) + ": matrix is rank deficient");
        }
        used[p] = true;
        pivot[i] = p;
        for (std::size_t c = 0; c < m; ++c) {
            if (c != p && w.get(i, c)) {
                steps.push_back({p, c});
                w.xor_col_into(p, c);
            }
        }
    }
    return pivot;
}

// Moves pivot column i to position i for every row, emitting swap steps.
void permute_pivots(BitMatrix& w, std::vector<ColumnStep>& steps,
                    std::vector<std::size_t>& pivot) {
    std::size_t m = w.cols();
    std::vector<std::size_t> holds(m, pivot.size()); // column -> row index or sentinel
    for (std::size_t i = 0; i < pivot.size(); ++i) {
        holds[pivot[i]] = i;
    }
    for (std::size_t i = 0; i < pivot.size(); ++i) {
        std::size_t c = pivot[i];
        if (c == i) {
            continue;
        }
        steps.push_back({c, i});
        w.xor_col_into(c, i);
        steps.push_back({i, c});
        w.xor_col_into(i, c);
        steps.push_back({c, i});
        w.xor_col_into(c, i);
        std::size_t displaced = holds[i];
        holds[i] = i;
        pivot[i] = i;
        if (displaced < pivot.size()) {
            holds[c] = displaced;
            pivot[displaced] = c;
        } else {
            holds[c] = pivot.size();
        }
    }
}

} // namespace

GammaNormalization normalize_gamma(const BitMatrix& gamma) {
    std::size_t k = gamma.rows();
    std::size_t m = gamma.cols();
    if (k == 0 || m < k) {
        throw std::invalid_argument("normalize_gamma: matrix is rank deficient");
    }
    BitMatrix w = gamma;
    std::vector<ColumnStep> steps;
    auto pivot = column_reduce(w, steps, "normalize_gamma");
    permute_pivots(w, steps, pivot);
    return {apply_column_steps(BitMatrix::identity(m), steps), std::move(steps)};
}

std::vector<ColumnStep> decompose_invertible(const BitMatrix& q) {
    if (q.rows() != q.cols() || q.rows() == 0) {
        throw std::invalid_argument("decompose_invertible: matrix not invertible");
    }
    BitMatrix w = q;
    std::vector<ColumnStep> steps;
    std::vector<std::size_t> pivot;
    try {
        pivot = column_reduce(w, steps, "decompose_invertible");
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("decompose_invertible: matrix not invertible");
    }
    permute_pivots(w, steps, pivot);
    // w is now the identity: q * steps == I, and each step is an involution,
    // so replaying the reversed list on I rebuilds q.
    std::reverse(steps.begin(), steps.end());
    return steps;
}

BitMatrix apply_column_steps(BitMatrix m, const std::vector<ColumnStep>& steps) {
    for (const auto& s : steps) {
        m.xor_col_into(s.source, s.target);
    }
    return m;
}

} // namespace rgs
