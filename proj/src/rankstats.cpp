#include "rgs/rankstats.hpp"

#include <cmath>
#include <stdexcept>

namespace rgs {

double binom_pmf(std::size_t nt, std::size_t n, double q) {
    if (nt > n) {
        throw std::invalid_argument("binom_pmf: nt > n");
    }
    if (q < 0.0 || q > 1.0) {
        throw std::invalid_argument("binom_pmf: q outside [0, 1]");
    }
    if (q == 0.0) {
        return nt == 0 ? 1.0 : 0.0;
    }
    if (q == 1.0) {
        return nt == n ? 1.0 : 0.0;
    }
    double lchoose = std::lgamma(static_cast<double>(n) + 1.0) -
                     std::lgamma(static_cast<double>(nt) + 1.0) -
                     std::lgamma(static_cast<double>(n - nt) + 1.0);
    double lp = lchoose + static_cast<double>(nt) * std::log(q) +
                static_cast<double>(n - nt) * std::log1p(-q);
    return std::exp(lp);
}

double eps_d(std::size_t k, std::size_t nt) {
    if (k == 0) {
        throw std::invalid_argument("eps_d: k must be positive");
    }
    double prod = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
        double factor = 1.0 - std::exp2(static_cast<double>(i) - static_cast<double>(nt));
        if (factor <= 0.0) {
            // nt < k: some row is forced dependent, deficiency is certain.
            return 1.0;
        }
        prod *= factor;
    }
    double eps = 1.0 - prod;
    if (eps < 0.0) {
        eps = 0.0;
    }
    return eps;
}

double avg_eps_d(std::size_t k, std::size_t n, double p_f,
                 const std::function<double(std::size_t, std::size_t)>& eps_fn) {
    if (k == 0 || n == 0) {
        throw std::invalid_argument("avg_eps_d: k and n must be positive");
    }
    if (p_f < 0.0 || p_f > 1.0) {
        throw std::invalid_argument("avg_eps_d: p_f outside [0, 1]");
    }
    double q = 1.0 - p_f;
    // Kahan summation; the terms span many orders of magnitude.
    double sum = 0.0;
    double carry = 0.0;
    for (std::size_t nt = 0; nt <= n; ++nt) {
        double term = eps_fn(k, nt) * binom_pmf(nt, n, q);
        if (term < 1e-300) {
            continue;
        }
        double y = term - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return sum > 1.0 ? 1.0 : sum;
}

double avg_eps_d(std::size_t k, std::size_t n, double p_f) {
    return avg_eps_d(k, n, p_f, [](std::size_t kk, std::size_t nt) { return eps_d(kk, nt); });
}

} // namespace rgs
