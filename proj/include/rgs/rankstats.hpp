#pragma once

#include <cstddef>
#include <functional>

namespace rgs {

// Binomial pmf C(n, nt) q^nt (1-q)^(n-nt), evaluated in log space.
double binom_pmf(std::size_t nt, std::size_t n, double q);

// Probability that a uniformly random k x nt matrix over GF(2) has rank < k.
double eps_d(std::size_t k, std::size_t nt);

// Rank-deficiency probability after erasing each of n columns independently
// with probability p_f: the binomial average of eps_d over surviving counts.
double avg_eps_d(std::size_t k, std::size_t n, double p_f);

// Same average with a caller-supplied deficiency curve, for codes whose
// eps_d(k, nt) is not the uniform-random one.
double avg_eps_d(std::size_t k, std::size_t n, double p_f,
                 const std::function<double(std::size_t, std::size_t)>& eps_fn);

} // namespace rgs
