#ifndef ZSTAR_PARTIAL_SUMS_HPP
#define ZSTAR_PARTIAL_SUMS_HPP

#include <zstar/bigfloat.hpp>

#include <span>
#include <vector>

namespace zstar::detail
{

enum class Weight {
    One,    // finite index
    Linear, // {1}^inf tail: weight n_r
    Factor, // {q}^inf tail: weight F_{n_r}(q)
};

struct PartialSums {
    std::vector<BigFloat> sums; // B_j(N) for j = 0..r-1
    BigFloat factor;            // F_N(q) when the weight is Factor
};

// B_r(n) = w(n), B_j(n) = B_j(n-1) + n^{-k_{j+1}} B_{j+1}(n) for n <= n_max.
// Every step is rounded toward `rnd` (MPFR_RNDD or MPFR_RNDU); since all terms
// are positive the result is a one-sided bound. Runs on a fixed-point mpn
// kernel and falls back to MPFR if an integer part overflows one limb.
PartialSums partial_sums(std::span<const int> parts, Weight weight, int q, unsigned long n_max, mpfr_prec_t prec,
                         mpfr_rnd_t rnd);

// Reference implementation on MPFR floats.
PartialSums partial_sums_mpfr(std::span<const int> parts, Weight weight, int q, unsigned long n_max,
                              mpfr_prec_t prec, mpfr_rnd_t rnd);

} // namespace zstar::detail

#endif
