#ifndef ZSTAR_TAIL_SUMS_HPP
#define ZSTAR_TAIL_SUMS_HPP

#include <zstar/bigfloat.hpp>

#include <gmpxx.h>

#include <span>
#include <vector>

namespace zstar::detail
{

// Certified bounds [lo[j], hi[j]] on the nested tail sums
//
//   Z_j = sum_{n_1 >= ... >= n_j > cutoff} n_1^{-e_1} ... n_j^{-e_j}
//
// for every prefix length j = 1..exponents.size(). Each level is carried as a
// power series in 1/m, obtained by applying the Euler-Maclaurin expansion of
// the Hurwitz tail sum_{n>=m} n^{-a} to the previous level; the omitted
// Euler-Maclaurin terms and the truncated orders are folded into a uniform
// remainder C * m^{-(S+1)}, valid for all m > cutoff.
//
// Exponents may be 0 (a weight n_j absorbed into the index) as long as every
// level converges; otherwise DivergentValue is raised.
struct TailSums {
    std::vector<BigFloat> lo;
    std::vector<BigFloat> hi;
};

TailSums nested_tail_sums(std::span<const int> exponents, unsigned long cutoff, mpfr_prec_t prec);

// B_{2i} for i = 0..count-1 (B_0 = 1, B_2 = 1/6, ...).
const std::vector<mpq_class> &even_bernoulli(std::size_t count);

} // namespace zstar::detail

#endif
