// Independent reference computations used by the tests. These deliberately
// avoid the library's evaluation code paths: plain long double loops, MPFR's
// own zeta function, and step-by-step rational products.
#ifndef ZSTAR_TEST_ORACLES_HPP
#define ZSTAR_TEST_ORACLES_HPP

#include <zstar/enclosure.hpp>

#include <gmpxx.h>
#include <mpfr.h>

#include <cmath>
#include <vector>

namespace oracle
{

inline mpq_class tail_factor_direct(unsigned long m, int q)
{
    mpq_class r = 1;
    for (unsigned long n = 2; n <= m; ++n) {
        mpz_class p;
        mpz_ui_pow_ui(p.get_mpz_t(), n, static_cast<unsigned long>(q));
        r *= mpq_class(p, p - 1);
        r.canonicalize();
    }
    return r;
}

// prod_{n>=2} (1 - n^{-q})^{-1} to 10^6 factors plus the leading tail correction.
inline double euler_product(int q)
{
    const long n_max = 1000000;
    long double log_sum = 0;
    for (long n = n_max; n >= 2; --n) {
        log_sum -= std::log1p(-std::pow(static_cast<long double>(n), -q));
    }
    log_sum += std::pow(static_cast<long double>(n_max), 1 - q) / (q - 1);
    return static_cast<double>(std::exp(log_sum));
}

inline zstar::Enclosure zeta_int(int s, mpfr_prec_t prec)
{
    zstar::BigFloat lo(prec), hi(prec);
    mpfr_zeta_ui(lo.get(), static_cast<unsigned long>(s), MPFR_RNDD);
    mpfr_zeta_ui(hi.get(), static_cast<unsigned long>(s), MPFR_RNDU);
    return zstar::Enclosure::from_bounds(lo, hi, prec);
}

// sum_{n >= m} n^{-s} = zeta(s) - sum_{n < m} n^{-s}
inline zstar::Enclosure hurwitz_tail(int s, unsigned long m, mpfr_prec_t prec)
{
    zstar::BigFloat lo(prec), hi(prec), t(prec);
    mpfr_zeta_ui(lo.get(), static_cast<unsigned long>(s), MPFR_RNDD);
    mpfr_zeta_ui(hi.get(), static_cast<unsigned long>(s), MPFR_RNDU);
    for (unsigned long n = 1; n < m; ++n) {
        mpfr_ui_pow_ui(t.get(), n, static_cast<unsigned long>(s), MPFR_RNDN);
        mpfr_ui_div(t.get(), 1, t.get(), MPFR_RNDU);
        mpfr_sub(lo.get(), lo.get(), t.get(), MPFR_RNDD);
        mpfr_ui_pow_ui(t.get(), n, static_cast<unsigned long>(s), MPFR_RNDN);
        mpfr_ui_div(t.get(), 1, t.get(), MPFR_RNDD);
        mpfr_sub(hi.get(), hi.get(), t.get(), MPFR_RNDU);
    }
    // mpfr_ui_pow_ui is exact for these small arguments at this precision
    return zstar::Enclosure::from_bounds(lo, hi, prec);
}

// Direct nested sum with n_i <= n_max and a weight applied to the last index.
template <typename Weight>
long double nested_direct(const std::vector<int> &parts, unsigned long n_min, unsigned long n_max, Weight weight)
{
    // level[j] = sum over n_{j+1} >= ... >= n_r in [n_min, current n]
    std::vector<long double> level(parts.size() + 1, 0.0L);
    for (unsigned long n = n_min; n <= n_max; ++n) {
        long double carry = weight(n);
        for (std::size_t j = parts.size(); j-- > 0;) {
            level[j] += std::pow(static_cast<long double>(n), -parts[j]) * carry;
            carry = level[j];
        }
    }
    return level[0];
}

inline double mzsv_direct(const std::vector<int> &parts, unsigned long n_max)
{
    return static_cast<double>(nested_direct(parts, 1, n_max, [](unsigned long) { return 1.0L; }));
}

inline double mzsv_tail_direct(const std::vector<int> &parts, int q, unsigned long n_max)
{
    long double f = 1.0L;
    unsigned long last = 1;
    return static_cast<double>(nested_direct(parts, 1, n_max, [&](unsigned long n) {
        for (; last < n;) {
            ++last;
            f /= 1.0L - std::pow(static_cast<long double>(last), -q);
        }
        return f;
    }));
}

// sum_{n_max >= n_1 >= ... >= n_r > cutoff} prod n_i^{-k_i}
inline double nested_tail_direct(const std::vector<int> &parts, unsigned long cutoff, unsigned long n_max)
{
    std::vector<long double> level(parts.size(), 0.0L);
    for (unsigned long n = cutoff + 1; n <= n_max; ++n) {
        long double carry = 1.0L;
        for (std::size_t j = parts.size(); j-- > 0;) {
            level[j] += std::pow(static_cast<long double>(n), -parts[j]) * carry;
            carry = level[j];
        }
    }
    return static_cast<double>(level[0]);
}

} // namespace oracle

#endif
