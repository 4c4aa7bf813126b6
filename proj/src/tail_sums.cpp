#include <zstar/error.hpp>
#include <zstar/tail_sums.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <utility>

namespace zstar::detail
{

namespace
{

// Closed interval with directed-rounded endpoints.
struct Ival {
    BigFloat lo;
    BigFloat hi;

    explicit Ival(mpfr_prec_t prec) : lo(prec), hi(prec) {}

    static Ival of(const mpq_class &q, mpfr_prec_t prec)
    {
        Ival r(prec);
        mpfr_set_q(r.lo.get(), q.get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(r.hi.get(), q.get_mpq_t(), MPFR_RNDU);
        return r;
    }

    bool is_zero() const
    {
        return lo.is_zero() && hi.is_zero();
    }
};

void add_into(Ival &acc, const Ival &v)
{
    mpfr_add(acc.lo.get(), acc.lo.get(), v.lo.get(), MPFR_RNDD);
    mpfr_add(acc.hi.get(), acc.hi.get(), v.hi.get(), MPFR_RNDU);
}

Ival mul(const Ival &a, const Ival &b, mpfr_prec_t prec)
{
    Ival r(prec);
    BigFloat t(prec);
    bool first = true;
    for (const BigFloat *x : {&a.lo, &a.hi}) {
        for (const BigFloat *y : {&b.lo, &b.hi}) {
            mpfr_mul(t.get(), x->get(), y->get(), MPFR_RNDD);
            if (first || t < r.lo) {
                r.lo = t;
            }
            mpfr_mul(t.get(), x->get(), y->get(), MPFR_RNDU);
            if (first || t > r.hi) {
                r.hi = t;
            }
            first = false;
        }
    }
    return r;
}

// Upper bound on max(|lo|, |hi|).
BigFloat magnitude(const Ival &v, mpfr_prec_t prec)
{
    BigFloat a(prec), b(prec);
    mpfr_abs(a.get(), v.lo.get(), MPFR_RNDU);
    mpfr_abs(b.get(), v.hi.get(), MPFR_RNDU);
    return a > b ? a : b;
}

mpz_class rising_factorial(long a, long n)
{
    mpz_class r = 1;
    for (long i = 0; i < n; ++i) {
        r *= a + i;
    }
    return r;
}

mpz_class factorial(long n)
{
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
}

void inv_ui(mpfr_ptr out, unsigned long n, mpfr_rnd_t rnd)
{
    mpfr_set_ui(out, n, rnd == MPFR_RNDD ? MPFR_RNDU : MPFR_RNDD);
    mpfr_ui_div(out, 1, out, rnd);
}

// Upper bound on cutoff^{-p}, p >= 0.
BigFloat inv_pow_up(unsigned long base, long p, mpfr_prec_t prec)
{
    BigFloat r(prec);
    if (p <= 0) {
        mpfr_set_ui(r.get(), 1, MPFR_RNDU);
        return r;
    }
    mpfr_ui_pow_ui(r.get(), base, static_cast<unsigned long>(p), MPFR_RNDD);
    mpfr_ui_div(r.get(), 1, r.get(), MPFR_RNDU);
    return r;
}

// Power series sum_{s=s0}^{s0+len-1} c_s m^{-s} plus a remainder bounded by
// err * m^{-(s0+len)} for every m >= m0.
struct Series {
    long s0 = 0;
    std::vector<Ival> coeffs;
    BigFloat err;

    long order_limit() const
    {
        return s0 + static_cast<long>(coeffs.size());
    }
};

class Expander
{
public:
    Expander(unsigned long m0, long depth_terms, mpfr_prec_t wp) : m0_(m0), terms_(depth_terms), wp_(wp)
    {
        inv_ui(inv_m0_up_.get(), m0_, MPFR_RNDU);
    }

    Series start() const
    {
        Series s;
        s.s0 = 0;
        s.coeffs.assign(static_cast<std::size_t>(terms_ + 1), Ival(wp_));
        mpfr_set_ui(s.coeffs[0].lo.get(), 1, MPFR_RNDD);
        mpfr_set_ui(s.coeffs[0].hi.get(), 1, MPFR_RNDU);
        s.err = BigFloat(wp_);
        return s;
    }

    // Series of U(m) = sum_{n >= m} n^{-k} T(n).
    Series step(const Series &t, int k)
    {
        if (t.s0 + k < 2) {
            raise(ErrorKind::DivergentValue, "nested tail sum diverges");
        }
        Series u;
        u.s0 = t.s0 + k - 1;
        u.coeffs.assign(static_cast<std::size_t>(terms_ + 1), Ival(wp_));
        u.err = BigFloat(wp_);
        const long limit = u.order_limit(); // first exponent carried in the remainder

        for (std::size_t idx = 0; idx < t.coeffs.size(); ++idx) {
            const Ival &c = t.coeffs[idx];
            if (c.is_zero()) {
                continue;
            }
            const long a = t.s0 + static_cast<long>(idx) + k;
            const BigFloat cmag = magnitude(c, wp_);
            long i = 0;
            // i = -1 encodes the integral term, i = 0 the f(m)/2 term,
            // i >= 1 the Bernoulli terms.
            for (i = -1;; ++i) {
                const long e = term_exponent(a, i);
                if (e >= limit) {
                    break;
                }
                const Ival &g = coefficient(a, i);
                add_into(u.coeffs[static_cast<std::size_t>(e - u.s0)], mul(c, g, wp_));
            }
            // Everything from term i on is bounded by the magnitude of term i
            // (or, for the integral/half terms, by the terms themselves plus
            // the first Bernoulli term).
            BigFloat bound(wp_);
            for (long j = i; j <= std::max(i, 1L); ++j) {
                const long e = term_exponent(a, j);
                BigFloat gm = magnitude(coefficient(a, j), wp_);
                mpfr_mul(gm.get(), gm.get(), inv_pow_up(m0_, e - limit, wp_).get(), MPFR_RNDU);
                mpfr_add(bound.get(), bound.get(), gm.get(), MPFR_RNDU);
            }
            mpfr_mul(bound.get(), bound.get(), cmag.get(), MPFR_RNDU);
            mpfr_add(u.err.get(), u.err.get(), bound.get(), MPFR_RNDU);
        }

        // Carried remainder: sum_{n>=m} n^{-k} err n^{-b} <= err m^{-limit} (1/m0 + 1/limit).
        BigFloat factor(wp_);
        inv_ui(factor.get(), static_cast<unsigned long>(limit), MPFR_RNDU);
        mpfr_add(factor.get(), factor.get(), inv_m0_up_.get(), MPFR_RNDU);
        BigFloat carried(wp_);
        mpfr_mul(carried.get(), t.err.get(), factor.get(), MPFR_RNDU);
        mpfr_add(u.err.get(), u.err.get(), carried.get(), MPFR_RNDU);
        return u;
    }

    // Certified value of the series at m = m0.
    Ival evaluate(const Series &s) const
    {
        Ival inv(wp_);
        inv_ui(inv.lo.get(), m0_, MPFR_RNDD);
        inv_ui(inv.hi.get(), m0_, MPFR_RNDU);
        Ival power(wp_); // m0^{-s0}
        mpfr_ui_pow_ui(power.lo.get(), m0_, static_cast<unsigned long>(s.s0), MPFR_RNDU);
        mpfr_ui_div(power.lo.get(), 1, power.lo.get(), MPFR_RNDD);
        mpfr_ui_pow_ui(power.hi.get(), m0_, static_cast<unsigned long>(s.s0), MPFR_RNDD);
        mpfr_ui_div(power.hi.get(), 1, power.hi.get(), MPFR_RNDU);
        Ival acc(wp_);
        for (const Ival &c : s.coeffs) {
            if (!c.is_zero()) {
                add_into(acc, mul(c, power, wp_));
            }
            mpfr_mul(power.lo.get(), power.lo.get(), inv.lo.get(), MPFR_RNDD);
            mpfr_mul(power.hi.get(), power.hi.get(), inv.hi.get(), MPFR_RNDU);
        }
        // power now bounds m0^{-order_limit}.
        BigFloat e(wp_);
        mpfr_mul(e.get(), s.err.get(), power.hi.get(), MPFR_RNDU);
        mpfr_sub(acc.lo.get(), acc.lo.get(), e.get(), MPFR_RNDD);
        mpfr_add(acc.hi.get(), acc.hi.get(), e.get(), MPFR_RNDU);
        return acc;
    }

private:
    static long term_exponent(long a, long i)
    {
        if (i < 0) {
            return a - 1;
        }
        if (i == 0) {
            return a;
        }
        return a + 2 * i - 1;
    }

    // Coefficient of m^{-term_exponent(a, i)} in the expansion of sum_{n>=m} n^{-a}.
    const Ival &coefficient(long a, long i)
    {
        const auto key = std::make_pair(a, i);
        auto it = cache_.find(key);
        if (it != cache_.end()) {
            return it->second;
        }
        mpq_class q;
        if (i < 0) {
            q = mpq_class(1, a - 1);
        } else if (i == 0) {
            q = mpq_class(1, 2);
        } else {
            const auto &bern = even_bernoulli(static_cast<std::size_t>(i + 1));
            q = bern[static_cast<std::size_t>(i)] * mpq_class(rising_factorial(a, 2 * i - 1)) / mpq_class(factorial(2 * i));
            q.canonicalize();
        }
        return cache_.emplace(key, Ival::of(q, wp_)).first->second;
    }

    unsigned long m0_;
    long terms_;
    mpfr_prec_t wp_;
    BigFloat inv_m0_up_{wp_};
    std::map<std::pair<long, long>, Ival> cache_;
};

} // namespace

const std::vector<mpq_class> &even_bernoulli(std::size_t count)
{
    static std::mutex mutex;
    static std::vector<mpq_class> table;
    std::lock_guard<std::mutex> lock(mutex);
    if (table.size() < count) {
        // Akiyama-Tanigawa, producing B_n for n = 0..2(count-1).
        const std::size_t n_max = 2 * (count - 1);
        std::vector<mpq_class> work(n_max + 1);
        std::vector<mpq_class> all(n_max + 1);
        for (std::size_t m = 0; m <= n_max; ++m) {
            work[m] = mpq_class(1, static_cast<unsigned long>(m + 1));
            for (std::size_t j = m; j >= 1; --j) {
                work[j - 1] = mpq_class(static_cast<unsigned long>(j)) * (work[j - 1] - work[j]);
                work[j - 1].canonicalize();
            }
            all[m] = work[0];
        }
        table.clear();
        for (std::size_t i = 0; i < count; ++i) {
            table.push_back(all[2 * i]);
        }
    }
    return table;
}

TailSums nested_tail_sums(std::span<const int> exponents, unsigned long cutoff, mpfr_prec_t prec)
{
    const unsigned long m0 = cutoff + 1;
    if (m0 < 8) {
        raise(ErrorKind::PrecisionInsufficient, "tail expansion needs a cutoff of at least 7");
    }
    const mpfr_prec_t wp = prec + 64;
    // Relative order needed so that m0^{-terms} sits well below 2^{-prec}.
    const long terms = static_cast<long>(std::ceil((static_cast<double>(prec) + 32.0) * std::log(2.0)
                                                   / std::log(static_cast<double>(m0))))
                       + 2;
    Expander ex(m0, terms, wp);

    TailSums out;
    out.lo.reserve(exponents.size());
    out.hi.reserve(exponents.size());
    Series s = ex.start();
    for (const int k : exponents) {
        s = ex.step(s, k);
        Ival v = ex.evaluate(s);
        if (v.lo.sign() < 0) {
            mpfr_set_zero(v.lo.get(), 1); // all terms are positive
        }
        BigFloat lo(prec), hi(prec);
        mpfr_set(lo.get(), v.lo.get(), MPFR_RNDD);
        mpfr_set(hi.get(), v.hi.get(), MPFR_RNDU);
        out.lo.push_back(std::move(lo));
        out.hi.push_back(std::move(hi));
    }
    return out;
}

} // namespace zstar::detail
