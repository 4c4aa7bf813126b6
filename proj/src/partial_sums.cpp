#include <zstar/partial_sums.hpp>

#include <gmp.h>
#include <gmpxx.h>

#include <algorithm>
#include <cstring>
#include <optional>

namespace zstar::detail
{

namespace
{

mpfr_rnd_t opposite(mpfr_rnd_t rnd)
{
    return rnd == MPFR_RNDD ? MPFR_RNDU : MPFR_RNDD;
}

void inv_pow(mpfr_ptr out, unsigned long n, int k, mpfr_rnd_t rnd)
{
    if (k == 0) {
        mpfr_set_ui(out, 1, rnd);
        return;
    }
    mpfr_ui_pow_ui(out, n, static_cast<unsigned long>(k), opposite(rnd));
    mpfr_ui_div(out, 1, out, rnd);
}

struct Slots {
    std::vector<int> distinct; // ascending
    std::vector<std::size_t> slot;
};

Slots slots_of(std::span<const int> parts)
{
    Slots s;
    s.distinct.assign(parts.begin(), parts.end());
    std::sort(s.distinct.begin(), s.distinct.end());
    s.distinct.erase(std::unique(s.distinct.begin(), s.distinct.end()), s.distinct.end());
    for (const int k : parts) {
        s.slot.push_back(static_cast<std::size_t>(std::lower_bound(s.distinct.begin(), s.distinct.end(), k)
                                                  - s.distinct.begin()));
    }
    return s;
}

struct Overflow {};

// Nonnegative fixed-point numbers with one integer limb and `frac` fractional
// limbs, little-endian. Each operation rounds toward zero or away from it.
class FixedKernel
{
public:
    FixedKernel(std::size_t frac, bool up) : frac_(frac), len_(frac + 1), up_(up), prod_(2 * len_), one_(len_)
    {
        one_[frac_] = 1;
    }

    std::size_t len() const
    {
        return len_;
    }

    // out = v / d for a single-limb divisor d (v given by its limbs).
    void div_1(mp_limb_t *out, const mp_limb_t *v, mp_limb_t d) const
    {
        const mp_limb_t rem = mpn_divrem_1(out, 0, v, static_cast<mp_size_t>(len_), d);
        if (up_ && rem != 0) {
            bump(out);
        }
    }

    // out = 1 / d for an arbitrary positive integer d.
    void recip(mp_limb_t *out, const mpz_class &d)
    {
        if (mpz_size(d.get_mpz_t()) <= 1) {
            div_1(out, one_.data(), mpz_getlimbn(d.get_mpz_t(), 0));
            return;
        }
        mpz_class num, quot, rem;
        mpz_setbit(num.get_mpz_t(), 64 * frac_);
        mpz_tdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), d.get_mpz_t());
        std::fill(out, out + len_, 0);
        for (std::size_t i = 0; i < mpz_size(quot.get_mpz_t()); ++i) {
            out[i] = mpz_getlimbn(quot.get_mpz_t(), static_cast<mp_size_t>(i));
        }
        if (up_ && rem != 0) {
            bump(out);
        }
    }

    // out = a * b; out may alias a or b.
    void mul(mp_limb_t *out, const mp_limb_t *a, const mp_limb_t *b)
    {
        mpn_mul_n(prod_.data(), a, b, static_cast<mp_size_t>(len_));
        for (std::size_t i = frac_ + len_; i < 2 * len_; ++i) {
            if (prod_[i] != 0) {
                throw Overflow{};
            }
        }
        std::memcpy(out, prod_.data() + frac_, len_ * sizeof(mp_limb_t));
        if (up_ && !mpn_zero_p(prod_.data(), static_cast<mp_size_t>(frac_))) {
            bump(out);
        }
    }

    // acc += a * b
    void fma(mp_limb_t *acc, const mp_limb_t *a, const mp_limb_t *b)
    {
        mpn_mul_n(prod_.data(), a, b, static_cast<mp_size_t>(len_));
        for (std::size_t i = frac_ + len_; i < 2 * len_; ++i) {
            if (prod_[i] != 0) {
                throw Overflow{};
            }
        }
        mp_limb_t *hi = prod_.data() + frac_;
        if (up_ && !mpn_zero_p(prod_.data(), static_cast<mp_size_t>(frac_))) {
            bump(hi);
        }
        add(acc, hi);
    }

    void add(mp_limb_t *acc, const mp_limb_t *b) const
    {
        if (mpn_add_n(acc, acc, b, static_cast<mp_size_t>(len_)) != 0) {
            throw Overflow{};
        }
    }

    void set_integer(mp_limb_t *out, mp_limb_t v) const
    {
        std::fill(out, out + len_, 0);
        out[frac_] = v;
    }

    void to_float(BigFloat &dst, const mp_limb_t *v) const
    {
        mpz_class z;
        mpz_import(z.get_mpz_t(), len_, -1, sizeof(mp_limb_t), 0, 0, v);
        dst = BigFloat(static_cast<mpfr_prec_t>(64 * len_));
        mpfr_set_z_2exp(dst.get(), z.get_mpz_t(), -static_cast<mpfr_exp_t>(64 * frac_), MPFR_RNDN);
    }

private:
    void bump(mp_limb_t *v) const
    {
        if (mpn_add_1(v, v, static_cast<mp_size_t>(len_), 1) != 0) {
            throw Overflow{};
        }
    }

    std::size_t frac_;
    std::size_t len_;
    bool up_;
    std::vector<mp_limb_t> prod_;
    std::vector<mp_limb_t> one_;
};

std::optional<PartialSums> partial_sums_fixed(std::span<const int> parts, Weight weight, int q,
                                              unsigned long n_max, mpfr_prec_t prec, mpfr_rnd_t rnd)
{
    const std::size_t r = parts.size();
    const Slots sl = slots_of(parts);
    const std::size_t frac = static_cast<std::size_t>(prec + 32 + 63) / 64;
    FixedKernel fk(frac, rnd == MPFR_RNDU);
    const std::size_t len = fk.len();

    std::vector<mp_limb_t> sums(r * len, 0);
    std::vector<mp_limb_t> powers(sl.distinct.size() * len, 0);
    std::vector<mp_limb_t> cur(len, 0), step(len, 0), factor(len, 0);
    fk.set_integer(factor.data(), 1);
    mpz_class big;
    try {
        for (unsigned long n = 1; n <= n_max; ++n) {
            // distinct is ascending, so each power extends the previous one.
            int done = 0;
            for (std::size_t d = 0; d < sl.distinct.size(); ++d) {
                mp_limb_t *dst = powers.data() + d * len;
                mpz_ui_pow_ui(big.get_mpz_t(), n, static_cast<unsigned long>(sl.distinct[d] - done));
                fk.recip(step.data(), big);
                if (d == 0) {
                    std::memcpy(dst, step.data(), len * sizeof(mp_limb_t));
                } else {
                    fk.mul(dst, dst - len, step.data());
                }
                done = sl.distinct[d];
            }
            switch (weight) {
            case Weight::One:
                fk.set_integer(cur.data(), 1);
                break;
            case Weight::Linear:
                fk.set_integer(cur.data(), n);
                break;
            case Weight::Factor:
                if (n >= 2) {
                    // F_n = F_{n-1} + F_{n-1} / (n^q - 1)
                    mpz_ui_pow_ui(big.get_mpz_t(), n, static_cast<unsigned long>(q));
                    big -= 1;
                    fk.recip(step.data(), big);
                    fk.fma(factor.data(), factor.data(), step.data());
                }
                std::memcpy(cur.data(), factor.data(), len * sizeof(mp_limb_t));
                break;
            }
            const mp_limb_t *prev = cur.data();
            for (std::size_t j = r; j-- > 0;) {
                mp_limb_t *acc = sums.data() + j * len;
                fk.fma(acc, powers.data() + sl.slot[j] * len, prev);
                prev = acc;
            }
        }
    } catch (const Overflow &) {
        return std::nullopt;
    }
    PartialSums out{std::vector<BigFloat>(r), BigFloat(prec)};
    for (std::size_t j = 0; j < r; ++j) {
        fk.to_float(out.sums[j], sums.data() + j * len);
    }
    fk.to_float(out.factor, factor.data());
    return out;
}

} // namespace

PartialSums partial_sums_mpfr(std::span<const int> parts, Weight weight, int q, unsigned long n_max,
                              mpfr_prec_t prec, mpfr_rnd_t rnd)
{
    const std::size_t r = parts.size();
    const Slots sl = slots_of(parts);
    PartialSums out{std::vector<BigFloat>(r, BigFloat(prec)), BigFloat(prec, 1)};
    std::vector<BigFloat> powers(sl.distinct.size(), BigFloat(prec));
    BigFloat cur(prec), u(prec);
    for (unsigned long n = 1; n <= n_max; ++n) {
        inv_pow(powers[0].get(), n, sl.distinct[0], rnd);
        for (std::size_t d = 1; d < sl.distinct.size(); ++d) {
            inv_pow(u.get(), n, sl.distinct[d] - sl.distinct[d - 1], rnd);
            mpfr_mul(powers[d].get(), powers[d - 1].get(), u.get(), rnd);
        }
        switch (weight) {
        case Weight::One:
            mpfr_set_ui(cur.get(), 1, rnd);
            break;
        case Weight::Linear:
            mpfr_set_ui(cur.get(), n, rnd);
            break;
        case Weight::Factor:
            if (n >= 2) {
                inv_pow(u.get(), n, q, opposite(rnd));
                mpfr_ui_sub(u.get(), 1, u.get(), opposite(rnd));
                mpfr_div(out.factor.get(), out.factor.get(), u.get(), rnd);
            }
            mpfr_set(cur.get(), out.factor.get(), rnd);
            break;
        }
        mpfr_srcptr prev = cur.get();
        for (std::size_t j = r; j-- > 0;) {
            mpfr_fma(out.sums[j].get(), powers[sl.slot[j]].get(), prev, out.sums[j].get(), rnd);
            prev = out.sums[j].get();
        }
    }
    return out;
}

PartialSums partial_sums(std::span<const int> parts, Weight weight, int q, unsigned long n_max, mpfr_prec_t prec,
                         mpfr_rnd_t rnd)
{
    if (auto fixed = partial_sums_fixed(parts, weight, q, n_max, prec, rnd)) {
        return std::move(*fixed);
    }
    return partial_sums_mpfr(parts, weight, q, n_max, prec, rnd);
}

} // namespace zstar::detail
