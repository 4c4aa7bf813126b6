#ifndef ZSTAR_BIGFLOAT_HPP
#define ZSTAR_BIGFLOAT_HPP

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

namespace zstar
{

// Owning wrapper around an mpfr_t. Arithmetic is done through the raw mpfr_*
// calls with an explicit rounding mode; this class only manages lifetime and
// a few conversions.
class BigFloat
{
public:
    explicit BigFloat(mpfr_prec_t prec = 128);
    BigFloat(mpfr_prec_t prec, long value);
    BigFloat(const BigFloat &other);
    BigFloat(BigFloat &&other) noexcept;
    BigFloat &operator=(const BigFloat &other);
    BigFloat &operator=(BigFloat &&other) noexcept;
    ~BigFloat();

    mpfr_ptr get() noexcept
    {
        return value_;
    }
    mpfr_srcptr get() const noexcept
    {
        return value_;
    }
    mpfr_prec_t precision() const noexcept
    {
        return mpfr_get_prec(value_);
    }

    // Change precision, rounding the current value with `rnd`.
    void set_precision(mpfr_prec_t prec, mpfr_rnd_t rnd = MPFR_RNDN);

    double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const;
    bool is_zero() const noexcept
    {
        return mpfr_zero_p(value_) != 0;
    }
    bool is_inf() const noexcept
    {
        return mpfr_inf_p(value_) != 0;
    }
    int sign() const noexcept
    {
        return mpfr_sgn(value_);
    }

    static BigFloat from_mpq(const mpq_class &q, mpfr_prec_t prec, mpfr_rnd_t rnd);
    static BigFloat from_double(double d, mpfr_prec_t prec);

    // Bit-exact hexadecimal form: sign, hex significand, binary exponent
    // (C99 "%a" style, e.g. -0x1.8p+1). Zero is "0x0p+0".
    std::string to_hex() const;
    static BigFloat from_hex(const std::string &s, mpfr_prec_t prec);

    // Decimal rendering with `digits` significant digits.
    std::string to_decimal(int digits = 25) const;

    // Exact conversion of a finite value to a rational.
    mpq_class to_mpq() const;

private:
    mpfr_t value_;
};

inline bool operator<(const BigFloat &a, const BigFloat &b)
{
    return mpfr_less_p(a.get(), b.get()) != 0;
}
inline bool operator<=(const BigFloat &a, const BigFloat &b)
{
    return mpfr_lessequal_p(a.get(), b.get()) != 0;
}
inline bool operator>(const BigFloat &a, const BigFloat &b)
{
    return b < a;
}
inline bool operator>=(const BigFloat &a, const BigFloat &b)
{
    return b <= a;
}
inline bool operator==(const BigFloat &a, const BigFloat &b)
{
    return mpfr_equal_p(a.get(), b.get()) != 0;
}

} // namespace zstar

#endif
