#include <zstar/bigfloat.hpp>
#include <zstar/error.hpp>

#include <cstdlib>
#include <memory>

namespace zstar
{

BigFloat::BigFloat(mpfr_prec_t prec)
{
    mpfr_init2(value_, prec);
    mpfr_set_zero(value_, 1);
}

BigFloat::BigFloat(mpfr_prec_t prec, long value)
{
    mpfr_init2(value_, prec);
    mpfr_set_si(value_, value, MPFR_RNDN);
}

BigFloat::BigFloat(const BigFloat &other)
{
    mpfr_init2(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat &&other) noexcept
{
    // Steal the limbs and leave `other` as a valid 2-bit zero.
    *value_ = *other.value_;
    mpfr_init2(other.value_, MPFR_PREC_MIN);
    mpfr_set_zero(other.value_, 1);
}

BigFloat &BigFloat::operator=(const BigFloat &other)
{
    if (this != &other) {
        mpfr_set_prec(value_, other.precision());
        mpfr_set(value_, other.value_, MPFR_RNDN);
    }
    return *this;
}

BigFloat &BigFloat::operator=(BigFloat &&other) noexcept
{
    if (this != &other) {
        mpfr_swap(value_, other.value_);
    }
    return *this;
}

BigFloat::~BigFloat()
{
    mpfr_clear(value_);
}

void BigFloat::set_precision(mpfr_prec_t prec, mpfr_rnd_t rnd)
{
    mpfr_prec_round(value_, prec, rnd);
}

double BigFloat::to_double(mpfr_rnd_t rnd) const
{
    return mpfr_get_d(value_, rnd);
}

BigFloat BigFloat::from_mpq(const mpq_class &q, mpfr_prec_t prec, mpfr_rnd_t rnd)
{
    BigFloat r(prec);
    mpfr_set_q(r.value_, q.get_mpq_t(), rnd);
    return r;
}

BigFloat BigFloat::from_double(double d, mpfr_prec_t prec)
{
    BigFloat r(prec);
    mpfr_set_d(r.value_, d, MPFR_RNDN);
    return r;
}

std::string BigFloat::to_hex() const
{
    if (mpfr_zero_p(value_)) {
        return mpfr_signbit(value_) ? "-0x0p+0" : "0x0p+0";
    }
    if (mpfr_inf_p(value_)) {
        return mpfr_sgn(value_) > 0 ? "inf" : "-inf";
    }
    char *buf = nullptr;
    if (mpfr_asprintf(&buf, "%Ra", value_) < 0) {
        raise(ErrorKind::CorruptCache, "hex formatting failed");
    }
    std::unique_ptr<char, decltype(&mpfr_free_str)> owned(buf, &mpfr_free_str);
    return std::string(buf);
}

BigFloat BigFloat::from_hex(const std::string &s, mpfr_prec_t prec)
{
    BigFloat r(prec);
    if (s == "inf") {
        mpfr_set_inf(r.value_, 1);
        return r;
    }
    if (s == "-inf") {
        mpfr_set_inf(r.value_, -1);
        return r;
    }
    char *end = nullptr;
    // An inexact parse means the significand did not fit `prec`, i.e. the
    // string does not describe a value at this precision.
    const int inexact = mpfr_strtofr(r.value_, s.c_str(), &end, 0, MPFR_RNDN);
    if (end == s.c_str() || *end != '\0' || inexact != 0 || s.find("0x") == std::string::npos) {
        raise(ErrorKind::CorruptCache, "malformed hex float '" + s + "'");
    }
    return r;
}

std::string BigFloat::to_decimal(int digits) const
{
    if (mpfr_inf_p(value_)) {
        return mpfr_sgn(value_) > 0 ? "inf" : "-inf";
    }
    char *buf = nullptr;
    if (mpfr_asprintf(&buf, "%.*Rg", digits, value_) < 0) {
        return "nan";
    }
    std::unique_ptr<char, decltype(&mpfr_free_str)> owned(buf, &mpfr_free_str);
    return std::string(buf);
}

mpq_class BigFloat::to_mpq() const
{
    mpz_class m;
    const mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), value_);
    mpq_class q(m);
    if (e >= 0) {
        mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
    } else {
        mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
    }
    return q;
}

} // namespace zstar
