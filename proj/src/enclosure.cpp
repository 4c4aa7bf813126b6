#include <zstar/enclosure.hpp>
#include <zstar/error.hpp>

#include <algorithm>
#include <ostream>
#include <utility>

namespace zstar
{

namespace
{

mpfr_prec_t joint_prec(const Enclosure &a, const Enclosure &b)
{
    return std::max(a.precision(), b.precision());
}

struct Bounds {
    BigFloat lo;
    BigFloat hi;
};

Bounds bounds_of(const Enclosure &e)
{
    return {e.lower(), e.upper()};
}

void min_into(BigFloat &acc, const BigFloat &v)
{
    if (v < acc) {
        acc = v;
    }
}

void max_into(BigFloat &acc, const BigFloat &v)
{
    if (v > acc) {
        acc = v;
    }
}

Bounds mul_bounds(const Bounds &a, const Bounds &b, mpfr_prec_t prec)
{
    const BigFloat *xs[2] = {&a.lo, &a.hi};
    const BigFloat *ys[2] = {&b.lo, &b.hi};
    Bounds r{BigFloat(prec), BigFloat(prec)};
    bool first = true;
    BigFloat lo(prec), hi(prec);
    for (auto x : xs) {
        for (auto y : ys) {
            mpfr_mul(lo.get(), x->get(), y->get(), MPFR_RNDD);
            mpfr_mul(hi.get(), x->get(), y->get(), MPFR_RNDU);
            if (first) {
                r.lo = lo;
                r.hi = hi;
                first = false;
            } else {
                min_into(r.lo, lo);
                max_into(r.hi, hi);
            }
        }
    }
    return r;
}

} // namespace

Enclosure::Enclosure(mpfr_prec_t prec) : mid_(prec), rad_(prec) {}

Enclosure Enclosure::from_bounds(const BigFloat &lo, const BigFloat &hi, mpfr_prec_t prec)
{
    if (hi < lo) {
        raise(ErrorKind::PrecisionInsufficient, "enclosure bounds out of order");
    }
    if (hi.is_inf()) {
        Enclosure e = positive_infinity(prec);
        e.mid_ = lo;
        e.mid_.set_precision(prec, MPFR_RNDD);
        return e;
    }
    Enclosure e(prec);
    mpfr_add(e.mid_.get(), lo.get(), hi.get(), MPFR_RNDN);
    mpfr_div_2ui(e.mid_.get(), e.mid_.get(), 1, MPFR_RNDN);
    BigFloat d1(prec), d2(prec);
    mpfr_sub(d1.get(), hi.get(), e.mid_.get(), MPFR_RNDU);
    mpfr_sub(d2.get(), e.mid_.get(), lo.get(), MPFR_RNDU);
    e.rad_ = d1 > d2 ? d1 : d2;
    if (e.rad_.sign() < 0) {
        mpfr_set_zero(e.rad_.get(), 1);
    }
    return e;
}

Enclosure Enclosure::from_mid_rad(BigFloat mid, BigFloat rad)
{
    Enclosure e(mid.precision());
    e.mid_ = std::move(mid);
    e.rad_ = std::move(rad);
    return e;
}

Enclosure Enclosure::exact(const mpq_class &q, mpfr_prec_t prec)
{
    const BigFloat lo = BigFloat::from_mpq(q, prec, MPFR_RNDD);
    const BigFloat hi = BigFloat::from_mpq(q, prec, MPFR_RNDU);
    return from_bounds(lo, hi, prec);
}

Enclosure Enclosure::exact(long v, mpfr_prec_t prec)
{
    return exact(mpq_class(v), prec);
}

Enclosure Enclosure::positive_infinity(mpfr_prec_t prec)
{
    Enclosure e(prec);
    e.upper_infinite_ = true;
    return e;
}

BigFloat Enclosure::lower() const
{
    BigFloat r(precision());
    if (upper_infinite_) {
        // For an infinite value the midpoint stores a finite lower bound.
        r = mid_;
        return r;
    }
    mpfr_sub(r.get(), mid_.get(), rad_.get(), MPFR_RNDD);
    return r;
}

BigFloat Enclosure::upper() const
{
    BigFloat r(precision());
    if (upper_infinite_) {
        mpfr_set_inf(r.get(), 1);
        return r;
    }
    mpfr_add(r.get(), mid_.get(), rad_.get(), MPFR_RNDU);
    return r;
}

bool Enclosure::contains(const mpq_class &q) const
{
    const mpq_class lo = lower().to_mpq();
    if (q < lo) {
        return false;
    }
    return upper_infinite_ || q <= upper().to_mpq();
}

bool Enclosure::contains(const Enclosure &other) const
{
    if (other.upper_infinite_ && !upper_infinite_) {
        return false;
    }
    if (other.lower() < lower()) {
        return false;
    }
    return upper_infinite_ || other.upper() <= upper();
}

Enclosure Enclosure::operator-() const
{
    if (upper_infinite_) {
        raise(ErrorKind::OutOfDomain, "negation of an infinite enclosure");
    }
    Enclosure e = *this;
    mpfr_neg(e.mid_.get(), e.mid_.get(), MPFR_RNDN);
    return e;
}

Enclosure operator+(const Enclosure &a, const Enclosure &b)
{
    const mpfr_prec_t prec = joint_prec(a, b);
    BigFloat lo(prec), hi(prec);
    mpfr_add(lo.get(), a.lower().get(), b.lower().get(), MPFR_RNDD);
    if (a.upper_infinite() || b.upper_infinite()) {
        mpfr_set_inf(hi.get(), 1);
    } else {
        mpfr_add(hi.get(), a.upper().get(), b.upper().get(), MPFR_RNDU);
    }
    return Enclosure::from_bounds(lo, hi, prec);
}

Enclosure operator-(const Enclosure &a, const Enclosure &b)
{
    if (b.upper_infinite()) {
        raise(ErrorKind::OutOfDomain, "subtracting an infinite enclosure");
    }
    const mpfr_prec_t prec = joint_prec(a, b);
    BigFloat lo(prec), hi(prec);
    mpfr_sub(lo.get(), a.lower().get(), b.upper().get(), MPFR_RNDD);
    if (a.upper_infinite()) {
        mpfr_set_inf(hi.get(), 1);
    } else {
        mpfr_sub(hi.get(), a.upper().get(), b.lower().get(), MPFR_RNDU);
    }
    return Enclosure::from_bounds(lo, hi, prec);
}

Enclosure operator*(const Enclosure &a, const Enclosure &b)
{
    const mpfr_prec_t prec = joint_prec(a, b);
    if (a.upper_infinite() || b.upper_infinite()) {
        if (a.lower().sign() <= 0 || b.lower().sign() <= 0) {
            raise(ErrorKind::OutOfDomain, "product with an infinite factor needs positive operands");
        }
        BigFloat lo(prec);
        mpfr_mul(lo.get(), a.lower().get(), b.lower().get(), MPFR_RNDD);
        BigFloat hi(prec);
        mpfr_set_inf(hi.get(), 1);
        return Enclosure::from_bounds(lo, hi, prec);
    }
    const Bounds r = mul_bounds(bounds_of(a), bounds_of(b), prec);
    return Enclosure::from_bounds(r.lo, r.hi, prec);
}

Enclosure operator/(const Enclosure &a, const Enclosure &b)
{
    const mpfr_prec_t prec = joint_prec(a, b);
    if (b.upper_infinite()) {
        raise(ErrorKind::OutOfDomain, "division by an infinite enclosure");
    }
    Bounds bb = bounds_of(b);
    if (bb.lo.sign() <= 0 && bb.hi.sign() >= 0) {
        raise(ErrorKind::PrecisionInsufficient, "divisor enclosure contains zero");
    }
    Bounds inv{BigFloat(prec), BigFloat(prec)};
    mpfr_ui_div(inv.lo.get(), 1, bb.hi.get(), MPFR_RNDD);
    mpfr_ui_div(inv.hi.get(), 1, bb.lo.get(), MPFR_RNDU);
    if (a.upper_infinite()) {
        raise(ErrorKind::OutOfDomain, "division of an infinite enclosure");
    }
    const Bounds r = mul_bounds(bounds_of(a), inv, prec);
    return Enclosure::from_bounds(r.lo, r.hi, prec);
}

Enclosure log(const Enclosure &a)
{
    const mpfr_prec_t prec = a.precision();
    const BigFloat alo = a.lower();
    if (alo.sign() <= 0) {
        raise(ErrorKind::OutOfDomain, "log of an enclosure reaching zero");
    }
    BigFloat lo(prec), hi(prec);
    mpfr_log(lo.get(), alo.get(), MPFR_RNDD);
    if (a.upper_infinite()) {
        mpfr_set_inf(hi.get(), 1);
    } else {
        mpfr_log(hi.get(), a.upper().get(), MPFR_RNDU);
    }
    return Enclosure::from_bounds(lo, hi, prec);
}

Enclosure exp(const Enclosure &a)
{
    const mpfr_prec_t prec = a.precision();
    BigFloat lo(prec), hi(prec);
    mpfr_exp(lo.get(), a.lower().get(), MPFR_RNDD);
    if (a.upper_infinite()) {
        mpfr_set_inf(hi.get(), 1);
    } else {
        mpfr_exp(hi.get(), a.upper().get(), MPFR_RNDU);
    }
    return Enclosure::from_bounds(lo, hi, prec);
}

Enclosure abs(const Enclosure &a)
{
    if (a.lower().sign() >= 0) {
        return a;
    }
    if (a.upper().sign() <= 0) {
        return -a;
    }
    const mpfr_prec_t prec = a.precision();
    BigFloat hi(prec);
    BigFloat neg_lo = a.lower();
    mpfr_neg(neg_lo.get(), neg_lo.get(), MPFR_RNDU);
    hi = a.upper() > neg_lo ? a.upper() : neg_lo;
    return Enclosure::from_bounds(BigFloat(prec), hi, prec);
}

bool certainly_less(const Enclosure &a, const Enclosure &b)
{
    if (a.upper_infinite()) {
        return false;
    }
    return a.upper() < b.lower();
}

bool certainly_greater(const Enclosure &a, const Enclosure &b)
{
    return certainly_less(b, a);
}

bool overlaps(const Enclosure &a, const Enclosure &b)
{
    return !certainly_less(a, b) && !certainly_less(b, a);
}

BigFloat separation(const Enclosure &a, const Enclosure &b)
{
    const mpfr_prec_t prec = joint_prec(a, b);
    BigFloat r(prec);
    if (a.upper_infinite()) {
        mpfr_set_inf(r.get(), -1);
        return r;
    }
    mpfr_sub(r.get(), b.lower().get(), a.upper().get(), MPFR_RNDD);
    return r;
}

std::ostream &operator<<(std::ostream &os, const Enclosure &e)
{
    if (e.upper_infinite()) {
        return os << "[" << e.mid().to_decimal(20) << ", +inf)";
    }
    return os << e.mid().to_decimal(30) << " +/- " << e.rad().to_decimal(3);
}

} // namespace zstar
