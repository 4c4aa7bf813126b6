#ifndef ZSTAR_ENCLOSURE_HPP
#define ZSTAR_ENCLOSURE_HPP

#include <zstar/bigfloat.hpp>

#include <gmpxx.h>

#include <iosfwd>
#include <string>

namespace zstar
{

// Midpoint-radius ball: the represented real v satisfies
// mid - rad <= v <= mid + rad, or v = +inf when upper_infinite() is set.
// Every operation rounds outward, so soundness survives any chain of calls.
class Enclosure
{
public:
    explicit Enclosure(mpfr_prec_t prec = 128);

    // Smallest ball (at `prec`) containing [lo, hi].
    static Enclosure from_bounds(const BigFloat &lo, const BigFloat &hi, mpfr_prec_t prec);
    static Enclosure from_mid_rad(BigFloat mid, BigFloat rad);
    static Enclosure exact(const mpq_class &q, mpfr_prec_t prec);
    static Enclosure exact(long v, mpfr_prec_t prec);
    static Enclosure positive_infinity(mpfr_prec_t prec);

    const BigFloat &mid() const noexcept
    {
        return mid_;
    }
    const BigFloat &rad() const noexcept
    {
        return rad_;
    }
    bool upper_infinite() const noexcept
    {
        return upper_infinite_;
    }
    mpfr_prec_t precision() const noexcept
    {
        return mid_.precision();
    }

    // Certified endpoints, rounded outward.
    BigFloat lower() const;
    BigFloat upper() const;

    double mid_double() const
    {
        return upper_infinite_ ? mpfr_get_d(upper().get(), MPFR_RNDN) : mid_.to_double();
    }
    double rad_double() const
    {
        return rad_.to_double(MPFR_RNDU);
    }

    bool contains(const mpq_class &q) const;
    bool contains(const Enclosure &other) const;

    Enclosure operator-() const;

private:
    BigFloat mid_;
    BigFloat rad_;
    bool upper_infinite_ = false;
};

Enclosure operator+(const Enclosure &a, const Enclosure &b);
Enclosure operator-(const Enclosure &a, const Enclosure &b);
Enclosure operator*(const Enclosure &a, const Enclosure &b);
Enclosure operator/(const Enclosure &a, const Enclosure &b);

Enclosure log(const Enclosure &a);
Enclosure exp(const Enclosure &a);
Enclosure abs(const Enclosure &a);

// a < b holds for every pair of represented values.
bool certainly_less(const Enclosure &a, const Enclosure &b);
bool certainly_greater(const Enclosure &a, const Enclosure &b);
bool overlaps(const Enclosure &a, const Enclosure &b);

// Lower bound of (b - a); negative when the balls may overlap.
BigFloat separation(const Enclosure &a, const Enclosure &b);

std::ostream &operator<<(std::ostream &os, const Enclosure &e);

} // namespace zstar

#endif
