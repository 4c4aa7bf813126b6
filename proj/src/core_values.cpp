#include <zstar/core_values.hpp>
#include <zstar/error.hpp>
#include <zstar/partial_sums.hpp>
#include <zstar/tail_sums.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace zstar
{

namespace
{

constexpr unsigned long kMinTruncation = 16;

using detail::Weight;

// Number of extra {q} levels so that rho^{L+1} is far below 2^{-prec}.
std::size_t factor_levels(int q, unsigned long n_max, mpfr_prec_t prec)
{
    const double per_level = (q - 1) * std::log(static_cast<double>(n_max));
    return static_cast<std::size_t>(std::ceil((static_cast<double>(prec) + 16.0) * std::log(2.0) / per_level)) + 1;
}

Enclosure evaluate(const Composition &c, Weight weight, int q, const EvalOptions &opts)
{
    const mpfr_prec_t prec = opts.precision;
    const mpfr_prec_t wp = prec + 32;
    // Large exponents need a cutoff well above k for the tail expansion to be sharp.
    const int max_part = *std::max_element(c.parts().begin(), c.parts().end());
    const unsigned long n_max = std::max({opts.truncation, kMinTruncation, 4UL * static_cast<unsigned long>(max_part)});
    const std::size_t r = c.size();
    const std::span<const int> parts(c.parts());

    std::vector<int> exponents(parts.begin(), parts.end());
    std::size_t levels = 0;
    if (weight == Weight::Linear) {
        exponents.back() -= 1;
    } else if (weight == Weight::Factor) {
        levels = factor_levels(q, n_max, prec);
        exponents.insert(exponents.end(), levels, q);
    }
    const detail::TailSums tails = detail::nested_tail_sums(exponents, n_max, wp);

    BigFloat bound[2] = {BigFloat(wp), BigFloat(wp)};
    const mpfr_rnd_t dirs[2] = {MPFR_RNDD, MPFR_RNDU};
    const detail::PartialSums partial[2] = {detail::partial_sums(parts, weight, q, n_max, wp, MPFR_RNDD),
                                            detail::partial_sums(parts, weight, q, n_max, wp, MPFR_RNDU)};
    for (int side = 0; side < 2; ++side) {
        const mpfr_rnd_t rnd = dirs[side];
        const std::vector<BigFloat> &z = side == 0 ? tails.lo : tails.hi;
        const detail::PartialSums &part = partial[side];
        BigFloat &v = bound[side];
        BigFloat t(wp);
        mpfr_set(v.get(), part.sums[0].get(), rnd);
        for (std::size_t j = 1; j < r; ++j) {
            mpfr_mul(t.get(), part.sums[j].get(), z[j - 1].get(), rnd);
            mpfr_add(v.get(), v.get(), t.get(), rnd);
        }
        if (weight == Weight::Factor) {
            BigFloat s(wp);
            for (std::size_t l = 0; l <= levels; ++l) {
                mpfr_add(s.get(), s.get(), z[r - 1 + l].get(), rnd);
            }
            if (side == 1) {
                // Terms beyond the last level: each is at most Z_k * rho^l with
                // rho = N^{1-q}/(q-1) bounding sum_{n>N} n^{-q}.
                BigFloat rho(wp), geo(wp);
                mpfr_set_ui(rho.get(), n_max, MPFR_RNDD);
                mpfr_pow_si(rho.get(), rho.get(), 1 - q, MPFR_RNDU);
                mpfr_div_ui(rho.get(), rho.get(), static_cast<unsigned long>(q - 1), MPFR_RNDU);
                mpfr_pow_ui(geo.get(), rho.get(), levels + 1, MPFR_RNDU);
                mpfr_ui_sub(t.get(), 1, rho.get(), MPFR_RNDD);
                mpfr_div(geo.get(), geo.get(), t.get(), MPFR_RNDU);
                mpfr_mul(geo.get(), geo.get(), z[r - 1].get(), MPFR_RNDU);
                mpfr_add(s.get(), s.get(), geo.get(), MPFR_RNDU);
            }
            mpfr_mul(t.get(), part.factor.get(), s.get(), rnd);
        } else {
            mpfr_set(t.get(), z[r - 1].get(), rnd);
        }
        mpfr_add(v.get(), v.get(), t.get(), rnd);
    }
    return Enclosure::from_bounds(bound[0], bound[1], prec);
}

} // namespace

Composition make_composition(std::vector<int> parts)
{
    if (parts.empty()) {
        raise(ErrorKind::InvalidIndex, "an index needs at least one entry");
    }
    if (parts[0] < 2) {
        raise(ErrorKind::InvalidIndex, "the first entry must be at least 2");
    }
    for (const int k : parts) {
        if (k < 1) {
            raise(ErrorKind::InvalidIndex, "entries must be positive");
        }
    }
    Composition c;
    c.parts_ = std::move(parts);
    return c;
}

Composition make_composition(std::initializer_list<int> parts)
{
    return make_composition(std::vector<int>(parts));
}

Composition Composition::extended(int k) const
{
    std::vector<int> p = parts_;
    p.push_back(k);
    return make_composition(std::move(p));
}

Composition Composition::extended(std::span<const int> ks) const
{
    std::vector<int> p = parts_;
    p.insert(p.end(), ks.begin(), ks.end());
    return make_composition(std::move(p));
}

std::string Composition::to_string() const
{
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        os << (i ? "," : "") << parts_[i];
    }
    os << ')';
    return os.str();
}

std::string TailedIndex::to_string() const
{
    std::string s = prefix.to_string();
    if (const auto *ct = std::get_if<ConstTail>(&tail)) {
        s.insert(s.size() - 1, ",{" + std::to_string(ct->q) + "}^inf");
    }
    return s;
}

TailedIndex with_const_tail(Composition prefix, int q)
{
    if (q < 1) {
        raise(ErrorKind::InvalidIndex, "tail constant must be positive");
    }
    return TailedIndex{std::move(prefix), ConstTail{q}};
}

IndexOrder digits_compare(std::span<const int> a, std::span<const int> b)
{
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] != b[i]) {
            return a[i] < b[i] ? IndexOrder::Greater : IndexOrder::Less;
        }
    }
    if (a.size() == b.size()) {
        return IndexOrder::Equal;
    }
    return a.size() > b.size() ? IndexOrder::Greater : IndexOrder::Less;
}

IndexOrder index_compare(const Composition &a, const Composition &b)
{
    return digits_compare(a.parts(), b.parts());
}

mpq_class tail_factor(unsigned long m, int q)
{
    if (m == 0 || q < 1) {
        raise(ErrorKind::InvalidIndex, "tail_factor needs m >= 1 and q >= 1");
    }
    if (q == 1) {
        return mpq_class(m);
    }
    // prod n^q / (n^q - 1), reduced once at the end.
    mpz_class num = 1, den = 1, p;
    for (unsigned long n = 2; n <= m; ++n) {
        mpz_ui_pow_ui(p.get_mpz_t(), n, static_cast<unsigned long>(q));
        num *= p;
        den *= p - 1;
    }
    mpq_class r(num, den);
    r.canonicalize();
    return r;
}

Enclosure tail_factor_limit(int q, mpfr_prec_t precision)
{
    if (q < 2) {
        raise(ErrorKind::DivergentValue, "the tail factor diverges for q = 1");
    }
    constexpr unsigned long n0 = 64;
    const mpfr_prec_t wp = precision + 32;

    // log(F_inf / F_{n0}) = sum_{t >= 1} zeta(q t, n0 + 1) / t.
    const double digits = (static_cast<double>(precision) + 20.0) * std::log(2.0) / std::log(static_cast<double>(n0));
    const long terms = static_cast<long>(std::ceil((digits + 1.0) / q));
    BigFloat log_lo(wp), log_hi(wp), t(wp);
    for (long i = 1; i <= terms; ++i) {
        const int e[1] = {static_cast<int>(q * i)};
        const detail::TailSums h = detail::nested_tail_sums(e, n0, wp);
        mpfr_div_ui(t.get(), h.lo[0].get(), static_cast<unsigned long>(i), MPFR_RNDD);
        mpfr_add(log_lo.get(), log_lo.get(), t.get(), MPFR_RNDD);
        mpfr_div_ui(t.get(), h.hi[0].get(), static_cast<unsigned long>(i), MPFR_RNDU);
        mpfr_add(log_hi.get(), log_hi.get(), t.get(), MPFR_RNDU);
    }
    // Omitted t > terms: at most 2 n0^{1 - q (terms + 1)}.
    mpfr_set_ui(t.get(), n0, MPFR_RNDD);
    mpfr_pow_si(t.get(), t.get(), 1 - q * (terms + 1), MPFR_RNDU);
    mpfr_mul_ui(t.get(), t.get(), 2, MPFR_RNDU);
    mpfr_add(log_hi.get(), log_hi.get(), t.get(), MPFR_RNDU);

    BigFloat lo(wp), hi(wp);
    mpfr_exp(lo.get(), log_lo.get(), MPFR_RNDD);
    mpfr_exp(hi.get(), log_hi.get(), MPFR_RNDU);
    const mpq_class head = tail_factor(n0, q);
    BigFloat head_lo = BigFloat::from_mpq(head, wp, MPFR_RNDD);
    BigFloat head_hi = BigFloat::from_mpq(head, wp, MPFR_RNDU);
    mpfr_mul(lo.get(), lo.get(), head_lo.get(), MPFR_RNDD);
    mpfr_mul(hi.get(), hi.get(), head_hi.get(), MPFR_RNDU);
    return Enclosure::from_bounds(lo, hi, precision);
}

Enclosure eval_finite(const Composition &c, const EvalOptions &opts)
{
    return evaluate(c, Weight::One, 0, opts);
}

bool is_divergent(const Composition &prefix, int q)
{
    if (q != 1 || prefix[0] != 2) {
        return false;
    }
    return std::all_of(prefix.parts().begin() + 1, prefix.parts().end(), [](int k) { return k == 1; });
}

Enclosure eval_with_const_tail(const Composition &prefix, int q, const EvalOptions &opts)
{
    if (q < 1) {
        raise(ErrorKind::InvalidIndex, "tail constant must be positive");
    }
    if (is_divergent(prefix, q)) {
        raise(ErrorKind::DivergentValue, "zeta-star" + with_const_tail(prefix, q).to_string() + " diverges");
    }
    if (q == 1) {
        return evaluate(prefix, Weight::Linear, 1, opts);
    }
    return evaluate(prefix, Weight::Factor, q, opts);
}

Enclosure eval(const TailedIndex &t, const EvalOptions &opts)
{
    if (const auto *ct = std::get_if<ConstTail>(&t.tail)) {
        if (is_divergent(t.prefix, ct->q)) {
            BigFloat lo(opts.precision, 1);
            BigFloat hi(opts.precision);
            mpfr_set_inf(hi.get(), 1);
            return Enclosure::from_bounds(lo, hi, opts.precision);
        }
        return eval_with_const_tail(t.prefix, ct->q, opts);
    }
    return eval_finite(t.prefix, opts);
}

TailedIndex canonical_form(const TailedIndex &t)
{
    std::vector<int> parts = t.prefix.parts();
    int q = 1;
    if (const auto *ct = std::get_if<ConstTail>(&t.tail)) {
        q = ct->q;
        while (parts.size() > 1 && parts.back() == q) {
            parts.pop_back();
        }
    } else {
        parts.back() += 1;
    }
    Composition prefix = make_composition(std::move(parts));
    if (is_divergent(prefix, q)) {
        raise(ErrorKind::NotInDomain, with_const_tail(prefix, q).to_string() + " is not a convergent sequence");
    }
    return with_const_tail(std::move(prefix), q);
}

} // namespace zstar
