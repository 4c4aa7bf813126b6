#include <doctest.h>

#include <zstar/core_values.hpp>
#include <zstar/error.hpp>
#include <zstar/partial_sums.hpp>
#include <zstar/tail_sums.hpp>

#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace zstar;

namespace
{

EvalOptions fast()
{
    EvalOptions o;
    o.truncation = 256;
    return o;
}

bool throws_kind(ErrorKind kind, auto &&fn)
{
    try {
        fn();
    } catch (const Error &e) {
        return e.kind() == kind;
    }
    return false;
}

std::vector<int> random_digits(std::mt19937 &rng, int max_digit, int max_len, bool admissible)
{
    std::uniform_int_distribution<int> len(1, max_len);
    std::uniform_int_distribution<int> digit(1, max_digit);
    std::vector<int> d(static_cast<std::size_t>(len(rng)));
    for (int &k : d) {
        k = digit(rng);
    }
    if (admissible && d[0] < 2) {
        d[0] = 2;
    }
    return d;
}

} // namespace

TEST_CASE("make_composition validates the first entry")
{
    CHECK(make_composition({2}).size() == 1);
    CHECK(make_composition({3, 1, 2}).parts() == std::vector<int>{3, 1, 2});
    CHECK(throws_kind(ErrorKind::InvalidIndex, [] { make_composition({1, 2}); }));
    CHECK(throws_kind(ErrorKind::InvalidIndex, [] { make_composition(std::vector<int>{}); }));
    CHECK(throws_kind(ErrorKind::InvalidIndex, [] { make_composition({2, 0}); }));
}

TEST_CASE("index_compare follows both order rules")
{
    CHECK(index_compare(make_composition({2, 1}), make_composition({2})) == IndexOrder::Greater);
    CHECK(index_compare(make_composition({2, 1}), make_composition({3})) == IndexOrder::Greater);
    CHECK(index_compare(make_composition({2, 1, 5}), make_composition({2, 2})) == IndexOrder::Greater);
    CHECK(index_compare(make_composition({2, 2}), make_composition({2, 1, 5})) == IndexOrder::Less);
    CHECK(index_compare(make_composition({4, 1}), make_composition({4, 1})) == IndexOrder::Equal);
}

TEST_CASE("tail_factor exact values")
{
    CHECK(tail_factor(1, 5) == 1);
    CHECK(tail_factor(3, 2) == mpq_class(3, 2));
    CHECK(tail_factor(4, 3) == mpq_class(768, 637));
    CHECK(tail_factor(4, 3) == oracle::tail_factor_direct(4, 3));
    for (unsigned long m = 1; m <= 40; ++m) {
        CHECK(tail_factor(m, 1) == mpq_class(m));
        mpq_class closed(2 * m, m + 1);
        closed.canonicalize();
        CHECK(tail_factor(m, 2) == closed);
        CHECK(tail_factor(m, 4) == oracle::tail_factor_direct(m, 4));
    }
}

TEST_CASE("tail_factor_limit")
{
    CHECK(tail_factor_limit(2, 128).contains(mpq_class(2)));
    CHECK(tail_factor_limit(2, 128).rad_double() < 1e-30);
    const double p3 = oracle::euler_product(3);
    CHECK(std::abs(tail_factor_limit(3, 128).mid_double() - p3) < 1e-9);
    const Enclosure p10 = tail_factor_limit(10, 128);
    CHECK(std::abs(p10.mid_double() - (1.0 + std::ldexp(1.0, -10))) < 1e-3);
    CHECK(std::abs(p10.mid_double() - oracle::euler_product(10)) < 1e-12);
    CHECK(throws_kind(ErrorKind::DivergentValue, [] { tail_factor_limit(1, 128); }));
}

TEST_CASE("tail_factor_limit agrees with the series route")
{
    // F_inf(q) = zeta-star({q}^inf) = eval_with_const_tail((q), q).
    for (int q = 2; q <= 6; ++q) {
        const Enclosure a = tail_factor_limit(q, 128);
        const Enclosure b = eval_with_const_tail(make_composition({q}), q, fast());
        CHECK(overlaps(a, b));
        CHECK(b.rad_double() < 1e-30);
    }
}

TEST_CASE("nested tail sums match Hurwitz zeta values")
{
    for (int s = 2; s <= 8; ++s) {
        const int e[1] = {s};
        const auto t = detail::nested_tail_sums(e, 30, 128);
        const Enclosure z = Enclosure::from_bounds(t.lo[0], t.hi[0], 128);
        const Enclosure ref = oracle::hurwitz_tail(s, 31, 200);
        CHECK(overlaps(z, ref));
        CHECK(z.rad_double() < 1e-35);
    }
}

TEST_CASE("nested tail sums match a direct double sum")
{
    // sum_{n1 >= n2 > 20} n1^{-3} n2^{-1}, brute force with an explicit tail bound
    const int e[2] = {3, 1};
    const auto t = detail::nested_tail_sums(e, 20, 128);
    const double direct = oracle::nested_tail_direct({3, 1}, 20, 200000);
    CHECK(std::abs(t.lo[1].to_double() - direct) < 1e-9);
    CHECK(std::abs(t.hi[1].to_double() - direct) < 1e-9);
}

TEST_CASE("fixed-point and MPFR partial sums agree")
{
    const std::vector<int> parts{3, 1, 2, 1};
    for (auto w : {detail::Weight::One, detail::Weight::Linear, detail::Weight::Factor}) {
        for (auto rnd : {MPFR_RNDD, MPFR_RNDU}) {
            const auto a = detail::partial_sums(parts, w, 3, 500, 160, rnd);
            const auto b = detail::partial_sums_mpfr(parts, w, 3, 500, 160, rnd);
            for (std::size_t j = 0; j < parts.size(); ++j) {
                BigFloat d(200);
                mpfr_sub(d.get(), a.sums[j].get(), b.sums[j].get(), MPFR_RNDN);
                CHECK(std::abs(d.to_double()) < 1e-40);
            }
        }
    }
}

TEST_CASE("eval_finite closed forms")
{
    CHECK(std::abs(eval_finite(make_composition({2}), fast()).mid_double() - 1.6449340668) < 1e-10);
    CHECK(std::abs(eval_finite(make_composition({2, 1}), fast()).mid_double() - 2.4041138064) < 1e-10);
    CHECK(std::abs(eval_finite(make_composition({2, 1, 1}), fast()).mid_double() - 3.2469697010) < 5e-10);
    for (int r = 0; r <= 6; ++r) {
        std::vector<int> d(static_cast<std::size_t>(r + 1), 1);
        d[0] = 2;
        const Enclosure v = eval_finite(make_composition(d), fast());
        const Enclosure ref = oracle::zeta_int(r + 2, 200) * Enclosure::exact(r + 1, 200);
        CHECK(overlaps(v, ref));
        CHECK(v.rad_double() < 1e-30);
    }
}

TEST_CASE("eval_finite against brute-force sums")
{
    const double v31 = eval_finite(make_composition({3, 1}), fast()).mid_double();
    CHECK(std::abs(v31 - oracle::mzsv_direct({3, 1}, 20000)) < 1e-7);
    const double v322 = eval_finite(make_composition({3, 2, 2}), fast()).mid_double();
    CHECK(std::abs(v322 - oracle::mzsv_direct({3, 2, 2}, 20000)) < 1e-7);
}

TEST_CASE("eval_with_const_tail closed forms")
{
    const Enclosure two = eval_with_const_tail(make_composition({2}), 2, fast());
    CHECK(two.contains(mpq_class(2)));

    const Enclosure z2 = oracle::zeta_int(2, 200);
    const Enclosure u = eval_with_const_tail(make_composition({3}), 2, fast());
    CHECK(overlaps(u, Enclosure::exact(2, 200) * z2 - Enclosure::exact(2, 200)));
    CHECK(std::abs(u.mid_double() - 1.2898681337) < 1e-10);

    for (int k = 3; k <= 6; ++k) {
        const Enclosure v = eval_with_const_tail(make_composition({k}), 1, fast());
        CHECK(overlaps(v, oracle::zeta_int(k - 1, 200)));
    }
    CHECK(throws_kind(ErrorKind::DivergentValue, [] { eval_with_const_tail(make_composition({2}), 1); }));
    CHECK(throws_kind(ErrorKind::DivergentValue, [] { eval_with_const_tail(make_composition({2, 1, 1}), 1); }));
    CHECK(eval(with_const_tail(make_composition({2, 1}), 1), fast()).upper_infinite());
}

TEST_CASE("const tail against brute force")
{
    // weight F_{n_r}(3) summed directly
    const double v = eval_with_const_tail(make_composition({3, 1}), 3, fast()).mid_double();
    CHECK(std::abs(v - oracle::mzsv_tail_direct({3, 1}, 3, 20000)) < 1e-7);
}

TEST_CASE("is_divergent is structural")
{
    CHECK(is_divergent(make_composition({2}), 1));
    CHECK(is_divergent(make_composition({2, 1, 1, 1}), 1));
    CHECK_FALSE(is_divergent(make_composition({2, 1, 2}), 1));
    CHECK_FALSE(is_divergent(make_composition({3}), 1));
    CHECK_FALSE(is_divergent(make_composition({2}), 2));
}

TEST_CASE("canonical_form")
{
    const TailedIndex a = canonical_form(with_const_tail(make_composition({3}), 1));
    CHECK(a == with_const_tail(make_composition({3}), 1));
    CHECK(overlaps(eval(a, fast()), oracle::zeta_int(2, 200)));

    CHECK(throws_kind(ErrorKind::NotInDomain, [] { canonical_form(with_const_tail(make_composition({2}), 1)); }));
    CHECK(throws_kind(ErrorKind::NotInDomain,
                      [] { canonical_form(with_const_tail(make_composition({2, 1, 1}), 1)); }));

    const TailedIndex b = canonical_form(with_const_tail(make_composition({3, 1}), 1));
    CHECK(b == a);
    CHECK(overlaps(eval(with_const_tail(make_composition({3, 1}), 1), fast()), eval(a, fast())));

    // (2, 2) finite becomes (2, 3, {1}^inf) with the same value
    const TailedIndex c = canonical_form(TailedIndex{make_composition({2, 2}), NoTail{}});
    CHECK(c == with_const_tail(make_composition({2, 3}), 1));
    CHECK(overlaps(eval(c, fast()), eval_finite(make_composition({2, 2}), fast())));

    CHECK(canonical_form(with_const_tail(make_composition({3, 2, 2}), 2))
          == with_const_tail(make_composition({3}), 2));
}

TEST_CASE("order and value agree on random pairs")
{
    std::mt19937 rng(20240601);
    int disagreements = 0;
    for (int i = 0; i < 200; ++i) {
        const Composition a = make_composition(random_digits(rng, 4, 5, true));
        const Composition b = make_composition(random_digits(rng, 4, 5, true));
        const Enclosure va = eval_finite(a, fast());
        const Enclosure vb = eval_finite(b, fast());
        const IndexOrder o = index_compare(a, b);
        if (o == IndexOrder::Greater && certainly_less(va, vb)) {
            ++disagreements;
        }
        if (o == IndexOrder::Less && certainly_greater(va, vb)) {
            ++disagreements;
        }
        if (o != IndexOrder::Equal) {
            CHECK_FALSE(overlaps(va, vb));
        }
    }
    CHECK(disagreements == 0);
}

TEST_CASE("reduction identity on random prefixes")
{
    std::mt19937 rng(77);
    std::uniform_int_distribution<int> kd(2, 5);
    for (int i = 0; i < 50; ++i) {
        const std::vector<int> p = random_digits(rng, 4, 4, true);
        const int k = kd(rng);
        const Composition pk = make_composition(p).extended(k);
        const Composition reduced = make_composition(p).extended(k - 1);
        const Enclosure lhs = eval_with_const_tail(pk, 1, fast());
        const Enclosure rhs = eval_finite(reduced, fast());
        CHECK(overlaps(lhs, rhs));
        CHECK(lhs.rad_double() < 1e-30);
    }
}

TEST_CASE("strict decrease when a trailing entry grows")
{
    std::mt19937 rng(5);
    for (int i = 0; i < 10; ++i) {
        const std::vector<int> p = random_digits(rng, 3, 3, true);
        const Composition base = make_composition(p);
        std::vector<int> bumped = p;
        bumped.back() += 1;
        const Enclosure rhs = eval_finite(base, fast());
        for (int m = 0; m <= 20; m += 4) {
            std::vector<int> lhs_digits = bumped;
            lhs_digits.insert(lhs_digits.end(), static_cast<std::size_t>(m), 1);
            CHECK(certainly_less(eval_finite(make_composition(lhs_digits), fast()), rhs));
        }
    }
}

TEST_CASE("partial sums are monotone in the truncation")
{
    const std::vector<int> parts{2, 1, 3};
    BigFloat last(200);
    for (unsigned long n : {16UL, 64UL, 256UL, 1024UL, 4096UL}) {
        const auto ps = detail::partial_sums(parts, detail::Weight::One, 0, n, 160, MPFR_RNDD);
        CHECK(last <= ps.sums[0]);
        last = ps.sums[0];
    }
}

TEST_CASE("enclosures at different truncations are consistent")
{
    const Composition c = make_composition({2, 1, 3});
    EvalOptions o;
    o.truncation = 16;
    const Enclosure coarse = eval_finite(c, o);
    for (unsigned long n : {64UL, 256UL, 4096UL, 100000UL}) {
        o.truncation = n;
        const Enclosure fine = eval_finite(c, o);
        CHECK(overlaps(coarse, fine));
        CHECK(fine.rad_double() < 1e-30);
    }
}
