#include <doctest.h>

#include <zstar/binary_tau.hpp>
#include <zstar/core_values.hpp>
#include <zstar/error.hpp>

#include <numeric>
#include <random>

using namespace zstar;

namespace
{

// Partial sums of the defining series, with the exact geometric bound on the
// remainder: after digits summing to S the rest is in (0, 2^{-S}].
bool series_brackets(const DigitSeq &s, const mpq_class &v, std::size_t n)
{
    const std::vector<int> d = s.digits(n);
    mpq_class sum = 0, w = 1;
    for (const int k : d) {
        for (int i = 0; i < k; ++i) {
            w /= 2;
        }
        sum += w;
    }
    return sum < v && v <= sum + w;
}

DigitSeq random_seq(std::mt19937 &rng)
{
    std::uniform_int_distribution<int> digit(1, 4), plen(0, 5), perlen(1, 3);
    std::vector<int> prefix(static_cast<std::size_t>(plen(rng)));
    for (int &k : prefix) {
        k = digit(rng);
    }
    std::vector<int> period(static_cast<std::size_t>(perlen(rng)));
    for (int &k : period) {
        k = digit(rng);
    }
    return periodic(prefix, period);
}

} // namespace

TEST_CASE("tau_value examples")
{
    CHECK(tau_value(ones_tail({})) == 1);
    for (int k = 1; k <= 8; ++k) {
        CHECK(tau_value(periodic({}, {k})) == mpq_class(1, (1 << k) - 1));
    }
    CHECK(tau_value(periodic({}, {1, 2})) == mpq_class(5, 7));
    CHECK(series_brackets(periodic({}, {1, 2}), mpq_class(5, 7), 30));
    CHECK_THROWS_AS(tau_value(DigitSeq{{1, 2}, SeqTail::None, {}}), Error);
}

TEST_CASE("tau_value matches partial sums")
{
    std::mt19937 rng(3);
    for (int i = 0; i < 100; ++i) {
        const DigitSeq s = random_seq(rng);
        CHECK(series_brackets(s, tau_value(s), 25));
    }
}

TEST_CASE("tau_expand examples")
{
    CHECK(tau_expand(mpq_class(1, 3), 20) == periodic({}, {2}));
    CHECK(tau_expand(mpq_class(1), 20) == ones_tail({}));
    CHECK(tau_expand(mpq_class(5, 7), 20) == periodic({}, {1, 2}));
    CHECK(tau_expand(mpq_class(1, 2), 20) == ones_tail({2}));
    CHECK(tau_expand(mpq_class(3, 8), 20) == ones_tail({2, 2}));
    CHECK_THROWS_AS(tau_expand(mpq_class(0), 5), Error);
    CHECK_THROWS_AS(tau_expand(mpq_class(3, 2), 5), Error);
}

TEST_CASE("tau_expand inverts tau_value")
{
    std::mt19937 rng(8);
    for (int i = 0; i < 200; ++i) {
        const DigitSeq s = random_seq(rng);
        const DigitSeq back = tau_expand(tau_value(s), 200);
        CHECK(back.digits(30) == s.digits(30));
        CHECK(tau_value(back) == tau_value(s));
    }
}

TEST_CASE("order of digit sequences mirrors tau values exactly")
{
    std::mt19937 rng(500);
    int disagreements = 0;
    for (int i = 0; i < 500; ++i) {
        const DigitSeq a = random_seq(rng);
        const DigitSeq b = random_seq(rng);
        // eventually periodic with prefix <= 5 and period <= 3: 5 + 2 * lcm bound
        const std::vector<int> da = a.digits(40), db = b.digits(40);
        const IndexOrder o = digits_compare(da, db);
        const mpq_class va = tau_value(a), vb = tau_value(b);
        if (o == IndexOrder::Greater && !(va > vb)) {
            ++disagreements;
        }
        if (o == IndexOrder::Less && !(va < vb)) {
            ++disagreements;
        }
        if (o == IndexOrder::Equal && va != vb) {
            ++disagreements;
        }
    }
    CHECK(disagreements == 0);
}

TEST_CASE("tau_node_lengths closed forms")
{
    const std::vector<int> p{1, 3, 2};
    const mpq_class K(1, 64);
    const TauNodeLengths l2 = tau_node_lengths(p, 1, 2);
    CHECK(l2.parent == K * mpq_class(2, 3));
    CHECK(l2.left == K * mpq_class(1, 3));
    CHECK(l2.right == K * mpq_class(1, 6));
    CHECK(l2.gap == K * mpq_class(1, 6));

    CHECK(tau_node_lengths({}, 1, 3).gap == mpq_class(1, 14));
    const TauNodeLengths l32 = tau_node_lengths({}, 2, 3);
    CHECK(l32.gap == mpq_class(1, 28));
    CHECK(l32.gap <= l32.left);
    CHECK(l32.gap <= l32.right);
    CHECK_THROWS_AS(tau_node_lengths({}, 3, 3), Error);
}

TEST_CASE("node lengths add up and follow the general formulas")
{
    std::mt19937 rng(21);
    std::uniform_int_distribution<int> digit(1, 5), len(0, 6);
    for (int k = 2; k <= 6; ++k) {
        const mpq_class t = mpq_class(1, (1 << k) - 1);
        for (int i = 1; i <= k - 1; ++i) {
            std::vector<int> p(static_cast<std::size_t>(len(rng)));
            for (int &d : p) {
                d = digit(rng);
            }
            const int s = std::accumulate(p.begin(), p.end(), 0);
            const mpq_class K = mpq_class(1) / mpq_class(mpz_class(1) << static_cast<mp_bitcnt_t>(s));
            const mpq_class two_i = mpq_class(mpz_class(1) << static_cast<mp_bitcnt_t>(i));
            const TauNodeLengths l = tau_node_lengths(p, i, k);
            CHECK(l.parent == l.left + l.gap + l.right);
            CHECK(l.parent == K * (2 / two_i - t));
            CHECK(l.left == K * (2 / two_i - mpq_class(1 << k) / two_i * t));
            CHECK(l.right == K * (1 / two_i - t));
            CHECK(l.gap == K * t / two_i);
            CHECK(l.gap <= l.left);
            CHECK(l.gap <= l.right);
        }
    }
}

TEST_CASE("tau_decompose_sum endpoints")
{
    const TauDecomposition lo = tau_decompose_sum(mpq_class(2, 3), 2, 10);
    CHECK(lo.residual == 0);
    CHECK(lo.left == std::vector<int>(lo.left.size(), 2));
    CHECK(lo.right == std::vector<int>(lo.right.size(), 2));

    const TauDecomposition hi = tau_decompose_sum(mpq_class(2), 2, 10);
    CHECK(hi.residual == hi.width);
    CHECK(hi.left == std::vector<int>(hi.left.size(), 1));
    CHECK(hi.right == std::vector<int>(hi.right.size(), 1));

    CHECK_THROWS_AS(tau_decompose_sum(mpq_class(1, 2), 2, 10), Error);
    CHECK_THROWS_AS(tau_decompose_sum(mpq_class(201, 100), 2, 10), Error);
}

TEST_CASE("tau_decompose_sum interior points")
{
    const TauDecomposition one = tau_decompose_sum(mpq_class(1), 2, 40);
    CHECK(one.residual >= 0);
    CHECK(one.residual <= mpq_class(1, 1L << 39));
    CHECK(one.left.size() >= 40);
    CHECK(one.right.size() >= 40);
    for (int d : one.left) {
        CHECK(d <= 2);
    }

    std::mt19937 rng(4);
    for (int k = 2; k <= 4; ++k) {
        const mpq_class lo(2, (1 << k) - 1);
        for (int i = 0; i < 5; ++i) {
            const mpq_class x = lo + (2 - lo) * mpq_class(rng() % 1000003, 1000003);
            const TauDecomposition d = tau_decompose_sum(x, k, 40);
            CHECK(d.residual >= 0);
            CHECK(d.residual <= mpq_class(1, 1L << 38));
            for (int v : d.left) {
                CHECK(v <= k);
            }
            for (int v : d.right) {
                CHECK(v <= k);
            }
        }
    }
}
