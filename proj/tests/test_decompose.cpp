#include <doctest.h>

#include <zstar/decompose.hpp>
#include <zstar/error.hpp>

#include "oracles.hpp"

#include <random>

using namespace zstar;

namespace
{

void check_certificate(const DecompositionCertificate &c, double tol)
{
    CHECK(c.residual_bound <= tol);
    CHECK(validate_certificate(c, 256));
    // second route: the tail split moved from 256 to 4096
    CHECK(validate_certificate(c, 256, 4096));
    // truncated direct sums of positive terms bound each operand from below
    const EvalOptions eo{128, 256};
    for (const TailedIndex *t : {&c.left, &c.right}) {
        const double direct = oracle::mzsv_tail_direct(t->prefix.parts(), c.q, 4000);
        CHECK(direct <= eval(*t, eo).mid_double() + 1e-12);
    }
}

} // namespace

TEST_CASE("sum endpoint and range")
{
    const DecompositionCertificate c = decompose_sum(4, 2);
    CHECK(c.left.to_string() == c.right.to_string());
    CHECK(c.left == with_const_tail(make_composition({2}), 2));
    CHECK(c.residual_bound < 1e-30);
    CHECK_THROWS_AS(decompose_sum(mpq_class(399, 100), 2), Error);
    try {
        decompose_sum(mpq_class(39, 10), 2);
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::BelowRange);
    }
}

TEST_CASE("sum interior")
{
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> d(400, 3000);
    for (int i = 0; i < 4; ++i) {
        const mpq_class x(d(rng), 100);
        check_certificate(decompose_sum(x, 2), 1e-8);
    }
    check_certificate(decompose_sum(mpq_class(13, 2), 3), 1e-8);
}

TEST_CASE("product, difference and quotient")
{
    check_certificate(decompose_product(mpq_class(25, 4), 2), 1e-8);
    const Enclosure z3 = eval_with_const_tail(make_composition({3}), 3, EvalOptions{128, 256});
    const mpq_class d3_approx = (z3 * z3).mid().to_mpq();
    const DecompositionCertificate e3 = decompose_product(d3_approx, 3);
    CHECK(e3.steps == 0);
    for (const mpq_class x : {mpq_class(-5), mpq_class(0), mpq_class(21, 2), mpq_class(-16, 5)}) {
        check_certificate(decompose_difference(x, 2), 1e-8);
    }
    for (const mpq_class x : {mpq_class(1, 25), mpq_class(1), mpq_class(73, 10)}) {
        check_certificate(decompose_quotient(x, 2), 1e-8);
    }
    CHECK_THROWS_AS(decompose_quotient(0, 2), Error);
    CHECK_THROWS_AS(decompose_product(3, 2), Error);
}

TEST_CASE("log-domain certificate satisfies the additive inequality")
{
    const DecompositionCertificate c = decompose_product(mpq_class(15, 2), 2);
    const Enclosure lhs = log(c.left_value) + log(c.right_value);
    const Enclosure rhs = log(Enclosure::exact(c.target, 128));
    const double rel = c.residual_bound / c.target.get_d();
    CHECK(std::abs(lhs.mid_double() - rhs.mid_double()) <= 2 * rel);
}
