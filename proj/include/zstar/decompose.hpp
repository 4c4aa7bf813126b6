#ifndef ZSTAR_DECOMPOSE_HPP
#define ZSTAR_DECOMPOSE_HPP

#include <zstar/cantor_hall.hpp>

#include <string>

namespace zstar
{

struct DecomposeOptions {
    mpfr_prec_t precision = 128;
    unsigned long truncation = 256;
    double tolerance = 1e-8;
    long step_budget = 200000;
};

// Witness that left (op) right lies within residual_bound of target, where
// both operands are prefixes completed by {q}^inf, so all entries are <= q.
struct DecompositionCertificate {
    Operation op = Operation::Sum;
    int q = 2;
    TailedIndex left;
    TailedIndex right;
    Enclosure left_value;
    Enclosure right_value;
    Enclosure combined; // left_value (op) right_value
    mpq_class target;
    double residual_bound = 0; // upper bound of |combined - target|
    long steps = 0;            // subdivisions performed by the search
};

// x >= c_q = 2 zeta-star({q}^inf); BelowRange otherwise.
DecompositionCertificate decompose_sum(const mpq_class &x, int q, const DecomposeOptions &opts = {});
// x >= d_q = zeta-star({q}^inf)^2; BelowRange otherwise.
DecompositionCertificate decompose_product(const mpq_class &x, int q, const DecomposeOptions &opts = {});
DecompositionCertificate decompose_difference(const mpq_class &x, int q, const DecomposeOptions &opts = {});
// x > 0; OutOfDomain otherwise.
DecompositionCertificate decompose_quotient(const mpq_class &x, int q, const DecomposeOptions &opts = {});

DecompositionCertificate decompose(Operation op, const mpq_class &x, int q, const DecomposeOptions &opts = {});

// Re-evaluates both operands at `precision` and checks that the target stays
// within residual_bound of the recomputed combination.
bool validate_certificate(const DecompositionCertificate &c, mpfr_prec_t precision, unsigned long truncation = 256);

} // namespace zstar

#endif
