#ifndef ZSTAR_EXPLORER_HPP
#define ZSTAR_EXPLORER_HPP

#include <zstar/enclosure.hpp>
#include <zstar/expansion.hpp>

#include <gmpxx.h>

#include <optional>
#include <vector>

namespace zstar
{

// Root of x^{p-1}(x-1) = 1 in (1, 2), by bisection with certified signs.
Enclosure alpha_root(int p, mpfr_prec_t precision = 128);

struct BoxCount {
    int p = 2;
    unsigned long n = 0;
    mpz_class count;    // a_n
    mpz_class previous; // a_{n-1}
    double growth = 0;  // log2(a_n / a_{n-1})
};

// Bit strings of length n whose 1-bits are at least p apart:
// a_n = n + 1 for n < p, a_n = a_{n-1} + a_{n-p} otherwise.
BoxCount box_count(int p, unsigned long n);

struct DimensionRecord {
    int p = 2;
    Enclosure alpha;
    Enclosure dim; // log(alpha) / log(2)
    double empirical_dim = 0;
    unsigned long depth = 0; // box-count level behind empirical_dim
};

DimensionRecord dimension_formula(int p, mpfr_prec_t precision = 128, unsigned long box_depth = 60);

struct CoveringOptions {
    mpfr_prec_t precision = 128;
    unsigned long truncation = 256;
    int window = 1; // window [zeta-star({q}^inf), zeta-star(2,{1}^window)]
};

// Total length of the depth-d nodes of eta(D_q) clipped to the window.
Enclosure covering_length(int q, int depth, const CoveringOptions &opts = {});

enum class CandidateStatus {
    EliminatedAtDigit,  // some digit exceeds q
    SurvivorToDepth,    // every computed digit is <= q
    BoundaryAmbiguous,  // expansion stopped on an unresolved comparison
};

std::string to_string(CandidateStatus s);

struct AlgebraicCandidate {
    std::vector<long> poly; // coefficients, constant term first
    std::optional<mpq_class> exact;
    Enclosure value;
    CandidateStatus status = CandidateStatus::SurvivorToDepth;
    std::size_t position = 0; // 1-based digit for Eliminated, 0-based for Ambiguous
    std::vector<int> digits;
};

struct SearchOptions {
    int q = 2;
    int max_degree = 2;
    long max_height = 3;
    std::size_t expand_depth = 8;
    mpfr_prec_t precision = 128;
};

// Real roots of integer polynomials (degree <= max_degree, coefficients
// bounded by max_height) in (1, zeta-star(2,{1}^expand_depth)], one entry
// per distinct number, sorted by value.
std::vector<AlgebraicCandidate> search_algebraic(const SearchOptions &opts = {});

} // namespace zstar

#endif
