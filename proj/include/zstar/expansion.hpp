#ifndef ZSTAR_EXPANSION_HPP
#define ZSTAR_EXPANSION_HPP

#include <zstar/core_values.hpp>

#include <optional>
#include <span>
#include <vector>

namespace zstar
{

// Value interval (low, high] of every sequence extending (prefix, k):
// low = zeta-star(prefix, k), high = zeta-star(prefix, k, {1}^inf).
struct SubtreeBounds {
    Enclosure low;
    Enclosure high;
};

SubtreeBounds subtree_bounds(std::span<const int> prefix, int k, const EvalOptions &opts = {});

enum class BoundaryPolicy {
    Strict,      // unresolved comparisons end the expansion as BoundaryAmbiguous
    AssumeEqual, // treat an unresolved comparison as equality (closed top)
};

struct ExpandOptions {
    mpfr_prec_t precision = 128;
    unsigned long truncation = 256;
    int escalation_limit = 3; // precision doublings before giving up
    BoundaryPolicy boundary = BoundaryPolicy::Strict;
};

enum class ExpansionStatus {
    Exact,     // x matches (digits, {q}^inf) within enclosure radii
    Truncated, // depth reached
    BoundaryAmbiguous,
};

struct ExpansionResult {
    std::vector<int> digits;
    ExpansionStatus status = ExpansionStatus::Truncated;
    int tail = 0;                      // q for Exact
    std::size_t ambiguous_position = 0; // for BoundaryAmbiguous
    // x - zeta-star(digits): the distance above the open lower end of the
    // innermost subtree (absent when no digit was emitted).
    std::optional<Enclosure> residual;
};

ExpansionResult expand(const mpq_class &x, std::size_t depth, const ExpandOptions &opts = {});
ExpansionResult expand(const Enclosure &x, std::size_t depth, const ExpandOptions &opts = {});

std::string to_string(ExpansionStatus s);

} // namespace zstar

#endif
