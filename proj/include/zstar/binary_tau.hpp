#ifndef ZSTAR_BINARY_TAU_HPP
#define ZSTAR_BINARY_TAU_HPP

#include <gmpxx.h>

#include <span>
#include <string>
#include <vector>

namespace zstar
{

enum class SeqTail {
    None,     // unspecified continuation
    Ones,     // {1}^inf
    Periodic, // period repeated forever
};

// prefix followed by the tail. A Ones tail is the period (1).
struct DigitSeq {
    std::vector<int> prefix;
    SeqTail tail = SeqTail::None;
    std::vector<int> period;

    // First n digits of the sequence (NonTerminating if the tail is None and
    // n exceeds the prefix).
    std::vector<int> digits(std::size_t n) const;
    std::string to_string() const;

    friend bool operator==(const DigitSeq &, const DigitSeq &) = default;
};

DigitSeq periodic(std::vector<int> prefix, std::vector<int> period);
DigitSeq ones_tail(std::vector<int> prefix);

// sum_j 2^{-(k_1 + ... + k_j)} over the given digits.
mpq_class tau_prefix_value(std::span<const int> digits);

// Exact value; NonTerminating for an unspecified tail.
mpq_class tau_value(const DigitSeq &s);

// Binary-gap digits of x in (0, 1]. Dyadic rationals use their
// infinite-ones form. If a state repeats within `depth` digits the result
// carries the exact periodic tail, otherwise `depth` digits with no tail.
DigitSeq tau_expand(const mpq_class &x, std::size_t depth);

struct TauInterval {
    mpq_class low;
    mpq_class high;
};

// T_i(prefix) in tau(B_k): [tau(prefix, {k}^inf), tau(prefix, i, {1}^inf)].
TauInterval tau_node_interval(std::span<const int> prefix, int i, int k);

struct TauNodeLengths {
    mpq_class parent;
    mpq_class left; // fixed digit i: T_1(prefix, i)
    mpq_class right; // T_{i+1}(prefix)
    mpq_class gap;
};

TauNodeLengths tau_node_lengths(std::span<const int> prefix, int i, int k);

struct TauDecomposition {
    std::vector<int> left;  // completed by {k}^inf
    std::vector<int> right; // completed by {k}^inf
    mpq_class value;        // tau(left, {k}^inf) + tau(right, {k}^inf)
    mpq_class residual;     // x - value, 0 <= residual
    mpq_class width;        // width of the final sum interval
};

// Nested-interval decomposition x = tau(a) + tau(b), a, b in B_k, run until
// both prefixes have at least `depth` digits. OutOfRange outside
// [2/(2^k - 1), 2].
TauDecomposition tau_decompose_sum(const mpq_class &x, int k, std::size_t depth);

} // namespace zstar

#endif
