#ifndef ZSTAR_CORE_VALUES_HPP
#define ZSTAR_CORE_VALUES_HPP

#include <zstar/enclosure.hpp>

#include <gmpxx.h>

#include <initializer_list>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace zstar
{

// An admissible index (k_1, ..., k_r): r >= 1, k_1 >= 2, k_i >= 1.
class Composition
{
public:
    Composition() = default;

    const std::vector<int> &parts() const noexcept
    {
        return parts_;
    }
    std::size_t size() const noexcept
    {
        return parts_.size();
    }
    int operator[](std::size_t i) const
    {
        return parts_[i];
    }
    int back() const
    {
        return parts_.back();
    }

    Composition extended(int k) const;
    Composition extended(std::span<const int> ks) const;

    std::string to_string() const;

    friend bool operator==(const Composition &, const Composition &) = default;

private:
    friend Composition make_composition(std::vector<int> parts);
    std::vector<int> parts_;
};

Composition make_composition(std::vector<int> parts);
Composition make_composition(std::initializer_list<int> parts);

enum class IndexOrder {
    Greater, // a succeeds b
    Less,
    Equal,
};

// Rule 1: a proper extension is larger. Rule 2: at the first difference the
// smaller entry gives the larger index.
IndexOrder index_compare(const Composition &a, const Composition &b);

// Same rules on raw digit strings (no admissibility check).
IndexOrder digits_compare(std::span<const int> a, std::span<const int> b);

struct NoTail {
    friend bool operator==(const NoTail &, const NoTail &) = default;
};

struct ConstTail {
    int q = 1;
    friend bool operator==(const ConstTail &, const ConstTail &) = default;
};

using Tail = std::variant<NoTail, ConstTail>;

struct TailedIndex {
    Composition prefix;
    Tail tail;

    std::string to_string() const;
    friend bool operator==(const TailedIndex &, const TailedIndex &) = default;
};

TailedIndex with_const_tail(Composition prefix, int q);

struct EvalOptions {
    mpfr_prec_t precision = 128;
    unsigned long truncation = 1'000'000;
};

// F_m(q) = prod_{n=2}^{m} (1 - n^{-q})^{-1}; F_1(q) = 1, F_m(1) = m.
mpq_class tail_factor(unsigned long m, int q);

// F_infinity(q) for q >= 2, computed from a Hurwitz-tail logarithm
// independently of the series evaluator.
Enclosure tail_factor_limit(int q, mpfr_prec_t precision);

Enclosure eval_finite(const Composition &c, const EvalOptions &opts = {});

// zeta-star(prefix, {q}^inf). Throws DivergentValue for q = 1 on (2, {1}^{r-1}).
Enclosure eval_with_const_tail(const Composition &prefix, int q, const EvalOptions &opts = {});

// Dispatches on the tail; a divergent value comes back as +inf instead of
// throwing.
Enclosure eval(const TailedIndex &t, const EvalOptions &opts = {});

// Structural divergence test: q = 1 and prefix = (2, {1}^{r-1}).
bool is_divergent(const Composition &prefix, int q);

// Normal form: trailing entries equal to the tail constant are absorbed, and
// a finite index (p, k) becomes (p, k+1, {1}^inf). Throws NotInDomain when the
// result is the excluded (2, {1}^inf).
TailedIndex canonical_form(const TailedIndex &t);

} // namespace zstar

#endif
