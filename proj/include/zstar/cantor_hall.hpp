#ifndef ZSTAR_CANTOR_HALL_HPP
#define ZSTAR_CANTOR_HALL_HPP

#include <zstar/core_values.hpp>

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace zstar
{

enum class FamilyKind {
    EtaDq,        // eta of sequences with entries <= q
    TauBk,        // tau of sequences with entries <= k
    EtaTpClosure, // closure of eta of sequences with entries >= p
    TauLpClosure, // closure of tau of sequences with entries >= p
};

struct Family {
    FamilyKind kind;
    int param;

    bool exact() const
    {
        return kind == FamilyKind::TauBk || kind == FamilyKind::TauLpClosure;
    }
    std::string to_string() const;
    friend bool operator==(const Family &, const Family &) = default;
};

Family make_family(FamilyKind kind, int param);

// Interval T_i(prefix): sequences extending `prefix` whose next entry is at
// least `type` (EtaDq/TauBk: and at most the bound, with T_bound(prefix)
// identified with T_1(prefix, bound)).
struct SubdivisionNode {
    Family family;
    std::vector<int> prefix;
    int type = 1;

    std::string to_string() const;
    friend bool operator==(const SubdivisionNode &, const SubdivisionNode &) = default;
};

SubdivisionNode root_node(const Family &family);

struct HallOptions {
    mpfr_prec_t precision = 128;
    unsigned long truncation = 256;
};

// Endpoint evaluation with a cache shared by every node of one family.
class NodeEvaluator
{
public:
    explicit NodeEvaluator(Family family, HallOptions opts = {});

    const Family &family() const
    {
        return family_;
    }
    const HallOptions &options() const
    {
        return opts_;
    }

    Enclosure low(const SubdivisionNode &n);
    Enclosure high(const SubdivisionNode &n); // upper_infinite for unbounded nodes
    Enclosure length(const SubdivisionNode &n);

    // Exact endpoints for the tau families.
    mpq_class low_exact(const SubdivisionNode &n) const;
    mpq_class high_exact(const SubdivisionNode &n) const;

private:
    Enclosure cached(const std::string &key, auto &&compute);

    Family family_;
    HallOptions opts_;
    std::map<std::string, Enclosure> cache_;
};

// node_endpoints in one call, without a shared cache.
std::pair<Enclosure, Enclosure> node_endpoints(const SubdivisionNode &n, const HallOptions &opts = {});

// Splitting T_i(prefix): the fixed child (next entry exactly i) holds the
// upper part of the values, the rest child T_{i+1}(prefix) the lower part.
struct Subdivision {
    SubdivisionNode fixed;
    SubdivisionNode rest;
};

Subdivision subdivide(const SubdivisionNode &n);

struct SubdivisionReport {
    Subdivision children;
    Enclosure gap_low;  // rest.high
    Enclosure gap_high; // fixed.low
};

SubdivisionReport subdivide_with_gap(NodeEvaluator &ev, const SubdivisionNode &n);

struct HallViolation {
    SubdivisionNode node;
    Enclosure gap;
    Enclosure shorter_child;
};

struct HallReport {
    std::size_t nodes_checked = 0;
    std::size_t comparisons_skipped = 0; // against infinite lengths
    std::optional<Enclosure> worst_margin; // min over nodes of min(child lengths) - gap
    std::optional<Enclosure> worst_ratio;  // max over nodes of gap / min(child lengths)
    std::optional<mpq_class> worst_margin_exact;
    std::optional<mpq_class> worst_ratio_exact;
    std::vector<HallViolation> violations;

    bool passed() const
    {
        return violations.empty();
    }
};

// Checks gap <= min(child lengths) at every node down to max_depth
// subdivisions from the root.
HallReport check_hall_condition(const Family &family, int max_depth, const HallOptions &opts = {});

enum class Operation { Sum, Product, Difference, Quotient };

std::string to_string(Operation op);

// Per-prefix check of (C) and (D) with outer sums truncated at n_1 <= N.
struct PrefixInequalityCheck {
    std::vector<int> prefix;
    int i = 1;
    Enclosure c_lhs, c_rhs; // (C): W_i^2 <= S_{i-1} S_i
    Enclosure d_lhs, d_rhs; // (D): W_i W_q <= S_i^2
    bool c_holds = false;
    bool d_holds = false;
};

struct InequalityReport {
    int q = 2;
    unsigned long m_max = 0;
    // (A): 2 F_m(q) <= m + 1, checked exactly for 1 <= m <= m_max
    std::vector<unsigned long> a_violations;
    std::vector<unsigned long> a_equalities;
    // F_m(q) <= F_m(2) = 2m/(m+1), exactly
    std::vector<unsigned long> f_bound_violations;
    std::vector<PrefixInequalityCheck> samples;

    bool passed() const;
};

struct InequalityOptions {
    mpfr_prec_t precision = 128;
    unsigned long outer_truncation = 2000;
};

// Sample prefixes need 2 <= k_1 <= q, entries <= q and must not be (2,{1}^j).
InequalityReport verify_inequalities(int q, unsigned long m_max, const std::vector<std::vector<int>> &sample_prefixes,
                                     const InequalityOptions &opts = {});

struct StageInterval {
    std::string label;
    Enclosure low;
    Enclosure high;
};

struct CertifiedGap {
    Enclosure low;
    Enclosure high;
};

struct OperationGaps {
    Operation op;
    std::vector<StageInterval> pieces; // pairwise combinations of stage intervals
    std::vector<CertifiedGap> gaps;    // uncovered stretches between pieces
};

struct GapReport {
    int p = 2;
    int depth = 1;
    std::vector<StageInterval> stage;
    std::vector<OperationGaps> operations; // sum, product, difference, quotient
    std::string containment_note;

    const OperationGaps &of(Operation op) const;
};

// Stage intervals of closure(eta(T_p)) after `depth` subdivisions and the
// certified gaps of their pairwise sums, products, differences, quotients.
// A gap is reported only if its endpoints are separated by at least twice
// their combined radii.
GapReport theorem12_gaps(int p, const HallOptions &opts = {}, int depth = 1);

// Newhouse thickness of the depth-d truncation; bridges of a gap end at the
// nearest gap at least as long. UnboundedFamily for EtaDq.
Enclosure thickness(const Family &family, int depth, const HallOptions &opts = {});

} // namespace zstar

#endif
