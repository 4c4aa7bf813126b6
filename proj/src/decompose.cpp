#include <zstar/decompose.hpp>
#include <zstar/error.hpp>

#include <algorithm>
#include <cmath>
#include <optional>

namespace zstar
{

namespace
{

// Outer bounds of a node image; lo may be -inf, hi may be +inf.
struct Bounds {
    BigFloat lo;
    BigFloat hi;
};

TailedIndex completed(const SubdivisionNode &n, int q)
{
    std::vector<int> d = n.prefix;
    while (!d.empty() && d.back() == q) {
        d.pop_back();
    }
    if (d.empty()) {
        d.push_back(q);
    }
    return with_const_tail(make_composition(std::move(d)), q);
}

Enclosure combine(Operation op, const Enclosure &a, const Enclosure &b)
{
    switch (op) {
    case Operation::Sum:
        return a + b;
    case Operation::Product:
        return a * b;
    case Operation::Difference:
        return a - b;
    case Operation::Quotient:
        return a / b;
    }
    raise(ErrorKind::InvalidNode, "unknown operation");
}

double residual_of(const Enclosure &combined, const mpq_class &x)
{
    const Enclosure d = abs(combined - Enclosure::exact(x, combined.precision()));
    return d.upper().to_double(MPFR_RNDU);
}

// Nested-interval search over node pairs (A, B) of eta(D_q). Sums work on
// the node intervals directly; products and quotients on their logarithms;
// differences and quotients negate the image of B.
class Engine
{
public:
    Engine(Operation op, int q, const mpq_class &x, const DecomposeOptions &opts)
        : op_(op), q_(q), x_(x), opts_(opts), ev_(make_family(FamilyKind::EtaDq, q), HallOptions{opts.precision, opts.truncation}),
          tlo_(opts.precision), thi_(opts.precision)
    {
        const mpfr_prec_t prec = opts.precision;
        tlo_ = BigFloat::from_mpq(x, prec, MPFR_RNDD);
        thi_ = BigFloat::from_mpq(x, prec, MPFR_RNDU);
        if (log_domain()) {
            mpfr_log(tlo_.get(), tlo_.get(), MPFR_RNDD);
            mpfr_log(thi_.get(), thi_.get(), MPFR_RNDU);
        }
    }

    NodeEvaluator &evaluator()
    {
        return ev_;
    }

    DecompositionCertificate run()
    {
        const SubdivisionNode root = root_node(ev_.family());
        const auto found = solve(root, root);
        if (!found) {
            raise(ErrorKind::PrecisionInsufficient, "no child pair contains the target");
        }
        return certificate(found->first, found->second);
    }

    DecompositionCertificate certificate(const SubdivisionNode &a, const SubdivisionNode &b)
    {
        DecompositionCertificate c;
        c.op = op_;
        c.q = q_;
        c.left = completed(a, q_);
        c.right = completed(b, q_);
        c.left_value = ev_.low(a);
        c.right_value = ev_.low(b);
        c.combined = combine(op_, c.left_value, c.right_value);
        c.target = x_;
        c.residual_bound = residual_of(c.combined, x_);
        c.steps = steps_;
        return c;
    }

private:
    using Pair = std::pair<SubdivisionNode, SubdivisionNode>;

    bool log_domain() const
    {
        return op_ == Operation::Product || op_ == Operation::Quotient;
    }
    bool negated() const
    {
        return op_ == Operation::Difference || op_ == Operation::Quotient;
    }

    Bounds image(const SubdivisionNode &n, bool right)
    {
        Bounds b{ev_.low(n).lower(), ev_.high(n).upper()};
        if (log_domain()) {
            mpfr_log(b.lo.get(), b.lo.get(), MPFR_RNDD);
            mpfr_log(b.hi.get(), b.hi.get(), MPFR_RNDU);
        }
        if (right && negated()) {
            std::swap(b.lo, b.hi);
            mpfr_neg(b.lo.get(), b.lo.get(), MPFR_RNDN);
            mpfr_neg(b.hi.get(), b.hi.get(), MPFR_RNDN);
        }
        return b;
    }

    Bounds image(const Pair &p)
    {
        Bounds a = image(p.first, false);
        const Bounds b = image(p.second, true);
        mpfr_add(a.lo.get(), a.lo.get(), b.lo.get(), MPFR_RNDD);
        mpfr_add(a.hi.get(), a.hi.get(), b.hi.get(), MPFR_RNDU);
        return a;
    }

    double length(const SubdivisionNode &n)
    {
        const Bounds b = image(n, false);
        return mpfr_get_d(b.hi.get(), MPFR_RNDU) - mpfr_get_d(b.lo.get(), MPFR_RNDD);
    }

    struct Score {
        int infinite;
        double margin;
    };

    // Empty when the pair image misses the target.
    std::optional<Score> score(const Pair &p)
    {
        const Bounds b = image(p);
        if (b.lo > thi_ || b.hi < tlo_) {
            return std::nullopt;
        }
        const int inf = (mpfr_inf_p(b.lo.get()) ? 1 : 0) + (mpfr_inf_p(b.hi.get()) ? 1 : 0);
        const double below = mpfr_get_d(tlo_.get(), MPFR_RNDN) - mpfr_get_d(b.lo.get(), MPFR_RNDN);
        const double above = mpfr_get_d(b.hi.get(), MPFR_RNDN) - mpfr_get_d(thi_.get(), MPFR_RNDN);
        return Score{inf, std::min(below, above)};
    }

    std::optional<Pair> solve(const SubdivisionNode &a, const SubdivisionNode &b)
    {
        if (++steps_ > opts_.step_budget) {
            raise(ErrorKind::PrecisionInsufficient, "decomposition search exceeded its step budget");
        }
        if (residual_of(combine(op_, ev_.low(a), ev_.low(b)), x_) <= opts_.tolerance) {
            return Pair{a, b};
        }
        const bool split_a = length(a) >= length(b);
        const SubdivisionNode &big = split_a ? a : b;
        const SubdivisionNode &other = split_a ? b : a;
        const Subdivision c = subdivide(big);

        std::vector<Pair> cands;
        for (const SubdivisionNode *n : {&c.fixed, &c.rest}) {
            cands.push_back(split_a ? Pair{*n, other} : Pair{other, *n});
        }
        if (!std::any_of(cands.begin(), cands.end(), [&](const Pair &p) { return score(p).has_value(); })) {
            const Subdivision d = subdivide(other);
            cands.clear();
            for (const SubdivisionNode *n : {&c.fixed, &c.rest}) {
                for (const SubdivisionNode *m : {&d.fixed, &d.rest}) {
                    cands.push_back(split_a ? Pair{*n, *m} : Pair{*m, *n});
                }
            }
        }
        for (const Pair &p : ordered(cands)) {
            if (auto r = solve(p.first, p.second)) {
                return r;
            }
        }
        return std::nullopt;
    }

    // Fewest infinite ends first, then the largest margin, then the
    // lexicographically smaller left digits.
    std::vector<Pair> ordered(const std::vector<Pair> &cands)
    {
        std::vector<std::pair<Score, const Pair *>> scored;
        for (const Pair &p : cands) {
            if (const auto s = score(p)) {
                scored.emplace_back(*s, &p);
            }
        }
        std::stable_sort(scored.begin(), scored.end(), [](const auto &l, const auto &r) {
            if (l.first.infinite != r.first.infinite) {
                return l.first.infinite < r.first.infinite;
            }
            if (l.first.margin != r.first.margin) {
                return l.first.margin > r.first.margin;
            }
            return l.second->first.prefix < r.second->first.prefix;
        });
        std::vector<Pair> out;
        for (const auto &s : scored) {
            out.push_back(*s.second);
        }
        return out;
    }

    Operation op_;
    int q_;
    mpq_class x_;
    DecomposeOptions opts_;
    NodeEvaluator ev_;
    BigFloat tlo_, thi_;
    long steps_ = 0;
};

} // namespace

DecompositionCertificate decompose(Operation op, const mpq_class &x, int q, const DecomposeOptions &opts)
{
    if (op == Operation::Quotient && x <= 0) {
        raise(ErrorKind::OutOfDomain, "quotient target must be positive");
    }
    Engine engine(op, q, x, opts);
    const SubdivisionNode root = root_node(make_family(FamilyKind::EtaDq, q));
    const Enclosure base = engine.evaluator().low(root); // zeta-star({q}^inf)
    const Enclosure target = Enclosure::exact(x, opts.precision);
    switch (op) {
    case Operation::Sum:
    case Operation::Product: {
        const Enclosure least = combine(op, base, base);
        if (certainly_less(target, least)) {
            raise(ErrorKind::BelowRange, "target lies below the least " + to_string(op));
        }
        if (overlaps(target, least)) {
            return engine.certificate(root, root);
        }
        break;
    }
    case Operation::Difference:
    case Operation::Quotient:
        if (x == (op == Operation::Difference ? 0 : 1)) {
            return engine.certificate(root, root);
        }
        break;
    }
    return engine.run();
}

DecompositionCertificate decompose_sum(const mpq_class &x, int q, const DecomposeOptions &opts)
{
    return decompose(Operation::Sum, x, q, opts);
}

DecompositionCertificate decompose_product(const mpq_class &x, int q, const DecomposeOptions &opts)
{
    return decompose(Operation::Product, x, q, opts);
}

DecompositionCertificate decompose_difference(const mpq_class &x, int q, const DecomposeOptions &opts)
{
    return decompose(Operation::Difference, x, q, opts);
}

DecompositionCertificate decompose_quotient(const mpq_class &x, int q, const DecomposeOptions &opts)
{
    return decompose(Operation::Quotient, x, q, opts);
}

bool validate_certificate(const DecompositionCertificate &c, mpfr_prec_t precision, unsigned long truncation)
{
    for (const TailedIndex *t : {&c.left, &c.right}) {
        const auto &parts = t->prefix.parts();
        if (std::any_of(parts.begin(), parts.end(), [&](int k) { return k > c.q; })) {
            return false;
        }
    }
    const EvalOptions eo{precision, truncation};
    const Enclosure v = combine(c.op, eval(c.left, eo), eval(c.right, eo));
    return residual_of(v, c.target) <= c.residual_bound;
}

} // namespace zstar
