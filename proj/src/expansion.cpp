#include <zstar/error.hpp>
#include <zstar/expansion.hpp>

#include <climits>

namespace zstar
{

namespace
{

std::vector<int> with_digit(std::span<const int> prefix, int k)
{
    std::vector<int> d(prefix.begin(), prefix.end());
    d.push_back(k);
    return d;
}

class Target
{
public:
    explicit Target(const mpq_class &q) : exact_(q) {}
    explicit Target(const Enclosure &e) : approx_(e) {}

    Enclosure at(mpfr_prec_t prec) const
    {
        return exact_ ? Enclosure::exact(*exact_, prec) : *approx_;
    }

private:
    std::optional<mpq_class> exact_;
    std::optional<Enclosure> approx_;
};

class Expander
{
public:
    Expander(const Target &x, const ExpandOptions &opts) : x_(x), opts_(opts) {}

    ExpansionResult run(std::size_t depth)
    {
        if (!certainly_greater(x_.at(opts_.precision), Enclosure::exact(1, opts_.precision))) {
            raise(ErrorKind::OutOfDomain, "expansion needs x > 1");
        }
        ExpansionResult res;
        for (std::size_t pos = 0; pos < depth; ++pos) {
            const std::optional<int> k = next_digit(res.digits);
            if (!k) {
                res.status = ExpansionStatus::BoundaryAmbiguous;
                res.ambiguous_position = pos;
                break;
            }
            res.digits.push_back(*k);
        }
        if (res.status != ExpansionStatus::BoundaryAmbiguous) {
            detect_tail(res);
        }
        if (!res.digits.empty()) {
            res.residual = x_.at(opts_.precision) - eval_finite(make_composition(res.digits), eval_options(opts_.precision));
        }
        return res;
    }

private:
    enum class Cmp { Above, NotAbove, Ambiguous };

    EvalOptions eval_options(mpfr_prec_t prec) const
    {
        EvalOptions eo;
        eo.precision = prec;
        eo.truncation = opts_.truncation;
        return eo;
    }

    // Is x > zeta-star(digits)? Precision is doubled on overlap.
    Cmp above(const std::vector<int> &digits) const
    {
        const Composition c = make_composition(digits);
        mpfr_prec_t prec = opts_.precision;
        for (int attempt = 0;; ++attempt) {
            const Enclosure v = eval_finite(c, eval_options(prec));
            const Enclosure xv = x_.at(prec);
            if (certainly_greater(xv, v)) {
                return Cmp::Above;
            }
            if (certainly_less(xv, v)) {
                return Cmp::NotAbove;
            }
            if (attempt >= opts_.escalation_limit) {
                return Cmp::Ambiguous;
            }
            prec *= 2;
        }
    }

    std::optional<bool> test(const std::vector<int> &prefix, int k) const
    {
        switch (above(with_digit(prefix, k))) {
        case Cmp::Above:
            return true;
        case Cmp::NotAbove:
            return false;
        case Cmp::Ambiguous:
            break;
        }
        // Closed top: x equal to zeta-star(prefix, k) belongs to the subtree
        // (prefix, k+1) whose {1}^inf maximum attains it.
        if (opts_.boundary == BoundaryPolicy::AssumeEqual) {
            return false;
        }
        return std::nullopt;
    }

    // Smallest k with zeta-star(prefix, k) < x; the values decrease in k.
    std::optional<int> next_digit(const std::vector<int> &prefix) const
    {
        int lo = prefix.empty() ? 1 : 0; // largest k known to fail
        int hi = lo + 1;
        for (;;) {
            const std::optional<bool> t = test(prefix, hi);
            if (!t) {
                return std::nullopt;
            }
            if (*t) {
                break;
            }
            lo = hi;
            if (hi > INT_MAX / 2) {
                raise(ErrorKind::PrecisionInsufficient, "digit search does not terminate");
            }
            hi *= 2;
        }
        while (hi - lo > 1) {
            const int mid = lo + (hi - lo) / 2;
            const std::optional<bool> t = test(prefix, mid);
            if (!t) {
                return std::nullopt;
            }
            (*t ? hi : lo) = mid;
        }
        return hi;
    }

    void detect_tail(ExpansionResult &res) const
    {
        const std::vector<int> &d = res.digits;
        if (d.size() < 3) {
            return;
        }
        const int q = d.back();
        if (d[d.size() - 2] != q || d[d.size() - 3] != q) {
            return;
        }
        std::vector<int> prefix = d;
        while (prefix.size() > 1 && prefix.back() == q) {
            prefix.pop_back();
        }
        const Composition c = make_composition(prefix);
        if (is_divergent(c, q)) {
            return;
        }
        const Enclosure v = eval_with_const_tail(c, q, eval_options(opts_.precision));
        if (overlaps(v, x_.at(opts_.precision))) {
            res.status = ExpansionStatus::Exact;
            res.tail = q;
        }
    }

    const Target &x_;
    ExpandOptions opts_;
};

} // namespace

SubtreeBounds subtree_bounds(std::span<const int> prefix, int k, const EvalOptions &opts)
{
    const Composition c = make_composition(with_digit(prefix, k));
    return SubtreeBounds{eval_finite(c, opts), eval(with_const_tail(c, 1), opts)};
}

ExpansionResult expand(const mpq_class &x, std::size_t depth, const ExpandOptions &opts)
{
    const Target t(x);
    return Expander(t, opts).run(depth);
}

ExpansionResult expand(const Enclosure &x, std::size_t depth, const ExpandOptions &opts)
{
    const Target t(x);
    return Expander(t, opts).run(depth);
}

std::string to_string(ExpansionStatus s)
{
    switch (s) {
    case ExpansionStatus::Exact:
        return "Exact";
    case ExpansionStatus::Truncated:
        return "Truncated";
    case ExpansionStatus::BoundaryAmbiguous:
        return "BoundaryAmbiguous";
    }
    return "?";
}

} // namespace zstar
