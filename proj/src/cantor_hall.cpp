#include <zstar/binary_tau.hpp>
#include <zstar/cantor_hall.hpp>
#include <zstar/error.hpp>

#include <algorithm>
#include <sstream>

namespace zstar
{

namespace
{

std::string join(std::span<const int> d)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < d.size(); ++i) {
        os << (i ? "," : "") << d[i];
    }
    return os.str();
}

std::vector<int> with_digit(std::span<const int> prefix, int k)
{
    std::vector<int> d(prefix.begin(), prefix.end());
    d.push_back(k);
    return d;
}

mpq_class pow2_neg(long e)
{
    mpq_class r = 1;
    mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), static_cast<mp_bitcnt_t>(e));
    return r;
}

long digit_sum(std::span<const int> d)
{
    long s = 0;
    for (const int k : d) {
        s += k;
    }
    return s;
}

bool bounded_above(FamilyKind k)
{
    return k == FamilyKind::EtaDq || k == FamilyKind::TauBk;
}

bool is_eta(FamilyKind k)
{
    return k == FamilyKind::EtaDq || k == FamilyKind::EtaTpClosure;
}

void validate(const SubdivisionNode &n)
{
    const int b = n.family.param;
    const auto &p = n.prefix;
    if (std::any_of(p.begin(), p.end(), [](int k) { return k < 1; })) {
        raise(ErrorKind::InvalidNode, "prefix digits must be positive");
    }
    if (bounded_above(n.family.kind)) {
        if (n.type < 1 || n.type > b - 1) {
            raise(ErrorKind::InvalidNode, "node type must lie in [1, bound-1]");
        }
    } else if (n.type < b) {
        raise(ErrorKind::InvalidNode, "node type must be at least the lower digit bound");
    }
    if (is_eta(n.family.kind) && (p.empty() ? n.type : p.front()) < 2) {
        raise(ErrorKind::InvalidNode, "eta sequences start with a digit >= 2");
    }
}

} // namespace

std::string Family::to_string() const
{
    switch (kind) {
    case FamilyKind::EtaDq:
        return "EtaDq(" + std::to_string(param) + ")";
    case FamilyKind::TauBk:
        return "TauBk(" + std::to_string(param) + ")";
    case FamilyKind::EtaTpClosure:
        return "EtaTpClosure(" + std::to_string(param) + ")";
    case FamilyKind::TauLpClosure:
        return "TauLpClosure(" + std::to_string(param) + ")";
    }
    return "?";
}

Family make_family(FamilyKind kind, int param)
{
    if (param < 2) {
        raise(ErrorKind::InvalidNode, "family parameter must be at least 2");
    }
    return Family{kind, param};
}

std::string SubdivisionNode::to_string() const
{
    return family.to_string() + ":T_" + std::to_string(type) + "(" + join(prefix) + ")";
}

SubdivisionNode root_node(const Family &f)
{
    switch (f.kind) {
    case FamilyKind::EtaDq:
        // first entry in [2, q]; for q = 2 it is forced
        return f.param == 2 ? SubdivisionNode{f, {2}, 1} : SubdivisionNode{f, {}, 2};
    case FamilyKind::TauBk:
        return SubdivisionNode{f, {}, 1};
    case FamilyKind::EtaTpClosure:
    case FamilyKind::TauLpClosure:
        return SubdivisionNode{f, {}, f.param};
    }
    raise(ErrorKind::InvalidNode, "unknown family");
}

Subdivision subdivide(const SubdivisionNode &n)
{
    validate(n);
    const Family &f = n.family;
    if (bounded_above(f.kind)) {
        SubdivisionNode fixed{f, with_digit(n.prefix, n.type), 1};
        SubdivisionNode rest{f, n.prefix, n.type + 1};
        if (rest.type == f.param) {
            // T_bound(prefix) is T_1(prefix, bound)
            rest.prefix.push_back(f.param);
            rest.type = 1;
        }
        return {std::move(fixed), std::move(rest)};
    }
    return {SubdivisionNode{f, with_digit(n.prefix, n.type), f.param}, SubdivisionNode{f, n.prefix, n.type + 1}};
}

NodeEvaluator::NodeEvaluator(Family family, HallOptions opts) : family_(family), opts_(opts) {}

Enclosure NodeEvaluator::cached(const std::string &key, auto &&compute)
{
    if (const auto it = cache_.find(key); it != cache_.end()) {
        return it->second;
    }
    Enclosure v = compute();
    cache_.emplace(key, v);
    return v;
}

mpq_class NodeEvaluator::low_exact(const SubdivisionNode &n) const
{
    validate(n);
    if (n.family.kind == FamilyKind::TauBk) {
        return tau_node_interval(n.prefix, n.type, n.family.param).low;
    }
    if (n.family.kind == FamilyKind::TauLpClosure) {
        return tau_prefix_value(n.prefix);
    }
    raise(ErrorKind::InvalidNode, "exact endpoints exist only for tau families");
}

mpq_class NodeEvaluator::high_exact(const SubdivisionNode &n) const
{
    validate(n);
    if (n.family.kind == FamilyKind::TauBk) {
        return tau_node_interval(n.prefix, n.type, n.family.param).high;
    }
    if (n.family.kind == FamilyKind::TauLpClosure) {
        // tau(prefix, i, {p}^inf) = tau(prefix) + 2^{-|prefix| - i} 2^p / (2^p - 1)
        const int p = n.family.param;
        mpz_class d;
        mpz_ui_pow_ui(d.get_mpz_t(), 2, static_cast<unsigned long>(p));
        mpq_class r = tau_prefix_value(n.prefix) + pow2_neg(digit_sum(n.prefix) + n.type) * mpq_class(d, d - 1);
        r.canonicalize();
        return r;
    }
    raise(ErrorKind::InvalidNode, "exact endpoints exist only for tau families");
}

Enclosure NodeEvaluator::low(const SubdivisionNode &n)
{
    validate(n);
    if (family_.exact()) {
        return Enclosure::exact(low_exact(n), opts_.precision);
    }
    const EvalOptions eo{opts_.precision, opts_.truncation};
    const int b = family_.param;
    if (family_.kind == FamilyKind::EtaDq) {
        return cached("L" + join(n.prefix), [&] {
            return eval_with_const_tail(make_composition(n.prefix.empty() ? std::vector<int>{b} : n.prefix), b, eo);
        });
    }
    if (n.prefix.empty()) {
        return Enclosure::exact(1, opts_.precision);
    }
    return cached("L" + join(n.prefix), [&] { return eval_finite(make_composition(n.prefix), eo); });
}

Enclosure NodeEvaluator::high(const SubdivisionNode &n)
{
    validate(n);
    if (family_.exact()) {
        return Enclosure::exact(high_exact(n), opts_.precision);
    }
    const EvalOptions eo{opts_.precision, opts_.truncation};
    const std::vector<int> d = with_digit(n.prefix, n.type);
    const int q = family_.kind == FamilyKind::EtaDq ? 1 : family_.param;
    return cached("H" + join(d), [&] {
        const Composition c = make_composition(d);
        if (is_divergent(c, q)) {
            return Enclosure::positive_infinity(opts_.precision);
        }
        return eval_with_const_tail(c, q, eo);
    });
}

Enclosure NodeEvaluator::length(const SubdivisionNode &n)
{
    return high(n) - low(n);
}

std::pair<Enclosure, Enclosure> node_endpoints(const SubdivisionNode &n, const HallOptions &opts)
{
    NodeEvaluator ev(n.family, opts);
    return {ev.low(n), ev.high(n)};
}

SubdivisionReport subdivide_with_gap(NodeEvaluator &ev, const SubdivisionNode &n)
{
    Subdivision s = subdivide(n);
    Enclosure lo = ev.high(s.rest);
    Enclosure hi = ev.low(s.fixed);
    return SubdivisionReport{std::move(s), std::move(lo), std::move(hi)};
}

namespace
{

class HallSweep
{
public:
    HallSweep(const Family &f, const HallOptions &opts) : ev_(f, opts) {}

    HallReport run(int max_depth)
    {
        visit(root_node(ev_.family()), max_depth);
        return std::move(report_);
    }

private:
    void visit(const SubdivisionNode &n, int depth)
    {
        if (depth == 0) {
            return;
        }
        const Subdivision s = subdivide(n);
        ++report_.nodes_checked;
        if (ev_.family().exact()) {
            check_exact(n, s);
        } else {
            check(n, s);
        }
        visit(s.fixed, depth - 1);
        visit(s.rest, depth - 1);
    }

    void check_exact(const SubdivisionNode &n, const Subdivision &s)
    {
        const mpq_class gap = ev_.low_exact(s.fixed) - ev_.high_exact(s.rest);
        const mpq_class shorter = std::min(mpq_class(ev_.high_exact(s.fixed) - ev_.low_exact(s.fixed)),
                                           mpq_class(ev_.high_exact(s.rest) - ev_.low_exact(s.rest)));
        const mpq_class margin = shorter - gap;
        const mpq_class ratio = gap / shorter;
        if (!report_.worst_margin_exact || margin < *report_.worst_margin_exact) {
            report_.worst_margin_exact = margin;
        }
        if (!report_.worst_ratio_exact || ratio > *report_.worst_ratio_exact) {
            report_.worst_ratio_exact = ratio;
        }
        const mpfr_prec_t prec = ev_.options().precision;
        const Enclosure g = Enclosure::exact(gap, prec), sh = Enclosure::exact(shorter, prec);
        note(Enclosure::exact(margin, prec), g / sh);
        if (margin < 0) {
            report_.violations.push_back({n, g, sh});
        }
    }

    void check(const SubdivisionNode &n, const Subdivision &s)
    {
        const Enclosure gap = ev_.low(s.fixed) - ev_.high(s.rest);
        std::optional<Enclosure> shorter;
        bool failed = false, undecided = false;
        for (const SubdivisionNode *c : {&s.fixed, &s.rest}) {
            const Enclosure len = ev_.length(*c);
            if (len.upper_infinite()) {
                ++report_.comparisons_skipped;
                continue;
            }
            if (!shorter || len.mid() < shorter->mid()) {
                shorter = len;
            }
            if (certainly_greater(gap, len)) {
                failed = true;
            } else if (!certainly_less(gap, len) && !certainly_less(len, gap)) {
                // equal up to rounding: accepted only if the difference encloses zero tightly
                undecided = undecided || !(abs(len - gap).upper() <= tolerance());
            }
        }
        if (!shorter) {
            return;
        }
        note(*shorter - gap, gap / *shorter);
        if (failed) {
            report_.violations.push_back({n, gap, *shorter});
        } else if (undecided) {
            raise(ErrorKind::PrecisionInsufficient, "Hall comparison undecidable at " + n.to_string());
        }
    }

    BigFloat tolerance() const
    {
        const mpfr_prec_t prec = ev_.options().precision;
        BigFloat t(prec);
        mpfr_set_ui_2exp(t.get(), 1, -static_cast<long>(prec) / 2, MPFR_RNDN);
        return t;
    }

    void note(const Enclosure &margin, const Enclosure &ratio)
    {
        if (!report_.worst_margin || margin.mid() < report_.worst_margin->mid()) {
            report_.worst_margin = margin;
        }
        if (!report_.worst_ratio || ratio.mid() > report_.worst_ratio->mid()) {
            report_.worst_ratio = ratio;
        }
    }

    NodeEvaluator ev_;
    HallReport report_;
};

} // namespace

HallReport check_hall_condition(const Family &family, int max_depth, const HallOptions &opts)
{
    if (max_depth < 1) {
        raise(ErrorKind::InvalidNode, "max_depth must be at least 1");
    }
    return HallSweep(family, opts).run(max_depth);
}

} // namespace zstar
