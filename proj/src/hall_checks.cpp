#include <zstar/cantor_hall.hpp>
#include <zstar/error.hpp>

#include <algorithm>
#include <optional>

namespace zstar
{

std::string to_string(Operation op)
{
    switch (op) {
    case Operation::Sum:
        return "sum";
    case Operation::Product:
        return "product";
    case Operation::Difference:
        return "difference";
    case Operation::Quotient:
        return "quotient";
    }
    return "?";
}

namespace
{

enum class LastWeight { One, Harmonic }; // Harmonic: 2n/(n+1)

// sum over N >= n_1 >= ... >= n_r >= n_{r+1} >= 1 of
// prod n_j^{-k_j} * n_{r+1}^{-e} * w(n_{r+1}), every operation rounded by rnd.
BigFloat truncated_sum(std::span<const int> prefix, int e, LastWeight w, unsigned long n_max, mpfr_prec_t prec, mpfr_rnd_t rnd)
{
    std::vector<BigFloat> acc(prefix.size() + 1, BigFloat(prec, 0));
    BigFloat t(prec), n(prec);
    for (unsigned long m = 1; m <= n_max; ++m) {
        mpfr_set_ui(n.get(), m, MPFR_RNDN);
        mpfr_pow_si(t.get(), n.get(), -e, rnd);
        if (w == LastWeight::Harmonic) {
            mpfr_mul_ui(t.get(), t.get(), 2 * m, rnd);
            mpfr_div_ui(t.get(), t.get(), m + 1, rnd);
        }
        mpfr_add(acc.back().get(), acc.back().get(), t.get(), rnd);
        for (std::size_t j = prefix.size(); j-- > 0;) {
            mpfr_pow_si(t.get(), n.get(), -prefix[j], rnd);
            mpfr_mul(t.get(), t.get(), acc[j + 1].get(), rnd);
            mpfr_add(acc[j].get(), acc[j].get(), t.get(), rnd);
        }
    }
    return acc.front();
}

Enclosure truncated_enclosure(std::span<const int> prefix, int e, LastWeight w, unsigned long n_max, mpfr_prec_t prec)
{
    return Enclosure::from_bounds(truncated_sum(prefix, e, w, n_max, prec, MPFR_RNDD), truncated_sum(prefix, e, w, n_max, prec, MPFR_RNDU), prec);
}

void check_sample(int q, std::span<const int> prefix)
{
    const bool admissible = !prefix.empty() && prefix.front() >= 2 &&
                            std::all_of(prefix.begin(), prefix.end(), [&](int k) { return k >= 1 && k <= q; });
    const bool chain = !prefix.empty() && prefix.front() == 2 && std::all_of(prefix.begin() + 1, prefix.end(), [](int k) { return k == 1; });
    if (!admissible || chain) {
        raise(ErrorKind::InvalidNode, "sample prefix must satisfy 2 <= k_1 <= q, k_j <= q, and differ from (2,{1}^j)");
    }
}

} // namespace

bool InequalityReport::passed() const
{
    return a_violations.empty() && f_bound_violations.empty() &&
           std::all_of(samples.begin(), samples.end(), [](const PrefixInequalityCheck &c) { return c.c_holds && c.d_holds; });
}

InequalityReport verify_inequalities(int q, unsigned long m_max, const std::vector<std::vector<int>> &sample_prefixes,
                                     const InequalityOptions &opts)
{
    if (q < 2) {
        raise(ErrorKind::InvalidNode, "q must be at least 2");
    }
    for (const auto &p : sample_prefixes) {
        check_sample(q, p);
    }
    InequalityReport r;
    r.q = q;
    r.m_max = m_max;

    // F_m(q) = num / den with num = prod n^q, den = prod (n^q - 1), kept unreduced
    mpz_class num = 1, den = 1, nq;
    for (unsigned long m = 1; m <= m_max; ++m) {
        if (m >= 2) {
            mpz_ui_pow_ui(nq.get_mpz_t(), m, static_cast<unsigned long>(q));
            num *= nq;
            den *= nq - 1;
        }
        const int a = cmp(2 * num, mpz_class(m + 1) * den);
        if (a > 0) {
            r.a_violations.push_back(m);
        } else if (a == 0) {
            r.a_equalities.push_back(m);
        }
        if (num * (m + 1) > mpz_class(2 * m) * den) {
            r.f_bound_violations.push_back(m);
        }
    }

    const mpfr_prec_t prec = opts.precision;
    const unsigned long n_max = opts.outer_truncation;
    for (const auto &p : sample_prefixes) {
        const Enclosure wq = truncated_enclosure(p, q, LastWeight::Harmonic, n_max, prec);
        for (int i = 1; i <= q - 1; ++i) {
            PrefixInequalityCheck c;
            c.prefix = p;
            c.i = i;
            const Enclosure wi = truncated_enclosure(p, i, LastWeight::Harmonic, n_max, prec);
            const Enclosure si = truncated_enclosure(p, i, LastWeight::One, n_max, prec);
            const Enclosure sim1 = truncated_enclosure(p, i - 1, LastWeight::One, n_max, prec);
            c.c_lhs = wi * wi;
            c.c_rhs = sim1 * si;
            c.d_lhs = wi * wq;
            c.d_rhs = si * si;
            c.c_holds = c.c_lhs.upper() <= c.c_rhs.lower();
            c.d_holds = c.d_lhs.upper() <= c.d_rhs.lower();
            r.samples.push_back(std::move(c));
        }
    }
    return r;
}

namespace
{

Enclosure apply(Operation op, const Enclosure &a, const Enclosure &b)
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

// Combination of two positive intervals: the extremes sit at the corners.
StageInterval combine(Operation op, const StageInterval &a, const StageInterval &b)
{
    const bool monotone_b = op == Operation::Sum || op == Operation::Product;
    const std::string sym = op == Operation::Sum ? "+" : op == Operation::Product ? "*" : op == Operation::Difference ? "-" : "/";
    return StageInterval{a.label + sym + b.label, apply(op, a.low, monotone_b ? b.low : b.high),
                         apply(op, a.high, monotone_b ? b.high : b.low)};
}

bool certified_apart(const Enclosure &lo, const Enclosure &hi)
{
    BigFloat need(lo.precision());
    mpfr_add(need.get(), lo.rad().get(), hi.rad().get(), MPFR_RNDU);
    mpfr_mul_2ui(need.get(), need.get(), 1, MPFR_RNDU);
    return separation(lo, hi) >= need;
}

OperationGaps gaps_of(Operation op, const std::vector<StageInterval> &stage)
{
    OperationGaps g{op, {}, {}};
    for (const auto &a : stage) {
        for (const auto &b : stage) {
            g.pieces.push_back(combine(op, a, b));
        }
    }
    std::stable_sort(g.pieces.begin(), g.pieces.end(), [](const auto &l, const auto &r) { return l.low.mid() < r.low.mid(); });
    const StageInterval *reach = &g.pieces.front();
    for (const auto &piece : g.pieces) {
        if (certified_apart(reach->high, piece.low)) {
            g.gaps.push_back({reach->high, piece.low});
        }
        if (piece.high.mid() > reach->high.mid()) {
            reach = &piece;
        }
    }
    return g;
}

void collect_stage(NodeEvaluator &ev, const SubdivisionNode &n, int depth, const std::string &label, std::vector<StageInterval> &out)
{
    if (depth == 0) {
        out.push_back({label, ev.low(n), ev.high(n)});
        return;
    }
    const Subdivision s = subdivide(n);
    collect_stage(ev, s.rest, depth - 1, label + "1", out);
    collect_stage(ev, s.fixed, depth - 1, label + "2", out);
}

} // namespace

const OperationGaps &GapReport::of(Operation op) const
{
    for (const auto &o : operations) {
        if (o.op == op) {
            return o;
        }
    }
    raise(ErrorKind::InvalidNode, "operation missing from gap report");
}

GapReport theorem12_gaps(int p, const HallOptions &opts, int depth)
{
    if (depth < 1) {
        raise(ErrorKind::InvalidNode, "depth must be at least 1");
    }
    const Family f = make_family(FamilyKind::EtaTpClosure, p);
    NodeEvaluator ev(f, opts);
    GapReport r;
    r.p = p;
    r.depth = depth;
    collect_stage(ev, root_node(f), depth, "U", r.stage);
    for (const Operation op : {Operation::Sum, Operation::Product, Operation::Difference, Operation::Quotient}) {
        r.operations.push_back(gaps_of(op, r.stage));
    }
    if (p > 2) {
        r.containment_note = "closure of eta(T_" + std::to_string(p) + ") lies inside closure of eta(T_2)";
    }
    for (const auto &o : r.operations) {
        for (const auto &g : o.gaps) {
            if (!certainly_less(g.low, g.high)) {
                raise(ErrorKind::PrecisionInsufficient, "gap endpoints not separated");
            }
        }
    }
    return r;
}

namespace
{

// Gap and bridge bookkeeping over exact (mpq) or enclosed endpoints.
template <typename V>
struct GapSweep {
    struct Gap {
        V low, high, length;
    };

    static bool less(const mpq_class &a, const mpq_class &b)
    {
        return a < b;
    }
    static bool less(const Enclosure &a, const Enclosure &b)
    {
        return a.mid() < b.mid();
    }

    // For every gap, the bridges run to the nearest gap at least as long on
    // each side, or to the ends of the set.
    static V min_ratio(std::vector<Gap> gaps, const V &lo, const V &hi)
    {
        std::sort(gaps.begin(), gaps.end(), [](const Gap &a, const Gap &b) { return less(a.low, b.low); });
        const std::size_t n = gaps.size();
        std::vector<V> left(n, lo), right(n, hi);
        std::vector<std::size_t> stack;
        for (std::size_t i = 0; i < n; ++i) {
            while (!stack.empty() && less(gaps[stack.back()].length, gaps[i].length)) {
                stack.pop_back();
            }
            if (!stack.empty()) {
                left[i] = gaps[stack.back()].high;
            }
            stack.push_back(i);
        }
        stack.clear();
        for (std::size_t i = n; i-- > 0;) {
            while (!stack.empty() && less(gaps[stack.back()].length, gaps[i].length)) {
                stack.pop_back();
            }
            if (!stack.empty()) {
                right[i] = gaps[stack.back()].low;
            }
            stack.push_back(i);
        }
        std::optional<V> best;
        for (std::size_t i = 0; i < n; ++i) {
            const V l = gaps[i].low - left[i], r = right[i] - gaps[i].high;
            const V bridge = less(l, r) ? l : r;
            V ratio = bridge / gaps[i].length;
            if (!best || less(ratio, *best)) {
                best = std::move(ratio);
            }
        }
        if (!best) {
            raise(ErrorKind::InvalidNode, "no gaps at this depth");
        }
        return *best;
    }
};

void collect_gaps(NodeEvaluator &ev, const SubdivisionNode &n, int depth, std::vector<GapSweep<mpq_class>::Gap> &out)
{
    if (depth == 0) {
        return;
    }
    const Subdivision s = subdivide(n);
    const mpq_class lo = ev.high_exact(s.rest), hi = ev.low_exact(s.fixed);
    out.push_back({lo, hi, hi - lo});
    collect_gaps(ev, s.fixed, depth - 1, out);
    collect_gaps(ev, s.rest, depth - 1, out);
}

void collect_gaps(NodeEvaluator &ev, const SubdivisionNode &n, int depth, std::vector<GapSweep<Enclosure>::Gap> &out)
{
    if (depth == 0) {
        return;
    }
    const SubdivisionReport s = subdivide_with_gap(ev, n);
    out.push_back({s.gap_low, s.gap_high, s.gap_high - s.gap_low});
    collect_gaps(ev, s.children.fixed, depth - 1, out);
    collect_gaps(ev, s.children.rest, depth - 1, out);
}

} // namespace

Enclosure thickness(const Family &family, int depth, const HallOptions &opts)
{
    if (family.kind == FamilyKind::EtaDq) {
        raise(ErrorKind::UnboundedFamily, "eta(D_q) is unbounded above");
    }
    if (depth < 1) {
        raise(ErrorKind::InvalidNode, "depth must be at least 1");
    }
    NodeEvaluator ev(family, opts);
    const SubdivisionNode root = root_node(family);
    if (family.exact()) {
        std::vector<GapSweep<mpq_class>::Gap> gaps;
        collect_gaps(ev, root, depth, gaps);
        return Enclosure::exact(GapSweep<mpq_class>::min_ratio(std::move(gaps), ev.low_exact(root), ev.high_exact(root)), opts.precision);
    }
    std::vector<GapSweep<Enclosure>::Gap> gaps;
    collect_gaps(ev, root, depth, gaps);
    return GapSweep<Enclosure>::min_ratio(std::move(gaps), ev.low(root), ev.high(root));
}

} // namespace zstar
