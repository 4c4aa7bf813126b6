#include <zstar/cantor_hall.hpp>
#include <zstar/error.hpp>
#include <zstar/explorer.hpp>

#include <algorithm>

namespace zstar
{

namespace
{

// Sign of x^{p-1}(x-1) - 1: +1, -1, or 0 when rounding cannot tell.
int alpha_sign(const BigFloat &x, int p, mpfr_prec_t wp)
{
    BigFloat lo(wp), hi(wp), t(wp);
    mpfr_pow_ui(lo.get(), x.get(), static_cast<unsigned long>(p - 1), MPFR_RNDD);
    mpfr_pow_ui(hi.get(), x.get(), static_cast<unsigned long>(p - 1), MPFR_RNDU);
    mpfr_sub_ui(t.get(), x.get(), 1, MPFR_RNDD);
    mpfr_mul(lo.get(), lo.get(), t.get(), MPFR_RNDD);
    mpfr_sub_ui(t.get(), x.get(), 1, MPFR_RNDU);
    mpfr_mul(hi.get(), hi.get(), t.get(), MPFR_RNDU);
    if (mpfr_cmp_ui(lo.get(), 1) > 0) {
        return 1;
    }
    if (mpfr_cmp_ui(hi.get(), 1) < 0) {
        return -1;
    }
    return 0;
}

Enclosure enc_min(const Enclosure &a, const Enclosure &b)
{
    if (a.upper_infinite()) {
        return b;
    }
    if (b.upper_infinite()) {
        return a;
    }
    const mpfr_prec_t prec = std::max(a.precision(), b.precision());
    return Enclosure::from_bounds(std::min(a.lower(), b.lower()), std::min(a.upper(), b.upper()), prec);
}

Enclosure enc_max(const Enclosure &a, const Enclosure &b)
{
    const mpfr_prec_t prec = std::max(a.precision(), b.precision());
    return Enclosure::from_bounds(std::max(a.lower(), b.lower()), std::max(a.upper(), b.upper()), prec);
}

} // namespace

Enclosure alpha_root(int p, mpfr_prec_t precision)
{
    if (p < 2) {
        raise(ErrorKind::InvalidNode, "p must be at least 2");
    }
    const mpfr_prec_t wp = precision + 64;
    // f(1) = -1 < 0 < 1 = f(2); f is increasing on (1, 2)
    BigFloat lo(wp, 1), hi(wp, 2), mid(wp), eps(wp);
    mpfr_set_ui_2exp(eps.get(), 1, -static_cast<long>(precision) - 8, MPFR_RNDN);
    BigFloat width(wp);
    for (;;) {
        mpfr_sub(width.get(), hi.get(), lo.get(), MPFR_RNDU);
        if (mpfr_cmp(width.get(), eps.get()) <= 0) {
            break;
        }
        mpfr_add(mid.get(), lo.get(), hi.get(), MPFR_RNDN);
        mpfr_div_2ui(mid.get(), mid.get(), 1, MPFR_RNDN);
        const int s = alpha_sign(mid, p, wp);
        if (s > 0) {
            hi = mid;
        } else if (s < 0) {
            lo = mid;
        } else {
            // mid is within rounding of the root; bracket it by +-eps
            BigFloat a(wp), b(wp);
            mpfr_sub(a.get(), mid.get(), eps.get(), MPFR_RNDD);
            mpfr_add(b.get(), mid.get(), eps.get(), MPFR_RNDU);
            if (alpha_sign(a, p, wp) >= 0 || alpha_sign(b, p, wp) <= 0) {
                raise(ErrorKind::PrecisionInsufficient, "alpha bracket could not be certified");
            }
            lo = a;
            hi = b;
            break;
        }
    }
    return Enclosure::from_bounds(lo, hi, precision);
}

BoxCount box_count(int p, unsigned long n)
{
    if (p < 2 || n < 1) {
        raise(ErrorKind::InvalidNode, "box_count needs p >= 2 and n >= 1");
    }
    std::vector<mpz_class> a(n + 1);
    for (unsigned long i = 0; i <= n; ++i) {
        a[i] = i < static_cast<unsigned long>(p) ? mpz_class(i + 1) : mpz_class(a[i - 1] + a[i - p]);
    }
    BoxCount r;
    r.p = p;
    r.n = n;
    r.count = a[n];
    r.previous = a[n - 1];
    BigFloat x(128), y(128);
    mpfr_set_z(x.get(), r.count.get_mpz_t(), MPFR_RNDN);
    mpfr_set_z(y.get(), r.previous.get_mpz_t(), MPFR_RNDN);
    mpfr_div(x.get(), x.get(), y.get(), MPFR_RNDN);
    mpfr_log2(x.get(), x.get(), MPFR_RNDN);
    r.growth = x.to_double();
    return r;
}

DimensionRecord dimension_formula(int p, mpfr_prec_t precision, unsigned long box_depth)
{
    DimensionRecord r;
    r.p = p;
    r.alpha = alpha_root(p, precision);
    r.dim = log(r.alpha) / log(Enclosure::exact(2, precision));
    r.depth = box_depth;
    r.empirical_dim = box_count(p, box_depth).growth;
    return r;
}

namespace
{

void cover(NodeEvaluator &ev, const SubdivisionNode &n, int depth, const Enclosure &w0, const Enclosure &w1, Enclosure &total)
{
    const Enclosure lo = ev.low(n);
    if (!certainly_less(lo, w1)) {
        return; // at or beyond the window's right end
    }
    if (depth > 0) {
        const Subdivision s = subdivide(n);
        cover(ev, s.fixed, depth - 1, w0, w1, total);
        cover(ev, s.rest, depth - 1, w0, w1, total);
        return;
    }
    const Enclosure len = enc_min(ev.high(n), w1) - enc_max(lo, w0);
    total = total + enc_max(len, Enclosure::exact(0, len.precision()));
}

} // namespace

Enclosure covering_length(int q, int depth, const CoveringOptions &opts)
{
    if (depth < 0 || opts.window < 1) {
        raise(ErrorKind::InvalidNode, "covering_length needs depth >= 0 and window >= 1");
    }
    const Family f = make_family(FamilyKind::EtaDq, q);
    NodeEvaluator ev(f, HallOptions{opts.precision, opts.truncation});
    const SubdivisionNode root = root_node(f);
    std::vector<int> chain(static_cast<std::size_t>(opts.window) + 1, 1); // (2,{1}^window)
    chain.front() = 2;
    const Enclosure w1 = eval_finite(make_composition(chain), EvalOptions{opts.precision, opts.truncation});
    Enclosure total = Enclosure::exact(0, opts.precision);
    cover(ev, root, depth, ev.low(root), w1, total);
    return total;
}

std::string to_string(CandidateStatus s)
{
    switch (s) {
    case CandidateStatus::EliminatedAtDigit:
        return "EliminatedAtDigit";
    case CandidateStatus::SurvivorToDepth:
        return "SurvivorToDepth";
    case CandidateStatus::BoundaryAmbiguous:
        return "BoundaryAmbiguous";
    }
    return "?";
}

namespace
{

using Poly = std::vector<mpq_class>; // constant term first, no trailing zeros

void trim(Poly &f)
{
    while (!f.empty() && f.back() == 0) {
        f.pop_back();
    }
}

mpq_class at(const Poly &f, const mpq_class &x)
{
    mpq_class v = 0;
    for (std::size_t i = f.size(); i-- > 0;) {
        v = v * x + f[i];
    }
    return v;
}

int sign_at(const Poly &f, const mpq_class &x)
{
    return sgn(at(f, x));
}

Poly derivative(const Poly &f)
{
    Poly d;
    for (std::size_t i = 1; i < f.size(); ++i) {
        d.push_back(f[i] * static_cast<long>(i));
    }
    trim(d);
    return d;
}

// Quotient and remainder of f by g (g nonzero).
std::pair<Poly, Poly> divide(Poly f, const Poly &g)
{
    Poly q(f.size() >= g.size() ? f.size() - g.size() + 1 : 0);
    while (f.size() >= g.size() && !f.empty()) {
        const std::size_t shift = f.size() - g.size();
        const mpq_class c = f.back() / g.back();
        q[shift] = c;
        for (std::size_t i = 0; i < g.size(); ++i) {
            f[shift + i] -= c * g[i];
        }
        f.pop_back();
        trim(f);
    }
    return {q, f};
}

Poly gcd(Poly a, Poly b)
{
    while (!b.empty()) {
        Poly r = divide(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

class Sturm
{
public:
    explicit Sturm(const Poly &f)
    {
        chain_.push_back(f);
        chain_.push_back(derivative(f));
        while (chain_.back().size() > 1) {
            Poly r = divide(chain_[chain_.size() - 2], chain_.back()).second;
            if (r.empty()) {
                break;
            }
            for (auto &c : r) {
                c = -c;
            }
            chain_.push_back(std::move(r));
        }
    }

    // distinct roots in (a, b] for squarefree f with f(a) != 0
    int count(const mpq_class &a, const mpq_class &b) const
    {
        return changes(a) - changes(b);
    }

private:
    int changes(const mpq_class &x) const
    {
        int n = 0, last = 0;
        for (const auto &p : chain_) {
            const int s = sign_at(p, x);
            if (s != 0) {
                n += last != 0 && s != last ? 1 : 0;
                last = s;
            }
        }
        return n;
    }

    std::vector<Poly> chain_;
};

struct Root {
    std::optional<mpq_class> exact;
    mpq_class lo, hi;
};

// Roots of squarefree f in (a, b], refined to width below 2^{-bits}.
void isolate(const Poly &f, const Sturm &st, const mpq_class &a, const mpq_class &b, long bits, std::vector<Root> &out)
{
    const int n = st.count(a, b);
    if (n == 0) {
        return;
    }
    const mpq_class width_limit(1, mpz_class(1) << static_cast<mp_bitcnt_t>(bits));
    if (n == 1) {
        if (sign_at(f, b) == 0) {
            out.push_back({b, b, b});
            return;
        }
        mpq_class lo = a, hi = b;
        const int sl = sign_at(f, lo);
        while (hi - lo > width_limit) {
            mpq_class mid = (lo + hi) / 2;
            const int sm = sign_at(f, mid);
            if (sm == 0) {
                out.push_back({mid, mid, mid});
                return;
            }
            (sm == sl ? lo : hi) = mid;
        }
        out.push_back({std::nullopt, lo, hi});
        return;
    }
    mpq_class mid = (a + b) / 2;
    isolate(f, st, a, mid, bits, out);
    if (sign_at(f, mid) == 0) {
        // (mid, b] has to start away from a root
        mid += width_limit / 4;
        if (sign_at(f, mid) == 0 || st.count(mid - width_limit / 4, mid) != 0) {
            raise(ErrorKind::PrecisionInsufficient, "root isolation failed");
        }
    }
    isolate(f, st, mid, b, bits, out);
}

bool next_poly(std::vector<long> &c, long h)
{
    for (auto &x : c) {
        if (x < h) {
            ++x;
            return true;
        }
        x = -h;
    }
    return false;
}

} // namespace

std::vector<AlgebraicCandidate> search_algebraic(const SearchOptions &opts)
{
    if (opts.max_degree < 1 || opts.max_height < 1 || opts.expand_depth < 1 || opts.q < 2) {
        raise(ErrorKind::InvalidNode, "search parameters must be positive");
    }
    const mpfr_prec_t prec = opts.precision;
    std::vector<int> chain(opts.expand_depth + 1, 1);
    chain.front() = 2;
    const Enclosure upper = eval_finite(make_composition(chain), EvalOptions{prec, 256});
    const mpq_class b = upper.lower().to_mpq();

    std::vector<AlgebraicCandidate> found;
    for (int deg = 1; deg <= opts.max_degree; ++deg) {
        std::vector<long> c(static_cast<std::size_t>(deg) + 1, -opts.max_height);
        do {
            if (c.back() <= 0) {
                continue;
            }
            Poly f;
            for (const long x : c) {
                f.emplace_back(x);
            }
            // squarefree part, with a root at 1 divided out
            Poly g = gcd(f, derivative(f));
            if (g.size() > 1) {
                f = divide(f, g).first;
            }
            while (sign_at(f, 1) == 0) {
                f = divide(f, Poly{-1, 1}).first;
            }
            if (f.size() < 2) {
                continue;
            }
            std::vector<Root> roots;
            if (f.size() == 2) {
                const mpq_class r = -f[0] / f[1];
                if (r > 1 && r <= b) {
                    roots.push_back({r, r, r});
                }
            } else {
                isolate(f, Sturm(f), 1, b, prec + 8, roots);
            }
            for (const Root &r : roots) {
                const Enclosure v = r.exact ? Enclosure::exact(*r.exact, prec)
                                            : Enclosure::from_bounds(BigFloat::from_mpq(r.lo, prec, MPFR_RNDD),
                                                                     BigFloat::from_mpq(r.hi, prec, MPFR_RNDU), prec);
                const bool seen = std::any_of(found.begin(), found.end(), [&](const AlgebraicCandidate &a) { return overlaps(a.value, v); });
                if (!seen) {
                    found.push_back(AlgebraicCandidate{c, r.exact, v, CandidateStatus::SurvivorToDepth, 0, {}});
                }
            }
        } while (next_poly(c, opts.max_height));
    }

    ExpandOptions eo;
    eo.precision = prec;
    for (AlgebraicCandidate &a : found) {
        const ExpansionResult e = a.exact ? expand(*a.exact, opts.expand_depth, eo) : expand(a.value, opts.expand_depth, eo);
        a.digits = e.digits;
        const auto big = std::find_if(e.digits.begin(), e.digits.end(), [&](int k) { return k > opts.q; });
        if (big != e.digits.end()) {
            a.status = CandidateStatus::EliminatedAtDigit;
            a.position = static_cast<std::size_t>(big - e.digits.begin()) + 1;
        } else if (e.status == ExpansionStatus::BoundaryAmbiguous) {
            a.status = CandidateStatus::BoundaryAmbiguous;
            a.position = e.ambiguous_position;
        }
    }
    std::sort(found.begin(), found.end(), [](const auto &l, const auto &r) { return l.value.mid() < r.value.mid(); });
    return found;
}

} // namespace zstar
