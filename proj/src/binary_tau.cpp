#include <zstar/binary_tau.hpp>
#include <zstar/error.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>

namespace zstar
{

namespace
{

mpq_class pow2_neg(long e)
{
    mpq_class r = 1;
    mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), static_cast<mp_bitcnt_t>(e));
    return r;
}

long digit_sum(std::span<const int> d)
{
    return std::accumulate(d.begin(), d.end(), 0L);
}

void check_digits(std::span<const int> d)
{
    if (std::any_of(d.begin(), d.end(), [](int k) { return k < 1; })) {
        raise(ErrorKind::InvalidIndex, "digits must be positive");
    }
}

// tau({k}^inf) = 1 / (2^k - 1)
mpq_class const_tail(int k)
{
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, static_cast<unsigned long>(k));
    return mpq_class(1, den - 1);
}

struct Node {
    std::vector<int> prefix;
    int type = 1;
};

class SumEngine
{
public:
    SumEngine(const mpq_class &x, int k, std::size_t depth) : x_(x), k_(k), depth_(depth) {}

    std::optional<std::pair<Node, Node>> solve(const Node &a, const Node &b)
    {
        if (++steps_ > kMaxSteps) {
            raise(ErrorKind::NonTerminating, "decomposition search exceeded its step budget");
        }
        if (a.prefix.size() >= depth_ && b.prefix.size() >= depth_) {
            return std::make_pair(a, b);
        }
        const bool split_a = length(a) >= length(b);
        const Node &big = split_a ? a : b;
        const Node &other = split_a ? b : a;
        const auto [c1, c2] = children(big);

        std::vector<std::pair<Node, Node>> cands;
        for (const Node *c : {&c1, &c2}) {
            cands.push_back(split_a ? std::make_pair(*c, other) : std::make_pair(other, *c));
        }
        if (!try_candidates(cands)) {
            const auto [d1, d2] = children(other);
            cands.clear();
            for (const Node *c : {&c1, &c2}) {
                for (const Node *d : {&d1, &d2}) {
                    cands.push_back(split_a ? std::make_pair(*c, *d) : std::make_pair(*d, *c));
                }
            }
        }
        order_by_margin(cands);
        for (const auto &[p, q] : cands) {
            if (auto r = solve(p, q)) {
                return r;
            }
        }
        return std::nullopt;
    }

    TauInterval interval(const Node &n) const
    {
        return tau_node_interval(n.prefix, n.type, k_);
    }

private:
    static constexpr long kMaxSteps = 200000;

    mpq_class length(const Node &n) const
    {
        const TauInterval iv = interval(n);
        return iv.high - iv.low;
    }

    std::pair<Node, Node> children(const Node &n) const
    {
        Node fixed{n.prefix, 1};
        fixed.prefix.push_back(n.type);
        Node rest{n.prefix, n.type + 1};
        if (rest.type == k_) {
            // T_k(prefix) is T_1(prefix, k).
            rest.prefix.push_back(k_);
            rest.type = 1;
        }
        return {fixed, rest};
    }

    std::optional<mpq_class> margin(const Node &a, const Node &b) const
    {
        const TauInterval ia = interval(a), ib = interval(b);
        const mpq_class lo = ia.low + ib.low, hi = ia.high + ib.high;
        if (x_ < lo || x_ > hi) {
            return std::nullopt;
        }
        return std::min(mpq_class(x_ - lo), mpq_class(hi - x_));
    }

    bool try_candidates(const std::vector<std::pair<Node, Node>> &cands) const
    {
        return std::any_of(cands.begin(), cands.end(), [&](const auto &c) { return margin(c.first, c.second).has_value(); });
    }

    void order_by_margin(std::vector<std::pair<Node, Node>> &cands) const
    {
        std::vector<std::pair<mpq_class, std::pair<Node, Node>>> scored;
        for (auto &c : cands) {
            if (auto m = margin(c.first, c.second)) {
                scored.emplace_back(*m, std::move(c));
            }
        }
        std::stable_sort(scored.begin(), scored.end(), [](const auto &l, const auto &r) { return l.first > r.first; });
        cands.clear();
        for (auto &s : scored) {
            cands.push_back(std::move(s.second));
        }
    }

    mpq_class x_;
    int k_;
    std::size_t depth_;
    long steps_ = 0;
};

} // namespace

std::vector<int> DigitSeq::digits(std::size_t n) const
{
    std::vector<int> out(prefix.begin(), prefix.begin() + static_cast<long>(std::min(n, prefix.size())));
    if (out.size() < n) {
        if (tail == SeqTail::None) {
            raise(ErrorKind::NonTerminating, "sequence has no specified tail");
        }
        const std::vector<int> per = tail == SeqTail::Ones ? std::vector<int>{1} : period;
        for (std::size_t i = 0; out.size() < n; ++i) {
            out.push_back(per[i % per.size()]);
        }
    }
    return out;
}

std::string DigitSeq::to_string() const
{
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        os << (i ? "," : "") << prefix[i];
    }
    if (tail != SeqTail::None) {
        os << (prefix.empty() ? "" : ",") << '{';
        const std::vector<int> per = tail == SeqTail::Ones ? std::vector<int>{1} : period;
        for (std::size_t i = 0; i < per.size(); ++i) {
            os << (i ? "," : "") << per[i];
        }
        os << "}^inf";
    }
    os << ')';
    return os.str();
}

DigitSeq periodic(std::vector<int> prefix, std::vector<int> period)
{
    check_digits(prefix);
    check_digits(period);
    if (period.empty()) {
        raise(ErrorKind::InvalidIndex, "empty period");
    }
    if (period == std::vector<int>{1}) {
        return ones_tail(std::move(prefix));
    }
    return DigitSeq{std::move(prefix), SeqTail::Periodic, std::move(period)};
}

DigitSeq ones_tail(std::vector<int> prefix)
{
    check_digits(prefix);
    return DigitSeq{std::move(prefix), SeqTail::Ones, {}};
}

mpq_class tau_prefix_value(std::span<const int> digits)
{
    check_digits(digits);
    mpq_class sum = 0;
    long s = 0;
    for (const int k : digits) {
        s += k;
        sum += pow2_neg(s);
    }
    return sum;
}

mpq_class tau_value(const DigitSeq &s)
{
    if (s.tail == SeqTail::None) {
        raise(ErrorKind::NonTerminating, "tau of a sequence without a tail");
    }
    const std::vector<int> per = s.tail == SeqTail::Ones ? std::vector<int>{1} : s.period;
    // tail value t = v + 2^{-|per|} t, with v the value of one period
    const mpq_class v = tau_prefix_value(per);
    mpq_class t = v / (1 - pow2_neg(digit_sum(per)));
    t.canonicalize();
    mpq_class r = tau_prefix_value(s.prefix) + pow2_neg(digit_sum(s.prefix)) * t;
    r.canonicalize();
    return r;
}

DigitSeq tau_expand(const mpq_class &x, std::size_t depth)
{
    if (x <= 0 || x > 1) {
        raise(ErrorKind::OutOfDomain, "tau_expand needs 0 < x <= 1");
    }
    // tau(k, rest) = 2^{-k} (1 + tau(rest)) lies in (2^{-k}, 2^{1-k}].
    std::map<mpq_class, std::size_t> seen;
    std::vector<int> digits;
    mpq_class y = x;
    while (digits.size() < depth) {
        const auto [it, fresh] = seen.emplace(y, digits.size());
        if (!fresh) {
            const std::size_t start = it->second;
            return periodic(std::vector<int>(digits.begin(), digits.begin() + static_cast<long>(start)),
                            std::vector<int>(digits.begin() + static_cast<long>(start), digits.end()));
        }
        int k = 1;
        while (y <= pow2_neg(k)) {
            ++k;
        }
        digits.push_back(k);
        mpz_mul_2exp(y.get_num_mpz_t(), y.get_num_mpz_t(), static_cast<mp_bitcnt_t>(k));
        y.canonicalize();
        y -= 1;
    }
    return DigitSeq{std::move(digits), SeqTail::None, {}};
}

TauInterval tau_node_interval(std::span<const int> prefix, int i, int k)
{
    if (k < 2 || i < 1 || i > k - 1) {
        raise(ErrorKind::InvalidNode, "tau node type must satisfy 1 <= i <= k-1");
    }
    const mpq_class base = tau_prefix_value(prefix);
    const mpq_class scale = pow2_neg(digit_sum(prefix));
    TauInterval r{base + scale * const_tail(k), base + scale * pow2_neg(i - 1)};
    r.low.canonicalize();
    r.high.canonicalize();
    return r;
}

TauNodeLengths tau_node_lengths(std::span<const int> prefix, int i, int k)
{
    const TauInterval parent = tau_node_interval(prefix, i, k);
    std::vector<int> fixed(prefix.begin(), prefix.end());
    fixed.push_back(i);
    const TauInterval left = tau_node_interval(fixed, 1, k);
    // T_{i+1}(prefix); for i = k-1 this is T_1(prefix, k) with the same endpoints
    const mpq_class scale = pow2_neg(digit_sum(prefix));
    const mpq_class right_high = tau_prefix_value(prefix) + scale * pow2_neg(i);
    TauNodeLengths r{parent.high - parent.low, left.high - left.low, right_high - parent.low, left.low - right_high};
    return r;
}

TauDecomposition tau_decompose_sum(const mpq_class &x, int k, std::size_t depth)
{
    if (k < 2) {
        raise(ErrorKind::InvalidNode, "tau(B_k) needs k >= 2");
    }
    const mpq_class lo = 2 * const_tail(k);
    if (x < lo || x > 2) {
        raise(ErrorKind::OutOfRange, "x must lie in [2/(2^k-1), 2]");
    }
    SumEngine engine(x, k, depth);
    const Node root{{}, 1};
    const auto found = engine.solve(root, root);
    if (!found) {
        raise(ErrorKind::NonTerminating, "no decomposition found");
    }
    const auto &[a, b] = *found;
    const TauInterval ia = engine.interval(a), ib = engine.interval(b);
    TauDecomposition d;
    // a fixed prefix with type i covers sequences (prefix, j, ...) with j >= i;
    // the {k}^inf completion is the low end of that node.
    d.left = a.prefix;
    d.right = b.prefix;
    d.value = ia.low + ib.low;
    d.residual = x - d.value;
    d.width = (ia.high + ib.high) - d.value;
    return d;
}

} // namespace zstar
