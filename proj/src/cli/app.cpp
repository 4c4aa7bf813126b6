#include <zstar/cli/app.hpp>
#include <zstar/cli/cache.hpp>

#include <zstar/binary_tau.hpp>
#include <zstar/cantor_hall.hpp>
#include <zstar/decompose.hpp>
#include <zstar/expansion.hpp>
#include <zstar/explorer.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

namespace zstar::cli
{

namespace
{

using Json = nlohmann::ordered_json;

struct Globals {
    long precision_bits = 128;
    std::optional<std::string> truncation;
    std::optional<int> depth;
    std::string tol = "1e-8";
    std::string format = "text";
    std::string cache_dir;
};

std::string default_cache_dir()
{
    if (const char *xdg = std::getenv("XDG_DATA_HOME"); xdg != nullptr && *xdg != '\0') {
        return std::string(xdg) + "/zstar";
    }
    if (const char *home = std::getenv("HOME"); home != nullptr && *home != '\0') {
        return std::string(home) + "/.local/share/zstar";
    }
    return ".zstar-cache";
}

unsigned long to_count(const mpq_class &v, const std::string &what)
{
    if (v.get_den() != 1 || v <= 0 || !v.get_num().fits_ulong_p()) {
        raise(ErrorKind::InvalidIndex, what + " must be a positive integer");
    }
    return v.get_num().get_ui();
}

struct Context {
    Globals g;

    mpfr_prec_t precision() const
    {
        if (g.precision_bits < 16 || g.precision_bits > 1 << 20) {
            raise(ErrorKind::InvalidIndex, "--precision-bits must be in [16, 1048576]");
        }
        return static_cast<mpfr_prec_t>(g.precision_bits);
    }
    unsigned long truncation(unsigned long fallback) const
    {
        return g.truncation ? to_count(parse_rational(*g.truncation), "--truncation") : fallback;
    }
    int depth(int fallback) const
    {
        const int d = g.depth.value_or(fallback);
        if (d < 0) {
            raise(ErrorKind::InvalidIndex, "--depth must be non-negative");
        }
        return d;
    }
    double tolerance() const
    {
        const mpq_class t = parse_rational(g.tol);
        if (t <= 0) {
            raise(ErrorKind::InvalidIndex, "--tol must be positive");
        }
        return t.get_d();
    }
};

Json enclosure_json(const Enclosure &e)
{
    if (e.upper_infinite()) {
        return Json{{"infinite", true}};
    }
    return Json{{"mid", e.mid().to_decimal(30)}, {"rad", e.rad().to_decimal(6)}};
}

// Exact rational alongside a 256-bit enclosure of it.
Json rational_json(const mpq_class &q)
{
    Json j = enclosure_json(Enclosure::exact(q, 256));
    j["exact"] = q.get_str();
    return j;
}

std::string digits_string(const std::vector<int> &d)
{
    std::string s;
    for (std::size_t i = 0; i < d.size(); ++i) {
        s += (i ? "," : "") + std::to_string(d[i]);
    }
    return s;
}

// Text rendering: one "key: value" line per scalar, nested objects indented,
// enclosures as "mid +/- rad".
std::string inline_text(const Json &v)
{
    if (v.is_string()) {
        return v.get<std::string>();
    }
    if (v.is_object() && v.contains("infinite")) {
        return "+inf";
    }
    if (v.is_object() && v.contains("mid") && v.contains("rad") && v.size() <= 3) {
        std::string s = v["mid"].get<std::string>() + " +/- " + v["rad"].get<std::string>();
        return v.contains("exact") ? s + " (= " + v["exact"].get<std::string>() + ")" : s;
    }
    if (v.is_array() && std::all_of(v.begin(), v.end(), [](const Json &x) { return x.is_number(); })) {
        std::string s = "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
            s += (i ? ", " : "") + v[i].dump();
        }
        return s + "]";
    }
    if (v.is_object() || v.is_array()) {
        return {};
    }
    return v.dump();
}

void render_text(std::ostream &out, const Json &v, int indent)
{
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    if (v.is_object()) {
        for (const auto &[k, x] : v.items()) {
            const std::string s = inline_text(x);
            if (!s.empty() || !(x.is_object() || x.is_array())) {
                out << pad << k << ": " << s << '\n';
            } else {
                out << pad << k << ":" << (x.empty() ? " (none)" : "") << '\n';
                render_text(out, x, indent + 1);
            }
        }
    } else if (v.is_array()) {
        for (const auto &x : v) {
            const std::string s = inline_text(x);
            if (!s.empty()) {
                out << pad << "- " << s << '\n';
            } else {
                out << pad << "-\n";
                render_text(out, x, indent + 1);
            }
        }
    } else {
        out << pad << inline_text(v) << '\n';
    }
}

// Columnar text for row-shaped reports (box-count, covering).
void render_table(std::ostream &out, const Json &rows)
{
    if (rows.empty()) {
        return;
    }
    std::vector<std::string> cols;
    for (const auto &[k, x] : rows.front().items()) {
        cols.push_back(k);
    }
    std::vector<std::vector<std::string>> cells;
    std::vector<std::size_t> width;
    for (const auto &c : cols) {
        width.push_back(c.size());
    }
    for (const auto &r : rows) {
        std::vector<std::string> line;
        for (std::size_t i = 0; i < cols.size(); ++i) {
            line.push_back(inline_text(r[cols[i]]));
            width[i] = std::max(width[i], line.back().size());
        }
        cells.push_back(std::move(line));
    }
    auto emit = [&](const std::vector<std::string> &line) {
        for (std::size_t i = 0; i < line.size(); ++i) {
            out << (i ? "  " : "") << std::setw(static_cast<int>(width[i])) << line[i];
        }
        out << '\n';
    };
    emit(cols);
    for (const auto &line : cells) {
        emit(line);
    }
}

void emit(std::ostream &out, const Context &ctx, const Json &v, const char *table_key = nullptr)
{
    if (ctx.g.format == "json") {
        out << v.dump(2) << '\n';
        return;
    }
    if (table_key != nullptr) {
        Json head = v;
        head.erase(table_key);
        render_text(out, head, 0);
        render_table(out, v[table_key]);
        return;
    }
    render_text(out, v, 0);
}

Family parse_family(const std::string &name, int param)
{
    if (name == "eta-d") {
        return make_family(FamilyKind::EtaDq, param);
    }
    if (name == "tau-b") {
        return make_family(FamilyKind::TauBk, param);
    }
    if (name == "eta-t") {
        return make_family(FamilyKind::EtaTpClosure, param);
    }
    if (name == "tau-l") {
        return make_family(FamilyKind::TauLpClosure, param);
    }
    raise(ErrorKind::InvalidNode, "unknown family '" + name + "' (eta-d, tau-b, eta-t, tau-l)");
}

std::vector<int> optional_digits(const std::string &s)
{
    return s.empty() ? std::vector<int>{} : parse_digits(s);
}

void cmd_eval(Context &ctx, std::ostream &out, const std::string &index, const std::string &tail)
{
    const mpfr_prec_t prec = ctx.precision();
    const unsigned long trunc = ctx.truncation(1'000'000);
    const Composition prefix = make_composition(parse_digits(index));
    TailedIndex t{prefix, NoTail{}};
    if (tail != "none") {
        const mpq_class q = parse_rational(tail);
        t.tail = ConstTail{static_cast<int>(to_count(q, "--tail"))};
    }
    const std::string key = cache_key(digits_string(prefix.parts()), tail, prec, trunc);
    EvalCache cache(ctx.g.cache_dir);
    std::optional<Enclosure> value = cache.lookup(key, prec);
    if (!value) {
        value = eval(t, EvalOptions{prec, trunc});
        cache.store(key, *value);
        cache.flush();
    }
    Json j{{"index", prefix.parts()}, {"tail", tail}, {"precision_bits", prec}, {"truncation", trunc}};
    j["value"] = enclosure_json(*value);
    emit(out, ctx, j);
}

void cmd_expand(Context &ctx, std::ostream &out, const std::string &x, const std::string &boundary)
{
    ExpandOptions o;
    o.precision = ctx.precision();
    o.truncation = ctx.truncation(o.truncation);
    if (boundary == "assume-equal") {
        o.boundary = BoundaryPolicy::AssumeEqual;
    } else if (boundary != "strict") {
        raise(ErrorKind::InvalidIndex, "--boundary is strict or assume-equal");
    }
    const mpq_class v = parse_rational(x);
    const ExpansionResult r = expand(v, static_cast<std::size_t>(ctx.depth(10)), o);
    Json j{{"x", rational_json(v)}, {"digits", r.digits}, {"status", to_string(r.status)}};
    if (r.status == ExpansionStatus::Exact) {
        j["tail"] = r.tail;
    }
    if (r.status == ExpansionStatus::BoundaryAmbiguous) {
        j["ambiguous_position"] = r.ambiguous_position;
    }
    if (r.residual) {
        j["residual"] = enclosure_json(*r.residual);
    }
    emit(out, ctx, j);
}

void cmd_tails(Context &ctx, std::ostream &out, int q, const std::string &m)
{
    if (q < 1) {
        raise(ErrorKind::InvalidIndex, "--q must be positive");
    }
    const unsigned long mm = to_count(parse_rational(m), "--m");
    Json j{{"q", q}, {"m", mm}, {"factor", rational_json(tail_factor(mm, q))}};
    if (q >= 2) {
        j["limit"] = enclosure_json(tail_factor_limit(q, ctx.precision()));
    } else {
        j["limit"] = Json{{"infinite", true}};
    }
    emit(out, ctx, j);
}

HallOptions hall_options(const Context &ctx)
{
    HallOptions o;
    o.precision = ctx.precision();
    o.truncation = ctx.truncation(o.truncation);
    return o;
}

Json node_json(NodeEvaluator &ev, const SubdivisionNode &n)
{
    Json j{{"node", n.to_string()}, {"prefix", n.prefix}, {"type", n.type}};
    if (n.family.exact()) {
        j["low"] = rational_json(ev.low_exact(n));
        j["high"] = rational_json(ev.high_exact(n));
    } else {
        j["low"] = enclosure_json(ev.low(n));
        j["high"] = enclosure_json(ev.high(n));
    }
    return j;
}

void cmd_subdivide(Context &ctx, std::ostream &out, const std::string &family, int param, const std::string &prefix,
                   std::optional<int> type)
{
    const Family f = parse_family(family, param);
    SubdivisionNode n = root_node(f);
    if (!prefix.empty() || type) {
        n.prefix = optional_digits(prefix);
        n.type = type.value_or(1);
    }
    NodeEvaluator ev(f, hall_options(ctx));
    const SubdivisionReport r = subdivide_with_gap(ev, n);
    Json j{{"parent", node_json(ev, n)}, {"fixed", node_json(ev, r.children.fixed)},
           {"rest", node_json(ev, r.children.rest)}};
    j["gap"] = Json{{"low", enclosure_json(r.gap_low)}, {"high", enclosure_json(r.gap_high)}};
    emit(out, ctx, j);
}

void cmd_hall(Context &ctx, std::ostream &out, const std::string &family, int param)
{
    const Family f = parse_family(family, param);
    const int depth = ctx.depth(6);
    const HallReport r = check_hall_condition(f, depth, hall_options(ctx));
    Json j{{"family", f.to_string()}, {"depth", depth}, {"nodes", r.nodes_checked},
           {"comparisons_skipped", r.comparisons_skipped}, {"passed", r.passed()}};
    if (r.worst_margin_exact) {
        j["worst_margin"] = rational_json(*r.worst_margin_exact);
    } else if (r.worst_margin) {
        j["worst_margin"] = enclosure_json(*r.worst_margin);
    }
    if (r.worst_ratio_exact) {
        j["worst_ratio"] = rational_json(*r.worst_ratio_exact);
    } else if (r.worst_ratio) {
        j["worst_ratio"] = enclosure_json(*r.worst_ratio);
    }
    Json v = Json::array();
    for (const auto &x : r.violations) {
        v.push_back(Json{{"node", x.node.to_string()}, {"gap", enclosure_json(x.gap)},
                         {"shorter_child", enclosure_json(x.shorter_child)}});
    }
    j["violations"] = v;
    emit(out, ctx, j);
}

Json certificate_json(const DecompositionCertificate &c)
{
    const auto tail_of = [](const TailedIndex &t) {
        const auto *k = std::get_if<ConstTail>(&t.tail);
        return k != nullptr ? Json(k->q) : Json("none");
    };
    Json j{{"op", to_string(c.op)},
           {"q", c.q},
           {"left_digits", c.left.prefix.parts()},
           {"left_tail", tail_of(c.left)},
           {"right_digits", c.right.prefix.parts()},
           {"right_tail", tail_of(c.right)},
           {"left_value", enclosure_json(c.left_value)},
           {"right_value", enclosure_json(c.right_value)},
           {"combined", enclosure_json(c.combined)},
           {"target", rational_json(c.target)}};
    std::ostringstream rb;
    rb << std::setprecision(6) << c.residual_bound;
    j["residual_bound"] = rb.str();
    j["steps"] = c.steps;
    return j;
}

void cmd_decompose(Context &ctx, std::ostream &out, Operation op, const std::string &x, int q)
{
    DecomposeOptions o;
    o.precision = ctx.precision();
    o.truncation = ctx.truncation(o.truncation);
    o.tolerance = ctx.tolerance();
    emit(out, ctx, certificate_json(decompose(op, parse_rational(x), q, o)));
}

Json seq_json(const DigitSeq &s)
{
    Json j{{"digits", s.prefix}};
    switch (s.tail) {
    case SeqTail::None:
        j["tail"] = "none";
        break;
    case SeqTail::Ones:
        j["tail"] = "ones";
        break;
    case SeqTail::Periodic:
        j["tail"] = "periodic";
        j["period"] = s.period;
        break;
    }
    return j;
}

void cmd_tau_value(Context &ctx, std::ostream &out, const std::string &digits, const std::string &tail,
                   const std::string &period)
{
    DigitSeq s{optional_digits(digits), SeqTail::None, {}};
    if (tail == "ones") {
        s = ones_tail(s.prefix);
    } else if (tail == "periodic") {
        s = periodic(s.prefix, parse_digits(period));
    } else if (tail != "none") {
        raise(ErrorKind::InvalidIndex, "--tail is none, ones or periodic");
    }
    Json j = seq_json(s);
    j["value"] = rational_json(tau_value(s));
    emit(out, ctx, j);
}

void cmd_tau_expand(Context &ctx, std::ostream &out, const std::string &x)
{
    const mpq_class v = parse_rational(x);
    Json j{{"x", rational_json(v)}};
    j.update(seq_json(tau_expand(v, static_cast<std::size_t>(ctx.depth(20)))));
    emit(out, ctx, j);
}

void cmd_tau_decompose(Context &ctx, std::ostream &out, const std::string &x, int k)
{
    const mpq_class v = parse_rational(x);
    const TauDecomposition d = tau_decompose_sum(v, k, static_cast<std::size_t>(ctx.depth(20)));
    Json j{{"x", rational_json(v)},     {"k", k},
           {"left_digits", d.left},     {"left_tail", k},
           {"right_digits", d.right},   {"right_tail", k},
           {"value", rational_json(d.value)}, {"residual", rational_json(d.residual)},
           {"width", rational_json(d.width)}};
    emit(out, ctx, j);
}

Json interval_json(const StageInterval &s)
{
    return Json{{"label", s.label}, {"low", enclosure_json(s.low)}, {"high", enclosure_json(s.high)}};
}

void cmd_gaps(Context &ctx, std::ostream &out, int p)
{
    const GapReport r = theorem12_gaps(p, hall_options(ctx), ctx.depth(1));
    Json stage = Json::array();
    for (const auto &s : r.stage) {
        stage.push_back(interval_json(s));
    }
    Json ops = Json::array();
    for (const auto &o : r.operations) {
        Json intervals = Json::array();
        for (const auto &s : o.pieces) {
            intervals.push_back(interval_json(s));
        }
        Json gaps = Json::array();
        for (const auto &g : o.gaps) {
            gaps.push_back(Json{{"low", enclosure_json(g.low)}, {"high", enclosure_json(g.high)}});
        }
        ops.push_back(Json{{"op", to_string(o.op)}, {"intervals", intervals}, {"gaps", gaps}});
    }
    emit(out, ctx,
         Json{{"p", r.p}, {"depth", r.depth}, {"stage", stage}, {"operations", ops}, {"containment", r.containment_note}});
}

void cmd_thickness(Context &ctx, std::ostream &out, const std::string &family, int param)
{
    const Family f = parse_family(family, param);
    const int depth = ctx.depth(6);
    emit(out, ctx,
         Json{{"family", f.to_string()}, {"depth", depth}, {"thickness", enclosure_json(thickness(f, depth, hall_options(ctx)))}});
}

void cmd_dimension(Context &ctx, std::ostream &out, int p)
{
    const DimensionRecord d = dimension_formula(p, ctx.precision(), static_cast<unsigned long>(ctx.depth(60)));
    std::ostringstream emp;
    emp << std::setprecision(10) << d.empirical_dim;
    emit(out, ctx,
         Json{{"p", d.p}, {"alpha", enclosure_json(d.alpha)}, {"dim", enclosure_json(d.dim)},
              {"empirical_dim", emp.str()}, {"box_depth", d.depth}});
}

void cmd_box_count(Context &ctx, std::ostream &out, int p, const std::string &n)
{
    const unsigned long nn = to_count(parse_rational(n), "--n");
    Json rows = Json::array();
    for (unsigned long i = 1; i <= nn; ++i) {
        const BoxCount b = box_count(p, i);
        std::ostringstream g;
        g << std::setprecision(10) << b.growth;
        rows.push_back(Json{{"n", i}, {"count", b.count.get_str()}, {"growth", g.str()}});
    }
    emit(out, ctx, Json{{"p", p}, {"rows", rows}}, "rows");
}

void cmd_covering(Context &ctx, std::ostream &out, int q, int window)
{
    CoveringOptions o;
    o.precision = ctx.precision();
    o.truncation = ctx.truncation(o.truncation);
    o.window = window;
    Json rows = Json::array();
    const int depth = ctx.depth(6);
    for (int d = 0; d <= depth; ++d) {
        const Enclosure len = covering_length(q, d, o);
        rows.push_back(Json{{"depth", d}, {"length", len.mid().to_decimal(20)}, {"rad", len.rad().to_decimal(3)}});
    }
    emit(out, ctx, Json{{"q", q}, {"window", window}, {"rows", rows}}, "rows");
}

void cmd_search(Context &ctx, std::ostream &out, int q, int max_degree, long max_height)
{
    SearchOptions o;
    o.q = q;
    o.max_degree = max_degree;
    o.max_height = max_height;
    o.expand_depth = static_cast<std::size_t>(ctx.depth(8));
    o.precision = ctx.precision();
    Json cands = Json::array();
    std::size_t survivors = 0;
    for (const auto &c : search_algebraic(o)) {
        Json j{{"poly", c.poly}, {"value", c.exact ? rational_json(*c.exact) : enclosure_json(c.value)},
               {"status", to_string(c.status)}, {"digits", c.digits}};
        if (c.status != CandidateStatus::SurvivorToDepth) {
            j["position"] = c.position;
        } else {
            ++survivors;
        }
        cands.push_back(j);
    }
    emit(out, ctx,
         Json{{"q", q}, {"max_degree", max_degree}, {"max_height", max_height}, {"expand_depth", o.expand_depth},
              {"survivors", survivors}, {"candidates", cands}});
}

void cmd_cache(Context &ctx, std::ostream &out, bool clear)
{
    EvalCache cache(ctx.g.cache_dir);
    if (clear) {
        const std::size_t n = cache.stats().entries;
        cache.clear();
        emit(out, ctx, Json{{"file", cache.stats().file.string()}, {"removed", n}});
        return;
    }
    const CacheStats &s = cache.stats();
    emit(out, ctx, Json{{"file", s.file.string()}, {"entries", s.entries}, {"corrupt_lines", s.corrupt_lines}});
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    Context ctx;
    ctx.g.cache_dir = default_cache_dir();
    std::function<void()> action;

    CLI::App app{"Multiple zeta-star values, expansions and Cantor subdivisions", "zstar"};
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--precision-bits", ctx.g.precision_bits, "MPFR working precision")
        ->envname("ZSTAR_PRECISION_BITS")
        ->capture_default_str();
    app.add_option("--truncation", ctx.g.truncation, "Series truncation N (eval default 1e6)")->envname("ZSTAR_TRUNCATION");
    app.add_option("--depth", ctx.g.depth, "Depth for expansions, subdivisions and searches")->envname("ZSTAR_DEPTH");
    app.add_option("--tol", ctx.g.tol, "Decomposition tolerance")->envname("ZSTAR_TOL")->capture_default_str();
    app.add_option("--format", ctx.g.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->envname("ZSTAR_FORMAT")
        ->capture_default_str();
    app.add_option("--cache-dir", ctx.g.cache_dir, "Evaluation cache directory")->envname("ZSTAR_CACHE_DIR");

    std::string index, tail = "none", x, boundary = "strict", m = "1", family, prefix, digits, period, n = "20";
    int q = 2, param = 2, p = 2, k = 2, window = 1, max_degree = 2;
    long max_height = 3;
    std::optional<int> type;

    auto *eval_cmd = app.add_subcommand("eval", "Enclosure of zeta-star(index) or zeta-star(index, {q}^inf)");
    eval_cmd->add_option("--index", index, "Comma-separated entries")->required();
    eval_cmd->add_option("--tail", tail, "none or the constant q")->capture_default_str();
    eval_cmd->callback([&] { action = [&] { cmd_eval(ctx, out, index, tail); }; });

    auto *expand_cmd = app.add_subcommand("expand", "Zeta-star expansion digits of x > 1");
    expand_cmd->add_option("--x", x)->required();
    expand_cmd->add_option("--boundary", boundary, "strict or assume-equal")->capture_default_str();
    expand_cmd->callback([&] { action = [&] { cmd_expand(ctx, out, x, boundary); }; });

    auto *tails_cmd = app.add_subcommand("tails", "Tail factor F_m(q) and its limit");
    tails_cmd->add_option("--q", q)->capture_default_str();
    tails_cmd->add_option("--m", m)->capture_default_str();
    tails_cmd->callback([&] { action = [&] { cmd_tails(ctx, out, q, m); }; });

    auto add_family = [&](CLI::App *c) {
        c->add_option("--family", family, "eta-d, tau-b, eta-t or tau-l")->required();
        c->add_option("--param", param, "q, k or p")->capture_default_str();
    };

    auto *sub_cmd = app.add_subcommand("subdivide", "Children and gap of a node T_i(prefix)");
    add_family(sub_cmd);
    sub_cmd->add_option("--prefix", prefix, "Comma-separated prefix (empty for the root)");
    sub_cmd->add_option("--type", type, "Lower bound i on the next entry");
    sub_cmd->callback([&] { action = [&] { cmd_subdivide(ctx, out, family, param, prefix, type); }; });

    auto *hall_cmd = app.add_subcommand("hall-check", "Gap <= shorter child at every node to --depth");
    add_family(hall_cmd);
    hall_cmd->callback([&] { action = [&] { cmd_hall(ctx, out, family, param); }; });

    auto *dec_cmd = app.add_subcommand("decompose", "Certified x = a (op) b with entries <= q");
    dec_cmd->require_subcommand(1);
    for (const Operation op : {Operation::Sum, Operation::Product, Operation::Difference, Operation::Quotient}) {
        auto *c = dec_cmd->add_subcommand(to_string(op));
        c->add_option("--x", x)->required();
        c->add_option("--q", q)->capture_default_str();
        c->callback([&, op] { action = [&, op] { cmd_decompose(ctx, out, op, x, q); }; });
    }

    auto *tau_cmd = app.add_subcommand("tau", "Binary-gap map");
    tau_cmd->require_subcommand(1);
    auto *tv = tau_cmd->add_subcommand("value", "Exact tau of a digit sequence");
    tv->add_option("--digits", digits);
    tv->add_option("--tail", tail, "none, ones or periodic")->capture_default_str();
    tv->add_option("--period", period);
    tv->callback([&] { action = [&] { cmd_tau_value(ctx, out, digits, tail, period); }; });
    auto *te = tau_cmd->add_subcommand("expand", "Digits of x in (0, 1]");
    te->add_option("--x", x)->required();
    te->callback([&] { action = [&] { cmd_tau_expand(ctx, out, x); }; });
    auto *td = tau_cmd->add_subcommand("decompose", "x = tau(a) + tau(b) with entries <= k");
    td->add_option("--x", x)->required();
    td->add_option("--k", k)->capture_default_str();
    td->callback([&] { action = [&] { cmd_tau_decompose(ctx, out, x, k); }; });

    auto *gaps_cmd = app.add_subcommand("gaps", "Certified gaps of pairwise combinations of closure(eta(T_p))");
    gaps_cmd->add_option("--p", p)->capture_default_str();
    gaps_cmd->callback([&] { action = [&] { cmd_gaps(ctx, out, p); }; });

    auto *thick_cmd = app.add_subcommand("thickness", "Newhouse thickness of the depth truncation");
    add_family(thick_cmd);
    thick_cmd->callback([&] { action = [&] { cmd_thickness(ctx, out, family, param); }; });

    auto *dim_cmd = app.add_subcommand("dimension", "log2(alpha_p) against the box-count estimate");
    dim_cmd->add_option("--p", p)->capture_default_str();
    dim_cmd->callback([&] { action = [&] { cmd_dimension(ctx, out, p); }; });

    auto *box_cmd = app.add_subcommand("box-count", "a_n for n = 1..N");
    box_cmd->add_option("--p", p)->capture_default_str();
    box_cmd->add_option("--n", n)->capture_default_str();
    box_cmd->callback([&] { action = [&] { cmd_box_count(ctx, out, p, n); }; });

    auto *cov_cmd = app.add_subcommand("covering", "Covering length of eta(D_q) per depth");
    cov_cmd->add_option("--q", q)->capture_default_str();
    cov_cmd->add_option("--window", window)->capture_default_str();
    cov_cmd->callback([&] { action = [&] { cmd_covering(ctx, out, q, window); }; });

    auto *search_cmd = app.add_subcommand("search-algebraic", "Algebraic numbers whose digits stay <= q");
    search_cmd->add_option("--q", q)->capture_default_str();
    search_cmd->add_option("--max-degree", max_degree)->capture_default_str();
    search_cmd->add_option("--max-height", max_height)->capture_default_str();
    search_cmd->callback([&] { action = [&] { cmd_search(ctx, out, q, max_degree, max_height); }; });

    auto *cache_cmd = app.add_subcommand("cache", "Evaluation cache");
    cache_cmd->require_subcommand(1);
    cache_cmd->add_subcommand("stats")->callback([&] { action = [&] { cmd_cache(ctx, out, false); }; });
    cache_cmd->add_subcommand("clear")->callback([&] { action = [&] { cmd_cache(ctx, out, true); }; });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        if (app.exit(e, out, err) == 0) {
            return 0;
        }
        err << app.help();
        return 1;
    }
    if (!action) {
        err << app.help();
        return 1;
    }
    try {
        action();
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace zstar::cli
