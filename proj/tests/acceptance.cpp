// Acceptance suite: one PASS/FAIL line per criterion, each with its pinned
// tolerance and runtime budget. Exit status is the number of failures.

#include <zstar/binary_tau.hpp>
#include <zstar/cantor_hall.hpp>
#include <zstar/decompose.hpp>
#include <zstar/error.hpp>
#include <zstar/expansion.hpp>
#include <zstar/explorer.hpp>

#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace zstar;

namespace
{

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    // Records a failed condition; the first few are reported.
    void require(bool ok, const std::string &what)
    {
        if (!ok) {
            if (pass) {
                detail << "failed: ";
            }
            if (failures++ < 3) {
                detail << what << "; ";
            }
            pass = false;
        }
    }

    int failures = 0;
};

double abs_diff(const Enclosure &a, const Enclosure &b)
{
    return std::abs((a - b).mid_double());
}

std::vector<int> random_prefix(std::mt19937 &rng, int max_digit, int min_len, int max_len)
{
    std::uniform_int_distribution<int> len(min_len, max_len), digit(1, max_digit);
    std::vector<int> p(static_cast<std::size_t>(len(rng)));
    for (int &k : p) {
        k = digit(rng);
    }
    if (!p.empty() && p[0] < 2) {
        p[0] = 2;
    }
    return p;
}

mpq_class random_rational(std::mt19937 &rng, const mpq_class &lo, const mpq_class &hi)
{
    std::uniform_int_distribution<long> num(0, 1'000'000);
    mpq_class t(num(rng), 1'000'000);
    t.canonicalize();
    return lo + (hi - lo) * t;
}

constexpr EvalOptions kFast{128, 256};

void closed_form_evaluation(Outcome &o)
{
    const EvalOptions opts{128, 1'000'000};
    double worst = 0;
    for (int r = 0; r <= 6; ++r) {
        std::vector<int> parts{2};
        parts.insert(parts.end(), static_cast<std::size_t>(r), 1);
        const Enclosure v = eval_finite(make_composition(parts), opts);
        const Enclosure ref = Enclosure::exact(r + 1, 200) * oracle::zeta_int(r + 2, 200);
        const double err = abs_diff(v, ref);
        worst = std::max(worst, err);
        o.require(err <= 5e-10, "r=" + std::to_string(r));
    }
    o.detail << "max |err| = " << worst << " (tol 5e-10)";
}

void tail_closed_forms(Outcome &o)
{
    const Enclosure v = eval_with_const_tail(make_composition({3}), 2);
    const Enclosure ref = Enclosure::exact(2, 200) * oracle::zeta_int(2, 200) - Enclosure::exact(2, 200);
    const double e1 = abs_diff(v, ref);
    const double e2 = abs_diff(tail_factor_limit(2, 128), Enclosure::exact(2, 128));
    o.require(e1 <= 1e-10, "zeta-star(3,{2}^inf)");
    o.require(e2 <= 1e-12, "F_inf(2)");
    o.detail << "|err| = " << e1 << " (tol 1e-10), " << e2 << " (tol 1e-12)";
}

void tiling_identity(Outcome &o)
{
    std::mt19937 rng(3);
    double worst_rad = 0;
    int checks = 0;
    for (int i = 0; i < 50; ++i) {
        const std::vector<int> p = random_prefix(rng, 3, 1, 6);
        for (int k = 1; k <= 4; ++k) {
            const Enclosure top = subtree_bounds(p, k + 1, kFast).high; // zeta-star(p, k+1, {1}^inf)
            const Enclosure low = subtree_bounds(p, k, kFast).low;      // zeta-star(p, k)
            worst_rad = std::max({worst_rad, top.rad_double(), low.rad_double()});
            o.require(abs_diff(top, low) <= top.rad_double() + low.rad_double(), "tiling at k=" + std::to_string(k));
            ++checks;
        }
    }
    o.require(worst_rad <= 1e-8, "radius above 1e-8");
    o.detail << checks << " identities, max radius " << worst_rad;
}

void expansion_round_trip(Outcome &o)
{
    std::mt19937 rng(4);
    std::uniform_int_distribution<int> tail(2, 3);
    int recovered = 0, ambiguous = 0;
    for (int i = 0; i < 100; ++i) {
        const std::vector<int> p = random_prefix(rng, 3, 10, 10);
        const Enclosure v = eval_with_const_tail(make_composition(p), tail(rng), kFast);
        const ExpansionResult r = expand(v, 10);
        ambiguous += r.status == ExpansionStatus::BoundaryAmbiguous;
        recovered += r.digits == p;
    }
    o.require(recovered == 100, "digits not recovered");
    o.require(ambiguous == 0, "BoundaryAmbiguous");
    o.detail << recovered << "/100 recovered, " << ambiguous << " ambiguous";
}

void hall_sweep(Outcome &o)
{
    std::size_t nodes = 0;
    for (int q = 2; q <= 5; ++q) {
        const HallReport r = check_hall_condition(make_family(FamilyKind::EtaDq, q), 5);
        nodes += r.nodes_checked;
        o.require(r.passed(), "EtaDq(" + std::to_string(q) + ")");
    }
    for (int k = 2; k <= 6; ++k) {
        const HallReport r = check_hall_condition(make_family(FamilyKind::TauBk, k), 8);
        nodes += r.nodes_checked;
        o.require(r.passed(), "TauBk(" + std::to_string(k) + ")");
        if (k == 2) {
            o.require(r.worst_ratio_exact && *r.worst_ratio_exact == 1, "TauBk(2) ratio != 1");
            if (r.worst_ratio_exact) {
                o.detail << "TauBk(2) worst ratio " << r.worst_ratio_exact->get_str() << ", ";
            }
        }
    }
    o.detail << nodes << " nodes";
}

void sum_theorem(Outcome &o)
{
    const DecompositionCertificate four = decompose_sum(4, 2);
    const TailedIndex two = with_const_tail(make_composition({2}), 2);
    o.require(four.left == two && four.right == two, "x=4 is not the double-{2}^inf certificate");
    o.require(four.combined.contains(mpq_class(4)), "x=4 combined value");

    std::mt19937 rng(6);
    DecomposeOptions opts;
    opts.tolerance = 1e-8;
    int ok = 0;
    double worst = 0;
    for (int i = 0; i < 50; ++i) {
        const mpq_class x = random_rational(rng, 4, 100);
        const DecompositionCertificate c = decompose_sum(x, 2, opts);
        worst = std::max(worst, c.residual_bound);
        const bool valid = c.residual_bound <= 1e-8 && validate_certificate(c, 256);
        ok += valid;
        o.require(valid, "x=" + std::to_string(x.get_d()));
    }
    bool below = false;
    try {
        decompose_sum(mpq_class(399, 100), 2);
    } catch (const Error &e) {
        below = e.kind() == ErrorKind::BelowRange;
    }
    o.require(below, "3.99 not BelowRange");
    o.detail << ok << "/50 interior certificates, max residual " << worst;
}

void other_operations(Outcome &o)
{
    std::mt19937 rng(7);
    DecomposeOptions opts;
    opts.tolerance = 1e-8;
    int ok = 0, total = 0;
    const auto check = [&](Operation op, const mpq_class &x) {
        const DecompositionCertificate c = decompose(op, x, 2, opts);
        const bool valid = validate_certificate(c, 2 * opts.precision);
        ok += valid;
        ++total;
        o.require(valid, to_string(op) + " x=" + std::to_string(x.get_d()));
    };
    for (int i = 0; i < 20; ++i) {
        check(Operation::Product, random_rational(rng, 4, 50));
    }
    for (const mpq_class &x : {mpq_class(-5), mpq_class(0), mpq_class(21, 2)}) {
        check(Operation::Difference, x);
    }
    for (const mpq_class &x : {mpq_class(1, 25), mpq_class(1), mpq_class(73, 10)}) {
        check(Operation::Quotient, x);
    }
    o.detail << ok << "/" << total << " validate at 256 bits";
}

void exact_tau_theorem(Outcome &o)
{
    std::mt19937 rng(8);
    const mpq_class bound(1, mpz_class(1) << 38);
    int ok = 0;
    mpq_class worst = 0;
    for (int i = 0; i < 100; ++i) {
        const int k = 2 + i % 3;
        const mpq_class lo(2, (mpz_class(1) << k) - 1);
        const mpq_class x = random_rational(rng, lo, 2);
        const TauDecomposition d = tau_decompose_sum(x, k, 40);
        const mpq_class recomputed = tau_value(periodic(d.left, {k})) + tau_value(periodic(d.right, {k}));
        const bool good = d.residual >= 0 && d.residual <= bound && recomputed == d.value && x - d.value == d.residual;
        ok += good;
        worst = std::max(worst, d.residual);
        o.require(good, "x=" + x.get_str());
    }
    o.detail << ok << "/100 with residual <= 2^-38, max residual " << worst.get_d();
}

void first_stage_gaps(Outcome &o)
{
    const GapReport r = theorem12_gaps(2);
    const Enclosure z2 = oracle::zeta_int(2, 200);
    const Enclosure one = Enclosure::exact(1, 200), two = Enclosure::exact(2, 200), four = Enclosure::exact(4, 200);
    const auto &sum = r.of(Operation::Sum).gaps;
    const auto &prod = r.of(Operation::Product).gaps;
    o.require(sum.size() == 1, "sum gap count");
    o.require(prod.size() == 1, "product gap count");
    if (sum.size() == 1 && prod.size() == 1) {
        const double s1 = abs_diff(sum[0].low, two * (two * z2 - two)), s2 = abs_diff(sum[0].high, one + z2);
        const double p1 = abs_diff(prod[0].low, four * (z2 - one)), p2 = abs_diff(prod[0].high, z2 * z2);
        o.require(std::max({s1, s2, p1, p2}) <= 1e-10, "endpoint error");
        o.require(certainly_less(prod[0].low, prod[0].high), "product gap order");
        o.detail << "sum (" << sum[0].low.mid_double() << ", " << sum[0].high.mid_double() << "), product ("
                 << prod[0].low.mid_double() << ", " << prod[0].high.mid_double()
                 << "), max endpoint error " << std::max({s1, s2, p1, p2});
    }
}

void inequality_a(Outcome &o)
{
    std::vector<std::pair<int, unsigned long>> equalities;
    for (int q = 2; q <= 6; ++q) {
        const InequalityReport r = verify_inequalities(q, 10'000, {});
        o.require(r.a_violations.empty(), "violation at q=" + std::to_string(q));
        for (const unsigned long m : r.a_equalities) {
            equalities.emplace_back(q, m);
        }
    }
    const bool only_21 = equalities.size() == 1 && equalities[0] == std::pair<int, unsigned long>(2, 1);
    o.require(only_21, "equality set is not exactly {(2,1)}");
    o.detail << "equalities at";
    for (const auto &[q, m] : equalities) {
        o.detail << " (q=" << q << ",m=" << m << ")";
    }
}

void dimension(Outcome &o)
{
    BigFloat phi(200);
    mpfr_sqrt_ui(phi.get(), 5, MPFR_RNDN);
    mpfr_add_ui(phi.get(), phi.get(), 1, MPFR_RNDN);
    mpfr_div_2ui(phi.get(), phi.get(), 1, MPFR_RNDN);
    const double e1 = std::abs(alpha_root(2).mid_double() - phi.to_double());
    const double log2_phi = std::log2(phi.to_double());
    const double e2 = std::abs(box_count(2, 40).growth - log2_phi);
    const double e3 = std::abs(box_count(3, 60).growth - dimension_formula(3).dim.mid_double());
    o.require(e1 <= 1e-12, "alpha_2");
    o.require(e2 <= 1e-3, "box_count(2,40)");
    o.require(e3 <= 5e-3, "box_count(3,60)");
    o.detail << "errors " << e1 << " (1e-12), " << e2 << " (1e-3), " << e3 << " (5e-3)";
}

void order_structure(Outcome &o)
{
    std::mt19937 rng(12);
    int eta_disagree = 0;
    for (int i = 0; i < 200; ++i) {
        const Composition a = make_composition(random_prefix(rng, 4, 1, 5));
        const Composition b = make_composition(random_prefix(rng, 4, 1, 5));
        const Enclosure va = eval_finite(a, kFast), vb = eval_finite(b, kFast);
        switch (index_compare(a, b)) {
        case IndexOrder::Greater:
            eta_disagree += !certainly_greater(va, vb);
            break;
        case IndexOrder::Less:
            eta_disagree += !certainly_less(va, vb);
            break;
        case IndexOrder::Equal:
            eta_disagree += !overlaps(va, vb);
            break;
        }
    }
    std::uniform_int_distribution<int> digit(1, 4), plen(0, 5), perlen(1, 3);
    const auto random_seq = [&] {
        std::vector<int> prefix(static_cast<std::size_t>(plen(rng))), period(static_cast<std::size_t>(perlen(rng)));
        for (int &k : prefix) {
            k = digit(rng);
        }
        for (int &k : period) {
            k = digit(rng);
        }
        return periodic(prefix, period);
    };
    int tau_disagree = 0;
    for (int i = 0; i < 500; ++i) {
        const DigitSeq a = random_seq(), b = random_seq();
        const mpq_class va = tau_value(a), vb = tau_value(b);
        // two eventually periodic sequences that agree on 40 digits are equal
        switch (digits_compare(a.digits(40), b.digits(40))) {
        case IndexOrder::Greater:
            tau_disagree += !(va > vb);
            break;
        case IndexOrder::Less:
            tau_disagree += !(va < vb);
            break;
        case IndexOrder::Equal:
            tau_disagree += va != vb;
            break;
        }
    }
    o.require(eta_disagree == 0, "zeta-star order");
    o.require(tau_disagree == 0, "tau order");
    o.detail << eta_disagree << "/200 zeta-star and " << tau_disagree << "/500 tau disagreements";
}

void thickness_check(Outcome &o)
{
    const Enclosure t_tau = thickness(make_family(FamilyKind::TauLpClosure, 2), 10);
    const Enclosure t_eta = thickness(make_family(FamilyKind::EtaTpClosure, 2), 4);
    o.require(t_tau.lower() >= BigFloat::from_double(1, 128),
              "tau(L_2) thickness < 1");
    o.require(certainly_less(t_eta, Enclosure::exact(1, 128)), "EtaTpClosure(2) thickness not < 1");
    o.detail << "tau(L_2) depth 10: " << t_tau.mid_double() << ", EtaTpClosure(2) depth 4: " << t_eta.mid_double();
}

struct Criterion {
    int id;
    const char *name;
    double budget_seconds;
    std::function<void(Outcome &)> body;
};

} // namespace

int main()
{
    const std::vector<Criterion> criteria = {
        {1, "closed-form evaluation", 10, closed_form_evaluation},
        {2, "tail closed forms", 5, tail_closed_forms},
        {3, "tiling identity", 60, tiling_identity},
        {4, "expansion round trip", 300, expansion_round_trip},
        {5, "Hall sweep", 600, hall_sweep},
        {6, "sum decomposition", 600, sum_theorem},
        {7, "product, difference, quotient", 900, other_operations},
        {8, "exact tau sums", 120, exact_tau_theorem},
        {9, "first-stage gaps", 60, first_stage_gaps},
        {10, "inequality (A)", 60, inequality_a},
        {11, "dimension", 60, dimension},
        {12, "order structure", 300, order_structure},
        {13, "thickness", 120, thickness_check},
    };
    int failed = 0;
    for (const Criterion &c : criteria) {
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.body(o);
        } catch (const std::exception &e) {
            o.pass = false;
            o.detail << "exception: " << e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.budget_seconds) {
            o.pass = false;
            o.detail << "; over budget";
        }
        failed += !o.pass;
        std::printf("%s %2d %-30s %8.2fs/%gs  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, c.budget_seconds,
                    o.detail.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed;
}
