// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "cantorpack/billingsley.hpp"
#include "cantorpack/faithfulness.hpp"
#include "cantorpack/packing.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace cantorpack;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void expect(bool ok, const std::string& what) {
        if (!ok && pass) detail << "first failure: " << what << "; ";
        pass = pass && ok;
    }
};

struct SmallSet {
    std::vector<unsigned> ns;
    std::vector<std::vector<unsigned>> digits;

    BaseSequence base() const { return BaseSequence::list(std::vector<BigInt>(ns.begin(), ns.end())); }
    DigitRestrictedSet set() const {
        RankSchedule<DigitRule> r{{DigitRule::all()}, {}};
        for (std::size_t k = 0; k < ns.size(); ++k)
            r.exceptions[k + 1] = DigitRule::explicit_digits(std::vector<BigInt>(digits[k].begin(), digits[k].end()));
        return DigitRestrictedSet(base(), r);
    }
};

SmallSet random_set(std::mt19937_64& rng, std::size_t K, unsigned max_n, unsigned keep_one_in) {
    SmallSet s;
    for (std::size_t k = 0; k < K; ++k) {
        const unsigned n = 2 + static_cast<unsigned>(rng() % (max_n - 1));
        std::vector<unsigned> d;
        for (unsigned a = 0; a < n; ++a)
            if (rng() % keep_one_in == 0) d.push_back(a);
        if (d.empty()) d.push_back(static_cast<unsigned>(rng() % n));
        s.ns.push_back(n);
        s.digits.push_back(d);
    }
    return s;
}

PackingQuery query(const DigitRestrictedSet& set, Family f, Scale eps, double alpha, std::size_t depth) {
    PackingQuery q{set, f, std::move(eps)};
    q.alpha = alpha;
    q.depth = depth;
    q.backend = IntervalBackend::Grid;
    return q;
}

double lg(const LogValue& v) { return v.log_or_neg_inf(); }

// 1
void faithfulness_arithmetic(Outcome& o) {
    const auto c2 = condition_ratios(BaseSequence::constant(2), 64);
    for (const auto& e : c2.ratios) {
        const double want = 1.0 / static_cast<double>(e.k - 1);
        o.expect(std::abs(e.ratio - want) <= 1e-12 * want, "rho(" + std::to_string(e.k) + ") for s = 2");
    }
    o.expect(c2.verdict == Verdict::FaithfulTrend, "constant base verdict");

    const auto pr = condition_ratios(BaseSequence::product_recursive({2, 2}), 24);
    for (const auto& e : pr.ratios)
        if (e.k >= 3) o.expect(e.exact && *e.exact == 1, "exact rho(" + std::to_string(e.k) + ") = 1");
    o.expect(pr.C_exact && *pr.C_exact == 1, "C = 1");
    const auto b = theoretical_bounds_exact(pr.C_exact.value_or(Rational(0)));
    o.expect(b.lower == Rational(1, 3) && b.upper_for_family == Rational(1, 4), "bounds (1/3, 1/4)");
    o.detail << "C = " << pr.C << ", bounds = (" << to_string(b.lower) << ", " << to_string(b.upper_for_family) << ")";
}

// 2
void dp_exactness(Outcome& o) {
    std::mt19937_64 rng(20240601);
    int compared = 0;
    double worst = 0;
    while (compared < 150) {
        const std::size_t K = 1 + rng() % 6;
        const auto s = random_set(rng, K, 4, K > 3 ? 3 : 2);
        const Rational eps = 1 / oracle::product(s.ns, rng() % (K + 1));
        const auto pieces = oracle::eligible_cylinders(s.ns, s.digits, K, eps);
        if (pieces.size() > 24) continue;
        const double alpha = static_cast<double>(rng() % 101) / 100.0;
        const auto got = optimal_cylinder_packing(query(s.set(), Family::CylindersOnly, Scale::exact(eps), alpha, K));
        const auto want = oracle::best_family(pieces, alpha);
        if (!want) {
            o.expect(got.value.is_zero(), "empty optimum");
        } else {
            const double err = std::abs(got.value.log() - static_cast<double>(*want));
            worst = std::max(worst, err);
            o.expect(!got.value.is_zero() && err <= 1e-12, "DP vs brute force");
        }
        ++compared;
    }
    o.detail << compared << " cases, max |log error| = " << worst;
}

// 3
void dimension_sanity(Outcome& o) {
    for (int s : {2, 3, 4}) {
        const auto b = BaseSequence::constant(s);
        std::vector<std::size_t> depths;
        for (std::size_t K = 1; K <= 10; ++K) depths.push_back(K);
        const auto ce = critical_exponent(DigitRestrictedSet::full(b), Family::CylindersOnly, Weight::length(),
                                          rank_tied_stages(b, depths));
        for (const auto& row : ce.rows) o.expect(row.threshold == 1.0, "full set threshold at K = " + std::to_string(row.depth));
    }
    const auto two = BaseSequence::constant(2);
    const DigitRestrictedSet moran(two, {{DigitRule::explicit_digits({0}), DigitRule::all()}, {}});
    std::vector<std::size_t> depths;
    for (std::size_t K = 1; K <= 12; ++K) depths.push_back(K);
    const auto ce = critical_exponent(moran, Family::CylindersOnly, Weight::length(), rank_tied_stages(two, depths));
    o.expect(std::abs(ce.windowed_limsup - 0.5) < 0.1, "Moran windowed limsup");
    o.detail << "full set thresholds all 1; Moran windowed limsup = " << ce.windowed_limsup;
}

// 4
void counterexample_gap(Outcome& o) {
    CounterexampleOptions opt;
    opt.prefix = 16;
    opt.stages = 3;
    const auto r = run_counterexample_experiment(BaseSequence::product_recursive({2, 2}), opt);
    o.expect(r.selection.indices == std::vector<std::size_t>{4, 8, 16}, "A = {4, 8, 16}");
    o.expect(!r.cylinder_family.rows.empty() && !r.interval_family.rows.empty(), "stages ran");
    const double cyl = r.cylinder_family.last;
    const double ivl = r.interval_family.last;
    o.expect(cyl <= 0.25 + 0.08, "cylinder threshold <= 0.33");
    o.expect(ivl >= 1.0 / 3 - 0.08, "interval threshold >= 0.2533");
    o.expect(cyl < ivl, "strict gap");
    o.detail << "k_s = 4,8,16; cylinders = " << cyl << ", intervals = " << ivl;
}

// 5
void billingsley_ratios(Outcome& o) {
    const auto pr = BaseSequence::product_recursive({2, 2});
    const std::vector<std::size_t> A{4, 8, 16};
    const auto t = build_tstar(pr, A);
    const auto mu = mu_xi_for(t);
    const auto leb = DigitProductMeasure::lebesgue(pr);
    const auto seq = gamma_sequence(DigitWord(pr, std::vector<BigInt>(16, 0)), mu, leb);
    for (std::size_t k : A) o.expect(seq.entries[k - 1].exact.has_value(), "exact gamma at k = " + std::to_string(k));
    const auto& g3 = seq.entries[15];
    o.expect(g3.exact && *g3.exact == Rational(8226, 32768), "gamma(k_3) = 8226/32768");
    o.expect(std::abs(g3.gamma - 0.25) < 0.05, "gamma(k_3) near 1/4");
    const auto bm = block_monotonicity(t, mu, leb, A, 16);
    o.expect(bm.holds, "block monotonicity");
    o.detail << "gamma(k_3) = " << (g3.exact ? to_string(*g3.exact) : "?") << " = " << g3.gamma
             << ", block monotonicity " << (bm.holds ? "holds" : "fails") << " at ranks <= 16";
}

// 6
void premeasure_inequality(Outcome& o) {
    const auto pr = BaseSequence::product_recursive({2, 2});
    const auto t = build_tstar(pr, {4, 8, 16});
    const auto mu = mu_xi_for(t);
    const auto leb = DigitProductMeasure::lebesgue(pr);
    for (std::size_t r : {0, 3, 7}) {
        for (double alpha : {0.5, 1.0}) {
            const auto res = verify_premeasure_inequality(t, mu, leb, 0.30, alpha, Scale::of_rank(pr, r), 8);
            o.expect(res.hypothesis.holds, "hypothesis");
            o.expect(res.verdict && res.log_margin >= 0, "margin at alpha " + std::to_string(alpha));
            o.detail << (r || alpha != 0.5 ? "; " : "") << "eps rank " << r << " alpha " << alpha << ": margin "
                     << res.log_margin;
        }
    }
}

// 7
void centering(Outcome& o) {
    std::mt19937_64 rng(1000);
    const CenteringParams p;
    const double bound = (1 - std::pow(2.0, p.t - p.s)) / 8;
    int trials = 0, violations = 0;
    double min_volume = 1e300;
    while (trials < 1000) {
        std::vector<BigInt> ns;
        RankSchedule<DigitRule> rules{{DigitRule::all()}, {}};
        const std::size_t R = 2 + rng() % 3;
        for (std::size_t k = 1; k <= R; ++k) {
            const unsigned n = 2 + static_cast<unsigned>(rng() % 3);
            ns.push_back(n);
            std::vector<BigInt> d;
            for (unsigned a = 0; a < n; ++a)
                if (rng() % 2) d.push_back(a);
            if (d.empty()) d.push_back(static_cast<long>(rng() % n));
            rules.exceptions[k] = DigitRule::explicit_digits(d);
        }
        for (std::size_t k = 0; k < 30; ++k) ns.push_back(2);
        const DigitRestrictedSet set(BaseSequence::list(ns), rules);

        std::vector<IntervalBall> v;
        Rational cursor = 0;
        for (const auto& w : all_words(set.base(), R)) {
            const auto c = cylinder(w);
            if (!intersects(set, c) || c.left() < cursor || rng() % 4 == 0) continue;
            const Rational grow = c.length() * Rational(static_cast<long>(rng() % 9), 4);
            const Rational lo = std::max(cursor, c.left() - grow / 2);
            const Rational hi = std::min(Rational(1), c.right() + grow / 2);
            v.push_back(IntervalBall::from_endpoints(lo, hi));
            cursor = hi;
        }
        double sv = 0;
        for (const auto& b : v) sv += std::pow(b.diameter().convert_to<double>(), p.s);
        if (sv <= 1.0 + 1e-9) continue;
        ++trials;

        const auto r = center_packing(v, set, p);
        bool ok = !r.balls.empty();
        double tv = 0;
        for (std::size_t i = 0; i < r.balls.size(); ++i) {
            tv += std::pow(r.balls[i].diameter().convert_to<double>(), p.t);
            const auto c = cylinder(r.center_words[i]);
            ok = ok && intersects(set, c) && c.left() == r.balls[i].center && r.balls[i].radius == r.radius;
            for (std::size_t j = i + 1; j < r.balls.size(); ++j) ok = ok && !r.balls[i].overlaps(r.balls[j]);
        }
        ok = ok && tv >= bound;
        min_volume = std::min(min_volume, tv);
        violations += !ok;
    }
    o.expect(violations == 0, "centered packings");
    o.detail << trials << " trials, " << violations << " violations, min t-volume " << min_volume << " >= " << bound;
}

// 8
void ordering(Outcome& o) {
    std::mt19937_64 rng(8);
    int queries = 0;
    while (queries < 200) {
        const std::size_t K = 1 + rng() % 4;
        const auto s = random_set(rng, K, 4, 2);
        const auto b = s.base();
        const auto set = s.set();
        const std::size_t r = rng() % (K + 1);
        const auto eps = Scale::of_rank(b, r);
        const double alpha = static_cast<double>(rng() % 101) / 100.0;
        const double delta = static_cast<double>(1 + rng() % 50) / 100.0;
        ++queries;

        const auto vc = optimal_packing(query(set, Family::CylindersOnly, eps, alpha, K)).value;
        const auto vi = optimal_packing(query(set, Family::AllIntervals, eps, alpha, K)).value;
        o.expect(lg(vc) <= lg(vi) + 1e-12, "cylinders <= intervals");

        for (Family f : {Family::CylindersOnly, Family::AllIntervals}) {
            const auto base_v = optimal_packing(query(set, f, eps, alpha, K)).value;
            const auto up = optimal_packing(query(set, f, eps, alpha + delta, K)).value;
            if (!base_v.is_zero()) o.expect(lg(up) <= base_v.log() + delta * eps.log() + 1e-12, "exponent ordering");
            if (r > 0) {
                const auto wider = optimal_packing(query(set, f, Scale::of_rank(b, r - 1), alpha, K)).value;
                o.expect(lg(base_v) <= lg(wider) + 1e-12, "eps monotonicity");
            }
        }
        // set monotonicity: drop digits rank-wise
        SmallSet sub = s;
        for (auto& d : sub.digits)
            if (d.size() > 1 && rng() % 2) d.erase(d.begin() + static_cast<long>(rng() % d.size()));
        for (Family f : {Family::CylindersOnly, Family::AllIntervals}) {
            const auto big = optimal_packing(query(set, f, eps, alpha, K)).value;
            const auto small = optimal_packing(query(sub.set(), f, eps, alpha, K)).value;
            o.expect(lg(small) <= lg(big) + 1e-12, "set monotonicity");
        }
    }

    std::vector<BigInt> bv;
    for (int i = 0; i < 64; ++i) bv.push_back(2 + (i * 7) % 5);
    const auto base = BaseSequence::list(bv);
    std::mt19937_64 r2(10000);
    int checked = 0;
    for (int i = 0; i < 10000; ++i) {
        const long long q = 2 + static_cast<long long>(r2() % 100000);
        long long a = static_cast<long long>(r2() % q), e = static_cast<long long>(r2() % q);
        if (a > e) std::swap(a, e);
        const Rational lo(a, q), hi(e + 1, q);
        const auto J = IntervalBall::from_endpoints(lo, hi);
        const auto c = inscribe_cylinder(J, J.center, base, 60);
        const auto n = c.rank() == 0 ? BigInt(1) : base.n(c.rank());
        o.expect(c.length() * 2 * n >= J.diameter(), "inscribe bound");
        o.expect(J.contains_closed(c.left(), c.right()) || c.rank() == 0, "inscribed cylinder inside J");
        ++checked;
    }
    o.detail << queries << " ordering queries, " << checked << " inscribe trials";
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
        {"1 faithfulness arithmetic", faithfulness_arithmetic},
        {"2 DP exactness oracle", dp_exactness},
        {"3 dimension sanity", dimension_sanity},
        {"4 counterexample gap", counterexample_gap},
        {"5 Billingsley ratios", billingsley_ratios},
        {"6 pre-measure inequality", premeasure_inequality},
        {"7 centering construction", centering},
        {"8 ordering invariants", ordering},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            run(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "exception: " << e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), secs, o.detail.str().c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed == 0 ? 0 : 1;
}
