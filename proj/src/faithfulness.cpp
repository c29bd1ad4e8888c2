#include "cantorpack/faithfulness.hpp"

#include "cantorpack/errors.hpp"

#include <algorithm>
#include <cmath>

namespace cantorpack {

std::string to_string(Verdict v) { return v == Verdict::FaithfulTrend ? "FaithfulTrend" : "NonFaithfulTrend"; }

namespace {

constexpr std::size_t kExactRatioBits = 1u << 16;

// ln n_k / L(k-1) as an exact rational where the base structure or the
// integers themselves make it one.
std::optional<Rational> exact_ratio(const BaseSequence& base, std::size_t k) {
    const auto& p = base.parameters();
    switch (base.kind()) {
        case BaseSequence::Kind::Constant:
            return Rational(BigInt(1), BigInt(k - 1));
        case BaseSequence::Kind::Power:
            return Rational(BigInt(2), BigInt(k - 1));
        case BaseSequence::Kind::ProductRecursive:
            if (k > p.size()) return Rational(1);
            break;
        case BaseSequence::Kind::List:
            break;
    }
    if (!base.exact_available(k) || base.log_size(k) > kExactRatioBits * 0.69) return std::nullopt;
    return exact_log_ratio(base.n(k), base.product(k - 1));
}

}  // namespace

FaithfulnessReport condition_ratios(const BaseSequence& base, std::size_t K, const RatioOptions& options) {
    if (K < 2) throw PreconditionError("condition_ratios needs K >= 2");
    if (K > base.available()) throw ResolutionExceeded("K beyond the base prefix", base.available());
    FaithfulnessReport rep;
    rep.prefix = K;
    rep.tolerance = options.tolerance;
    double sup = 0.0;
    for (std::size_t k = 2; k <= K; ++k) {
        const double r = base.log_n(k) / base.log_size(k - 1);
        rep.ratios.push_back({k, r, exact_ratio(base, k)});
        sup = std::max(sup, r);
        rep.running_sup.push_back(sup);
    }
    const std::size_t entries = rep.ratios.size();
    const auto tail = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(options.window * static_cast<double>(entries))));
    rep.window_start = rep.ratios[entries - tail].k;
    bool all_exact = true;
    Rational best_exact = 0;
    for (std::size_t i = entries - tail; i < entries; ++i) {
        const auto& e = rep.ratios[i];
        rep.C = std::max(rep.C, e.ratio);
        if (e.exact)
            best_exact = std::max(best_exact, *e.exact);
        else
            all_exact = false;
    }
    if (all_exact) rep.C_exact = best_exact;
    rep.verdict = rep.C < options.tolerance ? Verdict::FaithfulTrend : Verdict::NonFaithfulTrend;
    const Bounds b = theoretical_bounds(rep.C);
    rep.lower_bound = b.lower;
    rep.family_upper_bound = b.upper_for_family;
    if (rep.C_exact) {
        const ExactBounds eb = theoretical_bounds_exact(*rep.C_exact);
        rep.lower_bound_exact = eb.lower;
        rep.family_upper_bound_exact = eb.upper_for_family;
    }
    return rep;
}

Bounds theoretical_bounds(double C) {
    if (!(C >= 0.0)) throw DomainError("C must be >= 0");
    return {C / (C + 2.0), C / (2.0 * C + 2.0)};
}

ExactBounds theoretical_bounds_exact(const Rational& C) {
    if (C < 0) throw DomainError("C must be >= 0");
    return {C / (C + 2), C / (2 * C + 2)};
}

std::vector<QVPoint> qv_curve(const BaseSequence& base, const std::vector<std::size_t>& A) {
    std::vector<QVPoint> out;
    double log_Q = 0.0;
    BigInt Q = 1;
    bool exact = true;
    for (std::size_t s = 0; s < A.size(); ++s) {
        const std::size_t k = A[s];
        double log_m;
        BigInt m;
        if (base.exact_available(k)) {
            m = isqrt(base.n(k));
            log_m = log_big(m);
        } else {
            exact = false;
            log_m = 0.5 * base.log_n(k);  // floor(sqrt n) only matters at bounded size
        }
        log_Q += log_m;
        QVPoint pt;
        pt.s = s + 1;
        pt.k = k;
        pt.log_Q = log_Q;
        pt.log_V = log_m - base.log_size(k);
        pt.threshold = log_Q / -pt.log_V;
        pt.L_prev = base.log_size(k - 1);
        if (exact) {
            Q *= m;
            const BigInt P = base.product(k);
            if (P % m == 0 && bit_length(P) <= kExactRatioBits * 4) pt.threshold_exact = exact_log_ratio(Q, P / m);
        }
        out.push_back(pt);
    }
    return out;
}

CounterexampleReport run_counterexample_experiment(const BaseSequence& base, const CounterexampleOptions& options) {
    CounterexampleReport rep;
    if (options.stages == 0) throw ValidationError("at least one stage is required");
    std::size_t prefix = options.prefix;
    if (prefix == 0) {
        double k = static_cast<double>(options.policy.start);
        for (std::size_t s = 1; s < options.stages; ++s) k = std::ceil(k * options.policy.growth);
        prefix = static_cast<std::size_t>(k);
    }
    if (options.indices && !options.indices->empty()) prefix = std::max(prefix, options.indices->back());
    rep.faithfulness = condition_ratios(base, prefix, options.ratios);
    if (rep.faithfulness.verdict == Verdict::FaithfulTrend)
        throw PreconditionError("base shows a faithful trend (C estimate " + std::to_string(rep.faithfulness.C) +
                                "); no counterexample set exists");
    const double C = rep.faithfulness.C;
    if (options.indices) {
        rep.selection.indices = *options.indices;
        rep.selection.ratio_second = second_condition_ratios(base, *options.indices);
        for (std::size_t k : *options.indices) rep.selection.ratio_first.push_back(base.log_n(k) / base.log_size(k - 1));
        rep.selection.note = "index set given explicitly";
    } else {
        rep.selection = select_subsequence(base, prefix, C, options.policy);
    }
    if (rep.selection.indices.empty())
        throw PreconditionError("subsequence selection failed: " + rep.selection.note);
    std::vector<std::size_t> A = rep.selection.indices;
    if (A.size() > options.stages) A.resize(options.stages);
    rep.stage_depths = A;

    const DigitRestrictedSet tstar = build_tstar(base, A);
    std::vector<Stage> stages = rank_tied_stages(base, A, 1);
    rep.cylinder_family = critical_exponent(tstar, Family::CylindersOnly, Weight::length(), stages, options.exponent);
    ExponentOptions iv = options.exponent;
    rep.interval_family = critical_exponent(tstar, Family::AllIntervals, Weight::length(), stages, iv);
    rep.qv_curve = qv_curve(base, A);
    rep.bounds = theoretical_bounds(C);

    const double cyl = rep.cylinder_family.last;
    const double ivl = rep.interval_family.last;
    rep.cylinder_within_bound = cyl <= rep.bounds.upper_for_family + options.tolerance;
    rep.interval_within_bound = ivl >= rep.bounds.lower - options.tolerance;
    rep.strict_gap = cyl < ivl;
    rep.notes.push_back("Q_s V_s^alpha diverges iff alpha < C/(C+2) (sign of C - 2 alpha - alpha C)");
    rep.notes.push_back("stage s: depth k_s, eps = |rank-(k_s - 1) cylinder|");
    if (A.size() < options.stages)
        rep.notes.push_back("only " + std::to_string(A.size()) + " indices found in the rank prefix");
    return rep;
}

}  // namespace cantorpack
