#include "cantorpack/billingsley.hpp"

#include "cantorpack/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cantorpack {

namespace mp = boost::multiprecision;

std::string to_string(GammaEntry::Status s) {
    switch (s) {
        case GammaEntry::Status::Defined:
            return "defined";
        case GammaEntry::Status::PlusInfinity:
            return "+inf";
        case GammaEntry::Status::Undefined:
            return "undefined";
    }
    return "?";
}

namespace {

constexpr std::size_t kExactBits = 1u << 17;

// Exact rational state of a cylinder mass, dropped once it grows too large.
struct ExactMass {
    Rational value{1};
    bool known = true;

    void times(const std::optional<Rational>& p) {
        if (!known) return;
        if (!p) {
            known = false;
            return;
        }
        value *= *p;
        if (bit_length(value) > kExactBits) known = false;
    }
};

GammaEntry make_entry(std::size_t n, LogValue mu, LogValue nu, const ExactMass& emu, const ExactMass& enu) {
    GammaEntry e{n, mu, nu, GammaEntry::Status::Undefined, 0.0, std::nullopt};
    if (mu.is_zero() && nu.is_zero()) return e;
    if (mu.is_zero()) {
        e.status = GammaEntry::Status::PlusInfinity;
        return e;
    }
    if (nu.is_zero()) {
        e.status = GammaEntry::Status::Defined;  // finite / -inf
        e.exact = Rational(0);
        return e;
    }
    if (nu.log() == 0.0) {
        if (mu.log() < 0.0) e.status = GammaEntry::Status::PlusInfinity;
        return e;
    }
    e.status = GammaEntry::Status::Defined;
    e.gamma = mu.log() / nu.log();
    if (emu.known && enu.known && mp::numerator(emu.value) == 1 && mp::numerator(enu.value) == 1 &&
        mp::denominator(enu.value) >= 2)
        e.exact = exact_log_ratio(mp::denominator(emu.value), mp::denominator(enu.value));
    return e;
}

std::optional<Rational> exact_prob(const DigitProductMeasure& m, std::size_t k, const BigInt& d) {
    if (!m.base().exact_available(k)) return std::nullopt;
    return m.prob(k, d);
}

double tail_max(const std::vector<GammaEntry>& entries, double window, std::size_t* start) {
    const auto tail = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(window * static_cast<double>(entries.size()))));
    double best = 0.0;
    const std::size_t from = entries.size() - std::min(tail, entries.size());
    if (start) *start = from < entries.size() ? entries[from].n : 0;
    for (std::size_t i = from; i < entries.size(); ++i)
        if (entries[i].status == GammaEntry::Status::Defined) best = std::max(best, entries[i].gamma);
    return best;
}

// gamma_a <= gamma_b, exactly when both carry exact values.
bool gamma_le(const GammaEntry& a, const GammaEntry& b) {
    if (a.exact && b.exact) return *a.exact <= *b.exact;
    return a.gamma <= b.gamma + 1e-12 * std::max(1.0, std::abs(b.gamma));
}

}  // namespace

RatioSequence gamma_sequence(const DigitWord& x, const DigitProductMeasure& mu, const DigitProductMeasure& nu,
                             double window) {
    if (mu.base() != x.base() || nu.base() != x.base()) throw MismatchError("measures and word use different bases");
    RatioSequence out;
    LogValue lm = LogValue::one();
    LogValue ln = LogValue::one();
    ExactMass em;
    ExactMass en;
    for (std::size_t n = 1; n <= x.rank(); ++n) {
        const BigInt& d = x.digits()[n - 1];
        lm = lm * mu.log_prob(n, d);
        ln = ln * nu.log_prob(n, d);
        em.times(exact_prob(mu, n, d));
        en.times(exact_prob(nu, n, d));
        out.entries.push_back(make_entry(n, lm, ln, em, en));
    }
    if (!out.entries.empty()) out.limsup_estimate = tail_max(out.entries, window, &out.window_start);
    return out;
}

BlockMonotonicity block_monotonicity(const DigitRestrictedSet& set, const DigitProductMeasure& mu,
                                     const DigitProductMeasure& nu, const std::vector<std::size_t>& selected,
                                     std::size_t K) {
    const auto& base = set.base();
    BlockMonotonicity out;
    LogValue lm = LogValue::one();
    LogValue ln = LogValue::one();
    ExactMass em;
    ExactMass en;
    for (std::size_t k = 1; k <= K; ++k) {
        const BigInt n = base.n(k);
        const DigitRule& rule = set.rule(k);
        rule.validate(n);
        const DigitLaw& a = mu.law(k);
        const DigitLaw& b = nu.law(k);
        std::optional<std::pair<LogValue, LogValue>> pair;
        BigInt rep;
        for (const auto& cls : digit_classes(n, {&rule}, {&a, &b}, base.log_n(k))) {
            if (!rule.allows(cls.representative, n)) continue;
            const auto p = std::make_pair(mu.log_prob(k, cls.representative), nu.log_prob(k, cls.representative));
            if (pair && !(pair->first == p.first && pair->second == p.second))
                throw PreconditionError("gamma is not rank-homogeneous at rank " + std::to_string(k));
            pair = p;
            rep = cls.representative;
        }
        lm = lm * pair->first;
        ln = ln * pair->second;
        em.times(exact_prob(mu, k, rep));
        en.times(exact_prob(nu, k, rep));
        out.per_rank.push_back(make_entry(k, lm, ln, em, en));
    }
    std::vector<std::size_t> sel = selected;
    std::sort(sel.begin(), sel.end());
    for (std::size_t s = 0; s < sel.size() && out.holds; ++s) {
        const std::size_t begin = sel[s];
        const std::size_t end = s + 1 < sel.size() ? sel[s + 1] : K + 1;  // exclusive
        for (std::size_t l = begin + 1; l < end && l <= K; ++l) {
            const auto& prev = out.per_rank[l - 2];
            const auto& cur = out.per_rank[l - 1];
            if (prev.status != GammaEntry::Status::Defined || cur.status != GammaEntry::Status::Defined) continue;
            if (!gamma_le(cur, prev)) {
                out.holds = false;
                out.violation_rank = l;
                break;
            }
        }
    }
    // both maxima over the same rank window, so they are comparable
    std::size_t from = 0;
    if (!out.per_rank.empty()) out.limsup_all = tail_max(out.per_rank, 0.5, &from);
    std::vector<GammaEntry> chosen;
    for (std::size_t k : sel)
        if (k >= from && k >= 1 && k <= K) chosen.push_back(out.per_rank[k - 1]);
    if (!chosen.empty()) out.limsup_selected = tail_max(chosen, 1.0, nullptr);
    return out;
}

HypothesisCheck check_ratio_hypothesis(const DigitRestrictedSet& set, const DigitProductMeasure& mu,
                                       const DigitProductMeasure& nu, double delta, std::size_t K, std::size_t n0) {
    const auto& base = set.base();
    if (mu.base() != base || nu.base() != base) throw MismatchError("measures and set use different bases");
    constexpr double kInf = std::numeric_limits<double>::infinity();
    HypothesisCheck out;
    out.worst_margin = kInf;
    // Worst path: minimize sum_i (ln p_i - delta ln q_i) digit by digit.
    double acc = 0.0;
    bool nu_below_one = false;
    std::vector<BigInt> path;
    for (std::size_t k = 1; k <= K; ++k) {
        const BigInt n = base.n(k);
        const DigitRule& rule = set.rule(k);
        rule.validate(n);
        const DigitLaw& a = mu.law(k);
        const DigitLaw& b = nu.law(k);
        double best = kInf;
        bool best_nu_below = false;
        BigInt best_digit = -1;
        for (const auto& cls : digit_classes(n, {&rule}, {&a, &b}, base.log_n(k))) {
            if (!rule.allows(cls.representative, n)) continue;
            const LogValue p = mu.log_prob(k, cls.representative);
            const LogValue q = nu.log_prob(k, cls.representative);
            double term;
            if (p.is_zero())
                term = q.is_zero() ? kInf : -kInf;  // 0/0 undefined; 0 against positive nu: ratio +inf
            else if (q.is_zero())
                term = kInf;  // ratio 0 below this digit
            else
                term = p.log() - delta * q.log();
            const bool below = !q.is_zero() && q.log() < 0.0;
            if (term < best || (term == best && best_digit < 0)) {
                best = term;
                best_digit = cls.representative;
                best_nu_below = below;
            }
        }
        if (best_digit < 0) throw ValidationError("set allows no digit at rank " + std::to_string(k));
        acc += best;
        nu_below_one = nu_below_one || best_nu_below;
        path.push_back(best_digit);
        if (k <= n0) continue;
        out.worst_margin = std::min(out.worst_margin, acc);
        const double tol = 1e-12 * std::max(1.0, std::abs(delta * base.log_size(k)));
        if (acc < -tol) {
            out.holds = false;
            out.witness = DigitWord(base, path);
            out.witness_rank = k;
            return out;
        }
    }
    (void)nu_below_one;
    return out;
}

InequalityResult verify_premeasure_inequality(const DigitRestrictedSet& set, const DigitProductMeasure& mu,
                                              const DigitProductMeasure& nu, double delta, double alpha,
                                              const Scale& eps, std::size_t K, std::size_t n0) {
    if (n0 > 0 && eps.admits_rank(set.base(), n0))
        throw PreconditionError("eps admits cylinders of rank <= n0, where the ratio hypothesis is not assumed");
    InequalityResult out;
    out.hypothesis = check_ratio_hypothesis(set, mu, nu, delta, K, n0);
    if (!out.hypothesis.holds) return out;

    PackingQuery q{set, Family::CylindersOnly, eps};
    q.depth = K;
    q.witness_limit = 256;
    q.alpha = alpha;
    q.weight = Weight::of(mu);
    out.mu_value = optimal_cylinder_packing(q);
    q.alpha = alpha * delta;
    q.weight = Weight::of(nu);
    out.nu_value = optimal_cylinder_packing(q);

    const LogValue a = out.mu_value.value;
    const LogValue b = out.nu_value.value;
    constexpr double kInf = std::numeric_limits<double>::infinity();
    if (a.is_zero() && b.is_zero())
        out.log_margin = 0.0;
    else if (b.is_zero())
        out.log_margin = kInf;
    else if (a.is_zero())
        out.log_margin = -kInf;
    else
        out.log_margin = a.log() - b.log();
    out.verdict = out.log_margin >= -1e-12 * std::max(1.0, std::abs(b.log_or_neg_inf()));
    return out;
}

DimensionBoundReport dimension_bound_report(const DigitRestrictedSet& set, const DigitProductMeasure& mu,
                                            const DigitProductMeasure& nu, double delta,
                                            const std::vector<Stage>& stages, const DimensionBoundOptions& options) {
    if (stages.empty()) throw ValidationError("dimension_bound_report needs at least one stage");
    DimensionBoundReport rep;
    rep.delta = delta;
    std::size_t K = 0;
    for (const auto& st : stages) K = std::max(K, st.depth);
    rep.mu_max_cylinder = max_cylinder_measure(mu, set, K);
    rep.nu_max_cylinder = max_cylinder_measure(nu, set, K);
    const double cut = std::log(options.continuity_tolerance);
    rep.continuity_ok = rep.mu_max_cylinder.log_or_neg_inf() <= cut && rep.nu_max_cylinder.log_or_neg_inf() <= cut;
    if (!rep.continuity_ok)
        rep.notes.push_back("largest rank-" + std::to_string(K) +
                            " cylinder mass exceeds the continuity tolerance; bound not applicable");
    rep.hypothesis = check_ratio_hypothesis(set, mu, nu, delta, K, options.n0);
    if (!rep.hypothesis.holds)
        rep.notes.push_back("ratio hypothesis fails at rank " + std::to_string(rep.hypothesis.witness_rank));
    rep.mu_estimate = critical_exponent(set, Family::CylindersOnly, Weight::of(mu), stages, options.exponent);
    rep.nu_estimate = critical_exponent(set, Family::CylindersOnly, Weight::of(nu), stages, options.exponent);
    rep.bound_holds = rep.nu_estimate.last <= delta * rep.mu_estimate.last + options.tolerance;
    return rep;
}

}  // namespace cantorpack
