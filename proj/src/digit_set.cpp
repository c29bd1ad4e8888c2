#include "cantorpack/digit_set.hpp"

#include "cantorpack/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cantorpack {

DigitRestrictedSet::DigitRestrictedSet(BaseSequence base, RankSchedule<DigitRule> rules)
    : base_(std::move(base)), rules_(std::move(rules)) {
    if (rules_.cycle.empty()) throw ValidationError("digit-restricted set needs a default rule");
    // Validate the cycle against every rank where it is evaluated in the checked prefix,
    // and each exception at its own rank.
    for (const auto& [k, rule] : rules_.exceptions) {
        if (k == 0) throw ValidationError("rule exceptions are keyed by ranks >= 1");
        if (k <= base_.available() && base_.exact_available(k - 1) && rule.kind != DigitRule::Kind::All)
            rule.validate(base_.n(k));
    }
    for (const auto& rule : rules_.cycle) {
        if (rule.kind == DigitRule::Kind::Explicit && rule.digits.empty())
            throw ValidationError("explicit digit rule allows no digit");
        if (!rule.digits.empty() && rule.digits.front() < 0) throw ValidationError("negative digit in rule");
    }
    const std::size_t upto = std::min<std::size_t>(base_.available(), 64);
    for (std::size_t k = 1; k <= upto; ++k) {
        if (rules_.exceptions.count(k) || !base_.exact_available(k - 1)) continue;
        const auto& rule = rules_.at(k);
        if (rule.kind != DigitRule::Kind::All) rule.validate(base_.n(k));
    }
}

DigitRestrictedSet DigitRestrictedSet::full(BaseSequence base) {
    RankSchedule<DigitRule> rules;
    rules.cycle.push_back(DigitRule::all());
    return DigitRestrictedSet(std::move(base), std::move(rules));
}

namespace {

// Rule of `set` at rank k, validated against n_k.
const DigitRule& checked_rule(const DigitRestrictedSet& set, std::size_t k, const BigInt& n) {
    const DigitRule& r = set.rule(k);
    r.validate(n);
    return r;
}

}  // namespace

bool DigitRestrictedSet::subset_of(const DigitRestrictedSet& other, std::size_t K) const {
    if (base_ != other.base_) throw MismatchError("sets over different bases");
    for (std::size_t k = 1; k <= K; ++k) {
        const BigInt n = base_.n(k);
        const DigitRule& a = checked_rule(*this, k, n);
        const DigitRule& b = checked_rule(other, k, n);
        for (const auto& cls : digit_classes(n, {&a, &b}, {}, base_.log_n(k)))
            if (a.allows(cls.representative, n) && !b.allows(cls.representative, n)) return false;
    }
    return true;
}

DigitWord DigitRestrictedSet::point_word(const Cylinder& c, std::size_t depth) const {
    if (!intersects(*this, c)) throw DomainError("cylinder does not meet the set");
    auto digits = c.word().digits();
    for (std::size_t k = c.rank() + 1; k <= depth; ++k) {
        const BigInt n = base_.n(k);
        digits.push_back(checked_rule(*this, k, n).min_digit(n));
    }
    return DigitWord(base_, std::move(digits));
}

std::string DigitRestrictedSet::describe() const {
    std::ostringstream out;
    out << "rules over " << base_.describe() << ": cycle[";
    for (std::size_t i = 0; i < rules_.cycle.size(); ++i) out << (i ? "," : "") << rules_.cycle[i].describe();
    out << "]";
    for (const auto& [k, r] : rules_.exceptions) out << " k" << k << "=" << r.describe();
    return out.str();
}

bool intersects(const DigitRestrictedSet& set, const Cylinder& c) {
    if (set.base() != c.word().base()) throw MismatchError("cylinder and set use different bases");
    const auto& digits = c.word().digits();
    for (std::size_t i = 0; i < digits.size(); ++i) {
        const BigInt n = set.base().n(i + 1);
        if (!checked_rule(set, i + 1, n).allows(digits[i], n)) return false;
    }
    return true;
}

AllowedCount allowed_count(const DigitRestrictedSet& set, std::size_t k) {
    AllowedCount out{BigInt(1), true, 0.0};
    constexpr std::size_t kExactBits = 1u << 20;
    for (std::size_t i = 1; i <= k; ++i) {
        const BigInt n = set.base().n(i);
        const DigitRule& r = checked_rule(set, i, n);
        const BigInt c = r.count(n);
        out.log_count += (r.kind == DigitRule::Kind::All) ? set.base().log_n(i) : log_big(c);
        if (out.exact_known) {
            out.exact *= c;
            if (bit_length(out.exact) > kExactBits) out.exact_known = false;
        }
    }
    if (!out.exact_known) out.exact = 0;
    return out;
}

DigitRestrictedSet build_tstar(const BaseSequence& base, const std::vector<std::size_t>& A) {
    RankSchedule<DigitRule> rules;
    rules.cycle.push_back(DigitRule::explicit_digits({BigInt(0)}));
    std::vector<std::size_t> sorted = A;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (std::size_t k : sorted) {
        if (k == 0) throw ValidationError("index set A must contain ranks >= 1");
        if (k > base.available())
            throw ResolutionExceeded("index " + std::to_string(k) + " beyond the base prefix", base.available());
        // n_k >= 4 decided in the log domain so huge bases need no exact value
        if (base.log_n(k) < std::log(4.0) - 1e-12)
            throw ValidationError("T* needs n_k >= 4 on A; n_" + std::to_string(k) + " is too small");
        rules.exceptions[k] = DigitRule::sqrt_lattice();
    }
    DigitRestrictedSet set(base, std::move(rules));
    set.tstar_ = sorted;
    return set;
}

std::vector<double> second_condition_ratios(const BaseSequence& base, const std::vector<std::size_t>& indices) {
    std::vector<double> out;
    double numer = 0.0;
    for (std::size_t s = 0; s < indices.size(); ++s) {
        const std::size_t k = indices[s];
        const double denom = base.log_size(k - 1);
        out.push_back(denom > 0 ? numer / denom : 0.0);
        numer += base.log_n(k);
    }
    return out;
}

SubsequenceSelection select_subsequence(const BaseSequence& base, std::size_t K, double target_C,
                                        const SparsityPolicy& policy) {
    if (K < 2) throw PreconditionError("select_subsequence needs a prefix of length >= 2");
    if (K > base.available()) throw ResolutionExceeded("prefix longer than the base", base.available());
    SubsequenceSelection sel;

    std::vector<double> ratio(K + 1, 0.0);
    for (std::size_t k = 2; k <= K; ++k) ratio[k] = base.log_n(k) / base.log_size(k - 1);
    const std::size_t entries = K - 1;
    const auto tail = static_cast<std::size_t>(std::ceil(static_cast<double>(entries) * policy.window));
    for (std::size_t k = K + 1 - std::max<std::size_t>(tail, 1); k <= K; ++k)
        sel.limsup_estimate = std::max(sel.limsup_estimate, ratio[k]);

    if (sel.limsup_estimate < policy.tolerance) {
        sel.note = "tail ratios below tolerance: faithful trend, no subsequence";
        return sel;
    }
    if (target_C <= 0.0) {
        sel.note = "nonpositive target";
        return sel;
    }

    const double log4 = std::log(4.0);
    auto candidate = [&](std::size_t k) {
        return ratio[k] >= target_C - policy.tolerance && base.log_n(k) >= log4 - 1e-12;
    };
    std::size_t k = std::max<std::size_t>(policy.start, 2);
    while (k <= K) {
        if (candidate(k)) {
            sel.indices.push_back(k);
            k = std::max(k + 1, static_cast<std::size_t>(std::ceil(policy.growth * static_cast<double>(k))));
        } else {
            ++k;
        }
    }
    for (std::size_t idx : sel.indices) sel.ratio_first.push_back(ratio[idx]);
    sel.ratio_second = second_condition_ratios(base, sel.indices);
    if (sel.indices.empty()) sel.note = "no rank in the prefix reaches the target ratio";
    return sel;
}

}  // namespace cantorpack
