#include "cantorpack/measure.hpp"

#include "cantorpack/errors.hpp"

#include <sstream>

namespace cantorpack {

DigitProductMeasure::DigitProductMeasure(BaseSequence base, RankSchedule<DigitLaw> laws)
    : base_(std::move(base)), laws_(std::move(laws)) {
    if (laws_.cycle.empty()) throw ValidationError("digit product measure needs a default law");
    for (const auto& [k, law] : laws_.exceptions) {
        if (k == 0) throw ValidationError("law exceptions are keyed by ranks >= 1");
        if (k <= base_.available() && base_.exact_available(k - 1)) law.validate(base_.n(k));
    }
    lebesgue_ = laws_.exceptions.empty() && laws_.cycle.size() == 1 &&
                laws_.cycle[0].kind == DigitLaw::Kind::Uniform;
}

DigitProductMeasure DigitProductMeasure::lebesgue(BaseSequence base) {
    RankSchedule<DigitLaw> laws;
    laws.cycle.push_back(DigitLaw::uniform());
    return DigitProductMeasure(std::move(base), std::move(laws));
}

Rational DigitProductMeasure::prob(std::size_t k, const BigInt& d) const {
    const BigInt n = base_.n(k);
    const DigitLaw& l = law(k);
    l.validate(n);
    return l.prob(d, n);
}

LogValue DigitProductMeasure::log_prob(std::size_t k, const BigInt& d) const {
    const DigitLaw& l = law(k);
    if (l.kind == DigitLaw::Kind::Uniform) {
        if (d < 0) return LogValue::zero();
        return LogValue::from_log(-base_.log_n(k));
    }
    return LogValue::from_rational(prob(k, d));
}

std::string DigitProductMeasure::describe() const {
    if (lebesgue_) return "lebesgue";
    std::ostringstream out;
    out << "product measure: cycle[";
    for (std::size_t i = 0; i < laws_.cycle.size(); ++i) out << (i ? "," : "") << laws_.cycle[i].describe();
    out << "]";
    for (const auto& [k, l] : laws_.exceptions) out << " k" << k << "=" << l.describe();
    return out.str();
}

MeasureValue measure_of_cylinder(const DigitProductMeasure& mu, const Cylinder& c) {
    if (mu.base() != c.word().base()) throw MismatchError("measure and cylinder use different bases");
    MeasureValue out{Rational(1), true, LogValue::one()};
    const auto& digits = c.word().digits();
    constexpr std::size_t kExactBits = 1u << 20;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        const std::size_t k = i + 1;
        const LogValue lp = mu.log_prob(k, digits[i]);
        out.log = out.log * lp;
        if (out.exact_known) {
            if (!mu.base().exact_available(k)) {
                out.exact_known = false;
            } else {
                out.exact *= mu.prob(k, digits[i]);
                if (bit_length(out.exact) > kExactBits) out.exact_known = false;
            }
        }
        if (lp.is_zero()) {
            out.exact = 0;
            out.exact_known = true;
            break;
        }
    }
    if (!out.exact_known) out.exact = 0;
    return out;
}

DigitProductMeasure mu_xi_for(const DigitRestrictedSet& tstar) {
    const auto& A = tstar.tstar_indices();
    if (!A) throw PreconditionError("mu_xi_for needs a set built by build_tstar");
    RankSchedule<DigitLaw> laws;
    laws.cycle.push_back(DigitLaw::dirac(BigInt(0)));
    for (std::size_t k : *A) laws.exceptions[k] = DigitLaw::uniform_on_lattice();
    return DigitProductMeasure(tstar.base(), std::move(laws));
}

namespace {

template <class Fold>
LogValue fold_ranks(const DigitProductMeasure& mu, const DigitRestrictedSet& set, std::size_t k, Fold fold) {
    if (mu.base() != set.base()) throw MismatchError("measure and set use different bases");
    LogValue total = LogValue::one();
    for (std::size_t i = 1; i <= k; ++i) {
        const BigInt n = set.base().n(i);
        const DigitRule& r = set.rule(i);
        r.validate(n);
        const DigitLaw& l = mu.law(i);
        l.validate(n);
        const LogValue per_rank = fold(n, r, l, digit_classes(n, {&r}, {&l}, set.base().log_n(i)), i);
        total = total * per_rank;
        if (total.is_zero()) break;
    }
    return total;
}

}  // namespace

LogValue max_cylinder_measure(const DigitProductMeasure& mu, const DigitRestrictedSet& set, std::size_t k) {
    return fold_ranks(mu, set, k,
                      [&](const BigInt& n, const DigitRule& r, const DigitLaw&, const std::vector<DigitClass>& cls,
                          std::size_t i) {
                          LogValue best = LogValue::zero();
                          for (const auto& c : cls)
                              if (r.allows(c.representative, n))
                                  best = std::max(best, mu.log_prob(i, c.representative));
                          return best;
                      });
}

LogValue set_mass(const DigitProductMeasure& mu, const DigitRestrictedSet& set, std::size_t k) {
    return fold_ranks(mu, set, k,
                      [&](const BigInt& n, const DigitRule& r, const DigitLaw&, const std::vector<DigitClass>& cls,
                          std::size_t i) {
                          LogSum acc;
                          for (const auto& c : cls)
                              if (r.allows(c.representative, n))
                                  acc.add(LogValue::from_log(c.log_count) * mu.log_prob(i, c.representative));
                          return acc.total();
                      });
}

}  // namespace cantorpack
