#pragma once

#include "cantorpack/base_sequence.hpp"
#include "cantorpack/cylinder.hpp"
#include "cantorpack/digit_rules.hpp"
#include "cantorpack/digit_set.hpp"

#include <string>

namespace cantorpack {

// Probability measure on [0,1] whose Cantor-series digits are independent,
// digit k distributed by law(k).
class DigitProductMeasure {
public:
    DigitProductMeasure(BaseSequence base, RankSchedule<DigitLaw> laws);

    // Lebesgue measure: uniform digits at every rank.
    static DigitProductMeasure lebesgue(BaseSequence base);

    const BaseSequence& base() const { return base_; }
    const RankSchedule<DigitLaw>& laws() const { return laws_; }
    const DigitLaw& law(std::size_t k) const { return laws_.at(k); }
    bool is_lebesgue() const { return lebesgue_; }

    // Probability of digit d at rank k (law validated against n_k).
    Rational prob(std::size_t k, const BigInt& d) const;
    // ln of that probability; zero is reported as LogValue::zero().
    LogValue log_prob(std::size_t k, const BigInt& d) const;

    std::string describe() const;

private:
    BaseSequence base_;
    RankSchedule<DigitLaw> laws_;
    bool lebesgue_ = false;
};

struct MeasureValue {
    Rational exact;  // valid when exact_known
    bool exact_known;
    LogValue log;
};

// Product of the digit probabilities along the cylinder's word.
MeasureValue measure_of_cylinder(const DigitProductMeasure& mu, const Cylinder& c);

// Dirac at 0 off A, uniform on the sqrt-lattice digits on A.
DigitProductMeasure mu_xi_for(const DigitRestrictedSet& tstar);

// max over set-meeting rank-k cylinders of mu(cylinder): the continuity
// modulus c(eps) at eps = |rank-k cylinder|.
LogValue max_cylinder_measure(const DigitProductMeasure& mu, const DigitRestrictedSet& set, std::size_t k);

// Sum of mu over all set-meeting rank-k cylinders (1 when the set carries mu).
LogValue set_mass(const DigitProductMeasure& mu, const DigitRestrictedSet& set, std::size_t k);

}  // namespace cantorpack
