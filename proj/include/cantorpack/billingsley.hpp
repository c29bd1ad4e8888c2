#pragma once

#include "cantorpack/cylinder.hpp"
#include "cantorpack/digit_set.hpp"
#include "cantorpack/measure.hpp"
#include "cantorpack/packing.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cantorpack {

struct GammaEntry {
    enum class Status { Defined, PlusInfinity, Undefined };

    std::size_t n;
    LogValue mu;  // mu(rank-n cylinder of x)
    LogValue nu;
    Status status;
    double gamma;  // ln mu / ln nu when Defined
    std::optional<Rational> exact;
};

std::string to_string(GammaEntry::Status s);

struct RatioSequence {
    std::vector<GammaEntry> entries;  // n = 1..N
    double limsup_estimate = 0.0;     // max of defined entries over the tail window
    std::size_t window_start = 1;
};

// gamma(n) = ln mu(Delta_n(x)) / ln nu(Delta_n(x)) along the prefixes of x.
RatioSequence gamma_sequence(const DigitWord& x, const DigitProductMeasure& mu, const DigitProductMeasure& nu,
                             double window = 0.5);

struct BlockMonotonicity {
    bool holds = true;
    std::vector<GammaEntry> per_rank;  // gamma by rank (rank-homogeneous inputs)
    std::optional<std::size_t> violation_rank;
    double limsup_all = 0.0;       // tail-window max over all ranks
    double limsup_selected = 0.0;  // tail-window max over the selected ranks
};

// Checks that gamma is nonincreasing inside each block [k_s, k_{s+1}) for
// every point of the set. Requires that at each rank all allowed digits
// carry the same pair (mu-probability, nu-probability), so gamma depends on
// the rank only; throws PreconditionError otherwise.
BlockMonotonicity block_monotonicity(const DigitRestrictedSet& set, const DigitProductMeasure& mu,
                                     const DigitProductMeasure& nu, const std::vector<std::size_t>& selected,
                                     std::size_t K);

struct HypothesisCheck {
    bool holds = true;
    std::optional<DigitWord> witness;  // a set-meeting cylinder with ratio > delta
    std::size_t witness_rank = 0;
    double worst_margin = 0.0;         // min over ranks of min_x (ln mu - delta ln nu)
};

// Verifies ln mu(C) / ln nu(C) <= delta for every set-meeting cylinder C of
// rank n0 < n <= K. Exact reduction: the worst cylinder at each rank is
// obtained digit by digit.
HypothesisCheck check_ratio_hypothesis(const DigitRestrictedSet& set, const DigitProductMeasure& mu,
                                       const DigitProductMeasure& nu, double delta, std::size_t K,
                                       std::size_t n0 = 0);

struct InequalityResult {
    HypothesisCheck hypothesis;
    bool verdict = false;    // P^alpha_eps(E, mu) >= P^{alpha delta}_eps(E, nu)
    double log_margin = 0.0; // ln P_mu - ln P_nu (may be +-inf)
    PackingValue mu_value;
    PackingValue nu_value;
};

// Finite-scale pre-measure inequality. When the hypothesis fails no verdict
// is computed and the witness cylinder is reported.
InequalityResult verify_premeasure_inequality(const DigitRestrictedSet& set, const DigitProductMeasure& mu,
                                              const DigitProductMeasure& nu, double delta, double alpha,
                                              const Scale& eps, std::size_t K, std::size_t n0 = 0);

struct DimensionBoundOptions {
    double tolerance = 0.05;
    double continuity_tolerance = 1e-2;
    std::size_t n0 = 0;
    ExponentOptions exponent;
};

struct DimensionBoundReport {
    bool continuity_ok = false;
    LogValue mu_max_cylinder;
    LogValue nu_max_cylinder;
    HypothesisCheck hypothesis;
    CriticalExponent mu_estimate;
    CriticalExponent nu_estimate;
    double delta = 0.0;
    bool bound_holds = false;  // nu estimate <= delta * mu estimate + tolerance
    std::vector<std::string> notes;
};

DimensionBoundReport dimension_bound_report(const DigitRestrictedSet& set, const DigitProductMeasure& mu,
                                            const DigitProductMeasure& nu, double delta,
                                            const std::vector<Stage>& stages,
                                            const DimensionBoundOptions& options = {});

}  // namespace cantorpack
