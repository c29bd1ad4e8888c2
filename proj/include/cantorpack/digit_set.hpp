#pragma once

#include "cantorpack/base_sequence.hpp"
#include "cantorpack/cylinder.hpp"
#include "cantorpack/digit_rules.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cantorpack {

// Moran-type subset of [0,1]: all points whose rank-k digit is allowed by
// rule(k) for every k. Represented intensionally; queries reduce to prefix
// feasibility.
class DigitRestrictedSet {
public:
    DigitRestrictedSet(BaseSequence base, RankSchedule<DigitRule> rules);

    // Every digit allowed at every rank.
    static DigitRestrictedSet full(BaseSequence base);

    const BaseSequence& base() const { return base_; }
    const RankSchedule<DigitRule>& rules() const { return rules_; }
    const DigitRule& rule(std::size_t k) const { return rules_.at(k); }

    // Index set A when the set was built by build_tstar.
    const std::optional<std::vector<std::size_t>>& tstar_indices() const { return tstar_; }

    // Pointwise rule inclusion at ranks 1..K (checked by enumeration where needed).
    bool subset_of(const DigitRestrictedSet& other, std::size_t K) const;

    // A point of the set inside `c`, resolved to rank `depth`: the word of c
    // extended by minimal allowed digits. Requires intersects(c).
    DigitWord point_word(const Cylinder& c, std::size_t depth) const;

    std::string describe() const;

private:
    friend DigitRestrictedSet build_tstar(const BaseSequence&, const std::vector<std::size_t>&);

    BaseSequence base_;
    RankSchedule<DigitRule> rules_;
    std::optional<std::vector<std::size_t>> tstar_;
};

// Cylinder meets the set iff every digit of its word is allowed.
bool intersects(const DigitRestrictedSet& set, const Cylinder& c);

struct AllowedCount {
    BigInt exact;      // valid when exact_known
    bool exact_known;
    double log_count;  // nats
};

// Number of rank-k cylinders meeting the set.
AllowedCount allowed_count(const DigitRestrictedSet& set, std::size_t k);

// Digits 0 off A; {0, m, ..., (m-1)m} with m = floor(sqrt(n_k)) on A.
DigitRestrictedSet build_tstar(const BaseSequence& base, const std::vector<std::size_t>& A);

struct SparsityPolicy {
    std::size_t start = 4;   // first admissible index
    double growth = 2.0;     // k_{s+1} >= growth * k_s
    double tolerance = 0.05; // |ratio - C| and faithful cutoff
    double window = 0.5;     // tail fraction for the limsup estimate
};

struct SubsequenceSelection {
    std::vector<std::size_t> indices;
    // ln n_{k_s} / L(k_s - 1) for each selected index.
    std::vector<double> ratio_first;
    // ln(n_{k_1} ... n_{k_{s-1}}) / L(k_s - 1) for each selected index.
    std::vector<double> ratio_second;
    double limsup_estimate = 0.0;
    std::string note;
};

// Picks k_1 < k_2 < ... within the rank prefix [1, K] whose ratios
// ln n_k / L(k-1) approach the target C while the selected indices stay
// sparse enough that the second ratio decays. Returns an empty selection
// when the tail-window estimate of the limsup is below tolerance.
SubsequenceSelection select_subsequence(const BaseSequence& base, std::size_t K, double target_C,
                                        const SparsityPolicy& policy = {});

// Second-condition ratios for an arbitrary index list (diagnostics).
std::vector<double> second_condition_ratios(const BaseSequence& base, const std::vector<std::size_t>& indices);

}  // namespace cantorpack
