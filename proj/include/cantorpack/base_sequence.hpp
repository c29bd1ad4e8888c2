#pragma once

#include "cantorpack/numeric.hpp"

#include <cstddef>
#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace cantorpack {

inline constexpr std::size_t kDefaultBitBudget = 1'000'000;
inline constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

// The Cantor base {n_k}, k >= 1, every n_k >= 2.
//
// Exact values n(k) and products n_1...n_k are big integers computed on
// demand and cached; log-sizes L(k) = ln(n_1...n_k) are always available in
// nats, even far beyond the exact bit budget (product-recursive bases grow
// doubly exponentially). Copies share one immutable description and one
// internally synchronized cache, so a BaseSequence is cheap to pass by value
// and safe to use from several threads.
class BaseSequence {
public:
    enum class Kind { Constant, List, ProductRecursive, Power };

    // n_k = s for every k.
    static BaseSequence constant(BigInt s, std::size_t bit_budget = kDefaultBitBudget);
    // Finite explicit prefix; ranks beyond it are unavailable.
    static BaseSequence list(std::vector<BigInt> values, std::size_t bit_budget = kDefaultBitBudget);
    // n_k = seed[k-1] for k <= |seed|, else n_k = n_1 * ... * n_{k-1}.
    static BaseSequence product_recursive(std::vector<BigInt> seed,
                                          std::size_t bit_budget = kDefaultBitBudget);
    // n_k = b^k.
    static BaseSequence power(BigInt b, std::size_t bit_budget = kDefaultBitBudget);

    Kind kind() const;
    // Largest rank with a defined n_k (kUnbounded for generated kinds).
    std::size_t available() const;
    std::size_t bit_budget() const;
    // Parameters as given at construction (s, list, seed or b).
    const std::vector<BigInt>& parameters() const;

    // Exact n_k; throws ResolutionExceeded past the prefix or the bit budget.
    BigInt n(std::size_t k) const;
    // Exact n_1 * ... * n_k (1 for k = 0).
    BigInt product(std::size_t k) const;
    // True when product(k) fits in the bit budget.
    bool exact_available(std::size_t k) const;

    double log_n(std::size_t k) const;
    // L(k) = ln(n_1 ... n_k); L(0) = 0.
    double log_size(std::size_t k) const;

    // Smallest rank k with 1/(n_1...n_k) <= len, searching up to max_rank.
    std::size_t rank_for_length(const Rational& len, std::size_t max_rank) const;

    std::string describe() const;

    friend bool operator==(const BaseSequence& a, const BaseSequence& b);
    friend bool operator!=(const BaseSequence& a, const BaseSequence& b) { return !(a == b); }

private:
    struct Impl;
    explicit BaseSequence(std::shared_ptr<Impl> impl);
    void check_rank(std::size_t k) const;

    std::shared_ptr<Impl> impl_;
};

}  // namespace cantorpack
