#pragma once

// Per-rank digit restrictions and digit probability laws, and the joint
// partition of a rank's digit range into classes on which every rule and
// law involved is constant. The classes are what make sets over huge bases
// (n_k with thousands of bits) tractable: all per-rank sums reduce to a few
// (representative, count) pairs.

#include "cantorpack/numeric.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace cantorpack {

struct DigitRule {
    enum class Kind { All, Explicit, SqrtLattice };

    Kind kind = Kind::All;
    std::vector<BigInt> digits;  // sorted, unique; Explicit only

    static DigitRule all() { return {}; }
    static DigitRule explicit_digits(std::vector<BigInt> digits);
    static DigitRule sqrt_lattice() { return {Kind::SqrtLattice, {}}; }

    // Throws ValidationError when the rule is empty or out of range for base n.
    void validate(const BigInt& n) const;
    bool allows(const BigInt& d, const BigInt& n) const;
    BigInt count(const BigInt& n) const;
    // Allowed digits in increasing order; only for small counts.
    std::vector<BigInt> enumerate(const BigInt& n, std::size_t limit = 1u << 20) const;
    // Smallest and largest allowed digits.
    BigInt min_digit(const BigInt& n) const;
    BigInt max_digit(const BigInt& n) const;

    std::string describe() const;
    friend bool operator==(const DigitRule&, const DigitRule&) = default;
};

// {0, m, 2m, ..., (m-1)m} with m = floor(sqrt(n)).
bool in_sqrt_lattice(const BigInt& d, const BigInt& n);

// Probability law of one digit.
struct DigitLaw {
    enum class Kind { Uniform, UniformOnLattice, UniformOnSubset, Dirac, Explicit };

    Kind kind = Kind::Uniform;
    std::vector<BigInt> digits;   // UniformOnSubset (sorted, unique) or Dirac (one entry)
    std::vector<Rational> probs;  // Explicit: probs[d] for d < n

    static DigitLaw uniform() { return {}; }
    static DigitLaw uniform_on_lattice() { return {Kind::UniformOnLattice, {}, {}}; }
    static DigitLaw uniform_on_subset(std::vector<BigInt> digits);
    static DigitLaw dirac(BigInt digit) { return {Kind::Dirac, {std::move(digit)}, {}}; }
    static DigitLaw explicit_probs(std::vector<Rational> probs) { return {Kind::Explicit, {}, std::move(probs)}; }

    // Probabilities sum to exactly 1 and are nonnegative.
    void validate(const BigInt& n) const;
    Rational prob(const BigInt& d, const BigInt& n) const;
    // Largest single-digit probability.
    Rational max_prob(const BigInt& n) const;

    std::string describe() const;
    friend bool operator==(const DigitLaw&, const DigitLaw&) = default;
};

// Rule (or law) as a function of rank: a repeating default cycle with
// per-rank exceptions. rank k >= 1 maps to exceptions[k] if present,
// else cycle[(k-1) mod |cycle|].
template <class T>
struct RankSchedule {
    std::vector<T> cycle;
    std::map<std::size_t, T> exceptions;

    const T& at(std::size_t k) const {
        if (auto it = exceptions.find(k); it != exceptions.end()) return it->second;
        return cycle[(k - 1) % cycle.size()];
    }
    friend bool operator==(const RankSchedule&, const RankSchedule&) = default;
};

struct DigitClass {
    BigInt representative;
    BigInt count;
    double log_count;
};

// Partition of {0, ..., n-1} such that membership in every given rule and
// the probability under every given law is constant on each class.
std::vector<DigitClass> digit_classes(const BigInt& n, const std::vector<const DigitRule*>& rules,
                                      const std::vector<const DigitLaw*>& laws, double log_n);

}  // namespace cantorpack
