#pragma once

#include "cantorpack/base_sequence.hpp"
#include "cantorpack/numeric.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace cantorpack {

// Digits (a_1, ..., a_k) with 0 <= a_i < n_i. Rank 0 is the empty word.
class DigitWord {
public:
    DigitWord(BaseSequence base, std::vector<BigInt> digits);

    const BaseSequence& base() const { return base_; }
    const std::vector<BigInt>& digits() const { return digits_; }
    std::size_t rank() const { return digits_.size(); }

    DigitWord extended(BigInt digit) const;
    DigitWord prefix(std::size_t k) const;
    bool is_prefix_of(const DigitWord& other) const;

    std::string str() const;

    friend bool operator==(const DigitWord& a, const DigitWord& b) {
        return a.base_ == b.base_ && a.digits_ == b.digits_;
    }

private:
    BaseSequence base_;
    std::vector<BigInt> digits_;
};

// Closed interval [left, left + length] of all points sharing a digit prefix.
class Cylinder {
public:
    explicit Cylinder(DigitWord word);

    const DigitWord& word() const { return word_; }
    std::size_t rank() const { return word_.rank(); }
    const Rational& left() const { return left_; }
    const Rational& length() const { return length_; }
    Rational right() const { return left_ + length_; }
    // ln |cylinder| = -L(rank).
    double log_length() const { return log_length_; }

    bool contains(const Rational& x) const { return left_ <= x && x <= right(); }

private:
    DigitWord word_;
    Rational left_;
    Rational length_;
    double log_length_;
};

// Open interval (center - radius, center + radius).
struct IntervalBall {
    Rational center;
    Rational radius;

    IntervalBall(Rational c, Rational r);
    static IntervalBall from_endpoints(const Rational& a, const Rational& b);

    Rational lower() const { return center - radius; }
    Rational upper() const { return center + radius; }
    Rational diameter() const { return 2 * radius; }

    bool contains(const Rational& x) const { return lower() < x && x < upper(); }
    // Closed interval strictly inside the open ball.
    bool contains_closed(const Rational& a, const Rational& b) const {
        return lower() < a && b < upper();
    }
    // Open-interval overlap; shared endpoints do not count.
    bool overlaps(const IntervalBall& other) const {
        return lower() < other.upper() && other.lower() < upper();
    }
};

// Greedy digit extraction over half-open cylinders [left, left + length).
DigitWord digits_of(const Rational& x, const BaseSequence& base, std::size_t k);

Cylinder cylinder(const DigitWord& word);

Cylinder cylinder_containing(const Rational& x, const BaseSequence& base, std::size_t k);

// The cylinder of minimal rank that contains c and fits strictly inside the
// open interval J. When c is the center of J the result satisfies
// |cylinder| >= |J| / (2 n_rank). Throws ResolutionExceeded when no rank up to
// max_rank (or the base's exact budget) fits.
Cylinder inscribe_cylinder(const IntervalBall& J, const Rational& c, const BaseSequence& base,
                           std::size_t max_rank = 4096);

// Rank-k cylinders in left-to-right order; requires n_1...n_k <= limit.
std::vector<DigitWord> all_words(const BaseSequence& base, std::size_t k, std::size_t limit = 1u << 20);

}  // namespace cantorpack
