#include "cantorpack/cylinder.hpp"

#include "cantorpack/errors.hpp"

#include <sstream>

namespace cantorpack {

namespace mp = boost::multiprecision;

DigitWord::DigitWord(BaseSequence base, std::vector<BigInt> digits)
    : base_(std::move(base)), digits_(std::move(digits)) {
    for (std::size_t i = 0; i < digits_.size(); ++i) {
        const BigInt n = base_.n(i + 1);
        if (digits_[i] < 0 || digits_[i] >= n)
            throw ValidationError("digit " + digits_[i].str() + " at rank " + std::to_string(i + 1) +
                                  " outside [0, " + (n - 1).str() + "]");
    }
}

DigitWord DigitWord::extended(BigInt digit) const {
    auto digits = digits_;
    digits.push_back(std::move(digit));
    return DigitWord(base_, std::move(digits));
}

DigitWord DigitWord::prefix(std::size_t k) const {
    if (k > rank()) throw DomainError("prefix longer than the word");
    return DigitWord(base_, std::vector<BigInt>(digits_.begin(), digits_.begin() + static_cast<long>(k)));
}

bool DigitWord::is_prefix_of(const DigitWord& other) const {
    if (base_ != other.base_ || rank() > other.rank()) return false;
    for (std::size_t i = 0; i < rank(); ++i)
        if (digits_[i] != other.digits_[i]) return false;
    return true;
}

std::string DigitWord::str() const {
    std::ostringstream out;
    out << "(";
    for (std::size_t i = 0; i < digits_.size(); ++i) out << (i ? "," : "") << digits_[i];
    out << ")";
    return out.str();
}

Cylinder::Cylinder(DigitWord word) : word_(std::move(word)), left_(0), length_(1), log_length_(0.0) {
    const auto& base = word_.base();
    BigInt denom = 1;
    for (std::size_t i = 0; i < word_.rank(); ++i) {
        denom *= base.n(i + 1);
        left_ += Rational(word_.digits()[i], denom);
    }
    length_ = Rational(BigInt(1), denom);
    log_length_ = -base.log_size(word_.rank());
}

IntervalBall::IntervalBall(Rational c, Rational r) : center(std::move(c)), radius(std::move(r)) {
    if (radius <= 0) throw ValidationError("ball radius must be positive");
}

IntervalBall IntervalBall::from_endpoints(const Rational& a, const Rational& b) {
    if (!(a < b)) throw ValidationError("interval endpoints must satisfy a < b");
    return IntervalBall((a + b) / 2, (b - a) / 2);
}

DigitWord digits_of(const Rational& x, const BaseSequence& base, std::size_t k) {
    if (x < 0 || x >= 1) throw DomainError("digits_of needs 0 <= x < 1, got " + to_string(x));
    std::vector<BigInt> digits;
    digits.reserve(k);
    Rational r = x;
    for (std::size_t i = 1; i <= k; ++i) {
        r *= base.n(i);
        BigInt d = mp::numerator(r) / mp::denominator(r);  // floor, r >= 0
        r -= d;
        digits.push_back(std::move(d));
    }
    return DigitWord(base, std::move(digits));
}

Cylinder cylinder(const DigitWord& word) { return Cylinder(word); }

Cylinder cylinder_containing(const Rational& x, const BaseSequence& base, std::size_t k) {
    return Cylinder(digits_of(x, base, k));
}

Cylinder inscribe_cylinder(const IntervalBall& J, const Rational& c, const BaseSequence& base,
                           std::size_t max_rank) {
    if (!J.contains(c)) throw DomainError("inscribe_cylinder: c must lie in the open interval J");
    // clamp c into [0,1) for digit extraction; c = 1 can only sit in the top cylinder's closure
    if (c < 0 || c >= 1) throw DomainError("inscribe_cylinder: c must lie in [0,1)");
    std::size_t k = base.rank_for_length(J.diameter(), max_rank);
    for (;; ++k) {
        if (k > max_rank || k > base.available() || !base.exact_available(k))
            throw ResolutionExceeded("no cylinder around c fits inside J up to rank " + std::to_string(k - 1),
                                     k - 1);
        Cylinder cyl = cylinder_containing(c, base, k);
        if (J.contains_closed(cyl.left(), cyl.right())) return cyl;
    }
}

std::vector<DigitWord> all_words(const BaseSequence& base, std::size_t k, std::size_t limit) {
    if (base.product(k) > limit) throw ResolutionExceeded("too many rank-" + std::to_string(k) + " cylinders", k);
    std::vector<std::vector<BigInt>> words{{}};
    for (std::size_t i = 1; i <= k; ++i) {
        const BigInt n = base.n(i);
        std::vector<std::vector<BigInt>> next;
        for (const auto& w : words)
            for (BigInt d = 0; d < n; ++d) {
                next.push_back(w);
                next.back().push_back(d);
            }
        words = std::move(next);
    }
    std::vector<DigitWord> out;
    out.reserve(words.size());
    for (auto& w : words) out.emplace_back(base, std::move(w));
    return out;
}

}  // namespace cantorpack
