#pragma once

// Exact and log-domain number types shared by every module.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace cantorpack {

// Expression templates off: keeps ?: and auto well-typed.
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;
using Rational =
    boost::multiprecision::number<boost::multiprecision::cpp_rational_backend, boost::multiprecision::et_off>;

// Natural log of a positive big integer; accurate to ~1 ulp of the result.
double log_big(const BigInt& x);

// Natural log of a positive rational.
double log_rational(const Rational& x);

// Number of significant bits of |x| (0 for x == 0).
std::size_t bit_length(const BigInt& x);

// Bits needed to store x exactly (numerator + denominator).
std::size_t bit_length(const Rational& x);

// Floor of the square root.
BigInt isqrt(const BigInt& x);

// Parses "p", "p/q" or a finite decimal "0.125" into an exact rational.
Rational parse_rational(const std::string& text);

std::string to_string(const BigInt& x);
std::string to_string(const Rational& x);

// Exact value of ln(a)/ln(b) when a and b are integer powers of a common
// base (a = r^i, b = r^j), e.g. ln 2^34 / ln 2^128 = 17/64. a >= 1, b >= 2.
std::optional<Rational> exact_log_ratio(const BigInt& a, const BigInt& b);

// A nonnegative real stored as its natural log, with an explicit zero.
// Arithmetic never produces NaN or leaks -inf into doubles.
class LogValue {
public:
    constexpr LogValue() = default;  // zero

    static constexpr LogValue zero() { return LogValue{}; }
    static constexpr LogValue one() { return from_log(0.0); }
    static constexpr LogValue from_log(double ln) {
        LogValue v;
        v.zero_ = false;
        v.ln_ = ln;
        return v;
    }
    static LogValue from_rational(const Rational& x);
    static LogValue from_big(const BigInt& x);

    constexpr bool is_zero() const { return zero_; }
    // ln of the value; only meaningful when !is_zero().
    constexpr double log() const { return ln_; }
    // ln of the value with -inf for zero (for display and comparisons only).
    double log_or_neg_inf() const {
        return zero_ ? -std::numeric_limits<double>::infinity() : ln_;
    }
    double linear() const { return zero_ ? 0.0 : std::exp(ln_); }

    // x^a for a > 0; zero stays zero.
    LogValue pow(double a) const { return zero_ ? zero() : from_log(a * ln_); }

    friend LogValue operator*(LogValue a, LogValue b) {
        if (a.zero_ || b.zero_) return zero();
        return from_log(a.ln_ + b.ln_);
    }
    friend LogValue operator/(LogValue a, LogValue b);
    friend LogValue operator+(LogValue a, LogValue b);

    friend bool operator<(LogValue a, LogValue b) {
        if (b.zero_) return false;
        if (a.zero_) return true;
        return a.ln_ < b.ln_;
    }
    friend bool operator>(LogValue a, LogValue b) { return b < a; }
    friend bool operator<=(LogValue a, LogValue b) { return !(b < a); }
    friend bool operator>=(LogValue a, LogValue b) { return !(a < b); }
    friend bool operator==(LogValue a, LogValue b) {
        return a.zero_ == b.zero_ && (a.zero_ || a.ln_ == b.ln_);
    }

private:
    bool zero_ = true;
    double ln_ = 0.0;
};

// Log-sum-exp accumulator with Neumaier-compensated scaled sum.
// Rescales when a larger term arrives, so terms may span any magnitude.
class LogSum {
public:
    void add(LogValue term);
    void add_log(double ln) { add(LogValue::from_log(ln)); }
    LogValue total() const;
    std::size_t size() const { return count_; }

private:
    double max_ = 0.0;
    double sum_ = 0.0;
    double comp_ = 0.0;
    std::size_t count_ = 0;
};

LogValue log_sum(const std::vector<LogValue>& terms);

// Relative/absolute closeness for log-domain comparisons.
inline bool close_rel(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace cantorpack
