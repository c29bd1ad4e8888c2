#include "cantorpack/numeric.hpp"

#include "cantorpack/errors.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

namespace cantorpack {

namespace mp = boost::multiprecision;

namespace {

constexpr double kLn2 = 0.69314718055994530941723212145818;

// x = root^exponent with exponent maximal.
std::pair<BigInt, std::size_t> primitive_power(const BigInt& x) {
    if (x < 2) return {x, 1};
    const std::size_t bits = bit_length(x);
    if (mp::lsb(x) == bits - 1) return {BigInt(2), bits - 1};
    if (bits > 256) return {x, 1};
    for (std::size_t e = bits; e >= 2; --e) {
        // integer e-th root by bisection on [1, 2^(bits/e + 1)]
        BigInt lo = 1;
        BigInt hi = BigInt(1) << (bits / e + 1);
        while (lo < hi) {
            BigInt mid = (lo + hi + 1) / 2;
            if (mp::pow(mid, static_cast<unsigned>(e)) <= x)
                lo = mid;
            else
                hi = mid - 1;
        }
        if (lo >= 2 && mp::pow(lo, static_cast<unsigned>(e)) == x) return {lo, e};
    }
    return {x, 1};
}

}  // namespace

std::size_t bit_length(const BigInt& x) {
    if (x == 0) return 0;
    return static_cast<std::size_t>(mp::msb(mp::abs(x))) + 1;
}

std::size_t bit_length(const Rational& x) {
    return bit_length(mp::numerator(x)) + bit_length(mp::denominator(x));
}

double log_big(const BigInt& x) {
    if (x <= 0) throw DomainError("log of a nonpositive integer");
    const std::size_t bits = bit_length(x);
    if (bits <= 1000) return std::log(x.convert_to<double>());
    const std::size_t shift = bits - 64;
    const BigInt top = x >> shift;
    return std::log(top.convert_to<double>()) + static_cast<double>(shift) * kLn2;
}

double log_rational(const Rational& x) {
    if (x <= 0) throw DomainError("log of a nonpositive rational");
    return log_big(mp::numerator(x)) - log_big(mp::denominator(x));
}

BigInt isqrt(const BigInt& x) {
    if (x < 0) throw DomainError("square root of a negative integer");
    return mp::sqrt(x);
}

namespace {

// cpp_int's string constructor reads "0..." as octal and "0x..." as hex.
BigInt parse_decimal(const std::string& t) {
    std::size_t i = 0;
    bool neg = false;
    if (i < t.size() && (t[i] == '-' || t[i] == '+')) neg = t[i++] == '-';
    if (i == t.size()) throw std::invalid_argument("no digits");
    BigInt v = 0;
    for (; i < t.size(); ++i) {
        if (t[i] < '0' || t[i] > '9') throw std::invalid_argument("not a digit");
        v = v * 10 + (t[i] - '0');
    }
    return neg ? BigInt(-v) : v;
}

}  // namespace

Rational parse_rational(const std::string& raw) {
    std::string text;
    for (char ch : raw)
        if (!std::isspace(static_cast<unsigned char>(ch))) text.push_back(ch);
    if (text.empty()) throw ValidationError("empty rational literal");
    try {
        if (auto slash = text.find('/'); slash != std::string::npos) {
            BigInt num = parse_decimal(text.substr(0, slash));
            BigInt den = parse_decimal(text.substr(slash + 1));
            if (den == 0) throw ValidationError("zero denominator in '" + raw + "'");
            return Rational(num, den);
        }
        if (auto dot = text.find('.'); dot != std::string::npos) {
            std::string digits = text.substr(0, dot) + text.substr(dot + 1);
            const std::size_t frac = text.size() - dot - 1;
            if (digits.empty() || digits == "-" || digits == "+") digits += "0";
            return Rational(parse_decimal(digits), mp::pow(BigInt(10), static_cast<unsigned>(frac)));
        }
        return Rational(parse_decimal(text));
    } catch (const ValidationError&) {
        throw;
    } catch (const std::exception&) {
        throw ValidationError("malformed rational literal '" + raw + "'");
    }
}

std::string to_string(const BigInt& x) { return x.str(); }

std::string to_string(const Rational& x) {
    if (mp::denominator(x) == 1) return mp::numerator(x).str();
    return mp::numerator(x).str() + "/" + mp::denominator(x).str();
}

std::optional<Rational> exact_log_ratio(const BigInt& a, const BigInt& b) {
    if (b < 2) throw DomainError("exact_log_ratio needs b >= 2");
    if (a < 1) throw DomainError("exact_log_ratio needs a >= 1");
    if (a == 1) return Rational(0);
    auto [ra, ea] = primitive_power(a);
    auto [rb, eb] = primitive_power(b);
    if (ra != rb) return std::nullopt;
    return Rational(BigInt(ea), BigInt(eb));
}

LogValue LogValue::from_rational(const Rational& x) {
    if (x < 0) throw DomainError("negative value in log domain");
    return x == 0 ? zero() : from_log(log_rational(x));
}

LogValue LogValue::from_big(const BigInt& x) {
    if (x < 0) throw DomainError("negative value in log domain");
    return x == 0 ? zero() : from_log(log_big(x));
}

LogValue operator/(LogValue a, LogValue b) {
    if (b.zero_) throw DomainError("division by zero in log domain");
    if (a.zero_) return LogValue::zero();
    return LogValue::from_log(a.ln_ - b.ln_);
}

LogValue operator+(LogValue a, LogValue b) {
    if (a.zero_) return b;
    if (b.zero_) return a;
    const double hi = std::max(a.ln_, b.ln_);
    const double lo = std::min(a.ln_, b.ln_);
    return LogValue::from_log(hi + std::log1p(std::exp(lo - hi)));
}

void LogSum::add(LogValue term) {
    if (term.is_zero()) return;
    const double x = term.log();
    if (count_ == 0) {
        max_ = x;
        sum_ = 1.0;
        comp_ = 0.0;
        count_ = 1;
        return;
    }
    ++count_;
    double y;
    if (x > max_) {
        const double scale = std::exp(max_ - x);
        sum_ *= scale;
        comp_ *= scale;
        max_ = x;
        y = 1.0;
    } else {
        y = std::exp(x - max_);
    }
    const double t = sum_ + y;
    if (std::abs(sum_) >= std::abs(y))
        comp_ += (sum_ - t) + y;
    else
        comp_ += (y - t) + sum_;
    sum_ = t;
}

LogValue LogSum::total() const {
    if (count_ == 0) return LogValue::zero();
    return LogValue::from_log(max_ + std::log(sum_ + comp_));
}

LogValue log_sum(const std::vector<LogValue>& terms) {
    LogSum acc;
    for (const auto& t : terms) acc.add(t);
    return acc.total();
}

}  // namespace cantorpack
