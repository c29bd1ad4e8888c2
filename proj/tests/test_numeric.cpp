#include "cantorpack/errors.hpp"
#include "cantorpack/numeric.hpp"

#include <doctest.h>

using namespace cantorpack;

TEST_CASE("parse_rational accepts integers, fractions and decimals") {
    CHECK(parse_rational("7") == Rational(7));
    CHECK(parse_rational("3/12") == Rational(1, 4));
    CHECK(parse_rational("0.125") == Rational(1, 8));
    CHECK(parse_rational("-2/6") == Rational(-1, 3));
    CHECK_THROWS(parse_rational("1/0"));
    CHECK_THROWS(parse_rational("abc"));
}

TEST_CASE("isqrt is the floor square root") {
    for (int x = 0; x < 2000; ++x) {
        const BigInt r = isqrt(BigInt(x));
        CHECK(r * r <= x);
        CHECK((r + 1) * (r + 1) > x);
    }
    const BigInt big = BigInt(1) << 4000;
    CHECK(isqrt(big) == (BigInt(1) << 2000));
}

TEST_CASE("log of huge integers") {
    const BigInt x = BigInt(1) << 16384;
    CHECK(log_big(x) == doctest::Approx(16384 * std::log(2.0)).epsilon(1e-14));
    CHECK(log_rational(Rational(1, 8)) == doctest::Approx(-3 * std::log(2.0)));
    CHECK(bit_length(BigInt(255)) == 8);
}

TEST_CASE("exact_log_ratio recognizes common-base powers") {
    CHECK(exact_log_ratio(BigInt(1) << 34, BigInt(1) << 128) == Rational(17, 64));
    CHECK(exact_log_ratio(BigInt(27), BigInt(9)) == Rational(3, 2));
    CHECK(exact_log_ratio(BigInt(8), BigInt(36)) == std::nullopt);
    CHECK(exact_log_ratio(BigInt(1), BigInt(5)) == Rational(0));
}

TEST_CASE("LogValue zero sentinel") {
    const LogValue z = LogValue::zero();
    const LogValue a = LogValue::from_log(-2.0);
    CHECK(z.is_zero());
    CHECK((z * a).is_zero());
    CHECK(z + a == a);
    CHECK(z < a);
    CHECK(std::isinf(z.log_or_neg_inf()));
    CHECK(z.pow(0.5).is_zero());
    CHECK((a + a).log() == doctest::Approx(-2.0 + std::log(2.0)));
}

TEST_CASE("LogSum handles terms hundreds of orders apart") {
    LogSum s;
    s.add_log(-5000.0);
    s.add_log(0.0);
    s.add_log(-5000.0);
    CHECK(s.total().log() == doctest::Approx(0.0));
    LogSum many;
    for (int i = 0; i < 1 << 16; ++i) many.add_log(-16 * std::log(2.0));  // 2^16 terms of 2^-16
    CHECK(many.total().log() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(LogSum{}.total().is_zero());
}

TEST_CASE("LogValue from exact values") {
    CHECK(LogValue::from_rational(Rational(0)).is_zero());
    CHECK(LogValue::from_rational(Rational(1, 4)).log() == doctest::Approx(-std::log(4.0)));
    CHECK(LogValue::from_big(BigInt(1) << 3000).log() == doctest::Approx(3000 * std::log(2.0)));
}
