#include "cantorpack/errors.hpp"
#include "cantorpack/packing.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace cantorpack;

namespace {

struct SmallSet {
    std::vector<unsigned> ns;
    std::vector<std::vector<unsigned>> digits;

    BaseSequence base() const { return BaseSequence::list(std::vector<BigInt>(ns.begin(), ns.end())); }
    DigitRestrictedSet set() const {
        RankSchedule<DigitRule> r{{DigitRule::all()}, {}};
        for (std::size_t k = 0; k < ns.size(); ++k)
            r.exceptions[k + 1] = DigitRule::explicit_digits(std::vector<BigInt>(digits[k].begin(), digits[k].end()));
        return DigitRestrictedSet(base(), r);
    }
};

SmallSet random_set(std::mt19937_64& rng, std::size_t K, unsigned max_n) {
    SmallSet s;
    for (std::size_t k = 0; k < K; ++k) {
        const unsigned n = 2 + static_cast<unsigned>(rng() % (max_n - 1));
        std::vector<unsigned> d;
        for (unsigned a = 0; a < n; ++a)
            if (rng() % 3 != 0) d.push_back(a);
        if (d.empty()) d.push_back(static_cast<unsigned>(rng() % n));
        s.ns.push_back(n);
        s.digits.push_back(d);
    }
    return s;
}

PackingQuery query(const DigitRestrictedSet& set, Family f, Scale eps, double alpha, std::size_t depth) {
    PackingQuery q{set, f, std::move(eps)};
    q.alpha = alpha;
    q.depth = depth;
    return q;
}

void check_same(const LogValue& got, const std::optional<long double>& want) {
    if (!want) {
        CHECK(got.is_zero());
        return;
    }
    REQUIRE_FALSE(got.is_zero());
    CHECK(std::abs(got.log() - static_cast<double>(*want)) <= 1e-12);
}

}  // namespace

TEST_CASE("full binary set") {
    const auto two = BaseSequence::constant(2);
    const auto full = DigitRestrictedSet::full(two);
    const auto eps = Scale::exact(Rational(1, 4));
    for (std::size_t K = 2; K <= 6; ++K) {
        const auto v = optimal_cylinder_packing(query(full, Family::CylindersOnly, eps, 1.0, K));
        CHECK(v.value.log() == doctest::Approx(0.0).epsilon(1e-14));
    }
    const auto v = optimal_cylinder_packing(query(full, Family::CylindersOnly, eps, 0.5, 4));
    CHECK(v.value.log() == doctest::Approx(std::log(4.0)).epsilon(1e-14));
    CHECK(v.witness_rank == std::size_t{4});

    // too coarse: no eligible cylinder at all
    CHECK(optimal_cylinder_packing(query(full, Family::CylindersOnly, eps, 1.0, 1)).value.is_zero());
}

TEST_CASE("full binary set, interval family on the rank-4 grid") {
    const auto two = BaseSequence::constant(2);
    const auto full = DigitRestrictedSet::full(two);
    auto q = query(full, Family::AllIntervals, Scale::exact(Rational(1, 4)), 1.0, 4);
    q.resolution = 4;
    q.backend = IntervalBackend::Grid;
    const auto v = optimal_interval_packing(q);
    CHECK(v.value.log() <= 1e-12);
    CHECK(v.value.log() == doctest::Approx(0.0).epsilon(1e-12));
    Rational covered = 0;
    for (const auto& w : v.witness) covered += w.right - w.left;
    CHECK(covered <= 1);
}

TEST_CASE("T* with its own measure as weight") {
    const auto pr = BaseSequence::product_recursive({2, 2});
    const auto t = build_tstar(pr, {4, 8});
    auto q = query(t, Family::CylindersOnly, Scale::of_rank(pr, 8), 1.0, 8);
    q.weight = Weight::of(mu_xi_for(t));
    const auto v = optimal_cylinder_packing(q);
    CHECK(v.value.log() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(v.witness_rank == std::size_t{8});
    CHECK(v.witness_log_count == doctest::Approx(34 * std::log(2.0)).epsilon(1e-13));
}

TEST_CASE("singleton set packs exactly one interval") {
    const auto two = BaseSequence::constant(2);
    const DigitRestrictedSet zero(two, {{DigitRule::explicit_digits({0})}, {}});
    for (double alpha : {0.0, 0.3, 1.0}) {
        auto q = query(zero, Family::AllIntervals, Scale::exact(Rational(1, 4)), alpha, 4);
        q.backend = IntervalBackend::Grid;
        const auto v = optimal_interval_packing(q);
        CHECK(v.witness.size() == 1);
        CHECK(v.value.log() == doctest::Approx(alpha * std::log(0.25)).epsilon(1e-13));
    }
}

TEST_CASE("cylinder DP equals exhaustive search") {
    std::mt19937_64 rng(2024);
    int compared = 0;
    for (int i = 0; i < 400 && compared < 150; ++i) {
        const std::size_t K = 1 + rng() % 4;
        const auto s = random_set(rng, K, 4);
        const auto eps_rank = rng() % (K + 1);
        const Rational eps = 1 / oracle::product(s.ns, eps_rank);
        const auto pieces = oracle::eligible_cylinders(s.ns, s.digits, K, eps);
        if (pieces.size() > 22) continue;
        const double alpha = static_cast<double>(rng() % 11) / 10.0;
        const auto got = optimal_cylinder_packing(query(s.set(), Family::CylindersOnly, Scale::exact(eps), alpha, K));
        check_same(got.value, oracle::best_family(pieces, alpha));
        ++compared;
    }
    CHECK(compared >= 100);
}

TEST_CASE("cylinder DP with measure weights equals exhaustive search") {
    std::mt19937_64 rng(99);
    int compared = 0;
    for (int i = 0; i < 200 && compared < 40; ++i) {
        const std::size_t K = 1 + rng() % 3;
        const auto s = random_set(rng, K, 3);
        std::vector<std::vector<Rational>> probs;
        RankSchedule<DigitLaw> laws{{DigitLaw::uniform()}, {}};
        for (std::size_t k = 0; k < K; ++k) {
            std::vector<Rational> p;
            long long total = 0;
            std::vector<long long> raw;
            for (unsigned a = 0; a < s.ns[k]; ++a) {
                raw.push_back(static_cast<long long>(rng() % 4));
                total += raw.back();
            }
            if (total == 0) {
                raw[0] = 1;
                total = 1;
            }
            for (long long r : raw) p.push_back(Rational(r, total));
            probs.push_back(p);
            laws.exceptions[k + 1] = DigitLaw::explicit_probs(p);
        }
        const Rational eps = 1 / oracle::product(s.ns, rng() % (K + 1));
        auto pieces = oracle::eligible_cylinders(s.ns, s.digits, K, eps, &probs);
        std::erase_if(pieces, [](const oracle::Piece& p) { return p.weight == 0; });
        if (pieces.size() > 20) continue;
        const double alpha = 0.25 + static_cast<double>(rng() % 4) / 4.0;
        auto q = query(s.set(), Family::CylindersOnly, Scale::exact(eps), alpha, K);
        q.weight = Weight::of(DigitProductMeasure(s.base(), laws));
        check_same(optimal_cylinder_packing(q).value, oracle::best_family(pieces, alpha));
        ++compared;
    }
    CHECK(compared >= 30);
}

TEST_CASE("grid interval packing equals exhaustive search at R = 3") {
    std::mt19937_64 rng(5);
    int compared = 0;
    for (int i = 0; i < 60; ++i) {
        const auto s = random_set(rng, 3, 3);
        const Rational eps = Rational(1 + static_cast<long long>(rng() % 4), 8);
        const double alpha = static_cast<double>(1 + rng() % 10) / 10.0;
        auto q = query(s.set(), Family::AllIntervals, Scale::exact(eps), alpha, 3);
        q.resolution = 3;
        q.backend = IntervalBackend::Grid;
        check_same(optimal_interval_packing(q).value, oracle::best_grid_packing(s.ns, s.digits, 3, eps, alpha));
        ++compared;
    }
    CHECK(compared == 60);
}

TEST_CASE("covering values") {
    const auto two = BaseSequence::constant(2);
    const auto full = DigitRestrictedSet::full(two);
    for (std::size_t K = 2; K <= 6; ++K)
        CHECK(covering_value(full, Scale::exact(Rational(1, 4)), 1.0, K).log() == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(covering_value(full, Scale::exact(Rational(1, 4)), 0.5, 4).log() == doctest::Approx(std::log(2.0)));

    const DigitRestrictedSet moran(two, {{DigitRule::explicit_digits({0}), DigitRule::all()}, {}});
    CHECK(covering_value(moran, Scale::of_rank(two, 4), 0.5, 4).log() == doctest::Approx(0.0).epsilon(1e-13));
    CHECK_THROWS_AS(covering_value(full, Scale::exact(Rational(1, 64)), 1.0, 4), PreconditionError);
}

TEST_CASE("alternating Moran thresholds") {
    const auto two = BaseSequence::constant(2);
    const DigitRestrictedSet moran(two, {{DigitRule::explicit_digits({0}), DigitRule::all()}, {}});
    std::vector<std::size_t> depths;
    for (std::size_t K = 1; K <= 12; ++K) depths.push_back(K);
    const auto ce = critical_exponent(moran, Family::CylindersOnly, Weight::length(), rank_tied_stages(two, depths));
    for (const auto& row : ce.rows) {
        const double closed = std::floor(row.depth / 2.0) / static_cast<double>(row.depth);
        CHECK(row.threshold == doctest::Approx(closed).epsilon(2e-3));
    }
    CHECK(std::abs(ce.windowed_limsup - 0.5) < 0.1);
}

TEST_CASE("full set has exponent one") {
    for (int s : {2, 3, 5}) {
        const auto b = BaseSequence::constant(s);
        const auto ce = critical_exponent(DigitRestrictedSet::full(b), Family::CylindersOnly, Weight::length(),
                                          rank_tied_stages(b, {1, 2, 3, 4, 5, 6}));
        for (const auto& row : ce.rows) CHECK(row.threshold == 1.0);
    }
}

TEST_CASE("ordering invariants on random queries") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 60; ++i) {
        const std::size_t K = 2 + rng() % 3;
        const auto s = random_set(rng, K, 3);
        const auto set = s.set();
        const auto b = s.base();
        const auto eps = Scale::of_rank(b, rng() % K);
        const double alpha = static_cast<double>(rng() % 10) / 10.0;
        auto cyl = query(set, Family::CylindersOnly, eps, alpha, K);
        auto iv = query(set, Family::AllIntervals, eps, alpha, K);
        iv.backend = IntervalBackend::Grid;
        const auto vc = optimal_packing(cyl).value;
        const auto vi = optimal_packing(iv).value;
        CHECK(vc.log_or_neg_inf() <= vi.log_or_neg_inf() + 1e-12);

        cyl.alpha = alpha + 0.3;
        const auto shifted = optimal_packing(cyl).value;
        if (!vc.is_zero()) CHECK(shifted.log() <= vc.log() + 0.3 * eps.log() + 1e-12);

        auto wider = query(set, Family::CylindersOnly, Scale::of_rank(b, 0), alpha, K);
        CHECK(vc.log_or_neg_inf() <= optimal_packing(wider).value.log_or_neg_inf() + 1e-12);
        auto fuller = query(DigitRestrictedSet::full(b), Family::CylindersOnly, eps, alpha, K);
        CHECK(vc.log_or_neg_inf() <= optimal_packing(fuller).value.log_or_neg_inf() + 1e-12);
    }
}

TEST_CASE("schedule_intervals") {
    const std::vector<ScheduleCandidate> c{
        {0, 4, LogValue::from_log(std::log(3.0))},
        {0, 2, LogValue::from_log(std::log(2.0))},
        {2, 4, LogValue::from_log(std::log(2.0))},
        {3, 6, LogValue::from_log(std::log(1.0))},
    };
    const auto [v, idx] = schedule_intervals(c);
    CHECK(v.log() == doctest::Approx(std::log(4.0)));
    CHECK(idx == std::vector<std::size_t>{1, 2});
    CHECK(schedule_intervals({}).first.is_zero());
}

TEST_CASE("witnesses are disjoint and meet the set") {
    const auto three = BaseSequence::constant(3);
    const DigitRestrictedSet cantor(three, {{DigitRule::explicit_digits({0, 2})}, {}});
    for (auto f : {Family::CylindersOnly, Family::AllIntervals}) {
        auto q = query(cantor, f, Scale::of_rank(three, 2), 0.7, 4);
        q.backend = IntervalBackend::Grid;
        const auto v = optimal_packing(q);
        REQUIRE(v.witness_complete);
        for (std::size_t i = 0; i + 1 < v.witness.size(); ++i) CHECK(v.witness[i].right <= v.witness[i + 1].left);
        for (const auto& w : v.witness) {
            CHECK(w.right - w.left <= Rational(1, 9));
            CHECK(find_set_cylinder_inside(IntervalBall::from_endpoints(w.left - Rational(1, 1000), w.right + Rational(1, 1000)),
                                           cantor, 8));
        }
    }
}

TEST_CASE("bad queries") {
    const auto two = BaseSequence::constant(2);
    auto q = query(DigitRestrictedSet::full(two), Family::CylindersOnly, Scale::exact(Rational(1, 2)), -1.0, 3);
    CHECK_THROWS_AS(optimal_packing(q), ValidationError);
    CHECK_THROWS_AS(Scale::exact(0), ValidationError);
    q.alpha = 1.0;
    q.weight = Weight::of(DigitProductMeasure(BaseSequence::constant(3), {{DigitLaw::dirac(1)}, {}}));
    CHECK_THROWS_AS(optimal_packing(q), MismatchError);
}
