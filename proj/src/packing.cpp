#include "cantorpack/packing.hpp"

#include "cantorpack/errors.hpp"
#include "cantorpack/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>

namespace cantorpack {

namespace mp = boost::multiprecision;

std::string to_string(Family f) { return f == Family::CylindersOnly ? "cylinders" : "intervals"; }

std::string to_string(IntervalBackend b) {
    switch (b) {
        case IntervalBackend::Auto:
            return "auto";
        case IntervalBackend::Grid:
            return "grid";
        case IntervalBackend::Cells:
            return "cells";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Scale

Scale Scale::of_rank(const BaseSequence& base, std::size_t r) {
    Scale s;
    s.rank_ = r;
    s.log_ = -base.log_size(r);
    if (base.exact_available(r))
        s.value_ = Rational(BigInt(1), base.product(r));
    else
        s.value_.reset();
    return s;
}

Scale Scale::exact(Rational eps) {
    if (eps <= 0) throw ValidationError("eps must be positive");
    Scale s;
    s.log_ = log_rational(eps);
    s.value_ = std::move(eps);
    return s;
}

Rational Scale::value() const {
    if (!value_) throw ResolutionExceeded("eps tied to a rank beyond the exact budget", rank_.value_or(0));
    return *value_;
}

bool Scale::admits_rank(const BaseSequence& base, std::size_t k) const {
    if (rank_) return k >= *rank_;
    if (value_ && base.exact_available(k)) return base.product(k) * *value_ >= 1;
    return -base.log_size(k) <= log_ + 1e-12 * std::max(1.0, std::abs(log_));
}

Rational Scale::cap(const Rational& len) const { return std::min(len, value()); }

std::string Scale::describe() const {
    std::ostringstream out;
    if (rank_)
        out << "|rank-" << *rank_ << " cylinder|";
    else
        out << to_string(*value_);
    return out.str();
}

// ---------------------------------------------------------------------------
// Per-rank profiles

namespace {

// One digit class at a rank: how many set-meeting children and the weight
// factor each contributes (1/n_k for length, p_k(d) for a measure).
struct RankTerm {
    double log_count;
    double log_factor;
};

struct RankProfile {
    std::vector<std::vector<RankTerm>> terms;  // terms[k], k = 1..K

    LogValue factor(std::size_t k, double alpha) const {
        LogSum acc;
        for (const auto& t : terms[k]) acc.add_log(t.log_count + alpha * t.log_factor);
        return acc.total();
    }
    double log_positive_count(std::size_t k) const {
        LogSum acc;
        for (const auto& t : terms[k]) acc.add_log(t.log_count);
        return acc.total().log_or_neg_inf();
    }
};

RankProfile build_profile(const DigitRestrictedSet& set, const Weight& weight, std::size_t K) {
    const auto& base = set.base();
    if (!weight.is_length() && weight.measure()->base() != base)
        throw MismatchError("weight measure and set use different bases");
    RankProfile p;
    p.terms.resize(K + 1);
    for (std::size_t k = 1; k <= K; ++k) {
        const BigInt n = base.n(k);
        const DigitRule& rule = set.rule(k);
        rule.validate(n);
        const double log_n = base.log_n(k);
        if (weight.is_length()) {
            const double lc = rule.kind == DigitRule::Kind::All ? log_n : log_big(rule.count(n));
            p.terms[k].push_back({lc, -log_n});
            continue;
        }
        const DigitProductMeasure& mu = *weight.measure();
        const DigitLaw& law = mu.law(k);
        law.validate(n);
        for (const auto& cls : digit_classes(n, {&rule}, {&law}, log_n)) {
            if (!rule.allows(cls.representative, n)) continue;
            const LogValue lp = mu.log_prob(k, cls.representative);
            if (lp.is_zero()) continue;
            p.terms[k].push_back({cls.log_count, lp.log()});
        }
    }
    return p;
}

std::vector<bool> eligibility(const BaseSequence& base, const Scale& eps, std::size_t K) {
    std::vector<bool> e(K + 1);
    for (std::size_t k = 0; k <= K; ++k) e[k] = eps.admits_rank(base, k);
    return e;
}

struct CylinderSolution {
    LogValue value;
    std::optional<std::size_t> cut;
};

// F_k = max([eligible_k], S_{k+1}(alpha) F_{k+1}); a rank-k node of weight w
// has optimum w^alpha F_k. Ties keep the shallower cylinder.
CylinderSolution solve_cylinder_dp(const RankProfile& profile, const std::vector<bool>& eligible, double alpha) {
    const std::size_t K = eligible.size() - 1;
    std::vector<LogValue> F(K + 1);
    std::vector<bool> own(K + 1, false);
    F[K] = eligible[K] ? LogValue::one() : LogValue::zero();
    own[K] = eligible[K];
    for (std::size_t k = K; k-- > 0;) {
        const LogValue children = profile.factor(k + 1, alpha) * F[k + 1];
        if (eligible[k] && LogValue::one() >= children) {
            F[k] = LogValue::one();
            own[k] = true;
        } else {
            F[k] = children;
        }
    }
    CylinderSolution sol{F[0], std::nullopt};
    if (!sol.value.is_zero())
        for (std::size_t k = 0; k <= K; ++k)
            if (own[k]) {
                sol.cut = k;
                break;
            }
    return sol;
}

// Set-meeting cylinders of rank k with positive weight, left to right.
void enumerate_cut(const DigitRestrictedSet& set, const Weight& weight, std::size_t k, std::vector<WitnessElement>& out) {
    const auto& base = set.base();
    std::vector<std::pair<std::vector<BigInt>, double>> words{{{}, 0.0}};
    for (std::size_t i = 1; i <= k; ++i) {
        const BigInt n = base.n(i);
        const auto digits = set.rule(i).enumerate(n);
        std::vector<std::pair<std::vector<BigInt>, double>> next;
        for (const auto& [w, lw] : words)
            for (const auto& d : digits) {
                double f;
                if (weight.is_length()) {
                    f = -base.log_n(i);
                } else {
                    const LogValue lp = weight.measure()->log_prob(i, d);
                    if (lp.is_zero()) continue;
                    f = lp.log();
                }
                auto nw = w;
                nw.push_back(d);
                next.emplace_back(std::move(nw), lw + f);
            }
        words = std::move(next);
    }
    for (auto& [w, lw] : words) {
        Cylinder c(DigitWord(base, std::move(w)));
        out.push_back({c.left(), c.right(), lw, c.word()});
    }
}

class Evaluator {
public:
    virtual ~Evaluator() = default;
    virtual LogValue value(double alpha) const = 0;
    virtual PackingValue solve(double alpha) const = 0;
};

class CylinderEvaluator : public Evaluator {
public:
    CylinderEvaluator(const DigitRestrictedSet& set, const Weight& weight, const Scale& eps, std::size_t K,
                      std::size_t witness_limit)
        : set_(set),
          weight_(weight),
          K_(K),
          witness_limit_(witness_limit),
          profile_(build_profile(set, weight, K)),
          eligible_(eligibility(set.base(), eps, K)) {}

    LogValue value(double alpha) const override { return solve_cylinder_dp(profile_, eligible_, alpha).value; }

    PackingValue solve(double alpha) const override {
        const auto sol = solve_cylinder_dp(profile_, eligible_, alpha);
        PackingValue out;
        out.value = sol.value;
        out.depth = K_;
        out.method = "tree_dp";
        if (!sol.cut) return out;
        const std::size_t cut = *sol.cut;
        double lc = 0.0;
        for (std::size_t k = 1; k <= cut; ++k) lc += profile_.log_positive_count(k);
        out.witness_rank = cut;
        out.witness_log_count = lc;
        if (lc <= std::log(static_cast<double>(witness_limit_)) + 1e-9) {
            enumerate_cut(set_, weight_, cut, out.witness);
        } else {
            out.witness_complete = false;
        }
        return out;
    }

private:
    const DigitRestrictedSet& set_;
    const Weight& weight_;
    std::size_t K_;
    std::size_t witness_limit_;
    RankProfile profile_;
    std::vector<bool> eligible_;
};

// Gap cells: at rank k each set-meeting cylinder owns the interval from its
// left endpoint to the left endpoint of the next set-meeting rank-k cylinder
// (or to 1). Cell lengths take few distinct values, tracked with counts.
class CellEvaluator : public Evaluator {
public:
    CellEvaluator(const DigitRestrictedSet& set, const Weight& weight, const Scale& eps, std::size_t K,
                  std::size_t witness_limit)
        : cylinders_(set, weight, eps, K, witness_limit), K_(K) {
        if (!weight.is_length()) {
            note_ = "measure weights use cylinder cells only";
            return;
        }
        build(set, eps);
    }

    LogValue value(double alpha) const override {
        LogValue best = cylinders_.value(alpha);
        for (const auto& [k, terms] : ranks_) best = std::max(best, evaluate(terms, alpha));
        return best;
    }

    PackingValue solve(double alpha) const override {
        PackingValue out = cylinders_.solve(alpha);
        out.method = "gap_cells";
        for (const auto& [k, terms] : ranks_) {
            const LogValue v = evaluate(terms, alpha);
            if (v > out.value) {
                out.value = v;
                out.witness.clear();
                out.witness_complete = false;
                out.witness_rank = k;
                LogSum c;
                for (const auto& t : terms) c.add_log(t.first);
                out.witness_log_count = c.total().log();
            }
        }
        out.depth = K_;
        return out;
    }

private:
    using Terms = std::vector<std::pair<double, double>>;  // (log count, log capped length)

    static LogValue evaluate(const Terms& terms, double alpha) {
        LogSum acc;
        for (const auto& [lc, ll] : terms) acc.add_log(lc + alpha * ll);
        return acc.total();
    }

    struct CellType {
        Rational len;
        bool last;
        double log_count;
    };

    void build(const DigitRestrictedSet& set, const Scale& eps) {
        const auto& base = set.base();
        std::vector<CellType> types{{Rational(1), true, 0.0}};
        for (std::size_t k = 1; k <= K_; ++k) {
            if (!base.exact_available(k)) {
                note_ = "gap cells stop at rank " + std::to_string(k - 1) + " (exact budget)";
                break;
            }
            const BigInt n = base.n(k);
            const DigitRule& rule = set.rule(k);
            rule.validate(n);
            const Rational h(BigInt(1), base.product(k));
            const BigInt d_min = rule.min_digit(n);
            const BigInt d_max = rule.max_digit(n);
            std::map<BigInt, BigInt> gaps;
            switch (rule.kind) {
                case DigitRule::Kind::All:
                    if (n > 1) gaps[1] = n - 1;
                    break;
                case DigitRule::Kind::Explicit:
                    for (std::size_t i = 1; i < rule.digits.size(); ++i)
                        gaps[rule.digits[i] - rule.digits[i - 1]] += 1;
                    break;
                case DigitRule::Kind::SqrtLattice: {
                    const BigInt m = isqrt(n);
                    if (m > 1) gaps[m] = m - 1;
                    break;
                }
            }
            std::map<std::pair<Rational, bool>, LogSum> merged;
            for (const auto& t : types) {
                for (const auto& [g, cnt] : gaps) merged[{g * h, false}].add_log(t.log_count + log_big(cnt));
                Rational last_len = t.last ? t.len - d_max * h : t.len - (d_max - d_min) * h;
                merged[{std::move(last_len), t.last}].add_log(t.log_count);
            }
            types.clear();
            for (auto& [key, acc] : merged) types.push_back({key.first, key.second, acc.total().log()});
            if (!eps.admits_rank(base, k)) continue;
            Terms terms;
            for (const auto& t : types) terms.emplace_back(t.log_count, log_rational(eps.cap(t.len)));
            ranks_.emplace_back(k, std::move(terms));
        }
    }

    CylinderEvaluator cylinders_;
    std::size_t K_;
    std::vector<std::pair<std::size_t, Terms>> ranks_;
    std::string note_;
};

class GridEvaluator : public Evaluator {
public:
    GridEvaluator(const DigitRestrictedSet& set, const Weight& weight, const Scale& eps, std::size_t K,
                  std::size_t R, std::size_t budget)
        : K_(K) {
        const auto& base = set.base();
        if (R < K) throw ValidationError("grid resolution must be >= depth");
        if (!base.exact_available(R) || base.product(R) > budget)
            throw ResolutionExceeded("rank-" + std::to_string(R) + " grid exceeds the budget of " +
                                         std::to_string(budget) + " cells",
                                     R);
        const auto G = static_cast<std::size_t>(base.product(R));
        grid_ = Rational(BigInt(1), BigInt(G));
        const auto words = all_words(base, R, budget);
        std::vector<std::size_t> meets(G + 1, 0);
        std::vector<Rational> mass(G + 1, Rational(0));
        for (std::size_t t = 0; t < G; ++t) {
            const Cylinder c(words[t]);
            meets[t + 1] = meets[t] + (intersects(set, c) ? 1 : 0);
            if (!weight.is_length()) mass[t + 1] = mass[t] + measure_of_cylinder(*weight.measure(), c).exact;
        }
        const Rational eps_cells = eps.value() * G;
        const auto W = static_cast<std::size_t>(
            std::min<BigInt>(BigInt(G), mp::numerator(eps_cells) / mp::denominator(eps_cells)));
        const double log_G = base.log_size(R);
        for (std::size_t i = 0; i < G; ++i)
            for (std::size_t j = i + 1; j <= std::min(G, i + W); ++j) {
                if (meets[j] == meets[i]) continue;
                double lw;
                if (weight.is_length()) {
                    lw = std::log(static_cast<double>(j - i)) - log_G;
                } else {
                    const Rational m = mass[j] - mass[i];
                    if (m == 0) continue;
                    lw = log_rational(m);
                }
                cands_.push_back({static_cast<long long>(i), static_cast<long long>(j), lw});
            }
    }

    LogValue value(double alpha) const override { return schedule(alpha).first; }

    PackingValue solve(double alpha) const override {
        auto [v, chosen] = schedule(alpha);
        PackingValue out;
        out.value = v;
        out.depth = K_;
        out.method = "grid_wis";
        for (std::size_t idx : chosen) {
            const auto& c = cands_[idx];
            out.witness.push_back({grid_ * c.left, grid_ * c.right, c.log_weight, std::nullopt});
        }
        out.witness_log_count = chosen.empty() ? 0.0 : std::log(static_cast<double>(chosen.size()));
        return out;
    }

private:
    struct Cand {
        long long left;
        long long right;
        double log_weight;
    };

    std::pair<LogValue, std::vector<std::size_t>> schedule(double alpha) const {
        std::vector<ScheduleCandidate> sc;
        sc.reserve(cands_.size());
        for (const auto& c : cands_) sc.push_back({c.left, c.right, LogValue::from_log(alpha * c.log_weight)});
        return schedule_intervals(sc);
    }

    std::size_t K_;
    Rational grid_;
    std::vector<Cand> cands_;
};

std::unique_ptr<Evaluator> make_evaluator(const DigitRestrictedSet& set, Family family, const Weight& weight,
                                          const Scale& eps, std::size_t depth, std::size_t resolution,
                                          IntervalBackend backend, std::size_t grid_budget,
                                          std::size_t witness_limit) {
    if (depth > set.base().available()) throw ResolutionExceeded("depth beyond the base prefix", set.base().available());
    if (family == Family::CylindersOnly)
        return std::make_unique<CylinderEvaluator>(set, weight, eps, depth, witness_limit);
    const std::size_t R = resolution ? resolution : depth;
    if (R < depth) throw ValidationError("resolution must be >= depth");
    bool grid = backend == IntervalBackend::Grid;
    if (backend == IntervalBackend::Auto) {
        const auto& base = set.base();
        grid = R <= base.available() && base.exact_available(R) && base.product(R) <= grid_budget;
    }
    if (grid) return std::make_unique<GridEvaluator>(set, weight, eps, depth, R, grid_budget);
    return std::make_unique<CellEvaluator>(set, weight, eps, depth, witness_limit);
}

void check_alpha(double alpha) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ValidationError("alpha must be a finite value >= 0");
}

}  // namespace

std::pair<LogValue, std::vector<std::size_t>> schedule_intervals(const std::vector<ScheduleCandidate>& candidates) {
    const std::size_t C = candidates.size();
    std::vector<std::size_t> order(C);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& x = candidates[a];
        const auto& y = candidates[b];
        return x.right != y.right ? x.right < y.right : x.left < y.left;
    });
    std::vector<long long> rights(C);
    for (std::size_t i = 0; i < C; ++i) rights[i] = candidates[order[i]].right;

    // best[i]: optimum using the first i intervals in right-endpoint order
    std::vector<LogValue> best(C + 1);
    std::vector<std::size_t> pred(C);
    std::vector<bool> take(C, false);
    for (std::size_t i = 0; i < C; ++i) {
        const auto& c = candidates[order[i]];
        if (c.left >= c.right) throw ValidationError("schedule candidate with empty interval");
        pred[i] = static_cast<std::size_t>(std::upper_bound(rights.begin(), rights.begin() + static_cast<long>(i), c.left) -
                                           rights.begin());
        const LogValue with = best[pred[i]] + c.weight;
        if (with > best[i]) {
            best[i + 1] = with;
            take[i] = true;
        } else {
            best[i + 1] = best[i];
        }
    }
    std::vector<std::size_t> chosen;
    for (std::size_t i = C; i > 0;) {
        if (take[i - 1]) {
            chosen.push_back(order[i - 1]);
            i = pred[i - 1];
        } else {
            --i;
        }
    }
    std::reverse(chosen.begin(), chosen.end());
    return {best[C], chosen};
}

PackingValue optimal_cylinder_packing(const PackingQuery& q) {
    check_alpha(q.alpha);
    auto ev = make_evaluator(q.set, Family::CylindersOnly, q.weight, q.eps, q.depth, q.resolution, q.backend,
                             q.grid_budget, q.witness_limit);
    return ev->solve(q.alpha);
}

PackingValue optimal_interval_packing(const PackingQuery& q) {
    check_alpha(q.alpha);
    auto ev = make_evaluator(q.set, Family::AllIntervals, q.weight, q.eps, q.depth, q.resolution, q.backend,
                             q.grid_budget, q.witness_limit);
    return ev->solve(q.alpha);
}

PackingValue optimal_packing(const PackingQuery& q) {
    return q.family == Family::CylindersOnly ? optimal_cylinder_packing(q) : optimal_interval_packing(q);
}

LogValue covering_value(const DigitRestrictedSet& set, const Scale& eps, double alpha, std::size_t depth) {
    check_alpha(alpha);
    const auto eligible = eligibility(set.base(), eps, depth);
    if (!eligible[depth])
        throw PreconditionError("no eligible cover: rank-" + std::to_string(depth) + " cylinders are longer than eps");
    const RankProfile profile = build_profile(set, Weight::length(), depth);
    // G_k = min([eligible_k] ? 1 : inf, S_{k+1} G_{k+1})
    LogValue G = LogValue::one();
    for (std::size_t k = depth; k-- > 0;) {
        const LogValue children = profile.factor(k + 1, alpha) * G;
        G = eligible[k] ? std::min(LogValue::one(), children) : children;
    }
    return G;
}

// ---------------------------------------------------------------------------
// Centering

std::optional<Cylinder> find_set_cylinder_inside(const IntervalBall& ball, const DigitRestrictedSet& set,
                                                 std::size_t max_rank) {
    const auto& base = set.base();
    const Rational a = ball.lower();
    const Rational b = ball.upper();
    // depth-first over set-meeting cylinders that overlap the ball
    std::vector<DigitWord> stack{DigitWord(base, {})};
    while (!stack.empty()) {
        DigitWord w = std::move(stack.back());
        stack.pop_back();
        const Cylinder c(w);
        if (ball.contains_closed(c.left(), c.right())) return c;
        const std::size_t k = w.rank() + 1;
        if (k > max_rank || k > base.available() || !base.exact_available(k)) continue;
        const BigInt n = base.n(k);
        const Rational h = c.length() / n;
        const Rational lo = (a - c.left()) / h;
        const Rational hi = (b - c.left()) / h;
        BigInt d_lo = lo <= 0 ? BigInt(0) : BigInt(mp::numerator(lo) / mp::denominator(lo));
        BigInt d_hi = hi >= n ? n - 1 : BigInt(mp::numerator(hi) / mp::denominator(hi));
        const DigitRule& rule = set.rule(k);
        rule.validate(n);
        std::vector<DigitWord> children;
        for (BigInt d = d_lo; d <= d_hi; ++d)
            if (rule.allows(d, n)) children.push_back(w.extended(d));
        // push in reverse so the leftmost child is explored first
        for (auto it = children.rbegin(); it != children.rend(); ++it) stack.push_back(std::move(*it));
    }
    return std::nullopt;
}

namespace {

// k with 2^{-k-1} <= d < 2^{-k}, for 0 < d < 1.
std::size_t dyadic_class(const Rational& d) {
    auto k = static_cast<long>(std::floor(-std::log2(d.convert_to<double>())));
    if (k < 0) k = 0;
    auto upper = [](long j) { return Rational(BigInt(1), BigInt(1) << static_cast<unsigned>(j)); };
    while (k > 0 && d >= upper(k)) --k;
    while (!(d < upper(k))) --k;
    while (d < upper(k + 1)) ++k;
    return static_cast<std::size_t>(k);
}

}  // namespace

CenteringResult center_packing(const std::vector<IntervalBall>& packing, const DigitRestrictedSet& set,
                               const CenteringParams& params, std::size_t point_depth) {
    const double t = params.t;
    const double s = params.s;
    if (!(0.0 < t && t < s)) throw ValidationError("centering needs 0 < t < s");
    if (params.space_constant < 1) throw ValidationError("space constant must be >= 1");

    LogSum volume;
    for (const auto& ball : packing) {
        if (ball.diameter() >= 1) throw PreconditionError("packing balls must have diameter < 1");
        volume.add_log(s * log_rational(ball.diameter()));
    }
    const LogValue sv = volume.total();
    if (sv.is_zero() || sv.log() <= 0.0) throw PreconditionError("s-volume of the packing must exceed 1");
    for (std::size_t i = 0; i < packing.size(); ++i)
        for (std::size_t j = i + 1; j < packing.size(); ++j)
            if (packing[i].overlaps(packing[j])) throw PreconditionError("input balls are not pairwise disjoint");

    std::map<std::size_t, std::vector<std::size_t>> classes;
    for (std::size_t i = 0; i < packing.size(); ++i) classes[dyadic_class(packing[i].diameter())].push_back(i);

    const double factor = 1.0 - std::exp2(t - s);
    std::optional<std::size_t> k0;
    for (const auto& [k, members] : classes)
        if (static_cast<double>(members.size()) >= std::exp2(static_cast<double>(k) * t) * factor) {
            k0 = k;
            break;
        }
    // The classes cannot all be small: that would force the s-volume below 1.
    if (!k0) throw std::logic_error("center_packing: no dyadic class meets the count bound despite s-volume > 1");

    CenteringResult out;
    out.k0 = *k0;
    out.class_size = classes[*k0].size();
    out.radius = Rational(BigInt(1), BigInt(1) << static_cast<unsigned>(*k0 + 1));
    out.bound = factor / params.space_constant;

    struct Witness {
        Rational point;
        DigitWord word;
    };
    std::vector<Witness> points;
    for (std::size_t idx : classes[*k0]) {
        const auto cyl = find_set_cylinder_inside(packing[idx], set, point_depth);
        if (!cyl) throw PreconditionError("input ball does not meet the set (to rank " + std::to_string(point_depth) + ")");
        DigitWord word = set.point_word(*cyl, std::max(point_depth, cyl->rank()));
        Rational x = Cylinder(word).left();
        points.push_back({std::move(x), std::move(word)});
    }

    // Greedy grouping: each representative absorbs every remaining ball it meets.
    const Rational two_r = 2 * out.radius;
    std::vector<bool> assigned(points.size(), false);
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (assigned[i]) continue;
        assigned[i] = true;
        out.balls.emplace_back(points[i].point, out.radius);
        out.center_words.push_back(points[i].word);
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            if (assigned[j]) continue;
            const Rational dist = mp::abs(points[j].point - points[i].point);
            if (dist < two_r) assigned[j] = true;
        }
    }
    out.log_t_volume = std::log(static_cast<double>(out.balls.size())) + t * log_rational(two_r);
    return out;
}

// ---------------------------------------------------------------------------
// Critical exponents

unsigned thread_cap() {
    if (const char* env = std::getenv("CANTORPACK_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<Stage> rank_tied_stages(const BaseSequence& base, const std::vector<std::size_t>& depths,
                                    std::size_t eps_offset) {
    std::vector<Stage> out;
    for (std::size_t K : depths) {
        if (K < eps_offset) throw ValidationError("eps offset larger than the stage depth");
        out.push_back({K, Scale::of_rank(base, K - eps_offset), 0});
    }
    return out;
}

CriticalExponent critical_exponent(const DigitRestrictedSet& set, Family family, const Weight& weight,
                                   const std::vector<Stage>& stages, const ExponentOptions& options) {
    if (stages.empty()) throw ValidationError("critical_exponent needs at least one stage");
    CriticalExponent out;
    out.rows.resize(stages.size());
    const unsigned threads = options.threads ? options.threads : thread_cap();
    parallel_for(stages.size(), threads, [&](std::size_t i) {
        const Stage& st = stages[i];
        const auto ev = make_evaluator(set, family, weight, st.eps, st.depth, st.resolution, options.backend,
                                       options.grid_budget, 0);
        auto holds = [&](double alpha) {
            const LogValue v = ev->value(alpha);
            return !v.is_zero() && v.log() >= -1e-9;
        };
        ThresholdRow row{st.depth, st.eps.log(), 0.0, false, 0};
        if (!holds(0.0)) {
            row.degenerate = true;
        } else if (holds(1.0)) {
            row.threshold = 1.0;
        } else {
            double lo = 0.0;
            double hi = 1.0;
            while (hi - lo > options.tolerance) {
                const double mid = 0.5 * (lo + hi);
                (holds(mid) ? lo : hi) = mid;
                ++row.iterations;
            }
            row.threshold = lo == 0.0 ? 0.0 : 0.5 * (lo + hi);
        }
        out.rows[i] = row;
    });

    const auto& rows = out.rows;
    out.degenerate = std::all_of(rows.begin(), rows.end(), [](const ThresholdRow& r) { return r.degenerate; });
    out.last = rows.back().threshold;
    out.trend = rows.size() > 1 ? rows.back().threshold - rows[rows.size() - 2].threshold : 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].threshold > rows[i - 1].threshold) out.nonincreasing = false;
        if (rows[i].threshold < rows[i - 1].threshold) out.nondecreasing = false;
    }
    const auto tail = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(options.window * static_cast<double>(rows.size()))));
    out.windowed_limsup = -1.0;
    out.windowed_liminf = 2.0;
    for (std::size_t i = rows.size() - tail; i < rows.size(); ++i) {
        out.windowed_limsup = std::max(out.windowed_limsup, rows[i].threshold);
        out.windowed_liminf = std::min(out.windowed_liminf, rows[i].threshold);
    }
    return out;
}

}  // namespace cantorpack
