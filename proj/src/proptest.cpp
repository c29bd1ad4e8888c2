#include "cantorpack/proptest.hpp"

#include "cantorpack/errors.hpp"
#include "cantorpack/measure.hpp"
#include "cantorpack/packing.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace cantorpack {

namespace {

BaseSequence list_base(const std::vector<unsigned>& ns) {
    std::vector<BigInt> v(ns.begin(), ns.end());
    return BaseSequence::list(v);
}

DigitRestrictedSet make_set(const std::vector<unsigned>& ns, const std::vector<std::vector<unsigned>>& digits) {
    RankSchedule<DigitRule> rules;
    rules.cycle.push_back(DigitRule::all());
    for (std::size_t k = 0; k < digits.size(); ++k) {
        if (digits[k].size() == ns[k]) continue;
        std::vector<BigInt> d(digits[k].begin(), digits[k].end());
        rules.exceptions.emplace(k + 1, DigitRule::explicit_digits(d));
    }
    return DigitRestrictedSet(list_base(ns), rules);
}

std::string join(const std::vector<unsigned>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
    return s;
}

bool le(const LogValue& a, const LogValue& b) {
    if (a.is_zero()) return true;
    if (b.is_zero()) return false;
    return a.log() <= b.log() + 1e-12 * std::max(1.0, std::abs(b.log()));
}

std::string show(const LogValue& v) {
    std::ostringstream os;
    os.precision(17);
    os << v.log_or_neg_inf();
    return os.str();
}

PackingQuery query(const PropCase& c, const DigitRestrictedSet& set, Family f, const Rational& eps, double alpha,
                   std::size_t depth, std::size_t resolution, const PropOptions& o) {
    PackingQuery q{set, f, Scale::exact(eps)};
    q.alpha = alpha;
    q.depth = depth;
    q.resolution = resolution;
    q.backend = IntervalBackend::Grid;
    q.grid_budget = o.grid_budget;
    (void)c;
    return q;
}

std::size_t grid_size(const PropCase& c, std::size_t R) {
    std::size_t p = 1;
    for (std::size_t k = 0; k < R; ++k) p *= c.base[k];
    return p;
}

// Disjoint, each meets the set, diameter <= eps, value recomputed from the witness.
std::string validate_witness(const PackingValue& v, const PackingQuery& q, std::size_t R) {
    if (!v.witness_complete) return "witness incomplete";
    const auto& set = q.set;
    const Rational eps = q.eps.value();
    std::vector<const WitnessElement*> els;
    for (const auto& e : v.witness) els.push_back(&e);
    std::sort(els.begin(), els.end(), [](auto a, auto b) { return a->left < b->left; });
    const auto words = all_words(set.base(), R);
    LogSum sum;
    for (std::size_t i = 0; i < els.size(); ++i) {
        const auto& e = *els[i];
        if (!(e.left < e.right)) return "empty witness element";
        if (i + 1 < els.size() && els[i + 1]->left < e.right) return "witness elements overlap";
        if (e.right - e.left > eps) return "witness element longer than eps";
        if (q.weight.is_length() && !close_rel(log_rational(e.right - e.left), e.log_weight, 1e-12))
            return "witness log weight differs from its length";
        bool meets = false;
        if (e.word) {
            meets = intersects(set, cylinder(*e.word)) && cylinder(*e.word).left() == e.left &&
                    cylinder(*e.word).right() == e.right;
        } else {
            for (const auto& w : words) {
                const Cylinder cyl = cylinder(w);
                if (e.left <= cyl.left() && cyl.right() <= e.right && intersects(set, cyl)) {
                    meets = true;
                    break;
                }
            }
        }
        if (!meets) return "witness element misses the set";
        sum.add_log(q.alpha * e.log_weight);
    }
    const LogValue total = sum.total();
    if (total.is_zero() != v.value.is_zero() ||
        (!total.is_zero() && !close_rel(total.log(), v.value.log(), 1e-12)))
        return "witness volume " + show(total) + " differs from value " + show(v.value);
    return {};
}

std::string check_families(const PropCase& c, const PropOptions& o,
                           const std::function<std::string(Family)>& fn) {
    for (Family f : {Family::CylindersOnly, Family::AllIntervals}) {
        const std::string err = fn(f);
        if (!err.empty()) return to_string(f) + ": " + err;
    }
    (void)c;
    (void)o;
    return {};
}

std::string inv_cylinder_witness(const PropCase& c, const PropOptions& o) {
    const auto set = c.set();
    const auto q = query(c, set, Family::CylindersOnly, c.eps, c.alpha, c.depth, c.depth, o);
    return validate_witness(optimal_cylinder_packing(q), q, c.depth);
}

std::string inv_interval_witness(const PropCase& c, const PropOptions& o) {
    const auto set = c.set();
    const auto q = query(c, set, Family::AllIntervals, c.eps, c.alpha, c.depth, c.depth, o);
    return validate_witness(optimal_interval_packing(q), q, c.depth);
}

std::string inv_family_ordering(const PropCase& c, const PropOptions& o) {
    const auto set = c.set();
    const auto cyl = optimal_packing(query(c, set, Family::CylindersOnly, c.eps, c.alpha, c.depth, c.depth, o));
    const auto ivl = optimal_packing(query(c, set, Family::AllIntervals, c.eps, c.alpha, c.depth, c.depth, o));
    if (!le(cyl.value, ivl.value)) return "cylinders " + show(cyl.value) + " > intervals " + show(ivl.value);
    const std::size_t R = c.depth + 1;
    if (R <= c.base.size() && grid_size(c, R) <= o.grid_budget) {
        const auto fine = optimal_packing(query(c, set, Family::AllIntervals, c.eps, c.alpha, c.depth, R, o));
        if (!le(ivl.value, fine.value))
            return "resolution " + std::to_string(c.depth) + " value " + show(ivl.value) + " > finer grid " +
                   show(fine.value);
    }
    return {};
}

std::string inv_exponent_ordering(const PropCase& c, const PropOptions& o) {
    const auto set = c.set();
    const double log_eps = log_rational(c.eps);
    return check_families(c, o, [&](Family f) -> std::string {
        const auto a = optimal_packing(query(c, set, f, c.eps, c.alpha, c.depth, c.depth, o));
        const auto b = optimal_packing(query(c, set, f, c.eps, c.alpha + c.alpha_step, c.depth, c.depth, o));
        const LogValue bound = a.value * LogValue::from_log(c.alpha_step * log_eps);
        if (!le(b.value, bound)) return "value(alpha+d) " + show(b.value) + " > value(alpha) eps^d " + show(bound);
        return {};
    });
}

std::string inv_eps_monotonicity(const PropCase& c, const PropOptions& o) {
    const auto set = c.set();
    return check_families(c, o, [&](Family f) -> std::string {
        const auto a = optimal_packing(query(c, set, f, c.eps, c.alpha, c.depth, c.depth, o));
        const auto b = optimal_packing(query(c, set, f, c.eps_larger, c.alpha, c.depth, c.depth, o));
        if (!le(a.value, b.value)) return "value(eps) " + show(a.value) + " > value(larger eps) " + show(b.value);
        return {};
    });
}

std::string inv_set_monotonicity(const PropCase& c, const PropOptions& o) {
    const auto set = c.set();
    const auto sub = c.subset_set();
    if (!sub.subset_of(set, c.depth)) return "generator produced a non-subset";
    const std::string err = check_families(c, o, [&](Family f) -> std::string {
        const auto a = optimal_packing(query(c, sub, f, c.eps, c.alpha, c.depth, c.depth, o));
        const auto b = optimal_packing(query(c, set, f, c.eps, c.alpha, c.depth, c.depth, o));
        if (!le(a.value, b.value)) return "subset value " + show(a.value) + " > set value " + show(b.value);
        return {};
    });
    if (!err.empty()) return err;
    const Scale eps = Scale::exact(c.eps);
    if (!eps.admits_rank(set.base(), c.depth)) return {};
    const LogValue a = covering_value(sub, eps, c.alpha, c.depth);
    const LogValue b = covering_value(set, eps, c.alpha, c.depth);
    if (!le(a, b)) return "subset covering " + show(a) + " > set covering " + show(b);
    return {};
}

std::string inv_depth_monotonicity(const PropCase& c, const PropOptions& o) {
    const auto set = c.set();
    if (c.depth + 1 > c.base.size()) return {};
    const auto a = optimal_cylinder_packing(query(c, set, Family::CylindersOnly, c.eps, c.alpha, c.depth, c.depth, o));
    const auto b =
        optimal_cylinder_packing(query(c, set, Family::CylindersOnly, c.eps, c.alpha, c.depth + 1, c.depth + 1, o));
    if (!le(a.value, b.value)) return "depth K value " + show(a.value) + " > depth K+1 value " + show(b.value);
    return {};
}

// Explicit rational digit laws built from the allowed digits (weights 1, 2, 3, ...).
DigitProductMeasure case_measure(const PropCase& c) {
    RankSchedule<DigitLaw> laws;
    laws.cycle.push_back(DigitLaw::uniform());
    for (std::size_t k = 0; k < c.base.size(); ++k) {
        std::vector<Rational> p(c.base[k], Rational(0));
        unsigned total = 0;
        for (std::size_t i = 0; i < c.allowed[k].size(); ++i) total += static_cast<unsigned>(i + 1);
        for (std::size_t i = 0; i < c.allowed[k].size(); ++i)
            p[c.allowed[k][i]] = Rational(BigInt(i + 1), BigInt(total));
        laws.exceptions.emplace(k + 1, DigitLaw::explicit_probs(p));
    }
    return DigitProductMeasure(list_base(c.base), laws);
}

std::string inv_measure_additivity(const PropCase& c, const PropOptions&) {
    const auto mu = case_measure(c);
    const auto set = c.set();
    const std::size_t K = std::min(c.depth, c.base.size() - 1);
    for (std::size_t k = 0; k < K; ++k) {
        for (const auto& w : all_words(mu.base(), k)) {
            const auto parent = measure_of_cylinder(mu, cylinder(w));
            Rational sum = 0;
            for (unsigned d = 0; d < c.base[k]; ++d) sum += measure_of_cylinder(mu, cylinder(w.extended(d))).exact;
            if (sum != parent.exact) return "children of " + w.str() + " sum to " + to_string(sum);
            if ((parent.exact > 0) != intersects(set, cylinder(w)))
                return "support of the measure differs from the set at " + w.str();
        }
    }
    return {};
}

std::string inv_inscribe_bound(const PropCase& c, const PropOptions&) {
    const auto base = list_base(c.base);
    // J from the case's eps pair: centered at eps/(eps+eps_larger), radius eps/4.
    const Rational center = c.eps / (c.eps + c.eps_larger);
    const Rational radius = std::min({c.eps / 4, center, 1 - center});
    if (radius <= 0) return {};
    const IntervalBall J(center, radius);
    Cylinder cyl = cylinder(DigitWord(base, {}));
    try {
        cyl = inscribe_cylinder(J, center, base, c.base.size());
    } catch (const ResolutionExceeded&) {
        return {};  // finite list base too short for this J
    }
    if (!cyl.contains(center)) return "inscribed cylinder misses the center";
    if (!J.contains_closed(cyl.left(), cyl.right())) return "inscribed cylinder not inside J";
    const Rational n = c.base[cyl.rank() == 0 ? 0 : cyl.rank() - 1];
    if (cyl.length() * 2 * n < J.diameter()) return "inscribed cylinder shorter than |J|/(2 n_k)";
    return {};
}

std::vector<unsigned> random_subset(std::mt19937_64& rng, const std::vector<unsigned>& from) {
    std::vector<unsigned> out;
    if (rng() % 4 == 0) return from;
    for (unsigned d : from)
        if (rng() % 2) out.push_back(d);
    if (out.empty()) out.push_back(from[rng() % from.size()]);
    return out;
}

}  // namespace

DigitRestrictedSet PropCase::set() const { return make_set(base, allowed); }
DigitRestrictedSet PropCase::subset_set() const { return make_set(base, subset); }

std::string PropCase::describe() const {
    std::ostringstream os;
    os << "base [" << join(base) << "] depth " << depth << " eps " << to_string(eps) << " eps' "
       << to_string(eps_larger) << " alpha " << alpha << " step " << alpha_step << " allowed";
    for (const auto& a : allowed) os << " {" << join(a) << "}";
    os << " subset";
    for (const auto& a : subset) os << " {" << join(a) << "}";
    return os.str();
}

PropCase random_case(std::mt19937_64& rng, const PropOptions& o) {
    PropCase c;
    c.depth = 1 + rng() % o.max_depth;
    for (std::size_t k = 0; k <= c.depth; ++k) {
        unsigned n = 2 + static_cast<unsigned>(rng() % (o.max_base - 1));
        c.base.push_back(n);
        std::vector<unsigned> all(n);
        for (unsigned d = 0; d < n; ++d) all[d] = d;
        c.allowed.push_back(random_subset(rng, all));
        c.subset.push_back(random_subset(rng, c.allowed.back()));
    }
    while (grid_size(c, c.depth) > o.grid_budget && c.depth > 1) {
        --c.depth;
        c.base.pop_back();
        c.allowed.pop_back();
        c.subset.pop_back();
    }
    const std::size_t r = rng() % (c.depth + 1);
    const unsigned m = 1 + static_cast<unsigned>(rng() % 3);
    c.eps = std::min(Rational(1), Rational(BigInt(m), BigInt(grid_size(c, r))));
    c.eps_larger = std::min(Rational(1), c.eps * Rational(BigInt(2 + rng() % 2), BigInt(2)));
    c.alpha = static_cast<double>(1 + rng() % 72) / 64.0;
    c.alpha_step = static_cast<double>(1 + rng() % 32) / 64.0;
    return c;
}

const std::vector<std::string>& invariant_names() {
    static const std::vector<std::string> names{
        "cylinder_witness", "interval_witness",   "family_ordering",    "exponent_ordering",
        "eps_monotonicity", "set_monotonicity",   "depth_monotonicity", "measure_additivity",
        "inscribe_bound"};
    return names;
}

std::string check_invariant(const std::string& name, const PropCase& c, const PropOptions& o) {
    try {
        if (name == "cylinder_witness") return inv_cylinder_witness(c, o);
        if (name == "interval_witness") return inv_interval_witness(c, o);
        if (name == "family_ordering") return inv_family_ordering(c, o);
        if (name == "exponent_ordering") return inv_exponent_ordering(c, o);
        if (name == "eps_monotonicity") return inv_eps_monotonicity(c, o);
        if (name == "set_monotonicity") return inv_set_monotonicity(c, o);
        if (name == "depth_monotonicity") return inv_depth_monotonicity(c, o);
        if (name == "measure_additivity") return inv_measure_additivity(c, o);
        if (name == "inscribe_bound") return inv_inscribe_bound(c, o);
    } catch (const std::exception& e) {
        return std::string("exception: ") + e.what();
    }
    throw ValidationError("unknown invariant " + name);
}

PropCase shrink(const std::string& name, const PropCase& c, const PropOptions& o) {
    PropCase best = c;
    for (bool progress = true; progress;) {
        progress = false;
        if (best.depth > 1) {
            PropCase t = best;
            t.depth = best.depth / 2;
            t.base.resize(t.depth + 1);
            t.allowed.resize(t.depth + 1);
            t.subset.resize(t.depth + 1);
            if (!check_invariant(name, t, o).empty()) {
                best = t;
                progress = true;
                continue;
            }
        }
        PropCase t = best;
        bool changed = false;
        for (std::size_t k = 0; k < t.base.size(); ++k) {
            const unsigned n = std::max(2u, t.base[k] / 2);
            if (n == t.base[k]) continue;
            changed = true;
            t.base[k] = n;
            auto clip = [n](std::vector<unsigned>& v) { std::erase_if(v, [n](unsigned d) { return d >= n; }); };
            clip(t.allowed[k]);
            if (t.allowed[k].empty()) t.allowed[k].push_back(0);
            clip(t.subset[k]);
            if (t.subset[k].empty()) t.subset[k].push_back(t.allowed[k].front());
        }
        if (changed && !check_invariant(name, t, o).empty()) {
            best = t;
            progress = true;
        }
    }
    return best;
}

PropReport run_property_suite(std::uint64_t seed, const PropOptions& o) {
    if (o.max_base < 2 || o.max_depth < 1) throw ValidationError("property suite needs max_base >= 2, max_depth >= 1");
    PropReport rep;
    rep.seed = seed;
    rep.cases = o.cases;
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < o.cases; ++i) {
        const PropCase c = random_case(rng, o);
        for (const auto& name : invariant_names()) {
            ++rep.checked[name];
            const std::string err = check_invariant(name, c, o);
            if (err.empty()) continue;
            const PropCase small = shrink(name, c, o);
            std::string detail = check_invariant(name, small, o);
            rep.failures.push_back({name, detail.empty() ? err : detail, i, c, small});
        }
    }
    return rep;
}

}  // namespace cantorpack
