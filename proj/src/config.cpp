#include "cantorpack/config.hpp"

#include "cantorpack/errors.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace cantorpack {

namespace mp = boost::multiprecision;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw ConfigError(path + ": " + msg); }

void only_keys(const Json& j, const std::string& path, std::initializer_list<const char*> keys) {
    if (!j.is_object()) fail(path, "expected an object");
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) fail(path + "." + it.key(), "unknown key");
}

const Json& need(const Json& j, const char* key, const std::string& path) {
    if (!j.contains(key)) fail(path, std::string("missing required key '") + key + "'");
    return j.at(key);
}

BigInt to_big(const Json& j, const std::string& path) {
    if (j.is_number_unsigned()) return BigInt(j.get<std::uint64_t>());
    if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) fail(path, "not an integer: " + s);
        return mp::numerator(parse_rational(s));  // decimal, even with leading zeros
    }
    fail(path, "expected an integer");
}

std::size_t to_size(const Json& j, const std::string& path) {
    if (!j.is_number_unsigned()) fail(path, "expected a nonnegative integer");
    return j.get<std::size_t>();
}

double to_double(const Json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

double to_positive(const Json& j, const std::string& path) {
    const double v = to_double(j, path);
    if (!(v > 0.0)) fail(path, "must be positive");
    return v;
}

Rational to_rational(const Json& j, const std::string& path) {
    try {
        if (j.is_string()) return parse_rational(j.get<std::string>());
        if (j.is_number_integer()) return Rational(to_big(j, path));
        if (j.is_number()) {
            std::ostringstream os;
            os.precision(17);
            os << j.get<double>();
            return parse_rational(os.str());
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        fail(path, e.what());
    }
    fail(path, "expected a rational (\"p/q\", integer or decimal)");
}

template <class T, class F>
std::vector<T> list_of(const Json& j, const std::string& path, F&& each, bool nonempty = true) {
    if (!j.is_array()) fail(path, "expected an array");
    if (nonempty && j.empty()) fail(path, "must be nonempty");
    std::vector<T> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(each(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<std::size_t> rank_list(const Json& j, const std::string& path) {
    auto v = list_of<std::size_t>(j, path, to_size);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0) fail(path, "ranks start at 1");
        if (i > 0 && v[i] <= v[i - 1]) fail(path, "must be strictly increasing");
    }
    return v;
}

template <class T, class F>
RankSchedule<T> schedule(const Json& j, const std::string& path, F&& parse_one, const char* fallback) {
    RankSchedule<T> out;
    const Json def = j.contains("default") ? j.at("default") : Json(fallback);
    if (def.is_array())
        out.cycle = list_of<T>(def, path + ".default", parse_one);
    else
        out.cycle.push_back(parse_one(def, path + ".default"));
    if (j.contains("exceptions")) {
        const Json& ex = j.at("exceptions");
        if (!ex.is_object()) fail(path + ".exceptions", "expected an object keyed by rank");
        for (auto it = ex.begin(); it != ex.end(); ++it) {
            const std::string p = path + ".exceptions." + it.key();
            std::size_t k = 0;
            try {
                std::size_t used = 0;
                k = std::stoul(it.key(), &used);
                if (used != it.key().size()) throw std::invalid_argument("");
            } catch (const std::exception&) {
                fail(p, "rank keys must be positive integers");
            }
            if (k == 0) fail(p, "ranks start at 1");
            out.exceptions.emplace(k, parse_one(it.value(), p));
        }
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Family parse_family(const Json& j, const std::string& path) {
    if (j == "cylinders") return Family::CylindersOnly;
    if (j == "intervals") return Family::AllIntervals;
    fail(path, "family must be \"cylinders\" or \"intervals\"");
}

}  // namespace

BaseSequence parse_base(const Json& j, const std::string& path) {
    const std::string kind = need(j, "kind", path).is_string() ? j.at("kind").get<std::string>() : "";
    try {
        if (kind == "constant") {
            only_keys(j, path, {"kind", "s"});
            return BaseSequence::constant(to_big(need(j, "s", path), path + ".s"));
        }
        if (kind == "list") {
            only_keys(j, path, {"kind", "values"});
            return BaseSequence::list(list_of<BigInt>(need(j, "values", path), path + ".values", to_big));
        }
        if (kind == "product_recursive") {
            only_keys(j, path, {"kind", "seed"});
            return BaseSequence::product_recursive(list_of<BigInt>(need(j, "seed", path), path + ".seed", to_big));
        }
        if (kind == "power") {
            only_keys(j, path, {"kind", "b"});
            return BaseSequence::power(to_big(need(j, "b", path), path + ".b"));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        fail(path, e.what());
    }
    fail(path + ".kind", "expected constant, list, product_recursive or power");
}

DigitRule parse_rule(const Json& j, const std::string& path) {
    if (j == "all") return DigitRule::all();
    if (j == "sqrt_lattice") return DigitRule::sqrt_lattice();
    if (j.is_object() && j.contains("explicit")) {
        only_keys(j, path, {"explicit"});
        return DigitRule::explicit_digits(list_of<BigInt>(j.at("explicit"), path + ".explicit", to_big));
    }
    fail(path, "rule must be \"all\", \"sqrt_lattice\" or {\"explicit\": [...]}");
}

DigitLaw parse_law(const Json& j, const std::string& path) {
    if (j == "uniform") return DigitLaw::uniform();
    if (j == "uniform_lattice") return DigitLaw::uniform_on_lattice();
    if (j.is_object() && j.size() == 1) {
        if (j.contains("subset"))
            return DigitLaw::uniform_on_subset(list_of<BigInt>(j.at("subset"), path + ".subset", to_big));
        if (j.contains("dirac")) return DigitLaw::dirac(to_big(j.at("dirac"), path + ".dirac"));
        if (j.contains("probs"))
            return DigitLaw::explicit_probs(list_of<Rational>(j.at("probs"), path + ".probs", to_rational));
    }
    fail(path, "law must be \"uniform\", \"uniform_lattice\", {\"subset\"}, {\"dirac\"} or {\"probs\"}");
}

ExperimentConfig parse_config(const Json& j) {
    ExperimentConfig c;
    c.raw = j;
    only_keys(j, "$", {"base", "set", "measures", "query", "faithful", "tstar", "billingsley", "proptest", "assert",
                       "seed", "output", "description"});
    if (j.contains("base")) c.base = parse_base(j.at("base"), "$.base");
    if (j.contains("set")) {
        const Json& s = j.at("set");
        only_keys(s, "$.set", {"kind", "A", "default", "exceptions"});
        const Json& kind = need(s, "kind", "$.set");
        if (kind != "full" && kind != "rules" && kind != "tstar")
            fail("$.set.kind", "expected full, rules or tstar");
        if (kind == "tstar" && s.contains("A")) c.tstar.A = rank_list(s.at("A"), "$.set.A");
        c.set_spec = s;
    }
    if (j.contains("measures")) {
        const Json& m = j.at("measures");
        only_keys(m, "$.measures", {"mu", "nu"});
        if (m.contains("mu")) c.mu_spec = m.at("mu");
        if (m.contains("nu")) c.nu_spec = m.at("nu");
    }
    if (j.contains("query")) {
        const Json& q = j.at("query");
        const std::string p = "$.query";
        only_keys(q, p, {"family", "depths", "eps_offset", "eps", "resolution_offset", "alpha", "tolerance", "window",
                         "backend", "grid_budget"});
        if (q.contains("family")) {
            const Json& f = q.at("family");
            if (f == "both")
                c.query.families = {Family::CylindersOnly, Family::AllIntervals};
            else
                c.query.families = {parse_family(f, p + ".family")};
        }
        if (q.contains("depths")) c.query.depths = rank_list(q.at("depths"), p + ".depths");
        if (q.contains("eps_offset")) c.query.eps_offset = to_size(q.at("eps_offset"), p + ".eps_offset");
        if (q.contains("eps")) {
            c.query.eps = to_rational(q.at("eps"), p + ".eps");
            if (*c.query.eps <= 0) fail(p + ".eps", "must be positive");
        }
        if (q.contains("resolution_offset"))
            c.query.resolution_offset = to_size(q.at("resolution_offset"), p + ".resolution_offset");
        if (q.contains("alpha")) c.query.alphas = list_of<double>(q.at("alpha"), p + ".alpha", to_double);
        for (double a : c.query.alphas)
            if (a < 0.0) fail(p + ".alpha", "exponents must be >= 0");
        if (q.contains("tolerance")) c.query.exponent.tolerance = to_positive(q.at("tolerance"), p + ".tolerance");
        if (q.contains("window")) c.query.exponent.window = to_positive(q.at("window"), p + ".window");
        if (q.contains("backend")) {
            const Json& b = q.at("backend");
            if (b == "auto")
                c.query.exponent.backend = IntervalBackend::Auto;
            else if (b == "grid")
                c.query.exponent.backend = IntervalBackend::Grid;
            else if (b == "cells")
                c.query.exponent.backend = IntervalBackend::Cells;
            else
                fail(p + ".backend", "expected auto, grid or cells");
        }
        if (q.contains("grid_budget")) c.query.exponent.grid_budget = to_size(q.at("grid_budget"), p + ".grid_budget");
    }
    if (j.contains("faithful")) {
        const Json& f = j.at("faithful");
        only_keys(f, "$.faithful", {"K", "tolerance", "window"});
        if (f.contains("K")) c.faithful.K = to_size(f.at("K"), "$.faithful.K");
        if (f.contains("tolerance")) c.faithful.ratios.tolerance = to_positive(f.at("tolerance"), "$.faithful.tolerance");
        if (f.contains("window")) c.faithful.ratios.window = to_positive(f.at("window"), "$.faithful.window");
        if (c.faithful.K < 2) fail("$.faithful.K", "must be >= 2");
    }
    if (j.contains("tstar")) {
        const Json& t = j.at("tstar");
        const std::string p = "$.tstar";
        only_keys(t, p, {"start", "growth", "stages", "prefix", "tolerance", "selection_tolerance"});
        if (t.contains("start")) c.tstar.policy.start = to_size(t.at("start"), p + ".start");
        if (t.contains("growth")) c.tstar.policy.growth = to_positive(t.at("growth"), p + ".growth");
        if (t.contains("stages")) c.tstar.stages = to_size(t.at("stages"), p + ".stages");
        if (t.contains("prefix")) c.tstar.prefix = to_size(t.at("prefix"), p + ".prefix");
        if (t.contains("tolerance")) c.tstar.tolerance = to_positive(t.at("tolerance"), p + ".tolerance");
        if (t.contains("selection_tolerance"))
            c.tstar.policy.tolerance = to_positive(t.at("selection_tolerance"), p + ".selection_tolerance");
        if (c.tstar.stages == 0) fail(p + ".stages", "must be >= 1");
        if (c.tstar.policy.growth <= 1.0) fail(p + ".growth", "must exceed 1");
    }
    if (j.contains("billingsley")) {
        const Json& b = j.at("billingsley");
        const std::string p = "$.billingsley";
        only_keys(b, p, {"delta", "alpha", "K", "n0", "point", "selected", "tolerance", "continuity_tolerance"});
        if (b.contains("delta")) c.billingsley.delta = to_positive(b.at("delta"), p + ".delta");
        if (b.contains("alpha")) c.billingsley.alphas = list_of<double>(b.at("alpha"), p + ".alpha", to_positive);
        if (b.contains("K")) c.billingsley.K = to_size(b.at("K"), p + ".K");
        if (b.contains("n0")) c.billingsley.n0 = to_size(b.at("n0"), p + ".n0");
        if (b.contains("point")) c.billingsley.point = list_of<BigInt>(b.at("point"), p + ".point", to_big);
        if (b.contains("selected")) c.billingsley.selected = rank_list(b.at("selected"), p + ".selected");
        if (b.contains("tolerance")) c.billingsley.tolerance = to_positive(b.at("tolerance"), p + ".tolerance");
        if (b.contains("continuity_tolerance"))
            c.billingsley.continuity_tolerance = to_positive(b.at("continuity_tolerance"), p + ".continuity_tolerance");
        if (c.billingsley.K == 0) fail(p + ".K", "must be >= 1");
    }
    if (j.contains("proptest")) {
        const Json& t = j.at("proptest");
        only_keys(t, "$.proptest", {"cases", "max_depth", "max_base"});
        if (t.contains("cases")) c.proptest.cases = to_size(t.at("cases"), "$.proptest.cases");
        if (t.contains("max_depth")) c.proptest.max_depth = to_size(t.at("max_depth"), "$.proptest.max_depth");
        if (t.contains("max_base"))
            c.proptest.max_base = static_cast<unsigned>(to_size(t.at("max_base"), "$.proptest.max_base"));
        if (c.proptest.max_depth == 0) fail("$.proptest.max_depth", "must be >= 1");
        if (c.proptest.max_base < 2) fail("$.proptest.max_base", "must be >= 2");
    }
    if (j.contains("assert")) {
        if (!j.at("assert").is_boolean()) fail("$.assert", "expected a boolean");
        c.assert_verdict = j.at("assert").get<bool>();
    }
    if (j.contains("seed")) c.seed = to_size(j.at("seed"), "$.seed");
    if (j.contains("output")) {
        const Json& o = j.at("output");
        only_keys(o, "$.output", {"dir", "format"});
        if (o.contains("dir")) {
            if (!o.at("dir").is_string()) fail("$.output.dir", "expected a string");
            c.out_dir = o.at("dir").get<std::string>();
        }
        if (o.contains("format")) {
            if (o.at("format") != "json" && o.at("format") != "csv") fail("$.output.format", "expected json or csv");
            c.format = o.at("format").get<std::string>();
        }
    }
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    const std::string text = read_file(path);
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ConfigError(path + ": invalid JSON: " + e.what());
    }
    return parse_config(j);
}

std::vector<std::size_t> tstar_indices(const ExperimentConfig& cfg) {
    if (cfg.tstar.A) return *cfg.tstar.A;
    if (!cfg.base) throw ConfigError("$.base: required");
    CounterexampleOptions o;
    o.policy = cfg.tstar.policy;
    std::size_t prefix = cfg.tstar.prefix;
    if (prefix == 0) {
        double k = static_cast<double>(o.policy.start);
        for (std::size_t s = 1; s < cfg.tstar.stages; ++s) k = std::ceil(k * o.policy.growth);
        prefix = static_cast<std::size_t>(k);
    }
    const auto rep = condition_ratios(*cfg.base, prefix, cfg.faithful.ratios);
    auto sel = select_subsequence(*cfg.base, prefix, rep.C, o.policy);
    if (sel.indices.empty()) throw PreconditionError("no index set for T*: " + sel.note);
    if (sel.indices.size() > cfg.tstar.stages) sel.indices.resize(cfg.tstar.stages);
    return sel.indices;
}

DigitRestrictedSet build_set(const ExperimentConfig& cfg) {
    if (!cfg.base) throw ConfigError("$.base: required");
    if (!cfg.set_spec) return DigitRestrictedSet::full(*cfg.base);
    const Json& s = *cfg.set_spec;
    const std::string kind = s.at("kind").get<std::string>();
    if (kind == "full") return DigitRestrictedSet::full(*cfg.base);
    if (kind == "tstar") return build_tstar(*cfg.base, tstar_indices(cfg));
    auto rules = schedule<DigitRule>(s, "$.set", parse_rule, "all");
    try {
        return DigitRestrictedSet(*cfg.base, std::move(rules));
    } catch (const ValidationError& e) {
        throw ConfigError(std::string("$.set: ") + e.what());
    }
}

DigitProductMeasure build_measure(const Json& spec, const DigitRestrictedSet& set, const std::string& path) {
    only_keys(spec, path, {"kind", "default", "exceptions"});
    const Json& kind = need(spec, "kind", path);
    if (kind == "lebesgue") return DigitProductMeasure::lebesgue(set.base());
    if (kind == "tstar_uniform") {
        if (!set.tstar_indices()) throw ConfigError(path + ": tstar_uniform needs a tstar set");
        return mu_xi_for(set);
    }
    if (kind == "per_rank") {
        try {
            return DigitProductMeasure(set.base(), schedule<DigitLaw>(spec, path, parse_law, "uniform"));
        } catch (const ValidationError& e) {
            throw ConfigError(path + ": " + e.what());
        }
    }
    fail(path + ".kind", "expected lebesgue, tstar_uniform or per_rank");
}

}  // namespace cantorpack
