#include "cantorpack/commands.hpp"

#include "cantorpack/errors.hpp"
#include "cantorpack/proptest.hpp"

#include <algorithm>

namespace cantorpack {

namespace {

const BaseSequence& need_base(const ExperimentConfig& cfg) {
    if (!cfg.base) throw ConfigError("$.base: required for this command");
    return *cfg.base;
}

std::vector<Stage> stages_for(const ExperimentConfig& cfg, const BaseSequence& base,
                              const std::vector<std::size_t>& depths) {
    std::vector<Stage> out;
    if (cfg.query.eps) {
        for (std::size_t K : depths) out.push_back({K, Scale::exact(*cfg.query.eps), 0});
    } else {
        try {
            out = rank_tied_stages(base, depths, cfg.query.eps_offset);
        } catch (const ValidationError& e) {
            throw ConfigError(std::string("$.query.eps_offset: ") + e.what());
        }
    }
    if (cfg.query.resolution_offset > 0)
        for (auto& st : out) st.resolution = st.depth + cfg.query.resolution_offset;
    return out;
}

std::vector<std::size_t> dim_depths(const ExperimentConfig& cfg, const CommandOverrides& o) {
    std::vector<std::size_t> d = cfg.query.depths;
    if (o.depth) {
        if (d.empty()) {
            for (std::size_t k = 1; k <= *o.depth; ++k) d.push_back(k);
        } else {
            std::erase_if(d, [&](std::size_t k) { return k > *o.depth; });
            if (d.empty()) throw ConfigError("--depth: no configured depth is <= " + std::to_string(*o.depth));
        }
    }
    if (d.empty())
        for (std::size_t k = 1; k <= 8; ++k) d.push_back(k);
    return d;
}

Weight weight_for(const ExperimentConfig& cfg, const DigitRestrictedSet& set) {
    if (!cfg.mu_spec) return Weight::length();
    return Weight::of(build_measure(*cfg.mu_spec, set, "$.measures.mu"));
}

}  // namespace

Report cmd_faithful(const ExperimentConfig& cfg, const CommandOverrides& o) {
    const BaseSequence& base = need_base(cfg);
    const std::size_t K = o.depth.value_or(cfg.faithful.K);
    if (K < 2) throw ConfigError("depth must be >= 2 for faithful");
    if (K > base.available()) throw ConfigError("depth " + std::to_string(K) + " exceeds the base prefix");
    const auto rep = condition_ratios(base, K, cfg.faithful.ratios);
    Report r;
    r.command = "faithful";
    r.body = {{"base", base.describe()}, {"faithfulness", to_json(rep)}};
    CsvTable t{"ratios", {"k", "ratio", "exact", "running_sup"}, {}};
    for (std::size_t i = 0; i < rep.ratios.size(); ++i) {
        const auto& e = rep.ratios[i];
        t.rows.push_back({std::to_string(e.k), cell(e.ratio), e.exact ? to_string(*e.exact) : "",
                          cell(rep.running_sup[i])});
    }
    r.tables.push_back(t);
    r.negative = rep.verdict != Verdict::FaithfulTrend;
    if (r.negative) r.failures.push_back("cylinder family is not faithful (C estimate above tolerance)");
    return r;
}

Report cmd_dim(const ExperimentConfig& cfg, const CommandOverrides& o) {
    const BaseSequence& base = need_base(cfg);
    const DigitRestrictedSet set = build_set(cfg);
    const Weight weight = weight_for(cfg, set);
    const auto depths = dim_depths(cfg, o);
    const auto stages = stages_for(cfg, base, depths);

    Report r;
    r.command = "dim";
    Json fams = Json::object();
    std::vector<CriticalExponent> results;
    for (Family f : cfg.query.families) {
        results.push_back(critical_exponent(set, f, weight, stages, cfg.query.exponent));
        fams[to_string(f)] = to_json(results.back());
    }
    r.body = {{"base", base.describe()},
              {"set", set.describe()},
              {"weight", weight.describe()},
              {"depths", depths},
              {"families", fams}};

    CsvTable t{"thresholds", {"depth", "log_eps"}, {}};
    for (Family f : cfg.query.families) t.header.push_back("threshold_" + to_string(f));
    for (std::size_t i = 0; i < stages.size(); ++i) {
        std::vector<std::string> row{std::to_string(stages[i].depth), cell(stages[i].eps.log())};
        for (const auto& res : results)
            row.push_back(res.rows[i].degenerate ? "degenerate" : cell(res.rows[i].threshold));
        t.rows.push_back(row);
    }
    r.tables.push_back(t);

    if (!cfg.query.alphas.empty()) {
        CsvTable v{"values", {"family", "depth", "alpha", "log_value"}, {}};
        Json values = Json::array();
        for (Family f : cfg.query.families) {
            for (const auto& st : stages) {
                for (double a : cfg.query.alphas) {
                    PackingQuery q{set, f, st.eps};
                    q.alpha = a;
                    q.weight = weight;
                    q.depth = st.depth;
                    q.resolution = st.resolution;
                    q.backend = cfg.query.exponent.backend;
                    q.grid_budget = cfg.query.exponent.grid_budget;
                    q.witness_limit = 64;
                    const auto pv = optimal_packing(q);
                    Json e = to_json(pv);
                    e["family"] = to_string(f);
                    e["alpha"] = a;
                    values.push_back(e);
                    v.rows.push_back({to_string(f), std::to_string(st.depth), cell(a),
                                      cell(pv.value.log_or_neg_inf())});
                }
            }
        }
        r.body["values"] = values;
        r.tables.push_back(v);
    }

    for (std::size_t i = 0; i < results.size(); ++i)
        if (results[i].degenerate) {
            r.negative = true;
            r.failures.push_back(to_string(cfg.query.families[i]) + ": degenerate set (value below 1 at alpha 0)");
        }
    if (results.size() == 2) {
        const bool gap = results[0].last < results[1].last;
        r.body["strict_gap"] = gap;
        if (!gap) {
            r.negative = true;
            r.failures.push_back("no strict gap between cylinder and interval thresholds at the deepest stage");
        }
    }
    return r;
}

Report cmd_tstar(const ExperimentConfig& cfg, const CommandOverrides& o) {
    const BaseSequence base = cfg.base ? *cfg.base : BaseSequence::product_recursive({2, 2});
    CounterexampleOptions opt;
    opt.policy = cfg.tstar.policy;
    opt.indices = cfg.tstar.A;
    opt.stages = cfg.tstar.stages;
    opt.prefix = o.depth.value_or(cfg.tstar.prefix);
    opt.ratios = cfg.faithful.ratios;
    opt.tolerance = cfg.tstar.tolerance;
    opt.exponent = cfg.query.exponent;
    const auto rep = run_counterexample_experiment(base, opt);

    Report r;
    r.command = "tstar";
    r.body = {{"base", base.describe()}, {"experiment", to_json(rep)}};
    CsvTable t{"stages", {"s", "k", "log_eps", "threshold_cylinders", "threshold_intervals", "qv_threshold"}, {}};
    for (std::size_t i = 0; i < rep.stage_depths.size(); ++i)
        t.rows.push_back({std::to_string(i + 1), std::to_string(rep.stage_depths[i]),
                          cell(rep.cylinder_family.rows[i].log_eps), cell(rep.cylinder_family.rows[i].threshold),
                          cell(rep.interval_family.rows[i].threshold), cell(rep.qv_curve[i].threshold)});
    r.tables.push_back(t);
    CsvTable ratios{"ratios", {"k", "ratio", "exact"}, {}};
    for (const auto& e : rep.faithfulness.ratios)
        ratios.rows.push_back({std::to_string(e.k), cell(e.ratio), e.exact ? to_string(*e.exact) : ""});
    r.tables.push_back(ratios);

    if (!rep.strict_gap) r.failures.push_back("cylinder estimate is not below the interval estimate");
    if (!rep.cylinder_within_bound) r.failures.push_back("cylinder estimate above C/(2C+2) + tol");
    if (!rep.interval_within_bound) r.failures.push_back("interval estimate below C/(C+2) - tol");
    r.negative = !r.failures.empty();
    return r;
}

Report cmd_billingsley(const ExperimentConfig& cfg, const CommandOverrides& o) {
    const BaseSequence& base = need_base(cfg);
    const DigitRestrictedSet set = build_set(cfg);
    const auto& bc = cfg.billingsley;
    const std::size_t K = o.depth.value_or(bc.K);
    if (K == 0) throw ConfigError("depth must be >= 1");

    const Json default_mu = set.tstar_indices() ? Json{{"kind", "tstar_uniform"}} : Json{{"kind", "lebesgue"}};
    const DigitProductMeasure mu = build_measure(cfg.mu_spec.value_or(default_mu), set, "$.measures.mu");
    const DigitProductMeasure nu =
        build_measure(cfg.nu_spec.value_or(Json{{"kind", "lebesgue"}}), set, "$.measures.nu");

    DigitWord x = set.point_word(cylinder(DigitWord(base, {})), K);
    if (bc.point) {
        if (bc.point->size() < K) throw ConfigError("$.billingsley.point: needs at least K digits");
        try {
            x = DigitWord(base, std::vector<BigInt>(bc.point->begin(), bc.point->begin() + K));
        } catch (const ValidationError& e) {
            throw ConfigError(std::string("$.billingsley.point: ") + e.what());
        }
    }

    Report r;
    r.command = "billingsley";
    const auto gamma = gamma_sequence(x, mu, nu);
    r.body = {{"base", base.describe()},
              {"set", set.describe()},
              {"mu", mu.describe()},
              {"nu", nu.describe()},
              {"delta", bc.delta},
              {"K", K},
              {"point", to_json(x)},
              {"gamma", to_json(gamma)}};
    CsvTable g{"gamma", {"n", "log_mu", "log_nu", "status", "gamma", "exact"}, {}};
    for (const auto& e : gamma.entries)
        g.rows.push_back({std::to_string(e.n), cell(e.mu.log_or_neg_inf()), cell(e.nu.log_or_neg_inf()),
                          to_string(e.status), e.status == GammaEntry::Status::Defined ? cell(e.gamma) : "",
                          e.exact ? to_string(*e.exact) : ""});
    r.tables.push_back(g);

    std::optional<std::vector<std::size_t>> selected = bc.selected;
    if (!selected && set.tstar_indices()) selected = *set.tstar_indices();
    if (selected) {
        try {
            const auto bm = block_monotonicity(set, mu, nu, *selected, K);
            r.body["block_monotonicity"] = to_json(bm);
            if (!bm.holds) r.failures.push_back("gamma increases inside a block");
        } catch (const PreconditionError& e) {
            r.body["block_monotonicity"] = {{"applicable", false}, {"reason", e.what()}};
        }
    }

    Scale eps = Scale::of_rank(base, bc.n0 > 0 ? bc.n0 + 1 : 0);
    if (cfg.query.eps) eps = Scale::exact(*cfg.query.eps);
    Json ineq = Json::array();
    CsvTable it{"inequality", {"alpha", "hypothesis", "verdict", "log_margin"}, {}};
    for (double a : bc.alphas) {
        const auto res = verify_premeasure_inequality(set, mu, nu, bc.delta, a, eps, K, bc.n0);
        Json j = to_json(res);
        j["alpha"] = a;
        j["eps"] = eps.describe();
        ineq.push_back(j);
        it.rows.push_back({cell(a), res.hypothesis.holds ? "holds" : "violated",
                           res.hypothesis.holds ? (res.verdict ? "true" : "false") : "",
                           res.hypothesis.holds ? cell(res.log_margin) : ""});
        if (!res.hypothesis.holds)
            r.failures.push_back("ratio hypothesis violated at rank " + std::to_string(res.hypothesis.witness_rank));
        else if (!res.verdict)
            r.failures.push_back("pre-measure inequality fails at alpha " + cell(a));
    }
    r.body["inequality"] = ineq;
    r.tables.push_back(it);

    std::vector<std::size_t> depths = cfg.query.depths;
    if (depths.empty() && selected)
        for (std::size_t k : *selected)
            if (k <= K) depths.push_back(k);
    if (depths.empty()) depths.push_back(K);
    DimensionBoundOptions dopt;
    dopt.tolerance = bc.tolerance;
    dopt.continuity_tolerance = bc.continuity_tolerance;
    dopt.n0 = bc.n0;
    dopt.exponent = cfg.query.exponent;
    const auto dim = dimension_bound_report(set, mu, nu, bc.delta, stages_for(cfg, base, depths), dopt);
    r.body["dimension_bound"] = to_json(dim);
    if (!dim.bound_holds) r.failures.push_back("nu estimate exceeds delta times the mu estimate");
    r.negative = !r.failures.empty();
    return r;
}

Report cmd_proptest(const ExperimentConfig& cfg, const CommandOverrides& o) {
    PropOptions opt;
    opt.cases = cfg.proptest.cases;
    opt.max_depth = o.depth.value_or(cfg.proptest.max_depth);
    opt.max_base = cfg.proptest.max_base;
    const std::uint64_t seed = o.seed.value_or(cfg.seed);
    const auto rep = run_property_suite(seed, opt);

    Report r;
    r.command = "proptest";
    Json checked = Json::object();
    for (const auto& [name, n] : rep.checked) checked[name] = n;
    Json failures = Json::array();
    for (const auto& f : rep.failures) {
        failures.push_back({{"invariant", f.invariant},
                            {"detail", f.detail},
                            {"case", f.case_index},
                            {"original", f.original.describe()},
                            {"minimized", f.minimized.describe()}});
        r.failures.push_back(f.invariant + ": " + f.detail + " [" + f.minimized.describe() + "]");
    }
    r.body = {{"seed", seed},
              {"cases", rep.cases},
              {"max_depth", opt.max_depth},
              {"max_base", opt.max_base},
              {"checked", checked},
              {"violations", failures}};
    CsvTable t{"invariants", {"invariant", "checks", "failures"}, {}};
    for (const auto& name : invariant_names()) {
        const auto n = std::count_if(rep.failures.begin(), rep.failures.end(),
                                     [&](const PropFailure& f) { return f.invariant == name; });
        t.rows.push_back({name, std::to_string(rep.checked.count(name) ? rep.checked.at(name) : 0),
                          std::to_string(n)});
    }
    r.tables.push_back(t);
    r.negative = !rep.failures.empty();
    return r;
}

Report run_command(const std::string& name, const ExperimentConfig& cfg, const CommandOverrides& o) {
    if (name == "faithful") return cmd_faithful(cfg, o);
    if (name == "dim") return cmd_dim(cfg, o);
    if (name == "tstar") return cmd_tstar(cfg, o);
    if (name == "billingsley") return cmd_billingsley(cfg, o);
    if (name == "proptest") return cmd_proptest(cfg, o);
    throw ConfigError("unknown command " + name);
}

int exit_code(const Report& r, const ExperimentConfig& cfg) {
    if (!r.negative) return 0;
    if (r.command == "proptest") return 1;
    return cfg.assert_verdict ? 1 : 0;
}

}  // namespace cantorpack
