#include "cantorpack/commands.hpp"
#include "cantorpack/errors.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

using namespace cantorpack;

namespace {

ExperimentConfig cfg_of(const char* text) { return parse_config(Json::parse(text)); }

std::string error_of(const char* text) {
    try {
        cfg_of(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

std::string strip_timestamp(const std::string& s) {
    static const std::regex ts("\"generated_at\": \"[^\"]*\"");
    return std::regex_replace(s, ts, "\"generated_at\": \"\"");
}

}  // namespace

TEST_CASE("bases") {
    CHECK(parse_base(Json::parse(R"({"kind": "constant", "s": 3})")).n(9) == 3);
    CHECK(parse_base(Json::parse(R"({"kind": "product_recursive", "seed": [2, 2]})")).n(5) == 256);
    CHECK(parse_base(Json::parse(R"({"kind": "list", "values": [2, "12345678901234567890123"]})")).n(2) ==
          BigInt("12345678901234567890123"));
    CHECK(parse_base(Json::parse(R"({"kind": "power", "b": 3})")).n(2) == 9);
}

TEST_CASE("malformed configs carry their JSON path") {
    CHECK(error_of(R"({"base": {"kind": "constant", "s": 1}})").find("$.base") == 0);
    CHECK(error_of(R"({"base": {"kind": "bogus"}})").find("$.base") == 0);
    CHECK(error_of(R"({"base": {"kind": "constant", "s": 2, "t": 1}})").find("$.base") == 0);
    CHECK(error_of(R"({"bases": 2})").find("$") == 0);
    CHECK(error_of(R"({"query": {"family": "balls"}})").find("$.query.family") == 0);
    CHECK(error_of(R"({"query": {"depths": [0, 2]}})").find("$.query.depths") == 0);
    CHECK(error_of(R"({"assert": "yes"})").find("$.assert") == 0);
    CHECK(error_of(R"({"output": {"format": "xml"}})").find("$.output.format") == 0);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("sets and measures from config") {
    const auto c = cfg_of(R"({
        "base": {"kind": "constant", "s": 4},
        "set": {"kind": "rules", "default": [{"explicit": [0]}, "all"], "exceptions": {"3": "sqrt_lattice"}},
        "measures": {"mu": {"kind": "per_rank", "default": {"probs": ["1/2", "1/4", "1/8", "1/8"]},
                             "exceptions": {"1": {"dirac": 0}}}}
    })");
    const auto s = build_set(c);
    CHECK(s.rule(1) == DigitRule::explicit_digits({0}));
    CHECK(s.rule(2) == DigitRule::all());
    CHECK(s.rule(3).kind == DigitRule::Kind::SqrtLattice);
    CHECK(s.rule(5) == DigitRule::explicit_digits({0}));
    const auto mu = build_measure(*c.mu_spec, s, "$.measures.mu");
    CHECK(mu.prob(1, 0) == 1);
    CHECK(mu.prob(2, 2) == Rational(1, 8));

    CHECK_THROWS_AS(build_set(cfg_of(R"({"base": {"kind": "constant", "s": 2},
        "set": {"kind": "rules", "default": {"explicit": [5]}}})")), ConfigError);
    CHECK_THROWS_AS(build_set(cfg_of(R"({"set": {"kind": "full"}})")), ConfigError);
}

TEST_CASE("tstar indices come from the selector unless given") {
    const auto c = cfg_of(R"({"base": {"kind": "product_recursive", "seed": [2, 2]}, "set": {"kind": "tstar"},
                              "tstar": {"prefix": 16}})");
    CHECK(tstar_indices(c) == std::vector<std::size_t>{4, 8, 16});
    const auto d = cfg_of(R"({"base": {"kind": "product_recursive", "seed": [2, 2]},
                              "set": {"kind": "tstar", "A": [5, 9]}})");
    CHECK(build_set(d).tstar_indices() == std::vector<std::size_t>{5, 9});
}

TEST_CASE("exit codes") {
    auto c = cfg_of(R"({"base": {"kind": "product_recursive", "seed": [2, 2]}, "faithful": {"K": 20}})");
    auto r = cmd_faithful(c);
    CHECK(r.negative);
    CHECK(exit_code(r, c) == 0);
    c.assert_verdict = true;
    CHECK(exit_code(r, c) == 1);

    c = cfg_of(R"({"base": {"kind": "constant", "s": 2}, "faithful": {"K": 64}, "assert": true})");
    r = cmd_faithful(c);
    CHECK_FALSE(r.negative);
    CHECK(exit_code(r, c) == 0);

    Report p;
    p.command = "proptest";
    p.negative = true;
    CHECK(exit_code(p, ExperimentConfig{}) == 1);
    CHECK_THROWS_AS(run_command("nope", c), ConfigError);
}

TEST_CASE("faithful report content") {
    const auto c = cfg_of(R"({"base": {"kind": "product_recursive", "seed": [2, 2]}, "faithful": {"K": 24}})");
    const auto r = cmd_faithful(c);
    const auto& f = r.body.at("faithfulness");
    CHECK(f.at("C_exact") == "1");
    CHECK(f.at("bounds").at("lower_exact") == "1/3");
    CHECK(f.at("bounds").at("family_upper_exact") == "1/4");
    const auto j = Json::parse(render_json(r, "2026-01-01T00:00:00Z"));
    CHECK(j.begin().key() == "generated_at");
    CHECK(j.at("command") == "faithful");
}

TEST_CASE("reports are deterministic apart from the timestamp") {
    const auto c = cfg_of(R"({
        "base": {"kind": "constant", "s": 2},
        "set": {"kind": "rules", "default": [{"explicit": [0]}, "all"]},
        "query": {"family": "both", "depths": [2, 4, 6], "alpha": [0.5]}
    })");
    const auto a = render_json(cmd_dim(c), "2026-01-01T00:00:00Z");
    const auto b = render_json(cmd_dim(c), utc_timestamp());
    CHECK(strip_timestamp(a) == strip_timestamp(b));

    const auto p1 = render_json(cmd_proptest(ExperimentConfig{}, {7, 3}), "x");
    const auto p2 = render_json(cmd_proptest(ExperimentConfig{}, {7, 3}), "y");
    CHECK(strip_timestamp(p1) == strip_timestamp(p2));
}

TEST_CASE("write_report files") {
    const auto dir = std::filesystem::temp_directory_path() / "cantorpack_test_config";
    std::filesystem::remove_all(dir);
    const auto c = cfg_of(R"({"base": {"kind": "constant", "s": 2}, "faithful": {"K": 8}})");
    const auto r = cmd_faithful(c);
    auto paths = write_report(r, dir.string(), "json");
    REQUIRE(paths.size() == 1);
    CHECK(std::filesystem::exists(dir / "faithful.json"));
    paths = write_report(r, dir.string(), "csv");
    REQUIRE(paths.size() == 1);
    std::ifstream in(dir / "faithful_ratios.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "k,ratio,exact,running_sup");
    std::filesystem::remove_all(dir);
}

TEST_CASE("depth override") {
    auto c = cfg_of(R"({"base": {"kind": "constant", "s": 3}, "query": {"depths": [2, 4, 6]}})");
    CommandOverrides o;
    o.depth = 4;
    const auto r = cmd_dim(c, o);
    CHECK(r.body.at("depths") == Json::parse("[2, 4]"));
    o.depth = 1;
    CHECK_THROWS_AS(cmd_dim(c, o), ConfigError);
}
