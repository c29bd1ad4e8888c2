#pragma once

// Shared JSON experiment configuration. Every parse failure is reported as a
// ConfigError carrying the JSON path of the offending value.

#include "cantorpack/base_sequence.hpp"
#include "cantorpack/digit_set.hpp"
#include "cantorpack/faithfulness.hpp"
#include "cantorpack/measure.hpp"
#include "cantorpack/packing.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cantorpack {

using Json = nlohmann::ordered_json;

struct QueryConfig {
    std::vector<Family> families{Family::CylindersOnly};
    std::vector<std::size_t> depths;  // K-schedule
    std::size_t eps_offset = 0;       // eps_K = |rank-(K - offset) cylinder|
    std::optional<Rational> eps;      // fixed eps instead of the rank-tied schedule
    std::size_t resolution_offset = 0;
    std::vector<double> alphas;       // optional alpha grid for value tables
    ExponentOptions exponent;
};

struct FaithfulConfig {
    std::size_t K = 64;
    RatioOptions ratios;
};

struct TstarConfig {
    std::optional<std::vector<std::size_t>> A;
    SparsityPolicy policy;
    std::size_t stages = 3;
    std::size_t prefix = 0;
    double tolerance = 0.08;
};

struct BillingsleyConfig {
    double delta = 1.0;
    std::vector<double> alphas{1.0};
    std::size_t K = 8;
    std::size_t n0 = 0;
    std::optional<std::vector<BigInt>> point;  // digits of x; default: least point of the set
    std::optional<std::vector<std::size_t>> selected;
    double tolerance = 0.05;
    double continuity_tolerance = 1e-2;
};

struct ProptestConfig {
    std::size_t cases = 200;
    std::size_t max_depth = 5;
    unsigned max_base = 4;
};

struct ExperimentConfig {
    Json raw;
    std::optional<BaseSequence> base;
    std::optional<Json> set_spec;
    std::optional<Json> mu_spec;
    std::optional<Json> nu_spec;
    QueryConfig query;
    FaithfulConfig faithful;
    TstarConfig tstar;
    BillingsleyConfig billingsley;
    ProptestConfig proptest;
    bool assert_verdict = false;  // exit 1 on a negative verdict
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    std::string format = "json";
};

ExperimentConfig parse_config(const Json& j);
ExperimentConfig load_config(const std::string& path);

BaseSequence parse_base(const Json& j, const std::string& path = "base");
DigitRule parse_rule(const Json& j, const std::string& path);
DigitLaw parse_law(const Json& j, const std::string& path);

// Builds the set described by the config (T* sets resolve their index set
// through the selection policy when A is omitted).
DigitRestrictedSet build_set(const ExperimentConfig& cfg);
// "lebesgue", "tstar_uniform" or "per_rank" measure over the config base.
DigitProductMeasure build_measure(const Json& spec, const DigitRestrictedSet& set, const std::string& path);

// Index set used for a T* config: explicit A or the selector's output.
std::vector<std::size_t> tstar_indices(const ExperimentConfig& cfg);

}  // namespace cantorpack
