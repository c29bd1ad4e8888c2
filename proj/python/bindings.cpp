// Thin pybind11 layer. Configs and reports cross the boundary as JSON text;
// the Python package turns them into dicts.

#include "cantorpack/commands.hpp"
#include "cantorpack/config.hpp"
#include "cantorpack/errors.hpp"
#include "cantorpack/faithfulness.hpp"
#include "cantorpack/report.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace cantorpack;

namespace {

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
}

ExperimentConfig config_from(const std::string& text) { return parse_config(parse_json(text)); }

CommandOverrides overrides(std::optional<std::uint64_t> seed, std::optional<std::size_t> depth) {
    CommandOverrides o;
    o.seed = seed;
    o.depth = depth;
    return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    auto base_error = py::register_exception<Error>(m, "CantorpackError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", base_error.ptr());
    py::register_exception<PreconditionError>(m, "PreconditionError", base_error.ptr());
    py::register_exception<ValidationError>(m, "ValidationError", base_error.ptr());

    m.def(
        "run",
        [](const std::string& command, const std::string& config, std::optional<std::uint64_t> seed,
           std::optional<std::size_t> depth, const std::string& timestamp) {
            const auto cfg = config_from(config);
            Report r;
            {
                py::gil_scoped_release nogil;
                r = run_command(command, cfg, overrides(seed, depth));
            }
            return py::make_tuple(render_json(r, timestamp.empty() ? utc_timestamp() : timestamp),
                                  exit_code(r, cfg));
        },
        py::arg("command"), py::arg("config"), py::arg("seed") = py::none(), py::arg("depth") = py::none(),
        py::arg("timestamp") = "");

    m.def(
        "check_config", [](const std::string& config) { config_from(config); }, py::arg("config"));

    m.def(
        "condition_ratios",
        [](const std::string& base, std::size_t K, double tolerance) {
            RatioOptions o;
            o.tolerance = tolerance;
            return to_json(condition_ratios(parse_base(parse_json(base), "$.base"), K, o)).dump();
        },
        py::arg("base"), py::arg("K"), py::arg("tolerance") = 0.05);

    m.def(
        "theoretical_bounds",
        [](double C) {
            const auto b = theoretical_bounds(C);
            return py::make_tuple(b.lower, b.upper_for_family);
        },
        py::arg("C"));

    m.def(
        "theoretical_bounds_exact",
        [](const std::string& C) {
            const auto b = theoretical_bounds_exact(parse_rational(C));
            return py::make_tuple(to_string(b.lower), to_string(b.upper_for_family));
        },
        py::arg("C"));
}
