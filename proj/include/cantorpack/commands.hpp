#pragma once

#include "cantorpack/config.hpp"
#include "cantorpack/report.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace cantorpack {

// Command-line overrides applied on top of the config.
struct CommandOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> depth;
};

Report cmd_faithful(const ExperimentConfig& cfg, const CommandOverrides& o = {});
Report cmd_dim(const ExperimentConfig& cfg, const CommandOverrides& o = {});
Report cmd_tstar(const ExperimentConfig& cfg, const CommandOverrides& o = {});
Report cmd_billingsley(const ExperimentConfig& cfg, const CommandOverrides& o = {});
Report cmd_proptest(const ExperimentConfig& cfg, const CommandOverrides& o = {});

// Dispatch by subcommand name; throws ConfigError for unknown names.
Report run_command(const std::string& name, const ExperimentConfig& cfg, const CommandOverrides& o = {});

// 0 success, 1 negative verdict when the config asserts (proptest: any failure).
int exit_code(const Report& r, const ExperimentConfig& cfg);

}  // namespace cantorpack
