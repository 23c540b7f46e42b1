// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>

#include "multifrac/operators.hpp"
#include "multifrac/solver.hpp"
#include "multifrac/verify.hpp"

namespace multifrac {

/// Declarative run configuration: one file drives every CLI subcommand.
struct RunConfig {
    std::optional<MeasureProfile> profile;
    std::optional<Domain> domain;
    std::map<std::string, OperatorSpec> operators;  ///< profile references resolved
    SuiteConfig suite;

    struct SolveBlock {
        std::string operator_name;
        double mass2 = 0.0;
        double quartic = 0.0;
        std::optional<FunctionSpec> source;
        std::optional<FunctionSpec> guess;
        double tol = 1e-9;
        int max_iter = 25;
    };
    std::optional<SolveBlock> solve;

    std::string output_dir = "out";
};

/// Parses the JSON config file; throws ConfigError naming the offending key.
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

/// Inline function-spec syntax used by `deriv --function`, e.g.
/// "plane_wave k=1", "gaussian center=0 sigma=1", "constant re=1 im=0",
/// "polynomial coeffs=1,0,2".
FunctionSpec parse_function_spec(const std::string& text);

} // namespace multifrac
