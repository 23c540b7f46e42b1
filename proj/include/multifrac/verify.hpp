// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "multifrac/operators.hpp"

namespace multifrac {

/// Result of one named property check.
struct PropertyCheck {
    std::string name;
    std::string paper_anchor;  ///< stable identifier of the claim being tested
    double residual = 0.0;     ///< finite, >= 0; normalized per check
    double tolerance = 0.0;
    bool passed = false;
};

struct SuiteConfig {
    std::vector<std::string> check_globs{"*"};  ///< '*' wildcards on check names
    std::uint64_t seed = 12345;
    int base_n = 256;  ///< base grid size for the cheap algebraic checks
};

struct VerificationReport {
    std::vector<PropertyCheck> checks;
    SuiteConfig config;
    int passed_count() const;
    bool all_passed() const { return passed_count() == static_cast<int>(checks.size()); }
};

/// Pointwise Leibniz defect X = op(fg) - op(f) g - f op(g) for first-order-type
/// operators (QDeriv, WeightedFrac, ExplicitD, ImplicitLeft/Right, PlateauDiff).
GridFunction leibniz_defect(const OperatorSpec& op, const GridFunction& f,
                            const GridFunction& g);

/// Bilinear concomitant Y = f op^2(h) - op^2(f) h; its weighted integral
/// vanishes exactly when op^2 is self-adjoint under the measure pairing.
GridFunction bilinear_concomitant(const OperatorSpec& op, const GridFunction& f,
                                  const GridFunction& h);

/// Names and anchors of every check in the fixed catalog, in execution order.
std::vector<std::pair<std::string, std::string>> check_catalog();

/// Runs the catalog (filtered by config.check_globs). Checks execute
/// independently; the report order is the catalog order and the output is
/// deterministic for a fixed config.
VerificationReport run_suite(const SuiteConfig& config);

/// Plain-text table (no timestamps).
void write_report_text(const VerificationReport& report, std::ostream& os);

/// CSV: check_name,paper_anchor,residual,tolerance,passed.
void write_report_csv(const VerificationReport& report, std::ostream& os);

/// '*'-wildcard match helper shared with the CLI.
bool glob_match(const std::string& pattern, const std::string& text);

} // namespace multifrac
