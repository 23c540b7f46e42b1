// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <vector>

#include "multifrac/errors.hpp"

namespace multifrac {

/// One scale of the measure hierarchy: an anomalous power-law term
///   (ell/alpha) * sgn(x) * |x/ell|^alpha * F(x)
/// with log-periodic modulation
///   F(x) = u0 + amp_cos*cos(omega*ln|x/ell_inf|) + amp_sin*sin(omega*ln|x/ell_inf|),
/// where u0 is 1 when keep_unit_offset is set and 0 otherwise.
struct MeasureTerm {
    double alpha = 1.0;   ///< scaling exponent, 0 < alpha <= 1
    double ell = 1.0;     ///< scale length, > 0
    double amp_cos = 0.0; ///< cosine modulation amplitude A
    double amp_sin = 0.0; ///< sine modulation amplitude B
    double omega = 0.0;   ///< log-frequency of the modulation
    double ell_inf = 1.0; ///< modulation reference scale, > 0
    bool keep_unit_offset = true;

    /// True when the modulation F actually oscillates.
    bool oscillatory() const {
        return omega != 0.0 && (amp_cos != 0.0 || amp_sin != 0.0);
    }

    void validate() const;
};

enum class ProfileMode {
    Full,     ///< sum every term, in the given order
    Binomial  ///< keep only the first (single-scale) term
};

/// Immutable geometric-coordinate profile q(x) = x + sum of MeasureTerms.
/// q is odd with q(0) = 0 for every parameter choice; evaluations are pure
/// and safe to call concurrently.
class MeasureProfile {
public:
    explicit MeasureProfile(std::vector<MeasureTerm> terms,
                            ProfileMode mode = ProfileMode::Full);

    const std::vector<MeasureTerm>& terms() const { return terms_; }
    ProfileMode mode() const { return mode_; }

    /// Terms that participate in evaluation (just the first in binomial mode).
    std::span<const MeasureTerm> active_terms() const;

    bool oscillatory() const;
    /// Smallest active alpha; controls the kernel singularity of 1/q(u).
    double min_alpha() const;
    /// True when every active term has alpha == 1 and no oscillation,
    /// i.e. q(x) is exactly linear and v is a constant.
    bool linear() const;

private:
    std::vector<MeasureTerm> terms_;
    ProfileMode mode_;
};

/// Measure weight selector: a profile, or flat (v == 1, q(x) == x).
using Weight = std::optional<MeasureProfile>;

/// Geometric coordinate q(x). Exact analytic evaluation; x = 0 returns 0.
double eval_q(const MeasureProfile& p, double x);

/// Weight v(x) = q'(x), in closed form (modulation derivative included).
/// Throws SingularPoint at x = 0 unless the profile is linear there.
double eval_weight(const MeasureProfile& p, double x);

/// v'(x) in closed form; same singularity contract as eval_weight.
double eval_weight_derivative(const MeasureProfile& p, double x);

/// Local scaling exponent x*v(x)/q(x); runs from alpha (|x| << ell) to 1
/// (|x| >> ell) for a non-oscillatory binomial profile.
double local_scaling_exponent(const MeasureProfile& p, double x);

/// eval_q/eval_weight honoring the flat case (q = x, v = 1).
double eval_q(const Weight& w, double x);
double eval_weight(const Weight& w, double x);

} // namespace multifrac
