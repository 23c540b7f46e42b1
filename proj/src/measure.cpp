// SPDX-License-Identifier: Apache-2.0
#include "multifrac/measure.hpp"

#include <cmath>
#include <limits>

namespace multifrac {

void MeasureTerm::validate() const {
    if (!(alpha > 0.0) || !(alpha <= 1.0))
        throw ConfigError("measure term: alpha must satisfy 0 < alpha <= 1");
    if (!(ell > 0.0))
        throw ConfigError("measure term: ell must be positive");
    if (!(ell_inf > 0.0))
        throw ConfigError("measure term: ell_inf must be positive");
    if (!std::isfinite(amp_cos) || !std::isfinite(amp_sin) || !std::isfinite(omega))
        throw ConfigError("measure term: amplitudes and omega must be finite");
}

MeasureProfile::MeasureProfile(std::vector<MeasureTerm> terms, ProfileMode mode)
    : terms_(std::move(terms)), mode_(mode) {
    if (terms_.empty())
        throw ConfigError("measure profile: needs at least one term");
    for (const auto& t : terms_) t.validate();
    if (mode_ == ProfileMode::Full && terms_.size() > 1) {
        for (std::size_t i = 1; i < terms_.size(); ++i) {
            if (!(terms_[i].ell < terms_[i - 1].ell))
                throw ConfigError("measure profile: ell values must be strictly decreasing");
        }
    }
}

std::span<const MeasureTerm> MeasureProfile::active_terms() const {
    if (mode_ == ProfileMode::Binomial)
        return {terms_.data(), 1};
    return {terms_.data(), terms_.size()};
}

bool MeasureProfile::oscillatory() const {
    for (const auto& t : active_terms())
        if (t.oscillatory()) return true;
    return false;
}

double MeasureProfile::min_alpha() const {
    double m = 1.0;
    for (const auto& t : active_terms()) m = std::min(m, t.alpha);
    return m;
}

bool MeasureProfile::linear() const {
    for (const auto& t : active_terms())
        if (t.alpha != 1.0 || t.oscillatory()) return false;
    return true;
}

namespace {

struct Modulation {
    double f;  // F(x)
    double g;  // -A sin(theta) + B cos(theta), so that dF/dx = omega*g/x
    double unit;
};

Modulation modulation_at(const MeasureTerm& t, double ax) {
    Modulation m;
    m.unit = t.keep_unit_offset ? 1.0 : 0.0;
    if (!t.oscillatory()) {
        // theta is constant (omega == 0) or the amplitudes vanish; either way
        // cos(theta)=1, sin(theta)=0 only when omega==0, so handle both cases.
        if (t.omega == 0.0) {
            m.f = m.unit + t.amp_cos;
            m.g = t.amp_sin;
        } else {
            m.f = m.unit;
            m.g = 0.0;
        }
        return m;
    }
    const double theta = t.omega * std::log(ax / t.ell_inf);
    const double c = std::cos(theta), s = std::sin(theta);
    m.f = m.unit + t.amp_cos * c + t.amp_sin * s;
    m.g = -t.amp_cos * s + t.amp_sin * c;
    return m;
}

void require_regular(const MeasureProfile& p, double x) {
    if (x == 0.0 && !p.linear())
        throw SingularPoint("measure weight is singular at x = 0");
}

} // namespace

double eval_q(const MeasureProfile& p, double x) {
    if (x == 0.0) return 0.0;  // sgn prefactor kills every term
    const double s = x > 0.0 ? 1.0 : -1.0;
    const double ax = std::abs(x);
    double q = x;
    for (const auto& t : p.active_terms()) {
        const Modulation m = modulation_at(t, ax);
        q += (t.ell / t.alpha) * s * std::pow(ax / t.ell, t.alpha) * m.f;
    }
    return q;
}

double eval_weight(const MeasureProfile& p, double x) {
    require_regular(p, x);
    const double ax = std::abs(x);
    double v = 1.0;
    for (const auto& t : p.active_terms()) {
        const Modulation m = modulation_at(t, ax);
        const double u = x == 0.0 ? 1.0 : std::pow(ax / t.ell, t.alpha - 1.0);
        v += u * (m.f + (t.omega / t.alpha) * m.g);
    }
    return v;
}

double eval_weight_derivative(const MeasureProfile& p, double x) {
    if (x == 0.0)
        throw SingularPoint("weight derivative is singular at x = 0");
    const double s = x > 0.0 ? 1.0 : -1.0;
    const double ax = std::abs(x);
    double dv = 0.0;
    for (const auto& t : p.active_terms()) {
        const Modulation m = modulation_at(t, ax);
        const double u = std::pow(ax / t.ell, t.alpha - 2.0);
        const double am = t.alpha - 1.0;
        const double osc = t.omega * m.g - (t.omega * t.omega / t.alpha) * (m.f - m.unit);
        dv += (s / t.ell) * u * (am * (m.f + (t.omega / t.alpha) * m.g) + osc);
    }
    return dv;
}

double local_scaling_exponent(const MeasureProfile& p, double x) {
    if (x == 0.0)
        throw SingularPoint("local scaling exponent undefined at x = 0");
    return x * eval_weight(p, x) / eval_q(p, x);
}

double eval_q(const Weight& w, double x) {
    return w ? eval_q(*w, x) : x;
}

double eval_weight(const Weight& w, double x) {
    return w ? eval_weight(*w, x) : 1.0;
}

} // namespace multifrac
