// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <vector>

namespace multifrac {

/// Natural cubic spline on uniformly spaced knots; evaluates to zero outside
/// the knot range (integrands are assumed negligible beyond the domain).
class CubicSpline {
public:
    CubicSpline(double x0, double h, std::vector<std::complex<double>> y);

    std::complex<double> operator()(double x) const;

private:
    double x0_;
    double h_;
    std::vector<std::complex<double>> y_;
    std::vector<std::complex<double>> m_;  // second derivatives at knots
};

} // namespace multifrac
