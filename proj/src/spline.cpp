// SPDX-License-Identifier: Apache-2.0
#include "multifrac/spline.hpp"

#include <cmath>
#include <stdexcept>

namespace multifrac {

using cplx = std::complex<double>;

CubicSpline::CubicSpline(double x0, double h, std::vector<cplx> y)
    : x0_(x0), h_(h), y_(std::move(y)), m_(y_.size(), cplx(0.0)) {
    const std::size_t n = y_.size();
    if (n < 4) throw std::invalid_argument("cubic spline needs at least 4 knots");
    if (!(h > 0.0)) throw std::invalid_argument("cubic spline needs positive spacing");

    // Natural boundary: m_0 = m_{n-1} = 0. Thomas algorithm on the interior.
    const std::size_t k = n - 2;
    std::vector<double> diag(k, 4.0);
    std::vector<cplx> rhs(k);
    for (std::size_t i = 0; i < k; ++i)
        rhs[i] = 6.0 / (h * h) * (y_[i] - 2.0 * y_[i + 1] + y_[i + 2]);
    for (std::size_t i = 1; i < k; ++i) {
        const double w = 1.0 / diag[i - 1];
        diag[i] -= w;
        rhs[i] -= w * rhs[i - 1];
    }
    m_[k] = rhs[k - 1] / diag[k - 1];
    for (std::size_t i = k - 1; i-- > 0;)
        m_[i + 1] = (rhs[i] - m_[i + 2]) / diag[i];
}

cplx CubicSpline::operator()(double x) const {
    const std::size_t n = y_.size();
    const double t = (x - x0_) / h_;
    if (t < 0.0 || t > static_cast<double>(n - 1)) return cplx(0.0);
    std::size_t j = static_cast<std::size_t>(t);
    if (j >= n - 1) j = n - 2;
    const double dl = x - (x0_ + j * h_);   // distance from left knot
    const double dr = h_ - dl;              // distance to right knot
    const cplx mj = m_[j], mj1 = m_[j + 1];
    return (mj * dr * dr * dr + mj1 * dl * dl * dl) / (6.0 * h_) +
           (y_[j] / h_ - mj * h_ / 6.0) * dr + (y_[j + 1] / h_ - mj1 * h_ / 6.0) * dl;
}

} // namespace multifrac
