// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

#include "multifrac/grid.hpp"

namespace multifrac {

/// Fractional order alpha with its ceiling order m, m-1 <= alpha <= m.
/// alpha == m is the documented boundary case and is evaluated as the exact
/// integer-order derivative.
struct FracOrder {
    double alpha;
    int m;

    FracOrder(double alpha_, int m_);
    /// m deduced from alpha: orders up to 1 use m = 1, above use m = 2.
    static FracOrder of(double alpha_);

    bool integer() const { return alpha == static_cast<double>(m); }
};

/// Discretization backend for the fractional derivatives. The operators are
/// defined in the continuum; every backend below must agree on the principal
/// branch of (±ik)^alpha.
struct FracBackend {
    enum class Kind { Spectral, GrunwaldLetnikov, SingularQuadrature };

    Kind kind = Kind::Spectral;
    int gl_truncation = 4096;  ///< J: number of retained binomial-stencil terms
    int panels = 32;           ///< graded head panels near the kernel singularity
    double grading = 3.0;      ///< head mesh exponent

    static FracBackend spectral() { return {}; }
    static FracBackend grunwald_letnikov(int j = 4096) {
        FracBackend b;
        b.kind = Kind::GrunwaldLetnikov;
        b.gl_truncation = j;
        b.validate();
        return b;
    }
    static FracBackend singular_quadrature(int panels_ = 32, double grading_ = 3.0) {
        FracBackend b;
        b.kind = Kind::SingularQuadrature;
        b.panels = panels_;
        b.grading = grading_;
        b.validate();
        return b;
    }

    void validate() const;
};

/// Principal-branch Fourier symbols; the k = 0 mode maps to 0.
cplx liouville_multiplier(double k, double alpha);  // (ik)^alpha
cplx weyl_multiplier(double k, double alpha);       // (-ik)^alpha

/// Binomial-stencil weights w_j = (-1)^j C(alpha, j), j = 0..count-1.
std::vector<double> gl_weights(double alpha, int count);

/// Generalized binomial coefficient C(alpha, j), stable for any real alpha.
double binomial_coefficient(double alpha, int j);

/// Lower-limit -infinity fractional derivative (symbol (ik)^alpha).
GridFunction liouville(const GridFunction& f, FracOrder o, const FracBackend& b);

/// Upper-limit +infinity fractional derivative (symbol (-ik)^alpha).
GridFunction weyl(const GridFunction& f, FracOrder o, const FracBackend& b);

/// c*liouville + cbar*weyl. The default pair (1/2, -1/2) is the antisymmetric
/// combination, symbol i*sin(pi*alpha/2)*sgn(k)*|k|^alpha, which tends to the
/// ordinary derivative as alpha -> 1.
GridFunction combo(const GridFunction& f, FracOrder o, cplx c, cplx cbar,
                   const FracBackend& b);

/// Symmetric second-order-kernel operator (liouville + weyl at order 2*alpha,
/// m = 2): symbol 2*cos(pi*alpha)*|k|^(2*alpha). Requires 1/2 < alpha <= 1;
/// alpha == 1 is exactly twice the second derivative.
GridFunction symmetric_m2(const GridFunction& f, double alpha, const FracBackend& b);

/// (ik)^order multiplier for any real order; negative orders are the iterated
/// integrations appearing in the fractional Leibniz series. Periodic only.
GridFunction spectral_order_power(const GridFunction& f, double order);

namespace detail {

/// Kernel for graded singular convolutions: value K(u) for u > 0, the local
/// exponent p(u) = -d ln K / d ln u, and the limiting exponent at u -> 0
/// (must be < 1: integrable singularity). Crossover kernels such as 1/q(u)
/// are resolved down to the scale where p(u) reaches the limit before the
/// closing power-law extrapolation is trusted.
struct SingularKernel {
    std::function<double(double)> value;
    std::function<double(double)> local_exponent;
    double exponent_at_zero = 0.0;
};

/// Integrates K(u) * g(x_l -/+ u) du over u in (0, U_l] for every node, where
/// U_l is the distance to the grid edge in the probed direction and g is a
/// spline (zero outside its knots). direction +1 probes x - u (left/lower
/// limit), -1 probes x + u.
GridFunction singular_convolution(const Domain& d,
                                  const std::function<cplx(double)>& g,
                                  int direction, const SingularKernel& kernel,
                                  int head_panels, double grading,
                                  double tail_cap_in_h, int gauss_order);

} // namespace detail

} // namespace multifrac
