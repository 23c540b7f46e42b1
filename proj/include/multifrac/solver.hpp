// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "multifrac/operators.hpp"

namespace multifrac {

/// V(phi) = (mass2/2) phi^2 + (quartic/4) phi^4, plus an optional source J.
struct PotentialSpec {
    double mass2 = 0.0;
    double quartic = 0.0;
    std::optional<GridFunction> source;
};

struct SolveResult {
    GridFunction phi;
    double residual_norm = 0.0;  ///< max |K phi - mass2 phi - quartic phi^3 + J|
    int iterations = 0;
    bool converged = false;
};

/// Plane-wave eigenvalue mu(k) of the operator with flat weight. Implicit and
/// quadrature-backed variants are not diagonal on plane waves.
cplx dispersion(const OperatorSpec& op, double k);

enum class LinearPath {
    Auto,      ///< spectral when the operator is diagonal and the grid periodic
    Spectral,
    Dense,
};

/// Solves (K - mass2) phi = -J for quadratic potentials. The spectral path
/// divides mode coefficients by mu(k) - mass2; the dense path factorizes
/// to_matrix(K) - mass2*I (n <= 2048).
SolveResult solve_linear(const OperatorSpec& op, const Domain& d,
                         const PotentialSpec& pot, LinearPath path = LinearPath::Auto);

/// Newton iteration on R(phi) = K phi - mass2 phi - quartic phi^3 + J with the
/// dense Jacobian to_matrix(K) - diag(mass2 + 3 quartic phi^2); n <= 1024.
/// Non-convergence is reported through the flag, not an exception.
SolveResult solve_nonlinear(const OperatorSpec& op, const PotentialSpec& pot,
                            const GridFunction& guess, double tol, int max_iter);

} // namespace multifrac
