// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "multifrac/frac.hpp"
#include "multifrac/grid.hpp"

namespace multifrac {

/// One term g_n * D^(alpha_n) of an explicit multiscale sum.
struct ScaleTerm {
    double g = 1.0;
    double alpha = 1.0;
};

/// Quadrature controls for the implicit (1/q kernel) operators.
struct ImplicitQuadrature {
    int head_panels = 32;
    double grading = 3.0;
    double tail_cap_in_h = 16.0;
    double tolerance = 1e-5;       ///< refinement agreement, relative to max norm
    bool check_refinement = true;  ///< compare against a refined pass
};

/// Declarative description of every kinetic-operator candidate.
struct OperatorSpec {
    enum class Variant {
        Identity,
        QDeriv,
        QLaplacian,
        WeightedFrac,
        ExplicitD,
        ExplicitKinetic,
        BarKinetic,
        ImplicitLeft,
        ImplicitRight,
        ImplicitKinetic,
        PlateauDiff,
    };

    Variant variant = Variant::QDeriv;
    double alpha = 0.5;            ///< WeightedFrac / PlateauDiff order
    std::vector<ScaleTerm> terms;  ///< ExplicitD / ExplicitKinetic / BarKinetic
    Weight profile;                ///< nullopt = flat weight (v == 1)
    FracBackend backend;
    bool cross_consistency = true; ///< explicit term alphas must match the profile

    void validate() const;
};

GridFunction apply(const OperatorSpec& op, const GridFunction& f);

/// (1/v) d/dx: spectral derivative on periodic grids, 4th-order central
/// differences otherwise.
GridFunction q_derivative(const GridFunction& f, const Weight& w);

/// Two applications of q_derivative; the composition identity
/// (1/v^2) f'' - (v'/v^3) f' is a test, not the implementation.
GridFunction q_laplacian(const GridFunction& f, const Weight& w);

/// D^alpha = v^(-1/2) * antisymmetric-combination * (sqrt(v) . ), the building
/// block whose square K_alpha is self-adjoint under the weighted pairing.
GridFunction weighted_frac(const GridFunction& f, double alpha, const Weight& w,
                           const FracBackend& b);

/// Sum over scales g_n D^(alpha_n); alpha = 1 terms are the exact ordinary
/// derivative in the same sqrt(v) conjugation.
GridFunction explicit_multiscale(const GridFunction& f, std::span<const ScaleTerm> terms,
                                 const Weight& w, const FracBackend& b,
                                 bool cross_consistency = true);

/// Square of explicit_multiscale by double application.
GridFunction explicit_kinetic(const GridFunction& f, std::span<const ScaleTerm> terms,
                              const Weight& w, const FracBackend& b,
                              bool cross_consistency = true);

/// Non-quadratic alternative: sum of g_n * (1/2) * v^(-1/2) (symmetric m=2
/// operator at alpha_n) (sqrt(v) . ). Fractional terms need alpha in (1/2, 1);
/// alpha = 1 contributes the weighted second derivative.
GridFunction bar_kinetic(const GridFunction& f, std::span<const ScaleTerm> terms,
                         const Weight& w, const FracBackend& b);

/// Left/right multifractional q-derivatives with kernel 1/q(x - x');
/// the whole scale hierarchy lives inside the kernel. Oscillatory profiles
/// are rejected; the kernel singularity |u|^(-alpha_min) must be integrable.
GridFunction implicit_left(const GridFunction& f, const MeasureProfile& p,
                           const ImplicitQuadrature& quad = {});
GridFunction implicit_right(const GridFunction& f, const MeasureProfile& p,
                            const ImplicitQuadrature& quad = {});

/// v^(-1/2) [ (1/2)(left - right) ]^2 (sqrt(v) . ), by two quadrature passes.
GridFunction implicit_kinetic(const GridFunction& f, const MeasureProfile& p,
                              const ImplicitQuadrature& quad = {});

/// Plateau approximation of the multiscale differential: the antisymmetric
/// combination at a fixed order.
GridFunction plateau_differential(const GridFunction& f, double alpha,
                                  const FracBackend& b);

/// Dense matrix of any OperatorSpec (n <= 4096).
DenseOperator to_matrix(const OperatorSpec& op, const Domain& d);

// ---------------------------------------------------------------------------
// Structural expansion of explicit squares
// ---------------------------------------------------------------------------

/// One operator piece of an expanded square: an ordered composition of
/// one-sided fractional atoms (all weight factors ignored).
struct FracPiece {
    struct Atom {
        bool left;     ///< true: lower-limit (symbol (ik)^order); false: upper
        double order;
    };
    std::vector<Atom> chain;

    std::string key() const;
    cplx multiplier(double k) const;
};

/// Expands (sum_n g_n D^(alpha_n))^2 into distinct operator pieces with their
/// coefficients, merging semigroup-compatible factors. The two-term case
/// {(1,1), (g,alpha)} yields exactly seven pieces.
std::vector<std::pair<FracPiece, double>> expand_square_pieces(
    std::span<const ScaleTerm> terms);

} // namespace multifrac
