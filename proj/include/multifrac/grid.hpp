// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "multifrac/errors.hpp"
#include "multifrac/measure.hpp"

namespace multifrac {

using cplx = std::complex<double>;

/// Uniform 1-d sampling lattice. Nodes are x_j = a + (j + offset)*h with
/// h = (b-a)/n; the default offset 0.5 keeps x = 0 off-grid on symmetric
/// domains, away from weight singularities.
struct Domain {
    double a = 0.0;
    double b = 1.0;
    int n = 8;
    bool periodic = false;
    double offset = 0.5;

    Domain() = default;
    Domain(double a_, double b_, int n_, bool periodic_, double offset_ = 0.5);

    double h() const { return (b - a) / n; }
    double length() const { return b - a; }
    double node(int j) const { return a + (j + offset) * h(); }
    std::vector<double> nodes() const;

    /// Signed physical wavenumber of DFT bin m: 2*pi*m'/L with m' in [-n/2, n/2).
    double wavenumber(int m) const;

    bool operator==(const Domain& o) const {
        return a == o.a && b == o.b && n == o.n && periodic == o.periodic &&
               offset == o.offset;
    }
};

/// Complex samples of a function on a Domain. Immutable domain, value
/// semantics; all free operations are pure.
class GridFunction {
public:
    GridFunction(Domain d, std::vector<cplx> values);
    static GridFunction zeros(const Domain& d);

    const Domain& domain() const { return domain_; }
    int size() const { return domain_.n; }
    const std::vector<cplx>& values() const { return values_; }
    std::vector<cplx>& values() { return values_; }
    cplx operator[](int j) const { return values_[j]; }
    cplx& operator[](int j) { return values_[j]; }

    GridFunction& operator+=(const GridFunction& o);
    GridFunction& operator-=(const GridFunction& o);
    GridFunction& operator*=(cplx s);

    friend GridFunction operator+(GridFunction f, const GridFunction& g) { return f += g; }
    friend GridFunction operator-(GridFunction f, const GridFunction& g) { return f -= g; }
    friend GridFunction operator*(cplx s, GridFunction f) { return f *= s; }

private:
    Domain domain_;
    std::vector<cplx> values_;
};

double max_abs(const GridFunction& f);
double max_abs_diff(const GridFunction& f, const GridFunction& g);
GridFunction pointwise_product(const GridFunction& f, const GridFunction& g);

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

struct PlaneWaveSpec { double k = 1.0; };
struct GaussianSpec { double center = 0.0; double sigma = 1.0; };
struct ConstantSpec { cplx value = 1.0; };
struct PolynomialSpec { std::vector<double> coeffs; };  // c0 + c1 x + ...
struct TableSpec { std::vector<cplx> values; };         // one entry per node

struct FunctionSpec {
    std::variant<PlaneWaveSpec, GaussianSpec, ConstantSpec, PolynomialSpec, TableSpec> spec;
    std::string describe() const;
};

GridFunction sample(const FunctionSpec& spec, const Domain& d);

// ---------------------------------------------------------------------------
// Weighted pairing and transforms
// ---------------------------------------------------------------------------

/// Discrete approximation of the measure pairing int dq conj(f) g =
/// h * sum_j v(x_j) conj(f_j) g_j, with a trapezoidal end-correction on
/// non-periodic grids (a no-op at the default offset 0.5).
cplx weighted_inner(const GridFunction& f, const GridFunction& g, const Weight& w);

/// Fourier coefficients c_m with f(x_j) = sum_m c_m exp(i k_m x_j) exactly;
/// periodic domains only.
std::vector<cplx> spectral_coefficients(const GridFunction& f);
GridFunction from_spectral_coefficients(const Domain& d, const std::vector<cplx>& coeffs);

/// Applies a Fourier multiplier mu(k) on a periodic grid.
GridFunction apply_multiplier(const GridFunction& f, const std::function<cplx(double)>& mu);

/// d^order/dx^order: exact spectral derivative (periodic) or repeated
/// 4th-order finite differences with one-sided edge stencils (non-periodic).
GridFunction ordinary_derivative(const GridFunction& f, int order = 1);

// ---------------------------------------------------------------------------
// Dense operators
// ---------------------------------------------------------------------------

/// Dense matrix of a grid operator; column j is the image of the j-th
/// coordinate basis function.
class DenseOperator {
public:
    DenseOperator(Domain d, Eigen::MatrixXcd entries);

    const Domain& domain() const { return domain_; }
    const Eigen::MatrixXcd& entries() const { return entries_; }
    GridFunction apply(const GridFunction& f) const;

private:
    Domain domain_;
    Eigen::MatrixXcd entries_;
};

/// Materializes a linear grid operator column by column. Dense assembly is
/// capped at n = 4096; larger grids stay matrix-free.
DenseOperator materialize(const std::function<GridFunction(const GridFunction&)>& op,
                          const Domain& d);

/// ||W M - M^H W||_max / ||W M||_max with W = diag(v(x_j)); zero iff M is
/// self-adjoint under the weighted pairing.
double adjoint_defect(const DenseOperator& m, const Weight& w);

// ---------------------------------------------------------------------------
// CSV export
// ---------------------------------------------------------------------------

/// Writes "# <spec>" then "x,re,im" rows.
void write_csv(const GridFunction& f, std::ostream& os, const std::string& spec_desc);

} // namespace multifrac
