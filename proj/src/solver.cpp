// SPDX-License-Identifier: Apache-2.0
#include "multifrac/solver.hpp"

#include <cmath>
#include <numbers>

#include "multifrac/fft.hpp"

namespace multifrac {

namespace {

constexpr double kPi = std::numbers::pi;

cplx antisym_multiplier(double k, double alpha) {
    if (k == 0.0) return 0.0;
    const double s = k > 0.0 ? 1.0 : -1.0;
    return cplx(0.0, std::sin(0.5 * kPi * alpha) * s * std::pow(std::abs(k), alpha));
}

double bar_multiplier(double k, double alpha) {
    if (k == 0.0) return 0.0;
    return std::cos(kPi * alpha) * std::pow(std::abs(k), 2.0 * alpha);
}

bool spectral_diagonal(const OperatorSpec& op) {
    using V = OperatorSpec::Variant;
    if (op.profile) return false;
    switch (op.variant) {
        case V::ImplicitLeft:
        case V::ImplicitRight:
        case V::ImplicitKinetic:
            return false;
        case V::Identity:
        case V::QDeriv:
        case V::QLaplacian:
            return true;  // flat weight: exact spectral derivative
        default:
            return op.backend.kind == FracBackend::Kind::Spectral;
    }
}

GridFunction residual_of(const OperatorSpec& op, const PotentialSpec& pot,
                         const GridFunction& phi) {
    GridFunction r = apply(op, phi);
    for (int j = 0; j < r.size(); ++j) {
        const cplx p = phi[j];
        r[j] -= pot.mass2 * p + pot.quartic * p * p * p;
        if (pot.source) r[j] += (*pot.source)[j];
    }
    return r;
}

} // namespace

cplx dispersion(const OperatorSpec& op, double k) {
    using V = OperatorSpec::Variant;
    if (!spectral_diagonal(op))
        throw NotDiagonalizable(
            "dispersion: operator is not diagonal on plane waves (needs a flat "
            "weight and a spectral backend; implicit variants excluded)");
    switch (op.variant) {
        case V::Identity:
            return 1.0;
        case V::QDeriv:
            return cplx(0.0, k);
        case V::QLaplacian:
            return -k * k;
        case V::WeightedFrac:
        case V::PlateauDiff:
            return antisym_multiplier(k, op.alpha);
        case V::ExplicitD: {
            cplx mu = 0.0;
            for (const auto& t : op.terms) mu += t.g * antisym_multiplier(k, t.alpha);
            return mu;
        }
        case V::ExplicitKinetic: {
            cplx mu = 0.0;
            for (const auto& t : op.terms) mu += t.g * antisym_multiplier(k, t.alpha);
            return mu * mu;
        }
        case V::BarKinetic: {
            cplx mu = 0.0;
            for (const auto& t : op.terms) mu += t.g * bar_multiplier(k, t.alpha);
            return mu;
        }
        default:
            throw NotDiagonalizable("dispersion: unsupported operator variant");
    }
}

SolveResult solve_linear(const OperatorSpec& op, const Domain& d,
                         const PotentialSpec& pot, LinearPath path) {
    if (pot.quartic != 0.0)
        throw ConfigError("solve_linear: potential must be quadratic (quartic = 0)");
    op.validate();
    if (pot.source && !(pot.source->domain() == d))
        throw DomainMismatch("solve_linear: source lives on a different domain");

    if (!pot.source) {
        SolveResult r{GridFunction::zeros(d), 0.0, 0, true};
        return r;
    }
    const GridFunction& j = *pot.source;

    const bool can_spectral = d.periodic && spectral_diagonal(op);
    bool use_spectral = false;
    switch (path) {
        case LinearPath::Auto:
            use_spectral = can_spectral;
            break;
        case LinearPath::Spectral:
            if (!can_spectral)
                throw NotDiagonalizable("solve_linear: spectral path unavailable");
            use_spectral = true;
            break;
        case LinearPath::Dense:
            use_spectral = false;
            break;
    }

    GridFunction phi = GridFunction::zeros(d);
    if (use_spectral) {
        std::vector<cplx> hat(d.n);
        fft::forward(j.values(), hat);
        double j_scale = 0.0;
        for (const auto& z : hat) j_scale = std::max(j_scale, std::abs(z));
        for (int m = 0; m < d.n; ++m) {
            const bool occupied = std::abs(hat[m]) > 1e-13 * j_scale;
            if (!occupied) {
                hat[m] = 0.0;
                continue;
            }
            const cplx gap = dispersion(op, d.wavenumber(m)) - pot.mass2;
            if (std::abs(gap) < 1e-12)
                throw ResonantMode("solve_linear: mode with |mu(k) - mass2| < 1e-12");
            hat[m] = -hat[m] / gap;
        }
        std::vector<cplx> vals(d.n);
        fft::inverse(hat, vals);
        phi = GridFunction(d, std::move(vals));
    } else {
        if (d.n > 2048) throw TooLarge("solve_linear: dense path is capped at n = 2048");
        const DenseOperator m = to_matrix(op, d);
        Eigen::MatrixXcd a = m.entries();
        for (int i = 0; i < d.n; ++i) a(i, i) -= pot.mass2;
        Eigen::Map<const Eigen::VectorXcd> rhs(j.values().data(), d.n);
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
        Eigen::VectorXcd x = lu.solve(-rhs);
        const double back = (a * x + rhs).cwiseAbs().maxCoeff();
        const double scale = rhs.cwiseAbs().maxCoeff();
        if (!(back <= 1e-6 * std::max(scale, 1e-300)))
            throw ResonantMode("solve_linear: dense system is numerically singular");
        phi = GridFunction(d, std::vector<cplx>(x.data(), x.data() + d.n));
    }

    SolveResult result{phi, max_abs(residual_of(op, pot, phi)), 1, true};
    return result;
}

SolveResult solve_nonlinear(const OperatorSpec& op, const PotentialSpec& pot,
                            const GridFunction& guess, double tol, int max_iter) {
    if (!(tol > 0.0)) throw ConfigError("solve_nonlinear: tol must be positive");
    if (max_iter < 1) throw ConfigError("solve_nonlinear: max_iter must be >= 1");
    const Domain& d = guess.domain();
    if (d.n > 1024)
        throw TooLarge("solve_nonlinear: dense Jacobian is capped at n = 1024");
    if (pot.source && !(pot.source->domain() == d))
        throw DomainMismatch("solve_nonlinear: source lives on a different domain");
    op.validate();

    const DenseOperator m = to_matrix(op, d);
    GridFunction phi = guess;
    GridFunction r = residual_of(op, pot, phi);
    double rnorm = max_abs(r);
    int iter = 0;
    while (rnorm > tol && iter < max_iter) {
        Eigen::MatrixXcd jac = m.entries();
        for (int i = 0; i < d.n; ++i)
            jac(i, i) -= pot.mass2 + 3.0 * pot.quartic * phi[i] * phi[i];
        Eigen::Map<const Eigen::VectorXcd> rv(r.values().data(), d.n);
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(jac);
        Eigen::VectorXcd delta = lu.solve(rv);
        const double back = (jac * delta - rv).cwiseAbs().maxCoeff();
        if (!(back <= 1e-6 * std::max(rnorm, 1e-300)))
            throw SingularJacobian("solve_nonlinear: Jacobian solve failed");
        for (int i = 0; i < d.n; ++i) phi[i] -= delta[i];
        ++iter;
        r = residual_of(op, pot, phi);
        rnorm = max_abs(r);
    }
    SolveResult result{phi, rnorm, iter, rnorm <= tol};
    return result;
}

} // namespace multifrac
