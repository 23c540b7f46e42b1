// SPDX-License-Identifier: Apache-2.0
#include "multifrac/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>

#include "multifrac/parallel.hpp"

namespace multifrac {

namespace {

constexpr double kPi = std::numbers::pi;

// Portable uniform doubles: mt19937_64 raw draws mapped explicitly, so the
// stream does not depend on the standard library's distribution details.
struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}
    double uniform() { return (eng() >> 11) * 0x1.0p-53; }
    double sym() { return 2.0 * uniform() - 1.0; }
    cplx zsym() { return {sym(), sym()}; }
};

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// Band-limited random periodic function: frequencies up to n/8 keep the
// discretization error of every spectral check far below its tolerance.
GridFunction random_band_limited(const Domain& d, Rng& rng) {
    std::vector<cplx> coeffs(d.n, cplx(0.0));
    const int band = d.n / 8;
    for (int m = 0; m <= band; ++m) {
        const double decay = 1.0 / (1.0 + 0.3 * m * m);
        coeffs[m] = decay * rng.zsym();
        if (m > 0) coeffs[d.n - m] = decay * rng.zsym();
    }
    return from_spectral_coefficients(d, coeffs);
}

double rel_diff(const GridFunction& got, const GridFunction& want) {
    const double scale = max_abs(want);
    return max_abs_diff(got, want) / (scale > 0.0 ? scale : 1.0);
}

MeasureProfile binomial_profile(double alpha, double ell = 1.0) {
    MeasureTerm t;
    t.alpha = alpha;
    t.ell = ell;
    return MeasureProfile({t}, ProfileMode::Binomial);
}

MeasureProfile oscillatory_profile(double alpha, double amp, double omega) {
    MeasureTerm t;
    t.alpha = alpha;
    t.amp_cos = amp;
    t.omega = omega;
    return MeasureProfile({t}, ProfileMode::Binomial);
}

GridFunction apply_k_alpha(const GridFunction& f, double alpha, const Weight& w,
                           const FracBackend& b) {
    return weighted_frac(weighted_frac(f, alpha, w, b), alpha, w, b);
}

cplx fitted_constant(const GridFunction& target, const GridFunction& reference) {
    cplx num = 0.0;
    double den = 0.0;
    for (int j = 0; j < target.size(); ++j) {
        num += std::conj(reference[j]) * target[j];
        den += std::norm(reference[j]);
    }
    return den > 0.0 ? num / den : cplx(0.0);
}

double fit_residual(const GridFunction& target, const GridFunction& reference,
                    cplx* fitted = nullptr) {
    const cplx c = fitted_constant(target, reference);
    if (fitted) *fitted = c;
    double num = 0.0, den = 0.0;
    for (int j = 0; j < target.size(); ++j) {
        num = std::max(num, std::abs(target[j] - c * reference[j]));
        den = std::max(den, std::abs(c * reference[j]));
    }
    return den > 0.0 ? num / den : num;
}

cplx antisym_multiplier(double k, double alpha) {
    if (k == 0.0) return 0.0;
    const double s = k > 0.0 ? 1.0 : -1.0;
    return cplx(0.0, std::sin(0.5 * kPi * alpha) * s * std::pow(std::abs(k), alpha));
}

struct CheckContext {
    SuiteConfig cfg;
    Rng rng;
};

using CheckFn = double (*)(CheckContext&);

struct CheckDef {
    const char* name;
    const char* anchor;
    double tolerance;
    CheckFn fn;
};

// ---------------------------------------------------------------------------
// Measure checks
// ---------------------------------------------------------------------------

double check_measure_oddness(CheckContext& ctx) {
    const MeasureProfile p = oscillatory_profile(0.5, 0.1, 2.0);
    double res = 0.0, scale = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double x = std::pow(10.0, -4.0 + 8.0 * ctx.rng.uniform());
        const double qp = eval_q(p, x), qm = eval_q(p, -x);
        res = std::max(res, std::abs(qp + qm));
        scale = std::max(scale, std::abs(qp));
    }
    return res / scale;
}

double check_measure_weight_consistency(CheckContext& ctx) {
    const MeasureProfile p = oscillatory_profile(0.5, 0.1, 2.0);
    const double h = 1e-6;
    double res = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double x = 0.1 + 4.9 * ctx.rng.uniform();
        const double fd = (eval_q(p, x + h) - eval_q(p, x - h)) / (2.0 * h);
        res = std::max(res, std::abs(eval_weight(p, x) - fd) / std::abs(fd));
    }
    return res;
}

double check_measure_monotone_flow(CheckContext&) {
    const MeasureProfile p = binomial_profile(0.5);
    double prev = 0.0, res = 0.0;
    const int count = 240;
    for (int i = 0; i <= count; ++i) {
        const double x = std::pow(10.0, -6.0 + 12.0 * i / count);
        const double a = local_scaling_exponent(p, x);
        if (i == 0) res = std::max(res, std::abs(a - 0.5));
        if (i == count) res = std::max(res, std::abs(a - 1.0));
        if (i > 0) res = std::max(res, prev - a);  // must be non-decreasing
        if (a < 0.5 - 1e-12 || a > 1.0 + 1e-12) res = std::max(res, 1.0);
        prev = a;
    }
    return res;
}

double check_measure_binomial_reduction(CheckContext& ctx) {
    MeasureTerm t1;
    t1.alpha = 0.5;
    t1.ell = 1.0;
    t1.amp_cos = 0.1;
    t1.omega = 2.0;
    MeasureTerm t2;
    t2.alpha = 0.3;
    t2.ell = 0.01;
    const MeasureProfile multi({t1, t2}, ProfileMode::Binomial);
    const MeasureProfile single({t1}, ProfileMode::Full);
    double res = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double x = -10.0 + 20.0 * ctx.rng.uniform();
        res = std::max(res, std::abs(eval_q(multi, x) - eval_q(single, x)));
        if (x != 0.0)
            res = std::max(res, std::abs(eval_weight(multi, x) - eval_weight(single, x)));
    }
    return res;
}

// ---------------------------------------------------------------------------
// Grid checks
// ---------------------------------------------------------------------------

double check_transform_roundtrip(CheckContext& ctx) {
    const Domain d(-kPi, kPi, ctx.cfg.base_n, true);
    const GridFunction f = random_band_limited(d, ctx.rng);
    const GridFunction back = from_spectral_coefficients(d, spectral_coefficients(f));
    return rel_diff(back, f);
}

double check_inner_conjugate_symmetry(CheckContext& ctx) {
    const Domain d(-kPi, kPi, ctx.cfg.base_n, true);
    const GridFunction f = random_band_limited(d, ctx.rng);
    const GridFunction g = random_band_limited(d, ctx.rng);
    const Weight w(binomial_profile(0.5));
    const cplx fg = weighted_inner(f, g, w);
    const cplx gf = weighted_inner(g, f, w);
    const double scale = std::sqrt(std::abs(weighted_inner(f, f, w)) *
                                   std::abs(weighted_inner(g, g, w)));
    return std::abs(fg - std::conj(gf)) / (scale > 0.0 ? scale : 1.0);
}

double check_matrix_consistency(CheckContext& ctx) {
    const Domain d(-kPi, kPi, 64, true);
    OperatorSpec op;
    op.variant = OperatorSpec::Variant::PlateauDiff;
    op.alpha = 0.5;
    const DenseOperator m = to_matrix(op, d);
    double res = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<cplx> vals(d.n);
        for (auto& z : vals) z = ctx.rng.zsym();
        const GridFunction v(d, vals);
        const GridFunction direct = apply(op, v);
        res = std::max(res, rel_diff(m.apply(v), direct));
    }
    return res;
}

// ---------------------------------------------------------------------------
// Fractional-derivative checks
// ---------------------------------------------------------------------------

double check_one_sided_symbol(CheckContext& ctx, bool left) {
    const Domain d(-kPi, kPi, ctx.cfg.base_n, true);
    const FracBackend b = FracBackend::spectral();
    double res = 0.0;
    for (double k : {1.0, 2.0, 4.0}) {
        const GridFunction f = sample({PlaneWaveSpec{k}}, d);
        for (double alpha : {0.3, 0.5, 0.9}) {
            const FracOrder o = FracOrder::of(alpha);
            const GridFunction got = left ? liouville(f, o, b) : weyl(f, o, b);
            const cplx mu = left ? liouville_multiplier(k, alpha)
                                 : weyl_multiplier(k, alpha);
            GridFunction want = f;
            want *= mu;
            res = std::max(res, rel_diff(got, want));
        }
    }
    return res;
}

double check_liouville_symbol(CheckContext& ctx) { return check_one_sided_symbol(ctx, true); }
double check_weyl_symbol(CheckContext& ctx) { return check_one_sided_symbol(ctx, false); }

double check_frac_linearity(CheckContext& ctx) {
    double res = 0.0;
    const cplx a = ctx.rng.zsym(), b = ctx.rng.zsym();
    {
        const Domain d(-kPi, kPi, ctx.cfg.base_n, true);
        const GridFunction f = random_band_limited(d, ctx.rng);
        const GridFunction g = random_band_limited(d, ctx.rng);
        for (const FracBackend& bk :
             {FracBackend::spectral(), FracBackend::grunwald_letnikov(256)}) {
            const FracOrder o = FracOrder::of(0.5);
            GridFunction lhs = a * f + b * g;
            lhs = liouville(lhs, o, bk);
            GridFunction rhs = a * liouville(f, o, bk) + b * liouville(g, o, bk);
            res = std::max(res, rel_diff(lhs, rhs));
        }
    }
    {
        const Domain d(-10.0, 10.0, ctx.cfg.base_n, false);
        const GridFunction f = sample({GaussianSpec{-1.0, 1.0}}, d);
        const GridFunction g = sample({GaussianSpec{1.5, 0.8}}, d);
        const FracBackend bk = FracBackend::singular_quadrature();
        const FracOrder o = FracOrder::of(0.5);
        GridFunction lhs = a * f + b * g;
        lhs = weyl(lhs, o, bk);
        GridFunction rhs = a * weyl(f, o, bk) + b * weyl(g, o, bk);
        res = std::max(res, rel_diff(lhs, rhs));
    }
    return res;
}

double check_kernel_triviality_spectral(CheckContext& ctx) {
    const Domain d(-kPi, kPi, ctx.cfg.base_n, true);
    const GridFunction one = sample({ConstantSpec{1.0}}, d);
    const FracBackend b = FracBackend::spectral();
    double res = 0.0;
    for (double alpha : {0.3, 0.5, 0.9}) {
        res = std::max(res, max_abs(liouville(one, FracOrder::of(alpha), b)));
        res = std::max(res, max_abs(weyl(one, FracOrder::of(alpha), b)));
    }
    res = std::max(res, max_abs(symmetric_m2(one, 0.75, b)));
    return res;
}

double check_kernel_triviality_gl(CheckContext& ctx) {
    const Domain d(-kPi, kPi, ctx.cfg.base_n, true);
    const GridFunction one = sample({ConstantSpec{1.0}}, d);
    const double alpha = 0.5;
    auto residual_at = [&](int j) {
        return max_abs(liouville(one, FracOrder::of(alpha),
                                 FracBackend::grunwald_letnikov(j)));
    };
    const double c = residual_at(64) * std::pow(64.0, alpha);
    double res = 0.0;
    for (int j : {256, 1024}) {
        const double bound = 2.0 * c * std::pow(double(j), -alpha);
        res = std::max(res, residual_at(j) / bound);
    }
    return res;
}

double check_semigroup(CheckContext& ctx) {
    const Domain d(-kPi, kPi, ctx.cfg.base_n, true);
    const GridFunction f = random_band_limited(d, ctx.rng);
    const FracBackend b = FracBackend::spectral();
    double res = 0.0;
    const std::pair<double, double> orders[] = {{0.3, 0.4}, {0.5, 0.5}, {0.7, 0.6}};
    for (auto [al, be] : orders) {
        GridFunction lhs = liouville(liouville(f, FracOrder::of(al), b), FracOrder::of(be), b);
        GridFunction rhs = liouville(f, FracOrder::of(al + be), b);
        res = std::max(res, rel_diff(lhs, rhs));
        lhs = weyl(weyl(f, FracOrder::of(al), b), FracOrder::of(be), b);
        rhs = weyl(f, FracOrder::of(al + be), b);
        res = std::max(res, rel_diff(lhs, rhs));
    }
    return res;
}

double check_duality(CheckContext&) {
    const Domain d(-20.0, 20.0, 1024, false);
    const GridFunction f = sample({GaussianSpec{-2.0, 1.5}}, d);
    const GridFunction g = sample({GaussianSpec{2.0, 1.2}}, d);
    const FracBackend b = FracBackend::grunwald_letnikov(1024);
    const FracOrder o = FracOrder::of(0.5);
    const cplx lhs = weighted_inner(f, liouville(g, o, b), std::nullopt);
    const cplx rhs = weighted_inner(weyl(f, o, b), g, std::nullopt);
    return std::abs(lhs - rhs) / std::abs(lhs);
}

double check_antisymmetric_matrix(CheckContext&) {
    const Domain d(-kPi, kPi, 128, true);
    OperatorSpec op;
    op.variant = OperatorSpec::Variant::PlateauDiff;
    op.alpha = 0.5;
    const DenseOperator m = to_matrix(op, d);
    const Eigen::MatrixXcd sym = m.entries() + m.entries().adjoint();
    return sym.cwiseAbs().maxCoeff() / m.entries().cwiseAbs().maxCoeff();
}

double check_leibniz_series(CheckContext&) {
    const Domain d(-4.0 * kPi, 4.0 * kPi, 256, true);
    const double kappa = 0.25, k = 1.0, alpha = 0.5;
    const GridFunction f = sample({PlaneWaveSpec{kappa}}, d);
    const GridFunction g = sample({PlaneWaveSpec{k}}, d);
    const GridFunction target =
        liouville(pointwise_product(f, g), FracOrder::of(alpha), FracBackend::spectral());
    const double scale = max_abs(target);

    GridFunction series = GridFunction::zeros(d);
    std::vector<double> resid;
    for (int j = 0; j <= 40; ++j) {
        const GridFunction dj_f = spectral_order_power(f, double(j));
        const GridFunction ig = spectral_order_power(g, alpha - j);
        GridFunction term = pointwise_product(dj_f, ig);
        term *= binomial_coefficient(alpha, j);
        series += term;
        resid.push_back(max_abs_diff(series, target) / scale);
    }
    double res = resid.back();
    for (std::size_t j = 2; j + 1 < resid.size(); ++j)
        if (resid[j + 1] > resid[j] + 1e-13) res = std::max(res, 1.0);
    return res;
}

// ---------------------------------------------------------------------------
// q-derivative checks
// ---------------------------------------------------------------------------

double check_qderiv_linearity(CheckContext& ctx) {
    const Domain d(-kPi, kPi, ctx.cfg.base_n, true);
    const Weight w(binomial_profile(0.5));
    const GridFunction f = random_band_limited(d, ctx.rng);
    const GridFunction g = random_band_limited(d, ctx.rng);
    const cplx a = ctx.rng.zsym(), b = ctx.rng.zsym();
    GridFunction lhs = a * f + b * g;
    lhs = q_derivative(lhs, w);
    const GridFunction rhs = a * q_derivative(f, w) + b * q_derivative(g, w);
    return rel_diff(lhs, rhs);
}

double check_qderiv_trivial_kernel(CheckContext& ctx) {
    const Domain d(-kPi, kPi, ctx.cfg.base_n, true);
    const Weight w(binomial_profile(0.5));
    return max_abs(q_derivative(sample({ConstantSpec{2.5}}, d), w));
}

double check_qderiv_derivative_of_q(CheckContext&) {
    const Domain d(0.5, 4.5, 1024, false);
    const MeasureProfile p = binomial_profile(0.5);
    std::vector<cplx> qv(d.n);
    for (int j = 0; j < d.n; ++j) qv[j] = eval_q(p, d.node(j));
    const GridFunction qf(d, std::move(qv));
    const GridFunction res = q_derivative(qf, Weight(p));
    double r = 0.0;
    for (int j = 3; j < d.n - 3; ++j) r = std::max(r, std::abs(res[j] - 1.0));
    return r;
}

double check_qderiv_leibniz(CheckContext& ctx) {
    const Domain d(-kPi, kPi, ctx.cfg.base_n, true);
    const GridFunction f = random_band_limited(d, ctx.rng);
    const GridFunction g = random_band_limited(d, ctx.rng);
    OperatorSpec op;
    op.variant = OperatorSpec::Variant::QDeriv;
    op.profile = binomial_profile(0.5);
    const GridFunction x = leibniz_defect(op, f, g);
    const double scale = max_abs(q_derivative(pointwise_product(f, g), op.profile));
    return max_abs(x) / scale;
}

double check_qderiv_integration_by_parts(CheckContext& ctx) {
    const Domain d(-kPi, kPi, ctx.cfg.base_n, true);
    const Weight w(binomial_profile(0.5));
    const GridFunction f = random_band_limited(d, ctx.rng);
    const GridFunction g = random_band_limited(d, ctx.rng);
    const cplx lhs = weighted_inner(f, q_derivative(g, w), w);
    const cplx rhs = weighted_inner(q_derivative(f, w), g, w);
    return std::abs(lhs + rhs) / std::abs(lhs);
}

double check_qderiv_composition(CheckContext&) {
    const Domain d(0.5, 4.5, 2048, false);
    const MeasureProfile p = binomial_profile(0.5);
    std::vector<cplx> fv(d.n);
    for (int j = 0; j < d.n; ++j) {
        const double x = d.node(j);
        fv[j] = std::sin(2.0 * x) + 0.3 * std::cos(3.0 * x);
    }
    const GridFunction f(d, std::move(fv));
    const GridFunction lhs = q_laplacian(f, Weight(p));

    const GridFunction f1 = ordinary_derivative(f, 1);
    const GridFunction f2 = ordinary_derivative(f1, 1);
    std::vector<cplx> rhs(d.n);
    for (int j = 0; j < d.n; ++j) {
        const double x = d.node(j);
        const double v = eval_weight(p, x);
        const double dv = eval_weight_derivative(p, x);
        rhs[j] = f2[j] / (v * v) - dv / (v * v * v) * f1[j];
    }
    return rel_diff(lhs, GridFunction(d, std::move(rhs)));
}

// ---------------------------------------------------------------------------
// Weighted / explicit operators
// ---------------------------------------------------------------------------

double check_kalpha_self_adjoint(CheckContext&) {
    const Domain d(-kPi, kPi, 256, true);
    const FracBackend b = FracBackend::spectral();
    double res = 0.0;
    const Weight profiles[] = {std::nullopt, Weight(binomial_profile(0.5)),
                               Weight(oscillatory_profile(0.5, 0.05, 2.0))};
    for (const Weight& w : profiles) {
        const DenseOperator m = materialize(
            [&](const GridFunction& f) { return apply_k_alpha(f, 0.5, w, b); }, d);
        res = std::max(res, adjoint_defect(m, w));
    }
    return res;
}

double check_explicit_self_adjoint(CheckContext&) {
    const Domain d(-kPi, kPi, 256, true);
    OperatorSpec op;
    op.variant = OperatorSpec::Variant::ExplicitKinetic;
    op.terms = {{1.0, 1.0}, {0.3, 0.5}};
    op.profile = binomial_profile(0.5);
    return adjoint_defect(to_matrix(op, d), op.profile);
}

double check_explicit_multiplier(CheckContext&) {
    const Domain d(-kPi, kPi, 256, true);
    const double g = 0.3, alpha = 0.5;
    OperatorSpec op;
    op.variant = OperatorSpec::Variant::ExplicitD;
    op.terms = {{1.0, 1.0}, {g, alpha}};
    double res = 0.0;
    for (double k : {1.0, 2.0, 3.0, 4.0, -2.0}) {
        const GridFunction f = sample({PlaneWaveSpec{k}}, d);
        GridFunction want = f;
        want *= cplx(0.0, k) + g * antisym_multiplier(k, alpha);
        res = std::max(res, rel_diff(apply(op, f), want));
    }
    return res;
}

double check_explicit_square_multiplier(CheckContext&) {
    const Domain d(-kPi, kPi, 256, true);
    const double g = 0.3, alpha = 0.5;
    OperatorSpec op;
    op.variant = OperatorSpec::Variant::ExplicitKinetic;
    op.terms = {{1.0, 1.0}, {g, alpha}};
    double res = 0.0;
    for (double k : {1.0, 2.0, 3.0, 4.0, -2.0}) {
        const GridFunction f = sample({PlaneWaveSpec{k}}, d);
        const cplx mu = cplx(0.0, k) + g * antisym_multiplier(k, alpha);
        GridFunction want = f;
        want *= mu * mu;
        res = std::max(res, rel_diff(apply(op, f), want));
    }
    return res;
}

double check_explicit_seven_pieces(CheckContext&) {
    const double g = 0.3, alpha = 0.5;
    const std::vector<ScaleTerm> terms = {{1.0, 1.0}, {g, alpha}};
    const auto pieces = expand_square_pieces(terms);
    double res = std::abs(double(pieces.size()) - 7.0);
    for (double k : {1.0, -1.0, 2.7}) {
        cplx total = 0.0;
        for (const auto& [piece, coeff] : pieces) total += coeff * piece.multiplier(k);
        const cplx mu = cplx(0.0, k) + g * antisym_multiplier(k, alpha);
        res = std::max(res, std::abs(total - mu * mu));
    }
    return res;
}

double check_barkinetic_multiplier(CheckContext&) {
    const Domain d(-kPi, kPi, 256, true);
    double res = 0.0;
    {
        OperatorSpec op;
        op.variant = OperatorSpec::Variant::BarKinetic;
        op.terms = {{1.0, 0.75}};
        const GridFunction f = sample({PlaneWaveSpec{1.0}}, d);
        GridFunction want = f;
        want *= std::cos(0.75 * kPi);
        res = std::max(res, rel_diff(apply(op, f), want));
    }
    {
        OperatorSpec op;
        op.variant = OperatorSpec::Variant::BarKinetic;
        op.terms = {{1.0, 1.0}, {0.4, 0.75}};
        const double k = 2.0;
        const GridFunction f = sample({PlaneWaveSpec{k}}, d);
        GridFunction want = f;
        want *= -k * k + 0.4 * std::cos(0.75 * kPi) * std::pow(std::abs(k), 1.5);
        res = std::max(res, rel_diff(apply(op, f), want));
    }
    return res;
}

double check_barkinetic_nonquadratic(CheckContext&) {
    const Domain d(-kPi, kPi, 256, true);
    const double alpha = 0.75;
    const GridFunction f = sample({PlaneWaveSpec{1.0}}, d);
    OperatorSpec bar;
    bar.variant = OperatorSpec::Variant::BarKinetic;
    bar.terms = {{1.0, alpha}};
    const GridFunction b = apply(bar, f);
    const GridFunction s =
        weighted_frac(weighted_frac(f, alpha, std::nullopt, FracBackend::spectral()),
                      alpha, std::nullopt, FracBackend::spectral());
    const double gap = max_abs_diff(b, s);
    return std::max(0.0, 0.1 - gap);
}

double check_annihilate_constants(CheckContext&) {
    const Domain d(-kPi, kPi, 256, true);
    const GridFunction one = sample({ConstantSpec{1.0}}, d);
    const Weight w(binomial_profile(0.5));
    double res = 0.0;
    res = std::max(res, max_abs(q_derivative(one, w)));
    res = std::max(res, max_abs(q_laplacian(one, w)));
    res = std::max(res, max_abs(weighted_frac(one, 0.5, w, FracBackend::spectral())));
    res = std::max(res, max_abs(explicit_multiscale(one, std::vector<ScaleTerm>{{1.0, 1.0}, {0.3, 0.5}},
                                                    w, FracBackend::spectral())));
    res = std::max(res, max_abs(bar_kinetic(one, std::vector<ScaleTerm>{{1.0, 0.75}}, w,
                                            FracBackend::spectral())));
    res = std::max(res, max_abs(plateau_differential(one, 0.5, FracBackend::spectral())));

    const Domain dn(-8.0, 8.0, 256, false);
    const GridFunction onen = sample({ConstantSpec{1.0}}, dn);
    const MeasureProfile p = binomial_profile(0.5);
    res = std::max(res, max_abs(implicit_left(onen, p)));
    res = std::max(res, max_abs(implicit_right(onen, p)));
    return res;
}

// ---------------------------------------------------------------------------
// Implicit operators
// ---------------------------------------------------------------------------

double check_implicit_small_scale(CheckContext&) {
    const double alpha = 0.4, sigma = 1e-3;
    const Domain d(0.002, 0.034, 512, false);
    const MeasureProfile p = binomial_profile(alpha, 1.0);
    const GridFunction f = sample({GaussianSpec{0.018, sigma}}, d);
    const GridFunction impl = implicit_left(f, p);
    GridFunction ref =
        liouville(f, FracOrder::of(alpha), FracBackend::singular_quadrature());
    ref *= alpha * std::tgamma(1.0 - alpha);  // ell = 1
    return rel_diff(impl, ref);
}

double check_implicit_kinetic_small_scale(CheckContext&) {
    const double alpha = 0.4;
    const Domain d(0.002, 0.034, 512, false);
    const MeasureProfile p = binomial_profile(alpha, 1.0);
    const GridFunction f = sample({GaussianSpec{0.018, 1e-3}}, d);
    const GridFunction impl = implicit_kinetic(f, p);
    GridFunction ref = apply_k_alpha(f, alpha, Weight(p), FracBackend::singular_quadrature());
    const double c = alpha * std::tgamma(1.0 - alpha);
    ref *= c * c;
    const double res = rel_diff(impl, ref);
    return res / 0.03;  // normalized: pass below 3 percent
}

double check_implicit_large_scale_trend(CheckContext&) {
    const Domain d(-16.0, 16.0, 1024, false);
    const GridFunction f = sample({GaussianSpec{0.0, 1.0}}, d);
    const GridFunction df = ordinary_derivative(f, 1);
    std::vector<double> eps;
    for (double ell : {1e-2, 1e-6, 1e-18}) {
        const MeasureProfile p = binomial_profile(0.5, ell);
        eps.push_back(fit_residual(implicit_left(f, p), df));
    }
    double res = eps.back();
    if (!(eps[0] > eps[1] && eps[1] > eps[2])) res = std::max(res, 1.0);
    return res;
}

double check_implicit_alpha_to_one(CheckContext&) {
    const Domain d(-24.0, 24.0, 1024, false);
    const GridFunction f = sample({GaussianSpec{0.0, 2.0}}, d);
    const GridFunction df = ordinary_derivative(f, 1);
    auto eps_of = [&](double alpha, bool left, cplx* c) {
        const MeasureProfile p = binomial_profile(alpha, 1.0);
        const GridFunction t = left ? implicit_left(f, p) : implicit_right(f, p);
        return fit_residual(t, df, c);
    };
    cplx c_left, c_right;
    const double e90 = eps_of(0.9, true, &c_left);
    const double e99 = eps_of(0.99, true, &c_left);
    eps_of(0.99, false, &c_right);
    double res = std::max(e99 / e90 / 0.3, e99 / 0.05);
    if (!(c_left.real() > 0.0) || !(c_right.real() < 0.0)) res = std::max(res, 2.0);
    return res;
}

// ---------------------------------------------------------------------------
// Plateau / combination limits
// ---------------------------------------------------------------------------

double check_plateau_alias(CheckContext& ctx) {
    const Domain d(-kPi, kPi, ctx.cfg.base_n, true);
    const GridFunction f = random_band_limited(d, ctx.rng);
    const FracBackend b = FracBackend::spectral();
    double res = rel_diff(plateau_differential(f, 0.5, b),
                          combo(f, FracOrder::of(0.5), 0.5, -0.5, b));
    res = std::max(res, rel_diff(plateau_differential(f, 1.0, b),
                                 ordinary_derivative(f, 1)));
    return res;
}

double check_combo_ordinary_limit(CheckContext&) {
    const Domain d(-kPi, kPi, 256, true);
    const FracBackend b = FracBackend::spectral();
    auto err_at = [&](double alpha) {
        double e = 0.0;
        for (double k : {1.0, 2.0, 3.0, 4.0}) {
            const GridFunction f = sample({PlaneWaveSpec{k}}, d);
            GridFunction want = f;
            want *= cplx(0.0, k);
            e = std::max(e, max_abs_diff(plateau_differential(f, alpha, b), want) /
                                std::abs(k));
        }
        return e;
    };
    const double e99 = err_at(0.99);
    const double e999 = err_at(0.999);
    return std::max(e99 / 0.05, 5.0 * e999 / e99);
}

// ---------------------------------------------------------------------------
// Leibniz defect X and concomitant Y
// ---------------------------------------------------------------------------

double check_xdefect_constants(CheckContext& ctx) {
    const Domain d(-kPi, kPi, ctx.cfg.base_n, true);
    const GridFunction f = random_band_limited(d, ctx.rng);
    const GridFunction one = sample({ConstantSpec{1.0}}, d);
    std::vector<OperatorSpec> ops(3);
    ops[0].variant = OperatorSpec::Variant::QDeriv;
    ops[0].profile = binomial_profile(0.5);
    ops[1].variant = OperatorSpec::Variant::PlateauDiff;
    ops[1].alpha = 0.5;
    ops[2].variant = OperatorSpec::Variant::ExplicitD;
    ops[2].terms = {{1.0, 1.0}, {0.3, 0.5}};
    ops[2].profile = binomial_profile(0.5);
    double res = 0.0;
    for (const auto& op : ops) {
        const double scale = std::max(1.0, max_abs(apply(op, f)));
        res = std::max(res, max_abs(leibniz_defect(op, f, one)) / scale);
        res = std::max(res, max_abs(leibniz_defect(op, one, f)) / scale);
    }
    return res;
}

double check_xdefect_fractional_series(CheckContext&) {
    const Domain d(-4.0 * kPi, 4.0 * kPi, 256, true);
    const double kappa = 0.25, k = 1.0, alpha = 0.5;
    const GridFunction f = sample({PlaneWaveSpec{kappa}}, d);
    const GridFunction g = sample({PlaneWaveSpec{k}}, d);

    OperatorSpec op;
    op.variant = OperatorSpec::Variant::PlateauDiff;
    op.alpha = alpha;
    const GridFunction x_direct = leibniz_defect(op, f, g);

    // Series prediction: X = sum_{j>=1} C(alpha,j) (d^j f)(I^(j-alpha) g) for
    // the lower-limit part, with alternating signs on the upper-limit part.
    auto one_sided_x = [&](bool left) {
        GridFunction acc = GridFunction::zeros(d);
        for (int j = 1; j <= 40; ++j) {
            const GridFunction dj_f = spectral_order_power(f, double(j));
            const GridFunction ig = apply_multiplier(g, [&](double kk) {
                return left ? liouville_multiplier(kk, alpha - j)
                            : weyl_multiplier(kk, alpha - j);
            });
            GridFunction term = pointwise_product(dj_f, ig);
            const double sign = left ? 1.0 : (j % 2 == 0 ? 1.0 : -1.0);
            term *= sign * binomial_coefficient(alpha, j);
            acc += term;
        }
        const GridFunction opf = apply_multiplier(f, [&](double kk) {
            return left ? liouville_multiplier(kk, alpha) : weyl_multiplier(kk, alpha);
        });
        acc -= pointwise_product(opf, g);
        return acc;
    };
    GridFunction x_pred = one_sided_x(true);
    x_pred -= one_sided_x(false);
    x_pred *= 0.5;
    return rel_diff(x_direct, x_pred);
}

double check_concomitant_antisymmetry(CheckContext& ctx) {
    const Domain d(-kPi, kPi, ctx.cfg.base_n, true);
    const GridFunction f = random_band_limited(d, ctx.rng);
    OperatorSpec op;
    op.variant = OperatorSpec::Variant::WeightedFrac;
    op.alpha = 0.5;
    op.profile = binomial_profile(0.5);
    return max_abs(bilinear_concomitant(op, f, f));
}

double check_concomitant_self_adjoint(CheckContext& ctx) {
    const Domain d(-kPi, kPi, ctx.cfg.base_n, true);
    const Weight w(binomial_profile(0.5));
    const GridFunction f = random_band_limited(d, ctx.rng);
    const GridFunction g = random_band_limited(d, ctx.rng);
    OperatorSpec op;
    op.variant = OperatorSpec::Variant::WeightedFrac;
    op.alpha = 0.5;
    op.profile = w;
    const GridFunction y = bilinear_concomitant(op, f, g);
    const GridFunction one = sample({ConstantSpec{1.0}}, d);
    const cplx integral = weighted_inner(one, y, w);
    std::vector<cplx> ay(d.n);
    for (int j = 0; j < d.n; ++j) ay[j] = std::abs(y[j]);
    const cplx scale = weighted_inner(one, GridFunction(d, std::move(ay)), w);
    return std::abs(integral) / std::abs(scale);
}

double check_concomitant_green(CheckContext& ctx) {
    const Domain d(-kPi, kPi, ctx.cfg.base_n, true);
    const GridFunction f = random_band_limited(d, ctx.rng);
    const GridFunction g = random_band_limited(d, ctx.rng);
    OperatorSpec op;
    op.variant = OperatorSpec::Variant::ExplicitD;
    op.terms = {{1.0, 1.0}};
    const GridFunction y = bilinear_concomitant(op, f, g);
    const GridFunction one = sample({ConstantSpec{1.0}}, d);
    const cplx integral = weighted_inner(one, y, std::nullopt);
    std::vector<cplx> ay(d.n);
    for (int j = 0; j < d.n; ++j) ay[j] = std::abs(y[j]);
    const cplx scale = weighted_inner(one, GridFunction(d, std::move(ay)), std::nullopt);
    return std::abs(integral) / std::abs(scale);
}

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

const CheckDef kCatalog[] = {
    {"measure.oddness", "measure.profile", 1e-12, check_measure_oddness},
    {"measure.weight_consistency", "measure.weight", 1e-6, check_measure_weight_consistency},
    {"measure.monotone_flow", "measure.dimensional_flow", 1e-3, check_measure_monotone_flow},
    {"measure.binomial_reduction", "measure.single_scale", 0.0, check_measure_binomial_reduction},
    {"grid.transform_roundtrip", "plumbing.spectral", 1e-12, check_transform_roundtrip},
    {"grid.inner_conjugate_symmetry", "plumbing.pairing", 1e-12, check_inner_conjugate_symmetry},
    {"grid.matrix_consistency", "plumbing.dense_operator", 1e-10, check_matrix_consistency},
    {"frac.liouville_symbol", "fractional.liouville", 1e-10, check_liouville_symbol},
    {"frac.weyl_symbol", "fractional.weyl", 1e-10, check_weyl_symbol},
    {"frac.linearity", "fractional.linearity", 1e-12, check_frac_linearity},
    {"frac.kernel_triviality_spectral", "fractional.trivial_kernel", 1e-13,
     check_kernel_triviality_spectral},
    {"frac.kernel_triviality_gl", "fractional.trivial_kernel", 1.0,
     check_kernel_triviality_gl},
    {"frac.semigroup", "fractional.commutation", 1e-10, check_semigroup},
    {"frac.duality", "fractional.integration_by_parts", 1e-6, check_duality},
    {"frac.antisymmetric_matrix", "antisymmetric_combination.adjoint", 1e-8,
     check_antisymmetric_matrix},
    {"frac.leibniz_series", "fractional.leibniz", 1e-6, check_leibniz_series},
    {"qderiv.linearity", "q_derivative.linearity", 1e-12, check_qderiv_linearity},
    {"qderiv.trivial_kernel", "q_derivative.trivial_kernel", 1e-13,
     check_qderiv_trivial_kernel},
    {"qderiv.derivative_of_q", "q_derivative.definition", 1e-8,
     check_qderiv_derivative_of_q},
    {"qderiv.leibniz", "q_derivative.leibniz", 1e-10, check_qderiv_leibniz},
    {"qderiv.integration_by_parts", "q_derivative.integration_by_parts", 1e-8,
     check_qderiv_integration_by_parts},
    {"qderiv.composition", "q_derivative.composition", 1e-8, check_qderiv_composition},
    {"kalpha.self_adjoint", "self_adjoint_laplacian.weighted", 1e-8,
     check_kalpha_self_adjoint},
    {"explicit.self_adjoint_dq", "explicit_multiscaling.kinetic", 1e-6,
     check_explicit_self_adjoint},
    {"explicit.multiplier", "explicit_multiscaling.sum", 1e-12, check_explicit_multiplier},
    {"explicit.square_multiplier", "explicit_multiscaling.square", 1e-12,
     check_explicit_square_multiplier},
    {"explicit.seven_pieces", "explicit_multiscaling.seven_pieces", 1e-10,
     check_explicit_seven_pieces},
    {"barkinetic.multiplier", "bar_kinetic.m2_kernel", 1e-12, check_barkinetic_multiplier},
    {"barkinetic.nonquadratic", "bar_kinetic.nonquadratic", 0.0,
     check_barkinetic_nonquadratic},
    {"operators.annihilate_constants", "all.trivial_kernel", 1e-8,
     check_annihilate_constants},
    {"implicit.small_scale", "implicit_multiscaling.small_scale", 0.01,
     check_implicit_small_scale},
    {"implicit_kinetic.small_scale", "implicit_multiscaling.kinetic", 1.0,
     check_implicit_kinetic_small_scale},
    {"implicit.large_scale_trend", "implicit_multiscaling.large_scale", 0.05,
     check_implicit_large_scale_trend},
    {"implicit.alpha_to_one", "implicit_multiscaling.ordinary_limit", 1.0,
     check_implicit_alpha_to_one},
    {"plateau.alias", "multiscale_differential.plateau", 1e-12, check_plateau_alias},
    {"combo.ordinary_limit", "antisymmetric_combination.ordinary_limit", 1.0,
     check_combo_ordinary_limit},
    {"xdefect.constants", "complicated_leibniz.consistency", 1e-10,
     check_xdefect_constants},
    {"xdefect.fractional_series", "complicated_leibniz.fractional", 1e-6,
     check_xdefect_fractional_series},
    {"concomitant.antisymmetry", "concomitant.antisymmetry", 1e-14,
     check_concomitant_antisymmetry},
    {"concomitant.self_adjoint_integral", "concomitant.self_adjoint", 1e-7,
     check_concomitant_self_adjoint},
    {"concomitant.green_identity", "concomitant.classical", 1e-10,
     check_concomitant_green},
};

} // namespace

// ---------------------------------------------------------------------------
// Public API
// ---------------------------------------------------------------------------

int VerificationReport::passed_count() const {
    int c = 0;
    for (const auto& chk : checks) c += chk.passed ? 1 : 0;
    return c;
}

GridFunction leibniz_defect(const OperatorSpec& op, const GridFunction& f,
                            const GridFunction& g) {
    using V = OperatorSpec::Variant;
    switch (op.variant) {
        case V::QDeriv:
        case V::WeightedFrac:
        case V::ExplicitD:
        case V::ImplicitLeft:
        case V::ImplicitRight:
        case V::PlateauDiff:
            break;
        default:
            throw ConfigError("leibniz defect: operator must be first-order-type");
    }
    if (!(f.domain() == g.domain()))
        throw DomainMismatch("leibniz defect: functions on different domains");
    GridFunction x = apply(op, pointwise_product(f, g));
    x -= pointwise_product(apply(op, f), g);
    x -= pointwise_product(f, apply(op, g));
    return x;
}

GridFunction bilinear_concomitant(const OperatorSpec& op, const GridFunction& f,
                                  const GridFunction& h) {
    if (!(f.domain() == h.domain()))
        throw DomainMismatch("bilinear concomitant: functions on different domains");
    const GridFunction op2_h = apply(op, apply(op, h));
    const GridFunction op2_f = apply(op, apply(op, f));
    GridFunction y = pointwise_product(f, op2_h);
    y -= pointwise_product(op2_f, h);
    return y;
}

bool glob_match(const std::string& pattern, const std::string& text) {
    std::size_t p = 0, t = 0, star = std::string::npos, mark = 0;
    while (t < text.size()) {
        if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == text[t])) {
            ++p;
            ++t;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            mark = t;
        } else if (star != std::string::npos) {
            p = star + 1;
            t = ++mark;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

std::vector<std::pair<std::string, std::string>> check_catalog() {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& def : kCatalog) out.emplace_back(def.name, def.anchor);
    return out;
}

VerificationReport run_suite(const SuiteConfig& config) {
    VerificationReport report;
    report.config = config;

    std::vector<const CheckDef*> selected;
    for (const auto& def : kCatalog) {
        for (const auto& glob : config.check_globs) {
            if (glob_match(glob, def.name)) {
                selected.push_back(&def);
                break;
            }
        }
    }

    report.checks.resize(selected.size());
    parallel_for(selected.size(), [&](std::size_t i) {
        const CheckDef& def = *selected[i];
        PropertyCheck result;
        result.name = def.name;
        result.paper_anchor = def.anchor;
        result.tolerance = def.tolerance;
        CheckContext ctx{config, Rng(config.seed ^ fnv1a(def.name))};
        try {
            result.residual = def.fn(ctx);
        } catch (const std::exception&) {
            result.residual = 9.99e99;
        }
        if (!std::isfinite(result.residual)) result.residual = 9.99e99;
        if (result.residual < 0.0) result.residual = 0.0;
        result.passed = result.residual <= result.tolerance;
        report.checks[i] = std::move(result);
    });
    return report;
}

void write_report_text(const VerificationReport& report, std::ostream& os) {
    char line[256];
    os << "multifractional property verification\n";
    std::snprintf(line, sizeof(line), "seed: %llu  base grid: %d  passed: %d/%d\n\n",
                  static_cast<unsigned long long>(report.config.seed),
                  report.config.base_n, report.passed_count(),
                  static_cast<int>(report.checks.size()));
    os << line;
    std::snprintf(line, sizeof(line), "%-36s %-42s %-13s %-10s %s\n", "check",
                  "anchor", "residual", "tolerance", "status");
    os << line;
    for (const auto& c : report.checks) {
        std::snprintf(line, sizeof(line), "%-36s %-42s %-13.3e %-10.1e %s\n",
                      c.name.c_str(), c.paper_anchor.c_str(), c.residual, c.tolerance,
                      c.passed ? "PASS" : "FAIL");
        os << line;
    }
}

void write_report_csv(const VerificationReport& report, std::ostream& os) {
    os << "check_name,paper_anchor,residual,tolerance,passed\n";
    char line[256];
    for (const auto& c : report.checks) {
        std::snprintf(line, sizeof(line), "%s,%s,%.12e,%.12e,%d\n", c.name.c_str(),
                      c.paper_anchor.c_str(), c.residual, c.tolerance,
                      c.passed ? 1 : 0);
        os << line;
    }
}

} // namespace multifrac
