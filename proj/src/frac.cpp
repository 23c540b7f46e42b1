// SPDX-License-Identifier: Apache-2.0
#include "multifrac/frac.hpp"

#include <cmath>
#include <numbers>

#include "multifrac/fft.hpp"
#include "multifrac/parallel.hpp"
#include "multifrac/spline.hpp"

namespace multifrac {

namespace {

constexpr double kPi = std::numbers::pi;

// Gauss-Legendre nodes/weights on [-1, 1].
constexpr int kGaussMax = 12;
constexpr double kGaussX[6] = {0.1252334085114689, 0.3678314989981802,
                               0.5873179542866175, 0.7699026741943047,
                               0.9041172563704749, 0.9815606342467192};
constexpr double kGaussW[6] = {0.2491470458134028, 0.2334925365383548,
                               0.2031674267230659, 0.1600783285433462,
                               0.1069393259953184, 0.0471753363865118};
constexpr double kGauss8X[4] = {0.1834346424956498, 0.5255324099163290,
                                0.7966664774136267, 0.9602898564975363};
constexpr double kGauss8W[4] = {0.3626837833783620, 0.3137066458778873,
                                0.2223810344533745, 0.1012285362903763};

template <typename Fn>
cplx gauss_panel(double lo, double hi, int order, const Fn& fn) {
    const double mid = 0.5 * (lo + hi), rad = 0.5 * (hi - lo);
    cplx acc = 0.0;
    if (order <= 8) {
        for (int i = 0; i < 4; ++i)
            acc += kGauss8W[i] * (fn(mid + rad * kGauss8X[i]) + fn(mid - rad * kGauss8X[i]));
    } else {
        for (int i = 0; i < 6; ++i)
            acc += kGaussW[i] * (fn(mid + rad * kGaussX[i]) + fn(mid - rad * kGaussX[i]));
    }
    return rad * acc;
}

} // namespace

FracOrder::FracOrder(double alpha_, int m_) : alpha(alpha_), m(m_) {
    if (m != 1 && m != 2)
        throw OrderOutOfRange("fractional order: only m in {1, 2} is supported");
    if (!(alpha >= m - 1) || !(alpha <= m))
        throw OrderOutOfRange("fractional order: need m-1 <= alpha <= m");
    if (!(alpha > 0.0))
        throw OrderOutOfRange("fractional order: alpha must be positive");
}

FracOrder FracOrder::of(double alpha_) {
    return FracOrder(alpha_, alpha_ <= 1.0 ? 1 : 2);
}

void FracBackend::validate() const {
    if (kind == Kind::GrunwaldLetnikov && gl_truncation < 64)
        throw ConfigError("GL backend: truncation must be at least 64");
    if (kind == Kind::SingularQuadrature) {
        if (panels < 16) throw ConfigError("quadrature backend: need at least 16 panels");
        if (!(grading >= 1.0)) throw ConfigError("quadrature backend: grading must be >= 1");
    }
}

cplx liouville_multiplier(double k, double alpha) {
    if (k == 0.0) return 0.0;
    const double s = k > 0.0 ? 1.0 : -1.0;
    return std::polar(std::pow(std::abs(k), alpha), 0.5 * kPi * alpha * s);
}

cplx weyl_multiplier(double k, double alpha) {
    if (k == 0.0) return 0.0;
    const double s = k > 0.0 ? 1.0 : -1.0;
    return std::polar(std::pow(std::abs(k), alpha), -0.5 * kPi * alpha * s);
}

std::vector<double> gl_weights(double alpha, int count) {
    std::vector<double> w(count);
    if (count == 0) return w;
    w[0] = 1.0;
    for (int j = 1; j < count; ++j)
        w[j] = w[j - 1] * ((j - 1 - alpha) / j);
    return w;
}

double binomial_coefficient(double alpha, int j) {
    double c = 1.0;
    for (int i = 1; i <= j; ++i) c *= (alpha - i + 1) / i;
    return c;
}

// ---------------------------------------------------------------------------
// Grunwald-Letnikov
// ---------------------------------------------------------------------------

namespace {

// Periodic grids: apply the truncated stencil as a Fourier symbol. Weights
// are folded modulo n first, so any truncation J (including J >> n) costs
// O(J + n log n).
GridFunction gl_periodic(const GridFunction& f, double alpha, int j_trunc, bool left) {
    const Domain& d = f.domain();
    const int n = d.n;
    const std::vector<double> w = gl_weights(alpha, j_trunc + 1);
    std::vector<cplx> folded(n, cplx(0.0));
    for (int j = 0; j <= j_trunc; ++j) folded[j % n] += w[j];

    std::vector<cplx> symbol(n);
    fft::forward(folded, symbol);
    const double scale = std::pow(d.h(), -alpha);

    std::vector<cplx> hat(n);
    fft::forward(f.values(), hat);
    for (int m = 0; m < n; ++m) {
        const cplx s = left ? symbol[m] : std::conj(symbol[m]);
        hat[m] *= scale * s;
    }
    std::vector<cplx> out(n);
    fft::inverse(hat, out);
    return GridFunction(d, std::move(out));
}

// Non-periodic grids: direct convolution with zero extension beyond the grid.
GridFunction gl_direct(const GridFunction& f, double alpha, int j_trunc, bool left) {
    const Domain& d = f.domain();
    const int n = d.n;
    const std::vector<double> w = gl_weights(alpha, j_trunc + 1);
    const double scale = std::pow(d.h(), -alpha);
    const auto& v = f.values();
    std::vector<cplx> out(n);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t idx) {
        const int l = static_cast<int>(idx);
        const int reach = left ? l : n - 1 - l;
        const int jmax = std::min(j_trunc, reach);
        cplx acc = 0.0;
        for (int j = 0; j <= jmax; ++j) acc += w[j] * v[left ? l - j : l + j];
        out[l] = scale * acc;
    });
    return GridFunction(d, std::move(out));
}

GridFunction gl_apply(const GridFunction& f, double alpha, int j_trunc, bool left) {
    return f.domain().periodic ? gl_periodic(f, alpha, j_trunc, left)
                               : gl_direct(f, alpha, j_trunc, left);
}

} // namespace

// ---------------------------------------------------------------------------
// Graded singular convolution (quadrature backends)
// ---------------------------------------------------------------------------

namespace detail {

GridFunction singular_convolution(const Domain& d,
                                  const std::function<cplx(double)>& g,
                                  int direction, const SingularKernel& kernel,
                                  int head_panels, double grading,
                                  double tail_cap_in_h, int gauss_order) {
    const int n = d.n;
    const double h = d.h();
    const double x_first = d.node(0);
    const double x_last = d.node(n - 1);
    const double tail_cap = tail_cap_in_h * h;
    const double sdir = direction > 0 ? -1.0 : 1.0;  // probe x + sdir*u

    std::vector<cplx> out(n);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t idx) {
        const int l = static_cast<int>(idx);
        const double x = d.node(l);
        const double reach = direction > 0 ? x - x_first : x_last - x;
        if (reach <= 1e-12 * h) {
            out[l] = 0.0;
            return;
        }
        auto integrand = [&](double u) { return kernel.value(u) * g(x + sdir * u); };

        const double u_head = std::min(reach, 64.0 * h);
        cplx acc = 0.0;

        // Graded head mesh toward u = 0.
        double u1 = u_head * std::pow(1.0 / head_panels, grading);
        double prev = u1;
        for (int p = 1; p < head_panels; ++p) {
            const double next = u_head * std::pow((p + 1.0) / head_panels, grading);
            acc += gauss_panel(prev, next, gauss_order, integrand);
            prev = next;
        }

        // Innermost stretch [0, u1]: peel geometric panels until the kernel
        // reaches its asymptotic power regime, then close with the local
        // power-law form (exact for pure power kernels).
        double u_cut = u1;
        while (kernel.local_exponent(u_cut) > kernel.exponent_at_zero + 0.02 &&
               u_cut > 1e-290) {
            const double lo = u_cut / 8.0;
            acc += gauss_panel(lo, u_cut, kGaussMax, integrand);
            u_cut = lo;
        }
        {
            const double p = kernel.local_exponent(u_cut);
            const cplx g0 = g(x);
            const cplx g1 = g(x + sdir * u_cut);
            const double kv = kernel.value(u_cut);
            acc += kv * u_cut * (g0 / (1.0 - p) + (g1 - g0) / (2.0 - p));
        }

        // Tail: geometric growth capped so the quadrature keeps resolving
        // grid-scale structure in g.
        double lo = u_head;
        double width = std::max(u_head * 0.2, h);
        while (lo < reach) {
            width = std::min(width * 1.5, tail_cap);
            const double hi = std::min(lo + width, reach);
            acc += gauss_panel(lo, hi, gauss_order, integrand);
            lo = hi;
        }

        out[l] = acc;
    });
    return GridFunction(d, std::move(out));
}

} // namespace detail

// ---------------------------------------------------------------------------
// Public operators
// ---------------------------------------------------------------------------

namespace {

GridFunction quadrature_one_sided(const GridFunction& f, FracOrder o,
                                  const FracBackend& b, bool left) {
    const Domain& d = f.domain();
    const GridFunction gm = ordinary_derivative(f, o.m);
    const CubicSpline spline(d.node(0), d.h(), gm.values());
    const double s = o.m - o.alpha;  // kernel u^(s-1)/Gamma(s), s in (0, 1)
    const double norm = 1.0 / std::tgamma(s);
    detail::SingularKernel kernel{
        [s, norm](double u) { return norm * std::pow(u, s - 1.0); },
        [s](double) { return 1.0 - s; },
        1.0 - s};
    GridFunction res = detail::singular_convolution(
        d, [&spline](double x) { return spline(x); }, left ? 1 : -1, kernel,
        b.panels, b.grading, 16.0, kGaussMax);
    if (!left && o.m % 2 == 1) {
        // The upper-limit integral carries (-1)^m relative to the (-ik)^alpha
        // symbol shared by the other backends.
        res *= -1.0;
    }
    return res;
}

GridFunction one_sided(const GridFunction& f, FracOrder o, const FracBackend& b,
                       bool left) {
    if (o.integer()) {
        GridFunction g = ordinary_derivative(f, o.m);
        if (!left && o.m % 2 == 1) g *= -1.0;
        return g;
    }
    switch (b.kind) {
        case FracBackend::Kind::Spectral: {
            if (!f.domain().periodic)
                throw BackendDomainMismatch("spectral backend requires a periodic domain");
            const double alpha = o.alpha;
            return apply_multiplier(f, [alpha, left](double k) {
                return left ? liouville_multiplier(k, alpha) : weyl_multiplier(k, alpha);
            });
        }
        case FracBackend::Kind::GrunwaldLetnikov:
            return gl_apply(f, o.alpha, b.gl_truncation, left);
        case FracBackend::Kind::SingularQuadrature:
            return quadrature_one_sided(f, o, b, left);
    }
    throw Error("unreachable backend kind");
}

} // namespace

GridFunction liouville(const GridFunction& f, FracOrder o, const FracBackend& b) {
    return one_sided(f, o, b, true);
}

GridFunction weyl(const GridFunction& f, FracOrder o, const FracBackend& b) {
    return one_sided(f, o, b, false);
}

GridFunction combo(const GridFunction& f, FracOrder o, cplx c, cplx cbar,
                   const FracBackend& b) {
    GridFunction out = liouville(f, o, b);
    out *= c;
    GridFunction w = weyl(f, o, b);
    w *= cbar;
    out += w;
    return out;
}

GridFunction symmetric_m2(const GridFunction& f, double alpha, const FracBackend& b) {
    if (!(alpha > 0.5) || !(alpha <= 1.0))
        throw OrderOutOfRange("symmetric m=2 operator needs 1/2 < alpha <= 1");
    if (alpha == 1.0) {
        GridFunction g = ordinary_derivative(f, 2);
        g *= 2.0;
        return g;
    }
    const FracOrder o(2.0 * alpha, 2);
    GridFunction out = liouville(f, o, b);
    out += weyl(f, o, b);
    return out;
}

GridFunction spectral_order_power(const GridFunction& f, double order) {
    return apply_multiplier(f, [order](double k) -> cplx {
        if (k == 0.0) return order == 0.0 ? cplx(1.0) : cplx(0.0);
        const double s = k > 0.0 ? 1.0 : -1.0;
        return std::polar(std::pow(std::abs(k), order), 0.5 * kPi * order * s);
    });
}

} // namespace multifrac
