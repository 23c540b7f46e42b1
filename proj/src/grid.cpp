// SPDX-License-Identifier: Apache-2.0
#include "multifrac/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "multifrac/fft.hpp"
#include "multifrac/parallel.hpp"

namespace multifrac {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void require_same_domain(const GridFunction& f, const GridFunction& g) {
    if (!(f.domain() == g.domain()))
        throw DomainMismatch("grid functions live on different domains");
}

void require_periodic(const Domain& d, const char* what) {
    if (!d.periodic)
        throw BackendDomainMismatch(std::string(what) + " requires a periodic domain");
}

} // namespace

Domain::Domain(double a_, double b_, int n_, bool periodic_, double offset_)
    : a(a_), b(b_), n(n_), periodic(periodic_), offset(offset_) {
    if (!(b > a)) throw ConfigError("domain: b must exceed a");
    if (n < 8) throw ConfigError("domain: need at least 8 samples");
    if (periodic && !power_of_two(n))
        throw ConfigError("domain: periodic grids need a power-of-two sample count");
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(offset))
        throw ConfigError("domain: endpoints and offset must be finite");
}

std::vector<double> Domain::nodes() const {
    std::vector<double> xs(n);
    for (int j = 0; j < n; ++j) xs[j] = node(j);
    return xs;
}

double Domain::wavenumber(int m) const {
    const int signed_m = m <= n / 2 - 1 ? m : m - n;
    return 2.0 * std::numbers::pi * signed_m / length();
}

GridFunction::GridFunction(Domain d, std::vector<cplx> values)
    : domain_(d), values_(std::move(values)) {
    if (static_cast<int>(values_.size()) != domain_.n)
        throw DomainMismatch("grid function: value count does not match the domain");
    for (const auto& z : values_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw NumericalError("grid function: non-finite sample");
}

GridFunction GridFunction::zeros(const Domain& d) {
    return GridFunction(d, std::vector<cplx>(d.n, cplx(0.0)));
}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
    require_same_domain(*this, o);
    for (int j = 0; j < size(); ++j) values_[j] += o.values_[j];
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& o) {
    require_same_domain(*this, o);
    for (int j = 0; j < size(); ++j) values_[j] -= o.values_[j];
    return *this;
}

GridFunction& GridFunction::operator*=(cplx s) {
    for (auto& z : values_) z *= s;
    return *this;
}

double max_abs(const GridFunction& f) {
    double m = 0.0;
    for (const auto& z : f.values()) m = std::max(m, std::abs(z));
    return m;
}

double max_abs_diff(const GridFunction& f, const GridFunction& g) {
    require_same_domain(f, g);
    double m = 0.0;
    for (int j = 0; j < f.size(); ++j) m = std::max(m, std::abs(f[j] - g[j]));
    return m;
}

GridFunction pointwise_product(const GridFunction& f, const GridFunction& g) {
    require_same_domain(f, g);
    std::vector<cplx> out(f.size());
    for (int j = 0; j < f.size(); ++j) out[j] = f[j] * g[j];
    return GridFunction(f.domain(), std::move(out));
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

std::string FunctionSpec::describe() const {
    return std::visit(
        [](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, PlaneWaveSpec>)
                return "plane_wave k=" + std::to_string(s.k);
            else if constexpr (std::is_same_v<T, GaussianSpec>)
                return "gaussian center=" + std::to_string(s.center) +
                       " sigma=" + std::to_string(s.sigma);
            else if constexpr (std::is_same_v<T, ConstantSpec>)
                return "constant " + std::to_string(s.value.real()) + "+" +
                       std::to_string(s.value.imag()) + "i";
            else if constexpr (std::is_same_v<T, PolynomialSpec>)
                return "polynomial degree=" + std::to_string(
                           s.coeffs.empty() ? 0 : s.coeffs.size() - 1);
            else
                return "table";
        },
        spec);
}

GridFunction sample(const FunctionSpec& spec, const Domain& d) {
    std::vector<cplx> out(d.n);
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, PlaneWaveSpec>) {
                for (int j = 0; j < d.n; ++j)
                    out[j] = std::polar(1.0, s.k * d.node(j));
            } else if constexpr (std::is_same_v<T, GaussianSpec>) {
                if (!(s.sigma > 0.0)) throw UnknownSpec("gaussian: sigma must be positive");
                for (int j = 0; j < d.n; ++j) {
                    const double t = (d.node(j) - s.center) / s.sigma;
                    out[j] = std::exp(-0.5 * t * t);
                }
            } else if constexpr (std::is_same_v<T, ConstantSpec>) {
                std::fill(out.begin(), out.end(), s.value);
            } else if constexpr (std::is_same_v<T, PolynomialSpec>) {
                if (s.coeffs.empty()) throw UnknownSpec("polynomial: empty coefficient list");
                for (int j = 0; j < d.n; ++j) {
                    const double x = d.node(j);
                    double acc = 0.0;
                    for (std::size_t c = s.coeffs.size(); c-- > 0;)
                        acc = acc * x + s.coeffs[c];
                    out[j] = acc;
                }
            } else {
                if (static_cast<int>(s.values.size()) != d.n)
                    throw UnknownSpec("table: length does not match the grid");
                std::copy(s.values.begin(), s.values.end(), out.begin());
            }
        },
        spec.spec);
    return GridFunction(d, std::move(out));
}

// ---------------------------------------------------------------------------
// Weighted pairing and transforms
// ---------------------------------------------------------------------------

cplx weighted_inner(const GridFunction& f, const GridFunction& g, const Weight& w) {
    require_same_domain(f, g);
    const Domain& d = f.domain();
    const double h = d.h();
    auto term = [&](int j) {
        const double v = eval_weight(w, d.node(j));
        return v * std::conj(f[j]) * g[j];
    };
    cplx acc = 0.0;
    for (int j = 0; j < d.n; ++j) acc += term(j);
    cplx result = h * acc;
    if (!d.periodic) {
        // Trapezoid across the sampled nodes plus rectangle strips to the
        // domain edges; cancels exactly at offset 0.5 (midpoint rule).
        result += h * ((d.offset - 0.5) * term(0) + (0.5 - d.offset) * term(d.n - 1));
    }
    return result;
}

std::vector<cplx> spectral_coefficients(const GridFunction& f) {
    require_periodic(f.domain(), "spectral transform");
    const Domain& d = f.domain();
    std::vector<cplx> coeffs(d.n);
    fft::forward(f.values(), coeffs);
    const double x0 = d.node(0);
    const double inv_n = 1.0 / d.n;
    for (int m = 0; m < d.n; ++m)
        coeffs[m] *= inv_n * std::polar(1.0, -d.wavenumber(m) * x0);
    return coeffs;
}

GridFunction from_spectral_coefficients(const Domain& d, const std::vector<cplx>& coeffs) {
    require_periodic(d, "spectral transform");
    if (static_cast<int>(coeffs.size()) != d.n)
        throw DomainMismatch("coefficient count does not match the domain");
    std::vector<cplx> shifted(d.n);
    const double x0 = d.node(0);
    for (int m = 0; m < d.n; ++m)
        shifted[m] = coeffs[m] * std::polar(1.0, d.wavenumber(m) * x0) * double(d.n);
    std::vector<cplx> out(d.n);
    fft::inverse(shifted, out);
    return GridFunction(d, std::move(out));
}

GridFunction apply_multiplier(const GridFunction& f, const std::function<cplx(double)>& mu) {
    require_periodic(f.domain(), "Fourier multiplier");
    const Domain& d = f.domain();
    std::vector<cplx> hat(d.n);
    fft::forward(f.values(), hat);
    for (int m = 0; m < d.n; ++m) hat[m] *= mu(d.wavenumber(m));
    std::vector<cplx> out(d.n);
    fft::inverse(hat, out);
    return GridFunction(d, std::move(out));
}

namespace {

GridFunction fd4_derivative(const GridFunction& f) {
    const Domain& d = f.domain();
    const int n = d.n;
    if (n < 5) throw ConfigError("finite-difference derivative needs n >= 5");
    const double s = 1.0 / (12.0 * d.h());
    const auto& v = f.values();
    std::vector<cplx> out(n);
    out[0] = s * (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]);
    out[1] = s * (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]);
    for (int j = 2; j < n - 2; ++j)
        out[j] = s * (v[j - 2] - 8.0 * v[j - 1] + 8.0 * v[j + 1] - v[j + 2]);
    out[n - 2] = s * (-v[n - 5] + 6.0 * v[n - 4] - 18.0 * v[n - 3] + 10.0 * v[n - 2] +
                      3.0 * v[n - 1]);
    out[n - 1] = s * (3.0 * v[n - 5] - 16.0 * v[n - 4] + 36.0 * v[n - 3] -
                      48.0 * v[n - 2] + 25.0 * v[n - 1]);
    return GridFunction(d, std::move(out));
}

} // namespace

GridFunction ordinary_derivative(const GridFunction& f, int order) {
    if (order < 0) throw ConfigError("derivative order must be non-negative");
    if (order == 0) return f;
    if (f.domain().periodic) {
        return apply_multiplier(f, [order](double k) {
            cplx ik(0.0, k);
            cplx m = 1.0;
            for (int i = 0; i < order; ++i) m *= ik;
            return m;
        });
    }
    GridFunction g = f;
    for (int i = 0; i < order; ++i) g = fd4_derivative(g);
    return g;
}

// ---------------------------------------------------------------------------
// Dense operators
// ---------------------------------------------------------------------------

DenseOperator::DenseOperator(Domain d, Eigen::MatrixXcd entries)
    : domain_(d), entries_(std::move(entries)) {
    if (entries_.rows() != domain_.n || entries_.cols() != domain_.n)
        throw DomainMismatch("dense operator: matrix shape does not match the domain");
}

GridFunction DenseOperator::apply(const GridFunction& f) const {
    if (!(f.domain() == domain_))
        throw DomainMismatch("dense operator applied on a different domain");
    Eigen::Map<const Eigen::VectorXcd> x(f.values().data(), domain_.n);
    Eigen::VectorXcd y = entries_ * x;
    return GridFunction(domain_, std::vector<cplx>(y.data(), y.data() + domain_.n));
}

DenseOperator materialize(const std::function<GridFunction(const GridFunction&)>& op,
                          const Domain& d) {
    if (d.n > 4096)
        throw TooLarge("dense materialization is capped at n = 4096");
    Eigen::MatrixXcd m(d.n, d.n);
    parallel_for(static_cast<std::size_t>(d.n), [&](std::size_t j) {
        GridFunction basis = GridFunction::zeros(d);
        basis[static_cast<int>(j)] = 1.0;
        const GridFunction col = op(basis);
        for (int i = 0; i < d.n; ++i) m(i, static_cast<int>(j)) = col[i];
    });
    return DenseOperator(d, std::move(m));
}

double adjoint_defect(const DenseOperator& m, const Weight& w) {
    const Domain& d = m.domain();
    Eigen::VectorXd v(d.n);
    for (int j = 0; j < d.n; ++j) v[j] = eval_weight(w, d.node(j));
    const Eigen::MatrixXcd wm = v.asDiagonal() * m.entries();
    const Eigen::MatrixXcd defect = wm - wm.adjoint();
    const double denom = wm.cwiseAbs().maxCoeff();
    if (denom == 0.0) return 0.0;
    return defect.cwiseAbs().maxCoeff() / denom;
}

// ---------------------------------------------------------------------------
// CSV export
// ---------------------------------------------------------------------------

void write_csv(const GridFunction& f, std::ostream& os, const std::string& spec_desc) {
    os << "# " << spec_desc << "\n";
    os << "x,re,im\n";
    char line[128];
    for (int j = 0; j < f.size(); ++j) {
        std::snprintf(line, sizeof(line), "%.12e,%.12e,%.12e\n", f.domain().node(j),
                      f[j].real(), f[j].imag());
        os << line;
    }
}

} // namespace multifrac
