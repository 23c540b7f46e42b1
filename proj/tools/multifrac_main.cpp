// SPDX-License-Identifier: Apache-2.0
//
// Batch front end: evaluate measures, apply operators, run the property
// suite, solve field equations, and benchmark backends, all driven by one
// JSON config plus subcommand flags.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "multifrac/config.hpp"
#include "multifrac/solver.hpp"
#include "multifrac/verify.hpp"

namespace fs = std::filesystem;
using namespace multifrac;

namespace {

// Output files land atomically: full write to a temp name, then rename.
void atomic_write(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw ConfigError("cannot write '" + tmp.string() + "'");
        out << content;
    }
    fs::rename(tmp, path);
}

const OperatorSpec& find_operator(const RunConfig& cfg, const std::string& name) {
    const auto it = cfg.operators.find(name);
    if (it == cfg.operators.end())
        throw ConfigError("unknown operator '" + name + "' (not defined in config)");
    return it->second;
}

const Domain& require_domain(const RunConfig& cfg) {
    if (!cfg.domain) throw ConfigError("config: missing 'domain' block");
    return *cfg.domain;
}

int cmd_measure(const RunConfig& cfg, double x_min, double x_max, int points,
                bool log_spaced, const std::string& out_dir) {
    if (!cfg.profile) throw ConfigError("config: missing 'profile' block");
    if (points < 2) throw ConfigError("measure: need at least 2 points");
    if (log_spaced && !(x_min > 0.0))
        throw ConfigError("measure: log spacing needs x-min > 0");
    const MeasureProfile& p = *cfg.profile;

    std::ostringstream csv;
    csv << "x,q,v,alpha_eff\n";
    char line[160];
    for (int i = 0; i < points; ++i) {
        const double t = double(i) / (points - 1);
        const double x = log_spaced
                             ? x_min * std::pow(x_max / x_min, t)
                             : x_min + (x_max - x_min) * t;
        const double q = eval_q(p, x);
        double v = std::numeric_limits<double>::quiet_NaN();
        double ae = std::numeric_limits<double>::quiet_NaN();
        try {
            v = eval_weight(p, x);
            ae = local_scaling_exponent(p, x);
        } catch (const SingularPoint&) {
            // x = 0 with a singular weight: tabulate q, leave v and alpha_eff NaN
        }
        std::snprintf(line, sizeof(line), "%.12e,%.12e,%.12e,%.12e\n", x, q, v, ae);
        csv << line;
    }
    atomic_write(fs::path(out_dir) / "measure.csv", csv.str());
    std::cout << "wrote " << (fs::path(out_dir) / "measure.csv").string() << "\n";
    return 0;
}

int cmd_deriv(const RunConfig& cfg, const std::string& op_name,
              const std::string& fn_text, const std::string& out_dir) {
    const Domain& d = require_domain(cfg);
    const OperatorSpec& op = find_operator(cfg, op_name);
    const FunctionSpec spec = parse_function_spec(fn_text);
    const GridFunction in = sample(spec, d);
    const GridFunction out = apply(op, in);

    std::ostringstream csv;
    csv << "# operator " << op_name << " applied to " << spec.describe() << "\n";
    csv << "x,re_in,im_in,re_out,im_out\n";
    char line[200];
    for (int j = 0; j < d.n; ++j) {
        std::snprintf(line, sizeof(line), "%.12e,%.12e,%.12e,%.12e,%.12e\n", d.node(j),
                      in[j].real(), in[j].imag(), out[j].real(), out[j].imag());
        csv << line;
    }
    atomic_write(fs::path(out_dir) / "deriv.csv", csv.str());
    std::cout << "wrote " << (fs::path(out_dir) / "deriv.csv").string() << "\n";
    return 0;
}

int cmd_verify(const RunConfig& cfg, const std::vector<std::string>& globs,
               std::optional<std::uint64_t> seed, const std::string& out_dir) {
    SuiteConfig suite = cfg.suite;
    if (!globs.empty()) suite.check_globs = globs;
    if (seed) suite.seed = *seed;

    const VerificationReport report = run_suite(suite);

    std::ostringstream text, csv;
    write_report_text(report, text);
    write_report_csv(report, csv);
    atomic_write(fs::path(out_dir) / "report.txt", text.str());
    atomic_write(fs::path(out_dir) / "report.csv", csv.str());
    std::cout << text.str();
    return report.all_passed() ? 0 : 1;
}

int cmd_solve(const RunConfig& cfg, const std::string& op_override,
              const std::string& out_dir) {
    if (!cfg.solve) throw ConfigError("config: missing 'solve' block");
    const RunConfig::SolveBlock& blk = *cfg.solve;
    const Domain& d = require_domain(cfg);
    const std::string op_name = op_override.empty() ? blk.operator_name : op_override;
    const OperatorSpec& op = find_operator(cfg, op_name);

    using V = OperatorSpec::Variant;
    if (op.variant == V::ImplicitLeft || op.variant == V::ImplicitRight ||
        op.variant == V::ImplicitKinetic)
        throw ConfigError("no variational solve path for implicit operators");

    PotentialSpec pot;
    pot.mass2 = blk.mass2;
    pot.quartic = blk.quartic;
    if (blk.source) pot.source = sample(*blk.source, d);

    SolveResult result = blk.quartic == 0.0
                             ? solve_linear(op, d, pot)
                             : solve_nonlinear(op, pot,
                                               blk.guess ? sample(*blk.guess, d)
                                                         : GridFunction::zeros(d),
                                               blk.tol, blk.max_iter);

    std::ostringstream csv;
    write_csv(result.phi, csv, "solution of " + op_name + " field equation");
    atomic_write(fs::path(out_dir) / "solution.csv", csv.str());

    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "{\n"
                  "  \"operator\": \"%s\",\n"
                  "  \"mass2\": %.12e,\n"
                  "  \"quartic\": %.12e,\n"
                  "  \"residual_norm\": %.12e,\n"
                  "  \"iterations\": %d,\n"
                  "  \"converged\": %s\n"
                  "}\n",
                  op_name.c_str(), blk.mass2, blk.quartic, result.residual_norm,
                  result.iterations, result.converged ? "true" : "false");
    atomic_write(fs::path(out_dir) / "summary.json", std::string(buf));
    std::cout << buf;
    return result.converged ? 0 : 1;
}

int cmd_bench(const RunConfig&, const std::string& sizes_text, int repeats,
              const std::string& out_dir) {
    std::vector<int> sizes;
    {
        std::istringstream ss(sizes_text);
        std::string tok;
        while (std::getline(ss, tok, ',')) sizes.push_back(std::stoi(tok));
    }
    if (sizes.empty()) throw ConfigError("bench: empty size list");
    for (int n : sizes) {
        if (n > (1 << 20)) throw ConfigError("bench: sizes are capped at 2^20");
        if (n < 8 || (n & (n - 1)) != 0)
            throw ConfigError("bench: sizes must be powers of two >= 8");
    }
    if (repeats < 1) throw ConfigError("bench: repeats must be >= 1");

    const double alpha = 0.5;
    struct Row {
        std::string backend;
        int n;
        double wall;
        double err;
    };
    std::vector<Row> rows;
    std::vector<double> gl_err, gl_h;

    for (int n : sizes) {
        const Domain dp(-40.0, 40.0, n, true);
        const Domain dn(-40.0, 40.0, n, false);
        const GridFunction fp = sample({GaussianSpec{0.0, 1.0}}, dp);
        const GridFunction fn_ = sample({GaussianSpec{0.0, 1.0}}, dn);
        const FracOrder o = FracOrder::of(alpha);

        auto timed = [&](auto&& fnc) {
            std::vector<double> times;
            GridFunction result = fnc();
            for (int r = 0; r < repeats; ++r) {
                const auto t0 = std::chrono::steady_clock::now();
                result = fnc();
                const auto t1 = std::chrono::steady_clock::now();
                times.push_back(std::chrono::duration<double>(t1 - t0).count());
            }
            std::sort(times.begin(), times.end());
            return std::pair<GridFunction, double>(result, times[times.size() / 2]);
        };

        auto [ref, t_spec] =
            timed([&] { return liouville(fp, o, FracBackend::spectral()); });
        rows.push_back({"spectral", n, t_spec, 0.0});

        auto [gl, t_gl] =
            timed([&] { return liouville(fn_, o, FracBackend::grunwald_letnikov(std::max(64, n))); });
        const double egl = max_abs_diff(GridFunction(dp, gl.values()), ref);
        rows.push_back({"grunwald_letnikov", n, t_gl, egl});
        gl_err.push_back(egl);
        gl_h.push_back(dp.h());

        auto [sq, t_sq] =
            timed([&] { return liouville(fn_, o, FracBackend::singular_quadrature()); });
        rows.push_back({"singular_quadrature", n, t_sq,
                        max_abs_diff(GridFunction(dp, sq.values()), ref)});
    }

    // Least-squares slope of ln(err) vs ln(h): the GL convergence order.
    double order = 0.0;
    {
        const int m = static_cast<int>(gl_err.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (int i = 0; i < m; ++i) {
            const double x = std::log(gl_h[i]), y = std::log(gl_err[i]);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
        }
        const double den = m * sxx - sx * sx;
        order = den != 0.0 ? (m * sxy - sx * sy) / den : 0.0;
    }

    std::ostringstream csv;
    char line[200];
    std::snprintf(line, sizeof(line), "# gl_fitted_order = %.4f\n", order);
    csv << line;
    csv << "backend,n,wall_time,max_error_vs_spectral\n";
    for (const auto& r : rows) {
        std::snprintf(line, sizeof(line), "%s,%d,%.6e,%.12e\n", r.backend.c_str(), r.n,
                      r.wall, r.err);
        csv << line;
    }
    atomic_write(fs::path(out_dir) / "bench.csv", csv.str());
    std::cout << csv.str();
    std::printf("gl_fitted_order %.4f\n", order);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"multifractional calculus toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_override;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        sub->add_option("--out", out_override, "output directory override");
    };

    auto* measure = app.add_subcommand("measure", "tabulate q(x), v(x), alpha_eff(x)");
    double x_min = 0.01, x_max = 100.0;
    int points = 200;
    bool log_spaced = false;
    add_common(measure);
    measure->add_option("--x-min", x_min, "smallest tabulated x");
    measure->add_option("--x-max", x_max, "largest tabulated x");
    measure->add_option("--points", points, "number of rows");
    measure->add_flag("--log", log_spaced, "log-spaced x values");

    auto* deriv = app.add_subcommand("deriv", "apply a configured operator");
    std::string op_name, fn_text = "plane_wave k=1";
    add_common(deriv);
    deriv->add_option("--operator", op_name, "operator name from the config")->required();
    deriv->add_option("--function", fn_text, "inline function spec");

    auto* verify = app.add_subcommand("verify", "run the property-check suite");
    std::vector<std::string> globs;
    std::uint64_t seed_flag = 0;
    bool seed_set = false;
    add_common(verify);
    verify->add_option("--checks", globs, "check-name globs (repeatable)");
    verify->add_option("--seed", seed_flag, "override the suite seed")
        ->each([&](const std::string&) { seed_set = true; });

    auto* solve = app.add_subcommand("solve", "solve the scalar field equation");
    std::string solve_op;
    add_common(solve);
    solve->add_option("--operator", solve_op, "override the configured operator");

    auto* bench = app.add_subcommand("bench", "compare backend accuracy and runtime");
    std::string sizes_text = "256,512,1024";
    int repeats = 3;
    add_common(bench);
    bench->add_option("--sizes", sizes_text, "comma-separated grid sizes");
    bench->add_option("--repeats", repeats, "timing repeats (median reported)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const RunConfig cfg = parse_config_file(config_path);
        const std::string out_dir = out_override.empty() ? cfg.output_dir : out_override;
        if (measure->parsed())
            return cmd_measure(cfg, x_min, x_max, points, log_spaced, out_dir);
        if (deriv->parsed()) return cmd_deriv(cfg, op_name, fn_text, out_dir);
        if (verify->parsed())
            return cmd_verify(cfg, globs,
                              seed_set ? std::optional<std::uint64_t>(seed_flag)
                                       : std::nullopt,
                              out_dir);
        if (solve->parsed()) return cmd_solve(cfg, solve_op, out_dir);
        if (bench->parsed()) return cmd_bench(cfg, sizes_text, repeats, out_dir);
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 3;
    }
}
