// SPDX-License-Identifier: Apache-2.0
#include "multifrac/config.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace multifrac {

namespace {

using nlohmann::json;

[[noreturn]] void bad_key(const std::string& where, const std::string& what) {
    throw ConfigError("config: " + where + ": " + what);
}

double get_number(const json& j, const std::string& where, const std::string& key,
                  std::optional<double> fallback = std::nullopt) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        bad_key(where, "missing key '" + key + "'");
    }
    if (!j[key].is_number()) bad_key(where, "key '" + key + "' must be a number");
    return j[key].get<double>();
}

bool get_bool(const json& j, const std::string& where, const std::string& key,
              bool fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_boolean()) bad_key(where, "key '" + key + "' must be a boolean");
    return j[key].get<bool>();
}

MeasureProfile parse_profile(const json& j, const std::string& where) {
    if (!j.is_object()) bad_key(where, "must be an object");
    if (!j.contains("terms") || !j["terms"].is_array() || j["terms"].empty())
        bad_key(where, "needs a non-empty 'terms' array");
    std::vector<MeasureTerm> terms;
    int idx = 0;
    for (const auto& tj : j["terms"]) {
        const std::string tw = where + ".terms[" + std::to_string(idx++) + "]";
        MeasureTerm t;
        t.alpha = get_number(tj, tw, "alpha");
        t.ell = get_number(tj, tw, "ell", 1.0);
        t.amp_cos = get_number(tj, tw, "amp_cos", 0.0);
        t.amp_sin = get_number(tj, tw, "amp_sin", 0.0);
        t.omega = get_number(tj, tw, "omega", 0.0);
        t.ell_inf = get_number(tj, tw, "ell_inf", 1.0);
        t.keep_unit_offset = get_bool(tj, tw, "keep_unit_offset", true);
        terms.push_back(t);
    }
    ProfileMode mode = ProfileMode::Full;
    if (j.contains("mode")) {
        const std::string m = j["mode"].get<std::string>();
        if (m == "binomial")
            mode = ProfileMode::Binomial;
        else if (m != "full")
            bad_key(where, "mode must be 'full' or 'binomial'");
    }
    return MeasureProfile(std::move(terms), mode);
}

Domain parse_domain(const json& j, const std::string& where) {
    if (!j.is_object()) bad_key(where, "must be an object");
    const double a = get_number(j, where, "a");
    const double b = get_number(j, where, "b");
    const double n = get_number(j, where, "n");
    const bool periodic = get_bool(j, where, "periodic", false);
    const double offset = get_number(j, where, "offset", 0.5);
    return Domain(a, b, static_cast<int>(n), periodic, offset);
}

FracBackend parse_backend(const json& j, const std::string& where) {
    if (!j.is_object()) bad_key(where, "must be an object");
    if (!j.contains("type")) bad_key(where, "missing key 'type'");
    const std::string type = j["type"].get<std::string>();
    if (type == "spectral") return FracBackend::spectral();
    if (type == "grunwald_letnikov")
        return FracBackend::grunwald_letnikov(
            static_cast<int>(get_number(j, where, "truncation", 4096.0)));
    if (type == "singular_quadrature")
        return FracBackend::singular_quadrature(
            static_cast<int>(get_number(j, where, "panels", 32.0)),
            get_number(j, where, "grading", 3.0));
    bad_key(where, "unknown backend type '" + type + "'");
}

OperatorSpec::Variant parse_variant(const std::string& name, const std::string& where) {
    using V = OperatorSpec::Variant;
    if (name == "identity") return V::Identity;
    if (name == "q_deriv") return V::QDeriv;
    if (name == "q_laplacian") return V::QLaplacian;
    if (name == "weighted_frac") return V::WeightedFrac;
    if (name == "explicit_d") return V::ExplicitD;
    if (name == "explicit_kinetic") return V::ExplicitKinetic;
    if (name == "bar_kinetic") return V::BarKinetic;
    if (name == "implicit_left") return V::ImplicitLeft;
    if (name == "implicit_right") return V::ImplicitRight;
    if (name == "implicit_kinetic") return V::ImplicitKinetic;
    if (name == "plateau_diff") return V::PlateauDiff;
    bad_key(where, "unknown operator variant '" + name + "'");
}

OperatorSpec parse_operator(const json& j, const std::string& where,
                            const std::optional<MeasureProfile>& shared_profile) {
    if (!j.is_object()) bad_key(where, "must be an object");
    if (!j.contains("variant")) bad_key(where, "missing key 'variant'");
    OperatorSpec op;
    op.variant = parse_variant(j["variant"].get<std::string>(), where);
    op.alpha = get_number(j, where, "alpha", 0.5);
    if (j.contains("terms")) {
        if (!j["terms"].is_array()) bad_key(where, "'terms' must be an array of [g, alpha]");
        for (const auto& tj : j["terms"]) {
            if (!tj.is_array() || tj.size() != 2)
                bad_key(where, "'terms' entries must be [g, alpha] pairs");
            op.terms.push_back({tj[0].get<double>(), tj[1].get<double>()});
        }
    }
    std::string prof = "inherit";
    if (j.contains("profile")) prof = j["profile"].get<std::string>();
    if (prof == "flat") {
        op.profile = std::nullopt;
    } else if (prof == "inherit") {
        op.profile = shared_profile;
    } else {
        bad_key(where, "profile must be 'flat' or 'inherit'");
    }
    if (j.contains("backend")) op.backend = parse_backend(j["backend"], where + ".backend");
    op.cross_consistency = get_bool(j, where, "cross_consistency", true);
    return op;
}

FunctionSpec parse_function_json(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("type")) bad_key(where, "needs a 'type' key");
    const std::string type = j["type"].get<std::string>();
    if (type == "plane_wave") return {PlaneWaveSpec{get_number(j, where, "k")}};
    if (type == "gaussian")
        return {GaussianSpec{get_number(j, where, "center", 0.0),
                             get_number(j, where, "sigma", 1.0)}};
    if (type == "constant")
        return {ConstantSpec{cplx(get_number(j, where, "re", 1.0),
                                  get_number(j, where, "im", 0.0))}};
    if (type == "polynomial") {
        if (!j.contains("coeffs") || !j["coeffs"].is_array())
            bad_key(where, "polynomial needs a 'coeffs' array");
        PolynomialSpec p;
        for (const auto& c : j["coeffs"]) p.coeffs.push_back(c.get<double>());
        return {p};
    }
    if (type == "table") {
        if (!j.contains("re") || !j["re"].is_array())
            bad_key(where, "table needs an 're' array");
        TableSpec t;
        const auto& re = j["re"];
        const json im = j.contains("im") ? j["im"] : json::array();
        for (std::size_t i = 0; i < re.size(); ++i) {
            const double imv = i < im.size() ? im[i].get<double>() : 0.0;
            t.values.emplace_back(re[i].get<double>(), imv);
        }
        return {t};
    }
    throw UnknownSpec("config: " + where + ": unknown function type '" + type + "'");
}

} // namespace

RunConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text, nullptr, true, true);  // allow comments
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");

    RunConfig cfg;
    if (j.contains("profile")) cfg.profile = parse_profile(j["profile"], "profile");
    if (j.contains("domain")) cfg.domain = parse_domain(j["domain"], "domain");
    if (j.contains("operators")) {
        if (!j["operators"].is_object())
            throw ConfigError("config: operators: must be an object");
        for (const auto& [name, oj] : j["operators"].items())
            cfg.operators.emplace(name,
                                  parse_operator(oj, "operators." + name, cfg.profile));
    }
    if (j.contains("suite")) {
        const json& s = j["suite"];
        if (s.contains("checks")) {
            if (!s["checks"].is_array())
                throw ConfigError("config: suite.checks: must be an array of globs");
            cfg.suite.check_globs.clear();
            for (const auto& g : s["checks"])
                cfg.suite.check_globs.push_back(g.get<std::string>());
        }
        cfg.suite.seed =
            static_cast<std::uint64_t>(get_number(s, "suite", "seed", 12345.0));
        cfg.suite.base_n = static_cast<int>(get_number(s, "suite", "base_n", 256.0));
    }
    if (j.contains("solve")) {
        const json& s = j["solve"];
        RunConfig::SolveBlock blk;
        if (!s.contains("operator"))
            throw ConfigError("config: solve: missing key 'operator'");
        blk.operator_name = s["operator"].get<std::string>();
        blk.mass2 = get_number(s, "solve", "mass2", 0.0);
        blk.quartic = get_number(s, "solve", "quartic", 0.0);
        if (s.contains("source"))
            blk.source = parse_function_json(s["source"], "solve.source");
        if (s.contains("guess")) blk.guess = parse_function_json(s["guess"], "solve.guess");
        blk.tol = get_number(s, "solve", "tol", 1e-9);
        blk.max_iter = static_cast<int>(get_number(s, "solve", "max_iter", 25.0));
        cfg.solve = std::move(blk);
    }
    if (j.contains("output")) {
        const json& o = j["output"];
        if (o.contains("directory")) cfg.output_dir = o["directory"].get<std::string>();
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

FunctionSpec parse_function_spec(const std::string& text) {
    std::istringstream ss(text);
    std::string type;
    ss >> type;
    std::map<std::string, std::string> kv;
    std::string tok;
    while (ss >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos)
            throw UnknownSpec("function spec: expected key=value, got '" + tok + "'");
        kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    auto num = [&](const std::string& key, std::optional<double> fallback =
                                               std::nullopt) -> double {
        auto it = kv.find(key);
        if (it == kv.end()) {
            if (fallback) return *fallback;
            throw UnknownSpec("function spec: missing '" + key + "'");
        }
        try {
            return std::stod(it->second);
        } catch (...) {
            throw UnknownSpec("function spec: bad number for '" + key + "'");
        }
    };
    if (type == "plane_wave") return {PlaneWaveSpec{num("k")}};
    if (type == "gaussian") return {GaussianSpec{num("center", 0.0), num("sigma", 1.0)}};
    if (type == "constant") return {ConstantSpec{cplx(num("re", 1.0), num("im", 0.0))}};
    if (type == "polynomial") {
        auto it = kv.find("coeffs");
        if (it == kv.end()) throw UnknownSpec("function spec: missing 'coeffs'");
        PolynomialSpec p;
        std::istringstream cs(it->second);
        std::string c;
        while (std::getline(cs, c, ','))
            p.coeffs.push_back(std::stod(c));
        if (p.coeffs.empty()) throw UnknownSpec("function spec: empty 'coeffs'");
        return {p};
    }
    throw UnknownSpec("function spec: unknown type '" + type + "'");
}

} // namespace multifrac
