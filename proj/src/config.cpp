#include "pdirac/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pdirac/errors.hpp"

namespace pdirac {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw ConfigError("config: " + field + ": " + what);
}

double get_num(const json& j, const std::string& field) {
    if (!j.is_number()) fail(field, "expected a number");
    return j.get<double>();
}

int get_int(const json& j, const std::string& field) {
    if (!j.is_number_integer()) fail(field, "expected an integer");
    return j.get<int>();
}

std::vector<double> get_vec(const json& j, const std::string& field) {
    if (!j.is_array()) fail(field, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) fail(field, "expected an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

cplx get_cplx(const json& j, const std::string& field) {
    const auto v = get_vec(j, field);
    if (v.size() != 2) fail(field, "expected [re, im]");
    return {v[0], v[1]};
}

PeriodicPotential parse_potential(const json& j, double period) {
    if (!j.is_object()) fail("potential", "expected an object");
    const std::string shape = j.value("shape", std::string("zero"));
    try {
        if (shape == "zero") return PeriodicPotential::zero(period);
        if (shape == "constant")
            return PeriodicPotential::constant(period, get_num(j.at("value"), "potential.value"));
        if (shape == "piecewise_constant")
            return PeriodicPotential::piecewise_constant(
                period, get_vec(j.at("breakpoints"), "potential.breakpoints"),
                get_vec(j.at("values"), "potential.values"));
        if (shape == "fourier")
            return PeriodicPotential::fourier(
                period, j.contains("mean") ? get_num(j["mean"], "potential.mean") : 0.0,
                j.contains("cos") ? get_vec(j["cos"], "potential.cos") : std::vector<double>{},
                j.contains("sin") ? get_vec(j["sin"], "potential.sin") : std::vector<double>{});
        if (shape == "sampled")
            return PeriodicPotential::sampled(period,
                                              get_vec(j.at("values"), "potential.values"));
    } catch (const std::invalid_argument& e) {
        fail("potential", e.what());
    } catch (const json::out_of_range&) {
        fail("potential", "missing a required field for shape '" + shape + "'");
    }
    fail("potential.shape",
         "unknown shape '" + shape +
             "' (zero, constant, piecewise_constant, fourier, sampled)");
}

PerturbationField parse_perturbation(const json& j) {
    if (!j.is_object()) fail("perturbation", "expected an object");
    const double p = j.contains("p") ? get_num(j["p"], "perturbation.p") : 1.0;
    try {
        if (j.contains("samples")) {
            const auto sup = get_vec(j.at("support"), "perturbation.support");
            if (sup.size() != 2) fail("perturbation.support", "expected [lo, hi]");
            std::vector<C2> samples;
            for (const auto& s : j["samples"]) {
                if (!s.is_array() || s.size() != 2 || !s[0].is_array() || s[0].size() != 2 ||
                    !s[1].is_array() || s[1].size() != 2)
                    fail("perturbation.samples", "each sample must be a 2x2 matrix of [re, im]");
                samples.push_back(C2{get_cplx(s[0][0], "perturbation.samples"),
                                     get_cplx(s[0][1], "perturbation.samples"),
                                     get_cplx(s[1][0], "perturbation.samples"),
                                     get_cplx(s[1][1], "perturbation.samples")});
            }
            return PerturbationField::explicit_samples(p, sup[0], sup[1], std::move(samples));
        }
        const double norm =
            j.contains("norm") ? get_num(j["norm"], "perturbation.norm") : 0.5;
        return PerturbationField::norm_only(p, norm);
    } catch (const std::invalid_argument& e) {
        fail("perturbation", e.what());
    } catch (const json::out_of_range&) {
        fail("perturbation", "explicit samples require a 'support' field");
    }
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& filename) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1;
        for (std::size_t i = 0; i < e.byte && i < text.size(); ++i)
            if (text[i] == '\n') ++line;
        throw ConfigError(filename + ":" + std::to_string(line) + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError(filename + ": top level must be a JSON object");

    RunConfig cfg;
    if (j.contains("mass")) cfg.mass = get_num(j["mass"], "mass");
    if (cfg.mass < 0.0) fail("mass", "must be >= 0");
    if (j.contains("period")) cfg.period = get_num(j["period"], "period");
    if (!(cfg.period > 0.0)) fail("period", "must be positive");
    cfg.potential = j.contains("potential") ? parse_potential(j["potential"], cfg.period)
                                            : PeriodicPotential::zero(cfg.period);
    if (j.contains("perturbation")) cfg.perturbation = parse_perturbation(j["perturbation"]);

    if (j.contains("window")) {
        const auto& w = j["window"];
        if (!w.is_object()) fail("window", "expected an object");
        if (w.contains("re_min")) cfg.re_min = get_num(w["re_min"], "window.re_min");
        if (w.contains("re_max")) cfg.re_max = get_num(w["re_max"], "window.re_max");
        if (w.contains("im_min")) cfg.im_min = get_num(w["im_min"], "window.im_min");
        if (w.contains("im_max")) cfg.im_max = get_num(w["im_max"], "window.im_max");
        if (!(cfg.re_max > cfg.re_min)) fail("window", "re_max must exceed re_min");
        if (!(cfg.im_max > cfg.im_min)) fail("window", "im_max must exceed im_min");
    }
    if (j.contains("grid")) {
        const auto& g = j["grid"];
        if (g.contains("nx")) cfg.nx = get_int(g["nx"], "grid.nx");
        if (g.contains("ny")) cfg.ny = get_int(g["ny"], "grid.ny");
        if (cfg.nx < 2 || cfg.ny < 2) fail("grid", "nx and ny must be >= 2");
    }
    if (j.contains("sampling")) {
        const auto& s = j["sampling"];
        if (s.contains("phi_nodes")) cfg.phi_nodes = get_int(s["phi_nodes"], "sampling.phi_nodes");
        if (s.contains("scan_points"))
            cfg.scan_points = get_int(s["scan_points"], "sampling.scan_points");
        if (cfg.phi_nodes < 1) fail("sampling.phi_nodes", "must be >= 1");
        if (cfg.scan_points < 100) fail("sampling.scan_points", "must be >= 100");
    }
    if (j.contains("tolerances")) {
        const auto& t = j["tolerances"];
        if (t.contains("ode_abs")) cfg.tol.absolute = get_num(t["ode_abs"], "tolerances.ode_abs");
        if (t.contains("ode_rel")) cfg.tol.relative = get_num(t["ode_rel"], "tolerances.ode_rel");
        if (!(cfg.tol.absolute > 0.0) || !(cfg.tol.relative > 0.0))
            fail("tolerances", "must be positive");
    }
    if (j.contains("workers")) cfg.workers = get_int(j["workers"], "workers");
    if (cfg.workers < 1) fail("workers", "must be >= 1");
    if (j.contains("output")) {
        const auto& o = j["output"];
        if (o.contains("directory")) {
            if (!o["directory"].is_string()) fail("output.directory", "expected a string");
            cfg.out_dir = o["directory"].get<std::string>();
        }
        if (o.contains("svg")) {
            if (!o["svg"].is_boolean()) fail("output.svg", "expected a boolean");
            cfg.svg = o["svg"].get<bool>();
        }
    }
    if (j.contains("probe")) {
        const auto& p = j["probe"];
        if (p.contains("lambda")) cfg.probe_lambda = get_cplx(p["lambda"], "probe.lambda");
    }
    if (j.contains("greens")) {
        const auto& g = j["greens"];
        if (g.contains("x")) cfg.greens_x = get_num(g["x"], "greens.x");
        if (g.contains("t")) cfg.greens_t = get_num(g["t"], "greens.t");
    }
    if (j.contains("asymptotics")) {
        const auto& a = j["asymptotics"];
        if (a.contains("mu")) cfg.asy_mu = get_num(a["mu"], "asymptotics.mu");
        if (a.contains("alphas")) cfg.asy_alphas = get_vec(a["alphas"], "asymptotics.alphas");
        if (a.contains("n_x")) cfg.asy_nx = get_int(a["n_x"], "asymptotics.n_x");
        if (cfg.asy_alphas.empty()) fail("asymptotics.alphas", "must be nonempty");
        for (double al : cfg.asy_alphas)
            if (!(al > 0.0)) fail("asymptotics.alphas", "must be positive");
        if (cfg.asy_nx < 2) fail("asymptotics.n_x", "must be >= 2");
    }
    if (j.contains("edge_limits")) {
        const auto& e = j["edge_limits"];
        if (e.contains("offsets")) cfg.edge_offsets = get_vec(e["offsets"], "edge_limits.offsets");
        for (double t : cfg.edge_offsets)
            if (!(t > 0.0)) fail("edge_limits.offsets", "must be positive");
    }
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

std::string dump_config(const RunConfig& cfg) {
    json j;
    j["mass"] = cfg.mass;
    j["period"] = cfg.period;

    json pot;
    switch (cfg.potential.shape()) {
        case PotentialShape::Zero:
            pot["shape"] = "zero";
            break;
        case PotentialShape::Constant:
            pot["shape"] = "constant";
            pot["value"] = cfg.potential.eval(0.0);
            break;
        case PotentialShape::PiecewiseConstant:
            pot["shape"] = "piecewise_constant";
            pot["breakpoints"] = cfg.potential.pwc_breakpoints();
            pot["values"] = cfg.potential.pwc_values();
            break;
        case PotentialShape::Fourier:
            pot["shape"] = "fourier";
            pot["mean"] = cfg.potential.fourier_mean();
            pot["cos"] = cfg.potential.fourier_cos();
            pot["sin"] = cfg.potential.fourier_sin();
            break;
        case PotentialShape::Sampled:
            pot["shape"] = "sampled";
            pot["values"] = cfg.potential.samples();
            break;
    }
    j["potential"] = pot;

    json pert;
    pert["p"] = cfg.perturbation.p();
    if (cfg.perturbation.is_norm_only()) {
        pert["norm"] = cfg.perturbation.vnorm();
    } else {
        pert["support"] = {cfg.perturbation.support_lo(), cfg.perturbation.support_hi()};
        json samples = json::array();
        for (const C2& s : cfg.perturbation.samples()) {
            samples.push_back({{{s.a11.real(), s.a11.imag()}, {s.a12.real(), s.a12.imag()}},
                               {{s.a21.real(), s.a21.imag()}, {s.a22.real(), s.a22.imag()}}});
        }
        pert["samples"] = samples;
    }
    j["perturbation"] = pert;

    j["window"] = {{"re_min", cfg.re_min},
                   {"re_max", cfg.re_max},
                   {"im_min", cfg.im_min},
                   {"im_max", cfg.im_max}};
    j["grid"] = {{"nx", cfg.nx}, {"ny", cfg.ny}};
    j["sampling"] = {{"phi_nodes", cfg.phi_nodes}, {"scan_points", cfg.scan_points}};
    j["tolerances"] = {{"ode_abs", cfg.tol.absolute}, {"ode_rel", cfg.tol.relative}};
    j["workers"] = cfg.workers;
    j["output"] = {{"directory", cfg.out_dir}, {"svg", cfg.svg}};
    j["probe"] = {{"lambda", {cfg.probe_lambda.real(), cfg.probe_lambda.imag()}}};
    j["greens"] = {{"x", cfg.greens_x}, {"t", cfg.greens_t}};
    j["asymptotics"] = {{"mu", cfg.asy_mu}, {"alphas", cfg.asy_alphas}, {"n_x", cfg.asy_nx}};
    j["edge_limits"] = {{"offsets", cfg.edge_offsets}};
    return j.dump(2) + "\n";
}

}  // namespace pdirac
