#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "nvsq/errors.hpp"
#include "nvsq/sweep.hpp"
#include "nvsq/validate.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

int env_workers() {
    if (const char* w = std::getenv("NVSQ_WORKERS")) return std::atoi(w);
    return 0;
}

fs::path out_path(const std::string& name) {
    fs::path p(name);
    if (p.is_absolute()) return p;
    if (const char* dir = std::getenv("NVSQ_OUTDIR")) return fs::path(dir) / p;
    return p;
}

nvsq::SystemParams params_from_json(const json& j) {
    nvsq::SystemParams p;
    auto get = [&](const char* key, double& field) {
        if (j.contains(key)) field = j.at(key).get<double>();
    };
    get("omega_m", p.omega_m);
    get("delta", p.delta);
    get("omega0", p.omega0);
    get("omega1", p.omega1);
    get("g", p.g);
    get("phi", p.phi);
    get("gamma_m", p.gamma_m);
    get("n_th", p.n_th);
    get("Gamma0", p.Gamma0);
    get("Gamma1", p.Gamma1);
    return p;
}

struct ConfigFile {
    nvsq::SystemParams params;
    nvsq::SweepSpec sweep; // sweep.base == params
    bool has_sweep = false;
};

ConfigFile load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw nvsq::ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw nvsq::ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!j.contains("schema_version") || j.at("schema_version").get<int>() != 1)
        throw nvsq::ConfigError("config must declare schema_version = 1");

    ConfigFile cfg;
    if (!j.contains("params")) throw nvsq::ConfigError("config missing params block");
    cfg.params = params_from_json(j.at("params"));

    const std::string units = j.value("units", std::string("omega_m"));
    if (units == "si") {
        const json& pj = j.at("params");
        if (pj.contains("temperature_K"))
            cfg.params.n_th = nvsq::thermal_occupation(
                pj.at("temperature_K").get<double>(), cfg.params.omega_m);
        if (pj.contains("mass_kg") && pj.contains("B0_T_per_m"))
            cfg.params.g = nvsq::coupling_from_gradient(
                pj.at("B0_T_per_m").get<double>(), pj.at("mass_kg").get<double>(),
                cfg.params.omega_m);
        cfg.params = nvsq::normalized(cfg.params);
    } else if (units != "omega_m") {
        throw nvsq::ConfigError("units must be omega_m or si");
    }

    if (j.contains("sweep")) {
        cfg.has_sweep = true;
        const json& s = j.at("sweep");
        cfg.sweep.base = cfg.params;
        if (!s.contains("axes")) throw nvsq::ConfigError("sweep missing axes");
        for (const auto& a : s.at("axes")) {
            nvsq::SweepAxis ax;
            ax.name = a.at("name").get<std::string>();
            ax.min = a.at("min").get<double>();
            ax.max = a.at("max").get<double>();
            ax.count = a.at("count").get<int>();
            cfg.sweep.axes.push_back(ax);
        }
        cfg.sweep.resonance_lock = s.value("resonance_lock", true);
        cfg.sweep.two_mode = s.value("two_mode", false);
        cfg.sweep.validate_with_oracle = s.value("validate_with_oracle", false);
        cfg.sweep.oracle_stride = s.value("oracle_stride", 25);
        if (s.contains("outputs"))
            for (const auto& o : s.at("outputs"))
                cfg.sweep.outputs.push_back(o.get<std::string>());
    }
    return cfg;
}

void apply_param_overrides(nvsq::SystemParams& p,
                           const std::vector<std::string>& sets) {
    for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw nvsq::ConfigError("--param expects name=value: " + kv);
        const std::string key = kv.substr(0, eq);
        const double val = std::stod(kv.substr(eq + 1));
        if (key == "omega_m") p.omega_m = val;
        else if (key == "delta") p.delta = val;
        else if (key == "omega0") p.omega0 = val;
        else if (key == "omega1") p.omega1 = val;
        else if (key == "g") p.g = val;
        else if (key == "phi") p.phi = val;
        else if (key == "gamma_m") p.gamma_m = val;
        else if (key == "n_th") p.n_th = val;
        else if (key == "Gamma0") p.Gamma0 = val;
        else if (key == "Gamma1") p.Gamma1 = val;
        else throw nvsq::ConfigError("unknown parameter: " + key);
    }
}

void emit(const nvsq::SweepResult& res, const std::string& out, bool as_json) {
    const std::string payload = as_json ? nvsq::to_json(res) : nvsq::to_csv(res);
    if (out.empty()) {
        std::cout << payload;
        return;
    }
    const fs::path path = out_path(out);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw nvsq::ConfigError("cannot write " + path.string());
    f << payload;
    std::cerr << "wrote " << path.string() << " (" << res.rows.size() << " rows)\n";
}

json spin_to_json(const nvsq::SpinSteadyState& s) {
    auto c = [](nvsq::cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; };
    return json{{"bare",
                 {{"rho_00", c(s.rho_00)},
                  {"rho_p1p1", c(s.rho_p1p1)},
                  {"rho_m1m1", c(s.rho_m1m1)},
                  {"rho_m1p1", c(s.rho_m1p1)},
                  {"rho_m10", c(s.rho_m10)},
                  {"rho_p10", c(s.rho_p10)}}},
                {"dressed",
                 {{"rho_aa", c(s.rho_aa)},
                  {"rho_bb", c(s.rho_bb)},
                  {"rho_cc", c(s.rho_cc)},
                  {"rho_ac", c(s.rho_ac)}}}};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"steady-state spin-optomechanical squeezing toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_file, fig_name, level = "quick";
    bool as_json = false;
    int workers = env_workers();
    std::vector<std::string> param_sets;
    double res_omega0 = 0.0, res_omega1 = 0.0, res_omega_m = 1.0;

    auto add_common = [&](CLI::App* cmd, bool with_config) {
        if (with_config)
            cmd->add_option("--config", config_path, "JSON config file")->required();
        cmd->add_option("--param", param_sets, "override a parameter, name=value");
        cmd->add_option("--workers", workers, "worker threads (default: cores)");
    };

    CLI::App* sweep = app.add_subcommand("sweep", "run a parameter sweep");
    add_common(sweep, true);
    sweep->add_option("--out", out_file, "output file (default stdout)");
    sweep->add_flag("--json", as_json, "emit JSON instead of CSV");

    CLI::App* figure = app.add_subcommand("figure", "run a built-in figure preset");
    figure->add_option("name", fig_name, "fig4..fig10")->required();
    figure->add_option("--out", out_file, "output file (default stdout)");
    figure->add_flag("--json", as_json, "emit JSON instead of CSV");
    figure->add_option("--param", param_sets, "override a parameter, name=value");
    figure->add_option("--workers", workers, "worker threads (default: cores)");

    CLI::App* validate = app.add_subcommand("validate", "run the invariant suites");
    validate->add_option("--level", level, "quick|full")
        ->check(CLI::IsMember({"quick", "full"}));
    validate->add_flag("--json", as_json, "emit the JSON report only");

    CLI::App* spin = app.add_subcommand("spin-steady", "pumped spin steady state");
    add_common(spin, true);

    CLI::App* coeffs = app.add_subcommand("coeffs", "reduced-equation coefficients");
    add_common(coeffs, true);

    CLI::App* resonance =
        app.add_subcommand("resonance", "detuning that sets omega_bc = omega_m");
    resonance->add_option("--omega0", res_omega0)->required();
    resonance->add_option("--omega1", res_omega1)->required();
    resonance->add_option("--omega-m", res_omega_m);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed()) {
            ConfigFile cfg = load_config(config_path);
            if (!cfg.has_sweep) throw nvsq::ConfigError("config has no sweep block");
            apply_param_overrides(cfg.sweep.base, param_sets);
            emit(nvsq::run_sweep(cfg.sweep, workers), out_file, as_json);
        } else if (figure->parsed()) {
            nvsq::SweepSpec spec = nvsq::figure_preset(fig_name);
            apply_param_overrides(spec.base, param_sets);
            emit(nvsq::run_sweep(spec, workers), out_file, as_json);
        } else if (validate->parsed()) {
            nvsq::ValidationOptions opt;
            opt.level = level;
            const nvsq::ValidationReport rep = nvsq::run_validation(opt);
            if (as_json)
                std::cout << rep.to_json() << '\n';
            else
                std::cout << rep.to_text() << rep.to_json() << '\n';
            return rep.all_passed() ? 0 : 3;
        } else if (spin->parsed()) {
            ConfigFile cfg = load_config(config_path);
            apply_param_overrides(cfg.params, param_sets);
            const auto closed = nvsq::spin_steady_closed(cfg.params);
            const auto numeric = nvsq::spin_steady_numeric(cfg.params);
            json out{{"closed", spin_to_json(closed)},
                     {"numeric", spin_to_json(numeric)}};
            if (auto w = nvsq::spin_regime_warning(cfg.params)) out["warning"] = *w;
            std::cout << out.dump(2) << '\n';
        } else if (coeffs->parsed()) {
            ConfigFile cfg = load_config(config_path);
            apply_param_overrides(cfg.params, param_sets);
            const auto f = nvsq::dressed_frame(cfg.params);
            const auto s = nvsq::spin_steady_closed(cfg.params);
            const auto k = nvsq::k_factors(f, cfg.params.Gamma1);
            const auto c = nvsq::coefficients_exact(f, s, cfg.params.Gamma1);
            json out{{"frame",
                      {{"theta", f.theta},
                       {"omega_a", f.omega_a},
                       {"omega_b", f.omega_b},
                       {"omega_c", f.omega_c},
                       {"omega_ab", f.omega_ab},
                       {"omega_bc", f.omega_bc},
                       {"omega_ac", f.omega_ac},
                       {"delta0", f.delta0},
                       {"delta1", f.delta1},
                       {"delta2", f.delta2}}},
                     {"k_factors",
                      {{"k1_re", k.k1.real()},
                       {"k1_im", k.k1.imag()},
                       {"k2_re", k.k2.real()},
                       {"k2_im", k.k2.imag()},
                       {"k3_re", k.k3.real()},
                       {"M_re", k.M.real()},
                       {"M_im", k.M.imag()}}},
                     {"coefficients",
                      {{"delta_shift", c.delta_shift},
                       {"a_minus", c.a_minus},
                       {"a_plus", c.a_plus},
                       {"s1_re", c.s1.real()},
                       {"s1_im", c.s1.imag()},
                       {"s2_re", c.s2.real()},
                       {"s2_im", c.s2.imag()}}}};
            for (const auto& w : nvsq::rwa_warnings(f, cfg.params))
                out["warnings"].push_back(w);
            try {
                const auto a = nvsq::coefficients_approx(f, cfg.params.Gamma0,
                                                         cfg.params.g);
                out["approx"] = {{"a_minus", a.c.a_minus},
                                 {"delta_shift", a.c.delta_shift},
                                 {"s1_re", a.c.s1.real()},
                                 {"s1_im", a.c.s1.imag()},
                                 {"s2_re", a.c.s2.real()},
                                 {"s2_im", a.c.s2.imag()}};
            } catch (const nvsq::ApproxInvalid& e) {
                out["approx"] = {{"invalid", e.what()}};
            }
            std::cout << out.dump(2) << '\n';
        } else if (resonance->parsed()) {
            const double d =
                nvsq::detuning_for_resonance(res_omega_m, res_omega0, res_omega1);
            std::cout << json{{"delta", d}}.dump() << '\n';
        }
    } catch (const nvsq::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const nvsq::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const nvsq::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
    return 0;
}
