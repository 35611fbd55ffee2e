#include "nvsq/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include "nvsq/errors.hpp"
#include "nvsq/liouville.hpp"

namespace nvsq {

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::string> kAxisNames = {
    "omega0", "omega1", "g", "n_th", "gamma_m", "Gamma0", "Gamma1", "delta", "phi"};

const std::vector<std::string> kScalarOutputs = {
    "n_ss", "var_x", "var_x_minus_quarter", "squeezing_db", "a_minus", "a_plus",
    "delta_shift", "omega_ab", "omega_bc", "omega_ac", "theta", "delta2",
    "stability", "var_u", "sum_occupancy"};

const std::vector<std::string> kComplexOutputs = {"pair_ss", "s1", "s2", "sum_pair"};

bool is_complex_output(const std::string& name) {
    return std::find(kComplexOutputs.begin(), kComplexOutputs.end(), name) !=
           kComplexOutputs.end();
}

bool is_known_output(const std::string& name) {
    return is_complex_output(name) ||
           std::find(kScalarOutputs.begin(), kScalarOutputs.end(), name) !=
               kScalarOutputs.end();
}

void set_param(SystemParams& p, const std::string& name, double v) {
    if (name == "omega0") p.omega0 = v;
    else if (name == "omega1") p.omega1 = v;
    else if (name == "g") p.g = v;
    else if (name == "n_th") p.n_th = v;
    else if (name == "gamma_m") p.gamma_m = v;
    else if (name == "Gamma0") p.Gamma0 = v;
    else if (name == "Gamma1") p.Gamma1 = v;
    else if (name == "delta") p.delta = v;
    else if (name == "phi") p.phi = v;
    else throw ConfigError("unknown sweep axis: " + name);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct PointValues {
    std::map<std::string, double> scalars;
    std::map<std::string, cplx> complexes;
    std::string status = "ok";
};

PointValues evaluate_point(const SweepSpec& spec, SystemParams p) {
    PointValues out;
    if (spec.resonance_lock) {
        try {
            p.delta = detuning_for_resonance(p.omega_m, p.omega0, p.omega1);
        } catch (const NoResonance&) {
            out.status = "no-resonance";
            return out;
        }
    }
    const DressedFrame f = dressed_frame(p);
    out.scalars["omega_ab"] = f.omega_ab;
    out.scalars["omega_bc"] = f.omega_bc;
    out.scalars["omega_ac"] = f.omega_ac;
    out.scalars["theta"] = f.theta;
    out.scalars["delta2"] = f.delta2;

    const SpinSteadyState spin = spin_steady_closed(p);
    ReducedCoefficients c;
    try {
        c = coefficients_exact(f, spin, p.Gamma1);
    } catch (const DegenerateM&) {
        out.status = "degenerate";
        return out;
    }
    out.scalars["a_minus"] = c.a_minus;
    out.scalars["a_plus"] = c.a_plus;
    out.scalars["delta_shift"] = c.delta_shift;
    out.complexes["s1"] = c.s1;
    out.complexes["s2"] = c.s2;

    const StabilityReport st = stability_check(c, p.gamma_m);
    out.scalars["stability"] = st.stable ? 1.0 : 0.0;
    if (!st.stable) {
        out.status = "unstable";
        return out;
    }
    const SteadyMoments m = steady_moments(c, p.gamma_m, p.n_th);
    SqueezingReport rep;
    try {
        rep = quadrature_variance(m.n_ss, m.pair_ss);
    } catch (const NonPhysical&) {
        out.status = "unstable";
        return out;
    }
    out.scalars["n_ss"] = m.n_ss;
    out.complexes["pair_ss"] = m.pair_ss;
    out.scalars["var_x"] = rep.var_x;
    out.scalars["var_x_minus_quarter"] = rep.var_x - 0.25;
    out.scalars["squeezing_db"] = rep.squeezing_db;

    if (spec.two_mode) {
        const TwoModeMoments tm = steady_moments_two_mode(c, p.gamma_m, p.n_th);
        out.scalars["sum_occupancy"] = tm.sum_occupancy;
        out.complexes["sum_pair"] = tm.sum_pair;
        out.scalars["var_u"] = two_mode_variance(tm.sum_occupancy, tm.sum_pair);
    }
    return out;
}

void oracle_check(const SweepSpec& spec, const SystemParams& p, PointValues& vals) {
    if (vals.status != "ok") return;
    const double n_closed = vals.scalars.at("n_ss");
    if (n_closed > 2.0) return; // Fock oracle reserved for low-occupation points
    ReducedCoefficients c;
    c.a_minus = vals.scalars.at("a_minus");
    c.a_plus = vals.scalars.at("a_plus");
    c.delta_shift = vals.scalars.at("delta_shift");
    c.s1 = vals.complexes.at("s1");
    c.s2 = vals.complexes.at("s2");
    const GeneratorSpec gen = reduced_generator_single(c, p.gamma_m, p.n_th);
    HilbertSpace space;
    bool escalated = false;
    try {
        const Eigen::MatrixXcd rho =
            steady_state_escalating(gen, 32, &space, &escalated);
        const cplx n_f = expectation(
            space, rho, spec_mode(1, 1, 0, {Ladder::Raise, Ladder::Lower}));
        const cplx p_f = expectation(
            space, rho, spec_mode(1, 1, 0, {Ladder::Lower, Ladder::Lower}));
        const double dn = std::abs(n_f.real() - n_closed);
        const double dp = std::abs(p_f - vals.complexes.at("pair_ss"));
        if (dn > spec.oracle_tol || dp > spec.oracle_tol)
            vals.status = "oracle-mismatch";
        else if (escalated)
            vals.status = "truncation-escalated";
    } catch (const NumericalError&) {
        vals.status = "oracle-mismatch";
    }
}

} // namespace

void validate(const SweepSpec& spec) {
    if (spec.axes.empty() || spec.axes.size() > 2)
        throw ConfigError("sweep needs 1 or 2 axes");
    for (const auto& ax : spec.axes) {
        if (std::find(kAxisNames.begin(), kAxisNames.end(), ax.name) == kAxisNames.end())
            throw ConfigError("unknown sweep axis: " + ax.name);
        if (ax.count < 2) throw ConfigError("axis count must be >= 2");
        if (!(ax.max > ax.min)) throw ConfigError("axis grid must be increasing");
    }
    if (spec.axes.size() == 2 && spec.axes[0].name == spec.axes[1].name)
        throw ConfigError("duplicate sweep axis");
    if (spec.outputs.empty()) throw ConfigError("no outputs requested");
    for (const auto& o : spec.outputs)
        if (!is_known_output(o)) throw ConfigError("unknown output: " + o);
    if (spec.resonance_lock) {
        for (const auto& ax : spec.axes)
            if (ax.name == "delta")
                throw ConfigError("cannot sweep delta with resonance_lock");
    }
    validate(spec.base);
}

SweepResult run_sweep(const SweepSpec& spec, int workers) {
    validate(spec);

    SweepResult res;
    for (const auto& ax : spec.axes) res.coord_names.push_back(ax.name);
    for (const auto& o : spec.outputs) {
        if (is_complex_output(o)) {
            res.columns.push_back(o + "_re");
            res.columns.push_back(o + "_im");
            res.columns.push_back(o + "_abs");
        } else {
            res.columns.push_back(o);
        }
    }

    const int n0 = spec.axes[0].count;
    const int n1 = spec.axes.size() == 2 ? spec.axes[1].count : 1;
    const int total = n0 * n1;
    res.rows.resize(static_cast<size_t>(total));

    auto axis_value = [](const SweepAxis& ax, int i) {
        return ax.min + (ax.max - ax.min) * double(i) / double(ax.count - 1);
    };

    auto work = [&](int row) {
        const int i0 = row / n1, i1 = row % n1;
        SystemParams p = spec.base;
        SweepRow& r = res.rows[static_cast<size_t>(row)];
        r.coords.push_back(axis_value(spec.axes[0], i0));
        set_param(p, spec.axes[0].name, r.coords[0]);
        if (spec.axes.size() == 2) {
            r.coords.push_back(axis_value(spec.axes[1], i1));
            set_param(p, spec.axes[1].name, r.coords[1]);
        }
        PointValues vals = evaluate_point(spec, p);
        if (spec.validate_with_oracle && row % std::max(1, spec.oracle_stride) == 0)
            oracle_check(spec, p, vals);
        r.status = vals.status;
        const bool carry = vals.status == "ok" || vals.status == "truncation-escalated" ||
                           vals.status == "oracle-mismatch";
        for (const auto& o : spec.outputs) {
            if (is_complex_output(o)) {
                const auto it = vals.complexes.find(o);
                const bool have = carry && it != vals.complexes.end();
                const cplx v = have ? it->second : cplx(kNaN, kNaN);
                r.values.push_back(v.real());
                r.values.push_back(v.imag());
                r.values.push_back(have ? std::abs(v) : kNaN);
            } else {
                const auto it = vals.scalars.find(o);
                // frame quantities survive on unstable rows; steady-state ones do not
                const bool have =
                    it != vals.scalars.end() &&
                    (carry || o == "omega_ab" || o == "omega_bc" || o == "omega_ac" ||
                     o == "theta" || o == "delta2" || o == "stability" ||
                     o == "a_minus" || o == "a_plus" || o == "delta_shift");
                r.values.push_back(have ? it->second : kNaN);
            }
        }
    };

    int nw = workers > 0 ? workers
                         : static_cast<int>(std::thread::hardware_concurrency());
    nw = std::max(1, std::min(nw, total));
    if (nw == 1) {
        for (int row = 0; row < total; ++row) work(row);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(nw));
        for (int w = 0; w < nw; ++w)
            pool.emplace_back([&]() {
                for (int row = next.fetch_add(1); row < total; row = next.fetch_add(1))
                    work(row);
            });
        for (auto& th : pool) th.join();
    }
    return res;
}

SweepSpec figure_preset(const std::string& name) {
    SweepSpec s;
    s.base = SystemParams{};
    s.base.omega_m = 1.0;
    s.base.gamma_m = 1e-6; // Q = 10^6
    s.base.n_th = 1e3;
    s.base.g = 0.06;
    s.base.Gamma0 = 0.25;
    s.base.Gamma1 = 0.25;
    s.base.omega1 = 0.0;
    s.resonance_lock = true;

    // axis ranges are documented defaults read off the plot extents
    const SweepAxis omega0_axis{"omega0", 0.01, 1.4, 140};
    const SweepAxis omega0_grid{"omega0", 0.01, 1.4, 81};
    const SweepAxis omega1_grid{"omega1", -0.95, 0.95, 81};

    if (name == "fig4") {
        s.axes = {omega0_axis};
        s.outputs = {"n_ss"};
    } else if (name == "fig5") {
        s.axes = {omega0_axis};
        s.outputs = {"var_x"};
    } else if (name == "fig6") {
        s.axes = {omega0_axis};
        s.outputs = {"a_minus", "a_plus"};
    } else if (name == "fig7") {
        s.axes = {omega0_grid, omega1_grid};
        s.outputs = {"var_x_minus_quarter"};
    } else if (name == "fig8") {
        s.axes = {omega0_grid, SweepAxis{"n_th", 100.0, 10000.0, 81}};
        s.base.omega1 = -0.7;
        s.outputs = {"var_x_minus_quarter"};
    } else if (name == "fig9") {
        s.axes = {omega0_grid, SweepAxis{"g", 0.005, 0.12, 81}};
        s.base.omega1 = -0.7;
        s.outputs = {"var_x_minus_quarter"};
    } else if (name == "fig10") {
        s.axes = {omega0_grid, omega1_grid};
        s.outputs = {"omega_ab"};
    } else {
        throw UnknownFigure("unknown figure preset: " + name);
    }
    return s;
}

std::string to_csv(const SweepResult& r) {
    std::string out;
    for (size_t i = 0; i < r.coord_names.size(); ++i) {
        if (i) out += ',';
        out += r.coord_names[i];
    }
    for (const auto& c : r.columns) {
        out += ',';
        out += c;
    }
    out += ",status\n";
    for (const auto& row : r.rows) {
        for (size_t i = 0; i < row.coords.size(); ++i) {
            if (i) out += ',';
            out += fmt(row.coords[i]);
        }
        for (double v : row.values) {
            out += ',';
            out += fmt(v);
        }
        out += ',';
        out += row.status;
        out += '\n';
    }
    return out;
}

std::string to_json(const SweepResult& r) {
    std::string out = "[";
    for (size_t k = 0; k < r.rows.size(); ++k) {
        const auto& row = r.rows[k];
        out += k ? ",{" : "{";
        for (size_t i = 0; i < row.coords.size(); ++i) {
            out += '"' + r.coord_names[i] + "\":" + fmt(row.coords[i]) + ',';
        }
        for (size_t i = 0; i < row.values.size(); ++i) {
            const double v = row.values[i];
            out += '"' + r.columns[i] + "\":";
            out += std::isfinite(v) ? fmt(v) : std::string("null");
            out += ',';
        }
        out += "\"status\":\"" + row.status + "\"}";
    }
    out += "]";
    return out;
}

} // namespace nvsq
