#pragma once

#include <map>
#include <string>
#include <vector>

#include "nvsq/moments.hpp"

namespace nvsq {

// Swept parameter names: omega0, omega1, g, n_th, gamma_m, Gamma0, Gamma1,
// delta, phi. Output names: n_ss, pair_ss (complex), var_x,
// var_x_minus_quarter, squeezing_db, a_minus, a_plus, delta_shift,
// s1 (complex), s2 (complex), omega_ab, omega_bc, omega_ac, theta, delta2,
// stability; two-mode runs add sum_occupancy, sum_pair (complex), var_u.
struct SweepAxis {
    std::string name;
    double min = 0.0, max = 0.0;
    int count = 0; // >= 2, linear grid
};

struct SweepSpec {
    SystemParams base;
    std::vector<SweepAxis> axes; // 1 or 2
    bool resonance_lock = true;  // re-solve delta at every grid point
    std::vector<std::string> outputs;
    bool two_mode = false;
    bool validate_with_oracle = false;
    int oracle_stride = 25;
    double oracle_tol = 1e-6;
};

void validate(const SweepSpec& spec); // throws ConfigError

// Row status: ok | unstable | approx-invalid | truncation-escalated |
// no-resonance | degenerate | oracle-mismatch. Non-ok rows (except
// truncation-escalated) carry NaN outputs.
struct SweepRow {
    std::vector<double> coords;
    std::vector<double> values; // aligned with SweepResult::columns
    std::string status;
};

struct SweepResult {
    std::vector<std::string> coord_names;
    std::vector<std::string> columns; // value column names (complex split _re/_im/_abs)
    std::vector<SweepRow> rows;       // grid order, row-major over axes
};

// Deterministic grid evaluation through the closed-form pipeline.
// workers <= 0 uses the hardware concurrency.
SweepResult run_sweep(const SweepSpec& spec, int workers = 0);

// Fig. 4-10 presets; caption parameters with documented default axis ranges.
SweepSpec figure_preset(const std::string& name); // throws UnknownFigure

std::string to_csv(const SweepResult& r);
std::string to_json(const SweepResult& r);

} // namespace nvsq
