#pragma once

#include <complex>
#include <optional>
#include <string>

namespace nvsq {

using cplx = std::complex<double>;

namespace constants {
inline constexpr double hbar = 1.054571817e-34;  // J s
inline constexpr double k_B = 1.380649e-23;      // J/K
inline constexpr double mu_B = 9.2740100783e-24; // J/T
inline constexpr double g_lande = 2.0;
} // namespace constants

// All rates and frequencies are angular and, by convention, expressed in units
// of omega_m (so omega_m == 1 after normalized()). The formulas themselves are
// homogeneous in the unit, so any consistent unit works.
struct SystemParams {
    double omega_m = 1.0; // mechanical frequency (the reference unit)
    double delta = 0.0;   // microwave detuning
    double omega0 = 0.0;  // Rabi frequency of the 0 <-> +-1 drives (>= 0)
    double omega1 = 0.0;  // +1 <-> -1 coupling field, signed (negative = pi phase)
    double g = 0.0;       // spin-mechanical coupling (>= 0)
    double phi = 0.0;     // magnetic field angle [rad]
    double gamma_m = 0.0; // mechanical damping
    double n_th = 0.0;    // thermal occupation
    double Gamma0 = 0.25; // effective pump decay
    double Gamma1 = 0.25; // effective pump coherence-decay scale (>= Gamma0)
};

// Throws std::invalid_argument on violated invariants.
void validate(const SystemParams& p);

// Rescale so omega_m == 1.
SystemParams normalized(const SystemParams& p);

struct PumpParams {
    double omega_p;    // optical Rabi frequency
    double gamma0_exc; // excited-state decay to |0>
    double gamma1_exc; // excited-state decay to |+-1>
};

void validate(const PumpParams& p);

struct PumpRates {
    double Gamma0;       // approximate form (default used throughout)
    double Gamma1;
    double Gamma0_exact; // with the pump term kept in the denominator
};

PumpRates pump_rates(const PumpParams& p);

// Validity flag: the effective-rate picture assumes a pump much weaker than
// the excited-state decay. Returns a message when omega_p > 0.3*(g0+g1).
std::optional<std::string> weak_pump_warning(const PumpParams& p);

// Bose occupation at the mechanical frequency. SI inputs: K, rad/s.
double thermal_occupation(double temperature, double omega_m);

// g = g_l mu_B B0 x0 / hbar with x0 = sqrt(hbar / (2 m omega_m)).
// SI inputs: T/m, kg, rad/s; returns rad/s.
double coupling_from_gradient(double B0, double mass, double omega_m);

} // namespace nvsq
