#include "nvsq/params.hpp"

#include <cmath>
#include <stdexcept>

namespace nvsq {

void validate(const SystemParams& p) {
    if (!(p.omega_m > 0)) throw std::invalid_argument("omega_m must be > 0");
    if (p.gamma_m < 0) throw std::invalid_argument("gamma_m must be >= 0");
    if (p.n_th < 0) throw std::invalid_argument("n_th must be >= 0");
    if (!(p.Gamma0 > 0)) throw std::invalid_argument("Gamma0 must be > 0");
    if (p.Gamma1 < p.Gamma0) throw std::invalid_argument("Gamma1 must be >= Gamma0");
    if (p.g < 0) throw std::invalid_argument("g must be >= 0 (signs live in phases)");
    if (p.omega0 < 0) throw std::invalid_argument("omega0 must be >= 0");
    if (!std::isfinite(p.delta) || !std::isfinite(p.omega1) || !std::isfinite(p.phi))
        throw std::invalid_argument("non-finite parameter");
}

SystemParams normalized(const SystemParams& p) {
    validate(p);
    SystemParams q = p;
    const double w = p.omega_m;
    q.omega_m = 1.0;
    q.delta /= w;
    q.omega0 /= w;
    q.omega1 /= w;
    q.g /= w;
    q.gamma_m /= w;
    q.Gamma0 /= w;
    q.Gamma1 /= w;
    return q;
}

void validate(const PumpParams& p) {
    // omega_p == 0 is allowed as the pump-off limit
    if (!(p.omega_p >= 0) || !(p.gamma0_exc > 0) || !(p.gamma1_exc > 0))
        throw std::invalid_argument("pump parameters must be positive");
}

PumpRates pump_rates(const PumpParams& p) {
    validate(p);
    const double gsum = p.gamma0_exc + p.gamma1_exc;
    const double op2 = p.omega_p * p.omega_p;
    PumpRates r;
    r.Gamma0 = op2 * p.gamma0_exc / (gsum * gsum);
    r.Gamma1 = op2 / gsum;
    r.Gamma0_exact = op2 * p.gamma0_exc / (gsum * gsum + op2);
    return r;
}

std::optional<std::string> weak_pump_warning(const PumpParams& p) {
    const double gsum = p.gamma0_exc + p.gamma1_exc;
    if (p.omega_p > 0.3 * gsum)
        return "omega_p is not small against gamma0+gamma1; effective pump rates "
               "lose accuracy";
    return std::nullopt;
}

double thermal_occupation(double temperature, double omega_m) {
    if (!(temperature > 0) || !(omega_m > 0))
        throw std::invalid_argument("temperature and omega_m must be > 0");
    const double x = constants::hbar * omega_m / (constants::k_B * temperature);
    return 1.0 / std::expm1(x);
}

double coupling_from_gradient(double B0, double mass, double omega_m) {
    if (B0 < 0 || !(mass > 0) || !(omega_m > 0))
        throw std::invalid_argument("coupling_from_gradient needs B0 >= 0, mass > 0, omega_m > 0");
    const double x0 = std::sqrt(constants::hbar / (2.0 * mass * omega_m));
    return constants::g_lande * constants::mu_B * B0 * x0 / constants::hbar;
}

} // namespace nvsq
