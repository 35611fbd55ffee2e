#include "nvsq/dressed.hpp"

#include <cmath>
#include <numbers>

#include "nvsq/errors.hpp"

namespace nvsq {

namespace {
constexpr double pi = std::numbers::pi;
const cplx I{0.0, 1.0};
} // namespace

DressedFrame dressed_frame(const SystemParams& p) {
    validate(p);
    DressedFrame f{};
    const double u = p.delta - 0.5 * p.omega1; // tan(2 theta) = -sqrt(2) w0 / u
    const double disc = std::sqrt(u * u + 2.0 * p.omega0 * p.omega0);
    f.omega_a = 0.5 * (-u + disc);
    f.omega_c = 0.5 * (-u - disc);
    f.omega_b = -p.delta - 0.5 * p.omega1;

    // |a> = sin th |0> + cos th |+>, eigenvector relation gives
    // tan th = (w0/sqrt2) / omega_a; omega_a >= 0 always.
    if (p.omega0 > 0) {
        f.theta = std::atan2(p.omega0 / std::sqrt(2.0), f.omega_a);
    } else {
        f.theta = (u < 0) ? 0.0 : (u > 0 ? 0.5 * pi : 0.25 * pi);
    }

    f.omega_ab = f.omega_a - f.omega_b;
    f.omega_bc = f.omega_b - f.omega_c;
    f.omega_ac = f.omega_a - f.omega_c;
    f.delta0 = 2.0 * p.omega_m - f.omega_ac;
    f.delta1 = p.omega_m - f.omega_bc;
    f.delta2 = p.omega_m - f.omega_ab;

    const cplx phase = std::exp(I * p.phi);
    f.gs = -p.g * phase * std::sin(f.theta);
    f.gc = p.g * phase * std::cos(f.theta);
    return f;
}

double detuning_for_resonance(double omega_m, double omega0, double omega1,
                              double tol) {
    if (omega_m + omega1 == 0.0)
        throw NoResonance("omega_m + omega1 == 0: resonance condition is singular");
    const double delta = (omega0 * omega0 - 2.0 * omega_m * omega_m -
                          omega1 * omega1 - 3.0 * omega_m * omega1) /
                         (2.0 * (omega_m + omega1));
    if (!(2.0 * omega_m + delta + 1.5 * omega1 > 0))
        throw NoResonance("branch condition 2 omega_m + delta + 3 omega1/2 > 0 failed");
    SystemParams p;
    p.omega_m = omega_m;
    p.delta = delta;
    p.omega0 = omega0;
    p.omega1 = omega1;
    const DressedFrame f = dressed_frame(p);
    if (std::abs(f.omega_bc - omega_m) > tol * omega_m)
        throw NoResonance("resonance root check failed");
    return delta;
}

Eigen::Matrix3cd nv_hamiltonian(const SystemParams& p) {
    Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
    const double half0 = 0.5 * p.omega0;
    const double half1 = 0.5 * p.omega1;
    h(0, 1) = half0;
    h(0, 2) = half0;
    h(1, 0) = half0;
    h(2, 0) = half0;
    h(1, 1) = -p.delta;
    h(2, 2) = -p.delta;
    h(1, 2) = half1;
    h(2, 1) = half1;
    return h;
}

Eigen::Matrix3cd dressed_basis(double theta) {
    const double s = std::sin(theta), c = std::cos(theta);
    const double r = 1.0 / std::sqrt(2.0);
    Eigen::Matrix3cd u;
    // columns: |a>, |b>, |c> on {|0>, |+1>, |-1>}
    u << s, 0.0, c,
         c * r, r, -s * r,
         c * r, -r, -s * r;
    return u;
}

std::vector<std::string> rwa_warnings(const DressedFrame& f, const SystemParams& p) {
    std::vector<std::string> w;
    const double worst = std::max({std::abs(f.delta0), std::abs(f.delta1),
                                   p.Gamma0, p.Gamma1});
    if (worst > p.omega_m)
        w.push_back("rotating-wave approximation marginal: max(|delta0|, |delta1|, "
                    "Gamma0, Gamma1) exceeds omega_m");
    return w;
}

} // namespace nvsq
