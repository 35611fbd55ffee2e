#pragma once

#include <Eigen/Dense>
#include <vector>

#include "nvsq/params.hpp"

namespace nvsq {

// Dressed frame of the driven NV triplet. Convention: theta in [0, pi/2]
// with sin(theta) >= 0, chosen so that omega_a >= omega_c. The degenerate
// drive-off corner (omega0 = 0, delta - omega1/2 > 0) lands exactly on
// theta = pi/2.
struct DressedFrame {
    double theta;
    double omega_a, omega_b, omega_c;    // eigenvalues
    double omega_ab, omega_bc, omega_ac; // transition frequencies
    cplx gs, gc;                         // dressed couplings
    double delta0, delta1, delta2;       // 2wm - wac, wm - wbc, wm - wab
};

DressedFrame dressed_frame(const SystemParams& p);

// Detuning that puts the b->c transition on mechanical resonance
// (omega_bc == omega_m). Throws NoResonance when the branch condition
// 2*omega_m + delta + 3*omega1/2 > 0 fails or the root check misses.
double detuning_for_resonance(double omega_m, double omega0, double omega1,
                              double tol = 1e-9);

// H_NV as a 3x3 matrix in the bare basis {|0>, |+1>, |-1>}.
Eigen::Matrix3cd nv_hamiltonian(const SystemParams& p);

// Dressed kets as bare-basis column vectors (columns: a, b, c).
Eigen::Matrix3cd dressed_basis(double theta);

// Rotating-wave validity: flags when max(|delta0|, |delta1|, Gamma0, Gamma1)
// exceeds omega_m.
std::vector<std::string> rwa_warnings(const DressedFrame& f, const SystemParams& p);

} // namespace nvsq
