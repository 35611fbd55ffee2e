#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "nvsq/dressed.hpp"
#include "nvsq/params.hpp"

namespace nvsq {

struct SpinSteadyState {
    // bare basis {|0>, |+1>, |-1>}
    cplx rho_00, rho_p1p1, rho_m1m1;
    cplx rho_m1p1, rho_m10, rho_p10;
    // dressed basis (rho_ab and rho_cb vanish identically for this drive)
    cplx rho_aa, rho_bb, rho_cc, rho_ac;
};

// Closed forms for the pumped ground-triplet steady state, bare and dressed.
SpinSteadyState spin_steady_closed(const SystemParams& p);

// Same formulas without parameter validation (used by symmetry tests that
// probe the algebraic structure outside the physical domain).
SpinSteadyState spin_steady_closed_raw(const SystemParams& p);

// Bloch generator on the 9 real degrees of freedom of the spin density matrix.
// Layout (fixed, reproducible):
//   x = [rho_00, rho_+1+1, rho_-1-1,
//        Re rho_+10, Re rho_-10, Re rho_-1+1,
//        Im rho_+10, Im rho_-10, Im rho_-1+1]
Eigen::Matrix<double, 9, 9> bloch_generator(const SystemParams& p);

// Null-space solve of the Bloch generator, trace-normalized. Throws
// SingularGenerator when the kernel is not one-dimensional.
SpinSteadyState spin_steady_numeric(const SystemParams& p);

// As above without parameter validation (degenerate-kernel testing).
SpinSteadyState spin_steady_numeric_raw(const SystemParams& p);

// Assemble the bare 3x3 density matrix / its dressed rotation.
Eigen::Matrix3cd bare_matrix(const SpinSteadyState& s);
Eigen::Matrix3cd dressed_matrix(const SpinSteadyState& s, const DressedFrame& f);

// Model-validity flag: the pumped-spin derivation assumes microwave drives
// much weaker than the pump-induced rates.
std::optional<std::string> spin_regime_warning(const SystemParams& p);

struct ExcitedFractions {
    double rho_E1E1, rho_E2E2;
    cplx rho_E1p1, rho_E2m1;
};

ExcitedFractions excited_fractions(const PumpParams& p, double rho_p1p1,
                                   double rho_m1m1);

// Small-Gamma approximate dressed populations and coherence; rho_ac scales
// linearly with Gamma0.
struct ApproxSpinPops {
    double rho_cc, rho_aa;
    cplx rho_ac;
};

ApproxSpinPops spin_pops_approx(const DressedFrame& f, double Gamma0);

} // namespace nvsq
