#pragma once

#include <numbers>

#include "nvsq/opspec.hpp"
#include "nvsq/spin_steady.hpp"

namespace nvsq {

// Adiabatic-elimination slaving factors:
//   k1 = -i delta1 + (Gamma1/2)(1 + sin^2 th)
//   k2 = +i delta2 + (Gamma1/2)(1 + cos^2 th)
//   k3 = (Gamma1/2) sin th cos th,  M = k1 k2 - k3^2
struct KFactors {
    cplx k1, k2, k3, M;
};

KFactors k_factors(const DressedFrame& f, double Gamma1);

struct ReducedCoefficients {
    double delta_shift; // mechanical frequency shift
    double a_minus;     // cooling rate
    double a_plus;      // heating rate
    cplx s1, s2;        // two-phonon coefficients
};

// Exact coefficients of the reduced master equation. The sign convention of
// s1/s2 follows the magnitude form |gs*gc|; the direct substitution of the
// slaved coherences carries the opposite sign, which is the mechanical parity
// image (d -> -d) and leaves every observable built here unchanged.
// Throws DegenerateM when |M| is below tol * (Gamma1/2)^2.
ReducedCoefficients coefficients_exact(const DressedFrame& f, const SpinSteadyState& s,
                                       double Gamma1, double mtol = 1e-12);

struct ApproxCoefficients {
    ReducedCoefficients c; // a_plus forced to 0
    ApproxSpinPops pops;
};

// First-order coefficients at delta1 = 0 and |delta2| >> Gamma0, g, taking
// Gamma1 ~= Gamma0. Throws ApproxInvalid when |delta2| < 5 Gamma0.
ApproxCoefficients coefficients_approx(const DressedFrame& f, double Gamma0, double g);

// Reduced mechanical generator: cooling/heating channels, frequency shift,
// the four two-phonon placements and the thermal bath.
GeneratorSpec reduced_generator_single(const ReducedCoefficients& c, double gamma_m,
                                       double n_th);

// Two-mode generator with the superposition mode cos(phi) d1 + sin(phi) d2
// (phi = pi/4 default) and independent thermal baths on both modes.
GeneratorSpec reduced_generator_two_mode(const ReducedCoefficients& c, double gamma_m,
                                         double n_th,
                                         double phi = std::numbers::pi / 4);

} // namespace nvsq
