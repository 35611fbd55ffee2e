#pragma once

#include <array>

#include "nvsq/reduced.hpp"

namespace nvsq {

struct MomentState {
    cplx mean_d{0.0};
    double occupancy = 0.0; // <d^dag d>
    cplx pair{0.0};         // <d^2>
};

// Time derivative of the first and second moments under the reduced generator:
//   d<n>/dt  = -(gm+A- -A+)<n> + (S1-S2)/2 <d^dag2> + c.c. + (gm n_th + A+)
//   d<d2>/dt = -(gm+A- -A+ + i delta)<d2> + (S1-S2)<n> + S1
//   d<d>/dt  = -((gm+A- -A+)/2 + i delta/2)<d> + (S1-S2)/2 <d^dag>
MomentState moment_rhs(const MomentState& m, const ReducedCoefficients& c,
                       double gamma_m, double n_th);

struct StabilityReport {
    bool stable;
    std::array<cplx, 3> quad_eigs; // (<n>, <d2>, <d^dag2>) drift matrix
    std::array<cplx, 2> lin_eigs;  // (<d>, <d^dag>) drift matrix
};

StabilityReport stability_check(const ReducedCoefficients& c, double gamma_m);

struct SteadyMoments {
    double n_ss;
    cplx pair_ss;
};

// Closed-form steady moments; throws Unstable when stability_check fails.
SteadyMoments steady_moments(const ReducedCoefficients& c, double gamma_m,
                             double n_th);

struct TwoModeMoments {
    double sum_occupancy; // <(d1^dag + d2^dag)(d1 + d2)>
    cplx sum_pair;        // <(d1 + d2)^2>
};

TwoModeMoments steady_moments_two_mode(const ReducedCoefficients& c, double gamma_m,
                                       double n_th);

struct SqueezingReport {
    double n_ss;
    cplx pair_ss;
    double var_x;        // optimally rotated quadrature variance
    double squeezing_db; // -10 log10(4 var_x)
    bool stable;
    bool quantum_squeezed; // var_x < 1/4
};

// var_x = (2 n + 1 - 2|<d^2>|)/4. Throws NonPhysical when var_x < -tol.
SqueezingReport quadrature_variance(double n_ss, cplx pair_ss, double tol = 1e-12);

// <Delta u^2> = (sum_occupancy - |sum_pair| + 1)/4
double two_mode_variance(double sum_occupancy, cplx sum_pair);

// Two-term approximation of the variance with <n> from the cooling balance.
double variance_approx(const ApproxCoefficients& ac, double gamma_m, double n_th);

} // namespace nvsq
