#include "nvsq/moments.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "nvsq/errors.hpp"

namespace nvsq {

namespace {
const cplx I{0.0, 1.0};
} // namespace

MomentState moment_rhs(const MomentState& m, const ReducedCoefficients& c,
                       double gamma_m, double n_th) {
    const double geff = gamma_m + c.a_minus - c.a_plus;
    const cplx dS = c.s1 - c.s2;
    MomentState r;
    r.occupancy = -geff * m.occupancy + std::real(dS * std::conj(m.pair)) +
                  gamma_m * n_th + c.a_plus;
    r.pair = -(geff + I * c.delta_shift) * m.pair + dS * m.occupancy + c.s1;
    r.mean_d = -0.5 * (geff + I * c.delta_shift) * m.mean_d +
               0.5 * dS * std::conj(m.mean_d);
    return r;
}

StabilityReport stability_check(const ReducedCoefficients& c, double gamma_m) {
    const double geff = gamma_m + c.a_minus - c.a_plus;
    const cplx dS = c.s1 - c.s2;
    const cplx z = geff + I * c.delta_shift;

    Eigen::Matrix3cd quad;
    quad << -geff, 0.5 * std::conj(dS), 0.5 * dS,
            dS, -z, 0.0,
            std::conj(dS), 0.0, -std::conj(z);
    Eigen::Matrix2cd lin;
    lin << -0.5 * z, 0.5 * dS,
           0.5 * std::conj(dS), -0.5 * std::conj(z);

    StabilityReport rep{};
    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es3(quad, false);
    Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es2(lin, false);
    bool ok = true;
    for (int i = 0; i < 3; ++i) {
        rep.quad_eigs[i] = es3.eigenvalues()(i);
        ok = ok && (rep.quad_eigs[i].real() < 0.0);
    }
    for (int i = 0; i < 2; ++i) {
        rep.lin_eigs[i] = es2.eigenvalues()(i);
        ok = ok && (rep.lin_eigs[i].real() < 0.0);
    }
    rep.stable = ok;
    return rep;
}

SteadyMoments steady_moments(const ReducedCoefficients& c, double gamma_m,
                             double n_th) {
    if (!stability_check(c, gamma_m).stable)
        throw Unstable("moment system has a non-negative drift eigenvalue");
    const double geff = gamma_m + c.a_minus - c.a_plus;
    const cplx z = geff + I * c.delta_shift;
    const cplx dS = c.s1 - c.s2;

    SteadyMoments m;
    m.n_ss = (gamma_m * n_th + c.a_plus + std::real(std::conj(dS) * c.s1 / z)) /
             (geff - std::real(std::norm(dS) / z));
    m.pair_ss = (dS * m.n_ss + c.s1) / z;
    return m;
}

TwoModeMoments steady_moments_two_mode(const ReducedCoefficients& c, double gamma_m,
                                       double n_th) {
    if (!stability_check(c, gamma_m).stable)
        throw Unstable("moment system has a non-negative drift eigenvalue");
    const double geff = gamma_m + c.a_minus - c.a_plus;
    const cplx z = geff + I * c.delta_shift;
    const cplx dS = c.s1 - c.s2;

    TwoModeMoments m;
    m.sum_occupancy =
        (2.0 * gamma_m * n_th + 2.0 * c.a_plus + 2.0 * std::real(std::conj(dS) * c.s1 / z)) /
        (geff - std::real(std::norm(dS) / z));
    m.sum_pair = (dS * m.sum_occupancy + 2.0 * c.s1) / z;
    return m;
}

SqueezingReport quadrature_variance(double n_ss, cplx pair_ss, double tol) {
    SqueezingReport r{};
    r.n_ss = n_ss;
    r.pair_ss = pair_ss;
    r.var_x = 0.25 * (2.0 * n_ss + 1.0 - 2.0 * std::abs(pair_ss));
    if (r.var_x < -tol)
        throw NonPhysical("negative quadrature variance: coefficient set invalid");
    r.var_x = std::max(r.var_x, 0.0);
    r.squeezing_db = -10.0 * std::log10(4.0 * r.var_x);
    r.stable = true;
    r.quantum_squeezed = r.var_x < 0.25;
    return r;
}

double two_mode_variance(double sum_occupancy, cplx sum_pair) {
    return 0.25 * (sum_occupancy - std::abs(sum_pair) + 1.0);
}

double variance_approx(const ApproxCoefficients& ac, double gamma_m, double n_th) {
    const cplx z = gamma_m + ac.c.a_minus + I * ac.c.delta_shift;
    const double r = std::abs(ac.c.s1 / z);
    const double n_bar = gamma_m * n_th / (gamma_m + ac.c.a_minus);
    return 0.25 * (1.0 - 2.0 * r) + 0.5 * (1.0 - r) * n_bar;
}

} // namespace nvsq
