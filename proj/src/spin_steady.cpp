#include "nvsq/spin_steady.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "nvsq/errors.hpp"

namespace nvsq {

namespace {
const cplx I{0.0, 1.0};
} // namespace

SpinSteadyState spin_steady_closed_raw(const SystemParams& p) {
    const double d2 = 2.0 * p.delta - p.omega1; // (2 delta - omega1)
    const double o2 = p.omega0 * p.omega0;
    const double g0 = p.Gamma0, g1 = p.Gamma1;
    const double den = g0 * d2 * d2 + (3.0 * g1 + g0) * o2 + g0 * g1 * g1;

    SpinSteadyState s{};
    s.rho_00 = (g0 * d2 * d2 + (g1 + g0) * o2 + g0 * g1 * g1) / den;
    s.rho_p1p1 = g1 * o2 / den;
    s.rho_m1m1 = g1 * o2 / den;
    s.rho_m1p1 = g0 * o2 / den;
    s.rho_m10 = g0 * p.omega0 * (d2 - I * g1) / den;
    s.rho_p10 = s.rho_m10;

    const double u = p.delta - 0.5 * p.omega1;
    const double w = std::sqrt(u * u + 2.0 * o2);
    const double frac = (g0 * d2 * d2 + 8.0 * g0 * o2 + g0 * g1 * g1) / den;
    s.rho_bb = (g1 - g0) * o2 / den;
    if (w > 0) {
        s.rho_cc = 0.5 - 0.5 * s.rho_bb - 0.5 * (u / w) * frac;
        s.rho_aa = 0.5 - 0.5 * s.rho_bb + 0.5 * (u / w) * frac;
        s.rho_ac = (p.omega0 / std::sqrt(2.0)) / w * (g0 * g1 * g1) / den -
                   I * std::sqrt(2.0) * g0 * p.omega0 * g1 / den;
    } else {
        // fully degenerate drive-off corner: rho = |0><0|, theta = pi/4 frame
        s.rho_cc = 0.5;
        s.rho_aa = 0.5;
        s.rho_ac = 0.5;
    }
    return s;
}

SpinSteadyState spin_steady_closed(const SystemParams& p) {
    validate(p);
    return spin_steady_closed_raw(p);
}

std::optional<std::string> spin_regime_warning(const SystemParams& p) {
    if (std::max(std::abs(p.omega0), std::abs(p.omega1)) > p.Gamma1)
        return "microwave drives exceed Gamma1; the pumped-spin model assumes "
               "omega0, omega1 << Gamma1, omega_p";
    return std::nullopt;
}

Eigen::Matrix<double, 9, 9> bloch_generator(const SystemParams& p) {
    // layout: [r00, rpp, rmm, Re rp0, Re rm0, Re rmp, Im rp0, Im rm0, Im rmp]
    enum { R00, RPP, RMM, XP0, XM0, XMP, YP0, YM0, YMP };
    Eigen::Matrix<double, 9, 9> G = Eigen::Matrix<double, 9, 9>::Zero();
    const double D = p.delta, o0h = 0.5 * p.omega0, o1h = 0.5 * p.omega1;
    const double g0 = p.Gamma0, g1 = p.Gamma1;

    // populations
    G(RPP, RPP) = -g0;
    G(RPP, YP0) = -2.0 * o0h;
    G(RPP, YMP) = 2.0 * o1h;
    G(RMM, RMM) = -g0;
    G(RMM, YM0) = -2.0 * o0h;
    G(RMM, YMP) = -2.0 * o1h;
    G(R00, RPP) = g0;
    G(R00, RMM) = g0;
    G(R00, YP0) = 2.0 * o0h;
    G(R00, YM0) = 2.0 * o0h;

    // rho_{+1,0}
    G(XP0, XP0) = -0.5 * g1;
    G(XP0, YP0) = -D;
    G(XP0, YMP) = o0h;
    G(XP0, YM0) = o1h;
    G(YP0, XP0) = D;
    G(YP0, YP0) = -0.5 * g1;
    G(YP0, R00) = -o0h;
    G(YP0, RPP) = o0h;
    G(YP0, XMP) = o0h;
    G(YP0, XM0) = -o1h;

    // rho_{-1,0}
    G(XM0, XM0) = -0.5 * g1;
    G(XM0, YM0) = -D;
    G(XM0, YMP) = -o0h;
    G(XM0, YP0) = o1h;
    G(YM0, XM0) = D;
    G(YM0, YM0) = -0.5 * g1;
    G(YM0, R00) = -o0h;
    G(YM0, RMM) = o0h;
    G(YM0, XMP) = o0h;
    G(YM0, XP0) = -o1h;

    // rho_{-1,+1}
    G(XMP, XMP) = -g1;
    G(XMP, YP0) = -o0h;
    G(XMP, YM0) = -o0h;
    G(YMP, YMP) = -g1;
    G(YMP, XP0) = -o0h;
    G(YMP, XM0) = o0h;
    G(YMP, RPP) = -o1h;
    G(YMP, RMM) = o1h;
    return G;
}

SpinSteadyState spin_steady_numeric(const SystemParams& p) {
    validate(p);
    return spin_steady_numeric_raw(p);
}

SpinSteadyState spin_steady_numeric_raw(const SystemParams& p) {
    const Eigen::Matrix<double, 9, 9> G = bloch_generator(p);
    Eigen::JacobiSVD<Eigen::Matrix<double, 9, 9>> svd(G, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    const double tol = 1e-10 * std::max(smax, 1.0);
    int kernel = 0;
    for (int i = 0; i < 9; ++i)
        if (sv(i) < tol) ++kernel;
    if (kernel != 1)
        throw SingularGenerator("Bloch generator kernel dimension " +
                                std::to_string(kernel) + " (expected 1)");
    Eigen::Matrix<double, 9, 1> x = svd.matrixV().col(8);
    const double tr = x(0) + x(1) + x(2);
    if (std::abs(tr) < 1e-14)
        throw SingularGenerator("null vector has vanishing trace");
    x /= tr;

    const double res = (G * x).norm();
    if (res > 1e-10 * std::max(G.norm(), 1.0) * x.norm())
        throw NoConvergence("spin steady-state residual above tolerance");

    SpinSteadyState s{};
    s.rho_00 = x(0);
    s.rho_p1p1 = x(1);
    s.rho_m1m1 = x(2);
    s.rho_p10 = cplx(x(3), x(6));
    s.rho_m10 = cplx(x(4), x(7));
    s.rho_m1p1 = cplx(x(5), x(8));

    const DressedFrame f = dressed_frame(p);
    const Eigen::Matrix3cd rd = dressed_matrix(s, f);
    s.rho_aa = rd(0, 0);
    s.rho_bb = rd(1, 1);
    s.rho_cc = rd(2, 2);
    s.rho_ac = rd(0, 2);
    return s;
}

Eigen::Matrix3cd bare_matrix(const SpinSteadyState& s) {
    Eigen::Matrix3cd r;
    r(0, 0) = s.rho_00;
    r(1, 1) = s.rho_p1p1;
    r(2, 2) = s.rho_m1m1;
    r(1, 0) = s.rho_p10;
    r(0, 1) = std::conj(s.rho_p10);
    r(2, 0) = s.rho_m10;
    r(0, 2) = std::conj(s.rho_m10);
    r(2, 1) = s.rho_m1p1;
    r(1, 2) = std::conj(s.rho_m1p1);
    return r;
}

Eigen::Matrix3cd dressed_matrix(const SpinSteadyState& s, const DressedFrame& f) {
    const Eigen::Matrix3cd u = dressed_basis(f.theta);
    return u.adjoint() * bare_matrix(s) * u;
}

ExcitedFractions excited_fractions(const PumpParams& p, double rho_p1p1,
                                   double rho_m1m1) {
    validate(p);
    if (rho_p1p1 < 0 || rho_p1p1 > 1 || rho_m1m1 < 0 || rho_m1m1 > 1)
        throw std::invalid_argument("populations must lie in [0, 1]");
    const double gsum = p.gamma0_exc + p.gamma1_exc;
    const double den = gsum * gsum + p.omega_p * p.omega_p;
    ExcitedFractions e{};
    e.rho_E1E1 = p.omega_p * p.omega_p * rho_p1p1 / den;
    e.rho_E2E2 = p.omega_p * p.omega_p * rho_m1m1 / den;
    e.rho_E1p1 = -I * p.omega_p * gsum * rho_p1p1 / den;
    e.rho_E2m1 = -I * p.omega_p * gsum * rho_m1m1 / den;
    return e;
}

ApproxSpinPops spin_pops_approx(const DressedFrame& f, double Gamma0) {
    const double c2 = std::cos(2.0 * f.theta), s2 = std::sin(2.0 * f.theta);
    ApproxSpinPops a{};
    a.rho_cc = (1.0 + c2) * (1.0 + c2) / (2.0 * (1.0 + c2 * c2));
    a.rho_aa = (1.0 - c2) * (1.0 - c2) / (2.0 * (1.0 + c2 * c2));
    // sqrt(2(delta - omega1/2)^2 + 2 omega0^2) = omega_ac * sqrt(1 + cos^2 2th)
    a.rho_ac = -I * s2 / std::sqrt(1.0 + c2 * c2) * (0.5 * Gamma0) /
               (f.omega_ac * std::sqrt(1.0 + c2 * c2));
    return a;
}

} // namespace nvsq
