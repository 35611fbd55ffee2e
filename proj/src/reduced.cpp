#include "nvsq/reduced.hpp"

#include <cmath>

#include "nvsq/errors.hpp"

namespace nvsq {

namespace {
const cplx I{0.0, 1.0};
const ModeMonomial kLower = {Ladder::Lower};
const ModeMonomial kRaise = {Ladder::Raise};
const ModeMonomial kNumber = {Ladder::Raise, Ladder::Lower};
} // namespace

KFactors k_factors(const DressedFrame& f, double Gamma1) {
    if (!(Gamma1 > 0)) throw std::invalid_argument("Gamma1 must be > 0");
    const double s = std::sin(f.theta), c = std::cos(f.theta);
    KFactors k;
    k.k1 = -I * f.delta1 + 0.5 * Gamma1 * (1.0 + s * s);
    k.k2 = I * f.delta2 + 0.5 * Gamma1 * (1.0 + c * c);
    k.k3 = 0.5 * Gamma1 * s * c;
    k.M = k.k1 * k.k2 - k.k3 * k.k3;
    return k;
}

ReducedCoefficients coefficients_exact(const DressedFrame& f, const SpinSteadyState& s,
                                       double Gamma1, double mtol) {
    const KFactors k = k_factors(f, Gamma1);
    const double scale = 0.25 * Gamma1 * Gamma1;
    if (std::abs(k.M) < mtol * scale)
        throw DegenerateM("slaving determinant M is degenerate");

    const double gs2 = std::norm(f.gs);
    const double gc2 = std::norm(f.gc);
    const double gsc = std::abs(f.gs * f.gc);
    const cplx paa = s.rho_aa, pbb = s.rho_bb, pcc = s.rho_cc;
    const cplx rac = s.rho_ac, rca = std::conj(s.rho_ac);
    const cplx k1M = k.k1 / k.M, k2M = k.k2 / k.M, k3M = k.k3 / k.M;

    ReducedCoefficients c;
    c.delta_shift = 2.0 * std::imag(gs2 * (k2M * pcc - k2M * pbb + k3M * rca) +
                                    gc2 * (k1M * paa - k1M * pbb + k3M * rac));
    c.a_minus = 2.0 * std::real(gs2 * (k2M * pcc + k3M * rca) + gc2 * k1M * pbb);
    c.a_plus = 2.0 * std::real(gc2 * (k1M * paa + k3M * rac) + gs2 * k2M * pbb);
    c.s1 = 2.0 * gsc * (k3M * paa + std::conj(k3M) * pbb + k2M * rac);
    c.s2 = 2.0 * gsc * (std::conj(k3M) * pcc + k3M * pbb + std::conj(k1M) * rac);
    return c;
}

ApproxCoefficients coefficients_approx(const DressedFrame& f, double Gamma0, double g) {
    if (std::abs(f.delta2) < 5.0 * Gamma0)
        throw ApproxInvalid("|delta2| < 5 Gamma0: first-order coefficients invalid");
    const double s = std::sin(f.theta), c = std::cos(f.theta);
    const double s2 = s * s;
    const double gs_abs = g * s, gc_abs = g * c;
    const double gsc = g * g * s * c;
    const ApproxSpinPops pops = spin_pops_approx(f, Gamma0);

    ApproxCoefficients a;
    a.pops = pops;
    a.c.a_minus = 4.0 * gs_abs * gs_abs * pops.rho_cc / (Gamma0 * (1.0 + s2));
    a.c.a_plus = 0.0;
    a.c.s1 = 2.0 * gsc * s * c * pops.rho_aa / (I * f.delta2 * (1.0 + s2)) +
             4.0 * gsc * pops.rho_ac / (Gamma0 * (1.0 + s2));
    a.c.s2 = 2.0 * gsc * s * c * pops.rho_cc / (-I * f.delta2 * (1.0 + s2));
    a.c.delta_shift = -2.0 * gc_abs * gc_abs * pops.rho_aa / f.delta2;
    return a;
}

namespace {

// The quadratic block of the reduced equation:
//   S1 (L^dag2 rho - L^dag rho L^dag)/w + S2 (rho L^dag2 - L^dag rho L^dag)/w + h.c.
// with weight w (2 for one mode, 4 for the two-mode superposition).
void append_pair_terms(GeneratorSpec& gen, const OperatorSpec& lower, cplx s1, cplx s2,
                       double w) {
    const OperatorSpec raise_ = spec_dagger(lower);
    const OperatorSpec raise2 = spec_mul(raise_, raise_);
    const OperatorSpec lower2 = spec_mul(lower, lower);
    const OperatorSpec id = spec_identity(gen.spin_dim, gen.n_modes);
    gen.quadratic.push_back({s1 / w, raise2, id});
    gen.quadratic.push_back({s2 / w, id, raise2});
    gen.quadratic.push_back({-(s1 + s2) / w, raise_, raise_});
    gen.quadratic.push_back({std::conj(s1) / w, id, lower2});
    gen.quadratic.push_back({std::conj(s2) / w, lower2, id});
    gen.quadratic.push_back({-std::conj(s1 + s2) / w, lower, lower});
}

} // namespace

GeneratorSpec reduced_generator_single(const ReducedCoefficients& c, double gamma_m,
                                       double n_th) {
    GeneratorSpec gen;
    gen.spin_dim = 1;
    gen.n_modes = 1;
    gen.hamiltonian = spec_mode(1, 1, 0, kNumber, 0.5 * c.delta_shift);

    const OperatorSpec d = spec_mode(1, 1, 0, kLower);
    const OperatorSpec dd = spec_mode(1, 1, 0, kRaise);
    gen.channels.push_back({d, c.a_minus});
    gen.channels.push_back({dd, c.a_plus});
    if (gamma_m > 0) {
        gen.channels.push_back({d, gamma_m * (n_th + 1.0)});
        if (n_th > 0) gen.channels.push_back({dd, gamma_m * n_th});
    }
    append_pair_terms(gen, d, c.s1, c.s2, 2.0);
    return gen;
}

GeneratorSpec reduced_generator_two_mode(const ReducedCoefficients& c, double gamma_m,
                                         double n_th, double phi) {
    GeneratorSpec gen;
    gen.spin_dim = 1;
    gen.n_modes = 2;

    // superposition mode, normalized so phi = pi/4 gives d1 + d2 exactly
    const double w1 = std::sqrt(2.0) * std::cos(phi);
    const double w2 = std::sqrt(2.0) * std::sin(phi);
    const OperatorSpec D = spec_add(spec_mode(1, 2, 0, kLower, w1),
                                    spec_mode(1, 2, 1, kLower, w2));
    const OperatorSpec Ddag = spec_dagger(D);

    gen.hamiltonian = spec_scale(spec_mul(Ddag, D), 0.25 * c.delta_shift);
    gen.channels.push_back({D, 0.5 * c.a_minus});
    gen.channels.push_back({Ddag, 0.5 * c.a_plus});
    for (int m = 0; m < 2; ++m) {
        if (gamma_m > 0) {
            gen.channels.push_back({spec_mode(1, 2, m, kLower), gamma_m * (n_th + 1.0)});
            if (n_th > 0)
                gen.channels.push_back({spec_mode(1, 2, m, kRaise), gamma_m * n_th});
        }
    }
    append_pair_terms(gen, D, c.s1, c.s2, 4.0);
    return gen;
}

} // namespace nvsq
