#include "nvsq/validate.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "nvsq/errors.hpp"
#include "nvsq/liouville.hpp"
#include "nvsq/model.hpp"
#include "nvsq/moments.hpp"

namespace nvsq {

namespace {

const cplx I{0.0, 1.0};

using Rng = std::mt19937_64;

double uni(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

SystemParams random_params(Rng& rng, bool drives_below_gamma1) {
    SystemParams p;
    p.omega_m = 1.0;
    p.Gamma0 = uni(rng, 0.05, 0.5);
    p.Gamma1 = p.Gamma0 * uni(rng, 1.0, 2.5);
    if (drives_below_gamma1) {
        p.omega0 = uni(rng, 0.0, p.Gamma1);
        p.omega1 = uni(rng, -p.Gamma1, p.Gamma1);
    } else {
        p.omega0 = uni(rng, 0.01, 1.4);
        p.omega1 = uni(rng, -0.9, 0.9);
    }
    p.delta = uni(rng, -2.0, 2.0);
    p.g = uni(rng, 0.0, 0.1);
    p.phi = uni(rng, 0.0, 6.28);
    p.gamma_m = uni(rng, 1e-7, 1e-4);
    p.n_th = uni(rng, 0.0, 2e3);
    return p;
}

ValidationFamily check_family(const std::string& name, double max_err, double tol,
                              const std::string& detail = {}) {
    return ValidationFamily{name, max_err <= tol, max_err, tol, detail};
}

ValidationFamily family_dressed_eigen(Rng& rng) {
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        SystemParams p = random_params(rng, false);
        const DressedFrame f = dressed_frame(p);
        const Eigen::Matrix3cd h = nv_hamiltonian(p);
        const Eigen::Matrix3cd u = dressed_basis(f.theta);
        const double scale = std::max(1.0, h.norm());
        const Eigen::Vector3d w(f.omega_a, f.omega_b, f.omega_c);
        for (int c = 0; c < 3; ++c)
            worst = std::max(worst,
                             (h * u.col(c) - w(c) * u.col(c)).norm() / scale);
    }
    return check_family("dressed-frame-eigenconsistency", worst, 1e-12);
}

ValidationFamily family_frame_identities(Rng& rng) {
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        SystemParams p = random_params(rng, false);
        const DressedFrame f = dressed_frame(p);
        worst = std::max(worst, std::abs(f.omega_ac - (f.omega_ab + f.omega_bc)));
        worst = std::max(worst, std::abs(f.delta2 - (f.delta0 - f.delta1)));
        worst = std::max(worst,
                         std::abs(std::norm(f.gs) + std::norm(f.gc) - p.g * p.g));
        SystemParams q = p;
        q.phi = uni(rng, 0.0, 6.28);
        const DressedFrame f2 = dressed_frame(q);
        worst = std::max(worst, std::abs(std::abs(f2.gs) - std::abs(f.gs)));
        worst = std::max(worst, std::abs(std::abs(f2.gc) - std::abs(f.gc)));
    }
    return check_family("frame-identities", worst, 1e-12);
}

ValidationFamily family_spin_closed_vs_numeric(Rng& rng, double fault) {
    double worst = 0.0;
    for (int k = 0; k < 300; ++k) {
        SystemParams p = random_params(rng, true);
        SpinSteadyState a = spin_steady_closed(p);
        const SpinSteadyState b = spin_steady_numeric(p);
        if (k == 0) a.rho_00 += fault;
        worst = std::max({worst, std::abs(a.rho_00 - b.rho_00),
                          std::abs(a.rho_p1p1 - b.rho_p1p1),
                          std::abs(a.rho_m1m1 - b.rho_m1m1),
                          std::abs(a.rho_m1p1 - b.rho_m1p1),
                          std::abs(a.rho_p10 - b.rho_p10),
                          std::abs(a.rho_m10 - b.rho_m10),
                          std::abs(a.rho_aa - b.rho_aa), std::abs(a.rho_bb - b.rho_bb),
                          std::abs(a.rho_cc - b.rho_cc),
                          std::abs(a.rho_ac - b.rho_ac)});
    }
    return check_family("spin-closed-vs-numeric", worst, 1e-8);
}

ValidationFamily family_spin_rotation(Rng& rng) {
    double worst = 0.0;
    for (int k = 0; k < 300; ++k) {
        SystemParams p = random_params(rng, false);
        const DressedFrame f = dressed_frame(p);
        const SpinSteadyState s = spin_steady_closed(p);
        const Eigen::Matrix3cd rd = dressed_matrix(s, f);
        worst = std::max({worst, std::abs(rd(0, 0) - s.rho_aa),
                          std::abs(rd(1, 1) - s.rho_bb), std::abs(rd(2, 2) - s.rho_cc),
                          std::abs(rd(0, 2) - s.rho_ac)});
    }
    return check_family("spin-dressed-rotation", worst, 1e-10);
}

ValidationFamily family_moment_fixed_point(Rng& rng) {
    double worst = 0.0;
    int used = 0;
    while (used < 300) {
        SystemParams p = random_params(rng, false);
        const DressedFrame f = dressed_frame(p);
        const SpinSteadyState s = spin_steady_closed(p);
        ReducedCoefficients c;
        try {
            c = coefficients_exact(f, s, p.Gamma1);
        } catch (const DegenerateM&) {
            continue;
        }
        if (!stability_check(c, p.gamma_m).stable) continue;
        const SteadyMoments m = steady_moments(c, p.gamma_m, p.n_th);
        MomentState st;
        st.occupancy = m.n_ss;
        st.pair = m.pair_ss;
        const MomentState r = moment_rhs(st, c, p.gamma_m, p.n_th);
        const double scale =
            std::max({1.0, std::abs(m.n_ss), std::abs(m.pair_ss)}) *
            std::max(1.0, p.gamma_m + c.a_minus + std::abs(c.a_plus));
        worst = std::max(worst, std::max(std::abs(r.occupancy), std::abs(r.pair)) / scale);
        ++used;
    }
    return check_family("moment-fixed-point", worst, 1e-12);
}

ValidationFamily family_two_mode_equality(Rng& rng) {
    double worst = 0.0;
    int used = 0;
    while (used < 300) {
        SystemParams p = random_params(rng, false);
        const DressedFrame f = dressed_frame(p);
        const SpinSteadyState s = spin_steady_closed(p);
        ReducedCoefficients c;
        try {
            c = coefficients_exact(f, s, p.Gamma1);
        } catch (const DegenerateM&) {
            continue;
        }
        if (!stability_check(c, p.gamma_m).stable) continue;
        const SteadyMoments m = steady_moments(c, p.gamma_m, p.n_th);
        const TwoModeMoments t = steady_moments_two_mode(c, p.gamma_m, p.n_th);
        const double vx = quadrature_variance(m.n_ss, m.pair_ss).var_x;
        const double vu = two_mode_variance(t.sum_occupancy, t.sum_pair);
        worst = std::max(worst, std::abs(vx - vu) / std::max(1.0, vx));
        ++used;
    }
    return check_family("two-mode-closed-equality", worst, 1e-10);
}

ValidationFamily family_resonance_lock(Rng& rng) {
    double worst = 0.0;
    for (int k = 0; k < 300; ++k) {
        const double o0 = uni(rng, 0.01, 1.4);
        const double o1 = uni(rng, -0.95, 0.95);
        SystemParams p;
        p.delta = detuning_for_resonance(1.0, o0, o1);
        p.omega0 = o0;
        p.omega1 = o1;
        worst = std::max(worst, std::abs(dressed_frame(p).omega_bc - 1.0));
    }
    return check_family("resonance-lock", worst, 1e-9);
}

ValidationFamily family_b_slaving_residual(Rng& rng) {
    const int N = 10;
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(N, N);
    for (int i = 0; i + 1 < N; ++i) d(i, i + 1) = std::sqrt(double(i + 1));
    const Eigen::MatrixXcd dd = d.adjoint();

    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        SystemParams p = random_params(rng, false);
        p.g = std::max(p.g, 0.01);
        const DressedFrame f = dressed_frame(p);
        const SpinSteadyState s = spin_steady_closed(p);
        const KFactors kf = k_factors(f, p.Gamma1);
        const double st = std::sin(f.theta), ct = std::cos(f.theta);

        Eigen::MatrixXcd rm = Eigen::MatrixXcd::Random(N, N);
        rm = (rm + rm.adjoint()).eval();
        rm /= rm.norm();

        const cplx gs_c = std::conj(f.gs), gc_c = std::conj(f.gc);
        const cplx pa = s.rho_aa, pb = s.rho_bb, pc = s.rho_cc;
        const cplx rac = s.rho_ac, rca = std::conj(s.rho_ac);

        const Eigen::MatrixXcd f1 =
            -I * gs_c * (pc * d * rm - pb * rm * d) - I * gc_c * rac * dd * rm;
        const Eigen::MatrixXcd f2 =
            -I * gc_c * (pa * dd * rm - pb * rm * dd) - I * gs_c * rca * d * rm;

        const Eigen::MatrixXcd x_bc =
            -I * gs_c * ((kf.k2 / kf.M) * (pc * d * rm - pb * rm * d) +
                         (kf.k3 / kf.M) * rca * d * rm) -
            I * gc_c * ((kf.k3 / kf.M) * (pa * dd * rm - pb * rm * dd) +
                        (kf.k2 / kf.M) * rac * dd * rm);
        const Eigen::MatrixXcd x_ba =
            -I * gc_c * ((kf.k1 / kf.M) * (pa * dd * rm - pb * rm * dd) +
                         (kf.k3 / kf.M) * rac * dd * rm) -
            I * gs_c * ((kf.k3 / kf.M) * (pc * d * rm - pb * rm * d) +
                        (kf.k1 / kf.M) * rca * d * rm);

        // steady-state residuals of the slaving equations
        const Eigen::MatrixXcd r1 = -kf.k1 * x_bc + kf.k3 * x_ba + f1;
        const Eigen::MatrixXcd r2 = -kf.k2 * x_ba + kf.k3 * x_bc + f2;
        const double scale = std::max({1.0, x_bc.norm(), x_ba.norm()});
        worst = std::max(worst, std::max(r1.norm(), r2.norm()) / scale);
        (void)st;
        (void)ct;
    }
    return check_family("b-slaving-residual", worst, 1e-10);
}

ValidationFamily family_fock_moment_oracle(Rng& rng) {
    double worst = 0.0;
    int used = 0;
    while (used < 8) {
        SystemParams p = random_params(rng, false);
        p.g = uni(rng, 0.02, 0.1);
        p.gamma_m = 1e-6;
        p.n_th = uni(rng, 0.0, 2e3);
        try {
            p.delta = detuning_for_resonance(1.0, p.omega0, p.omega1);
        } catch (const NoResonance&) {
            continue;
        }
        const DressedFrame f = dressed_frame(p);
        const SpinSteadyState s = spin_steady_closed(p);
        ReducedCoefficients c;
        try {
            c = coefficients_exact(f, s, p.Gamma1);
        } catch (const DegenerateM&) {
            continue;
        }
        if (!stability_check(c, p.gamma_m).stable) continue;
        const SteadyMoments m = steady_moments(c, p.gamma_m, p.n_th);
        if (m.n_ss < 0 || m.n_ss > 1.0) continue;

        HilbertSpace space;
        const Eigen::MatrixXcd rho = steady_state_escalating(
            reduced_generator_single(c, p.gamma_m, p.n_th), 32, &space);
        const cplx n_f =
            expectation(space, rho, spec_mode(1, 1, 0, {Ladder::Raise, Ladder::Lower}));
        const cplx p_f =
            expectation(space, rho, spec_mode(1, 1, 0, {Ladder::Lower, Ladder::Lower}));
        worst = std::max({worst, std::abs(n_f.real() - m.n_ss),
                          std::abs(p_f - m.pair_ss)});
        ++used;
    }
    return check_family("fock-moment-oracle", worst, 1e-6);
}

ValidationFamily family_elimination_convergence() {
    // documented operating point: omega0 = 0.4, omega1 = 0, resonance lock,
    // Gamma0 = Gamma1 = 0.25, n_th = 0.5, gamma_m = 1e-4
    SystemParams p;
    p.omega0 = 0.4;
    p.delta = detuning_for_resonance(1.0, p.omega0, 0.0);
    p.Gamma0 = p.Gamma1 = 0.25;
    p.gamma_m = 1e-4;
    p.n_th = 0.5;

    std::vector<double> errs;
    for (double g : {0.02, 0.01, 0.005}) {
        p.g = g;
        const DressedFrame f = dressed_frame(p);
        const SpinSteadyState s = spin_steady_closed(p);
        const ReducedCoefficients c = coefficients_exact(f, s, p.Gamma1);
        const SteadyMoments m = steady_moments(c, p.gamma_m, p.n_th);

        GeneratorSpec full;
        full.spin_dim = 3;
        full.n_modes = 1;
        full.hamiltonian = interaction_hamiltonian(f, p);
        full.channels = spin_dissipator_effective(p.Gamma0, p.Gamma1, 1);
        full.channels.push_back(
            {spec_mode(3, 1, 0, {Ladder::Lower}), p.gamma_m * (p.n_th + 1.0)});
        full.channels.push_back(
            {spec_mode(3, 1, 0, {Ladder::Raise}), p.gamma_m * p.n_th});

        HilbertSpace space;
        const Eigen::MatrixXcd rho = steady_state_escalating(full, 16, &space);
        const cplx n_f = expectation(
            space, rho, spec_mode(3, 1, 0, {Ladder::Raise, Ladder::Lower}));
        errs.push_back(std::abs(n_f.real() - m.n_ss) / std::abs(n_f.real()));
    }
    const bool monotone = errs[0] > errs[1] && errs[1] > errs[2];
    const bool small = errs[2] < 0.10;
    ValidationFamily fam;
    fam.name = "elimination-convergence";
    fam.passed = monotone && small;
    fam.max_error = errs[2];
    fam.tolerance = 0.10;
    fam.detail = "relative n_ss errors at g = {0.02, 0.01, 0.005}: " +
                 std::to_string(errs[0]) + ", " + std::to_string(errs[1]) + ", " +
                 std::to_string(errs[2]);
    return fam;
}

ValidationFamily family_two_mode_fock_oracle() {
    double worst = 0.0;
    const double omega0s[2] = {0.8, 1.0};
    for (double o0 : omega0s) {
        SystemParams p;
        p.omega0 = o0;
        p.delta = detuning_for_resonance(1.0, o0, 0.0);
        p.g = 0.06;
        p.gamma_m = 1e-6;
        p.n_th = 0.1;
        const DressedFrame f = dressed_frame(p);
        const SpinSteadyState s = spin_steady_closed(p);
        const ReducedCoefficients c = coefficients_exact(f, s, p.Gamma1);
        const TwoModeMoments t = steady_moments_two_mode(c, p.gamma_m, p.n_th);

        HilbertSpace space;
        space.spin_dim = 1;
        space.fock_dims = {8, 8};
        const Eigen::MatrixXcd rho =
            steady_state(assemble(space, reduced_generator_two_mode(c, p.gamma_m, p.n_th)));
        OperatorSpec D = spec_add(spec_mode(1, 2, 0, {Ladder::Lower}),
                                  spec_mode(1, 2, 1, {Ladder::Lower}));
        const cplx sum_n = expectation(space, rho, spec_mul(spec_dagger(D), D));
        const cplx sum_p = expectation(space, rho, spec_mul(D, D));
        worst = std::max({worst, std::abs(sum_n.real() - t.sum_occupancy),
                          std::abs(sum_p - t.sum_pair)});
    }
    return check_family("two-mode-fock-oracle", worst, 1e-4);
}

} // namespace

bool ValidationReport::all_passed() const {
    for (const auto& f : families)
        if (!f.passed) return false;
    return true;
}

std::string ValidationReport::to_json() const {
    std::string out = "{\"families\":[";
    for (size_t i = 0; i < families.size(); ++i) {
        const auto& f = families[i];
        if (i) out += ',';
        out += "{\"name\":\"" + f.name + "\",\"passed\":" +
               (f.passed ? "true" : "false") +
               ",\"max_error\":" + std::to_string(f.max_error) +
               ",\"tolerance\":" + std::to_string(f.tolerance) + ",\"detail\":\"" +
               f.detail + "\"}";
    }
    out += "],\"all_passed\":";
    out += all_passed() ? "true" : "false";
    out += "}";
    return out;
}

std::string ValidationReport::to_text() const {
    std::string out;
    for (const auto& f : families) {
        out += f.passed ? "PASS " : "FAIL ";
        out += f.name + "  max_error=" + std::to_string(f.max_error) +
               " tolerance=" + std::to_string(f.tolerance);
        if (!f.detail.empty()) out += "  (" + f.detail + ")";
        out += '\n';
    }
    return out;
}

ValidationReport run_validation(const ValidationOptions& opt) {
    if (opt.level != "quick" && opt.level != "full")
        throw ConfigError("validation level must be quick or full");
    Rng rng(opt.seed);
    ValidationReport rep;
    const double spin_fault =
        opt.fault_family == "spin-closed-vs-numeric" ? opt.fault : 0.0;

    rep.families.push_back(family_dressed_eigen(rng));
    rep.families.push_back(family_frame_identities(rng));
    rep.families.push_back(family_spin_closed_vs_numeric(rng, spin_fault));
    rep.families.push_back(family_spin_rotation(rng));
    rep.families.push_back(family_moment_fixed_point(rng));
    rep.families.push_back(family_two_mode_equality(rng));
    rep.families.push_back(family_resonance_lock(rng));
    rep.families.push_back(family_b_slaving_residual(rng));

    if (opt.level == "full") {
        rep.families.push_back(family_fock_moment_oracle(rng));
        rep.families.push_back(family_elimination_convergence());
        rep.families.push_back(family_two_mode_fock_oracle());
    }
    return rep;
}

} // namespace nvsq
