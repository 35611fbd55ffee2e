#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "nvsq/errors.hpp"
#include "nvsq/liouville.hpp"
#include "nvsq/model.hpp"
#include "nvsq/moments.hpp"
#include "nvsq/spin_steady.hpp"

using namespace nvsq;

namespace {
const cplx I{0.0, 1.0};

SystemParams resonant_params(double omega0, double omega1, double Gamma,
                             double g, double gamma_m, double n_th) {
    SystemParams p;
    p.omega0 = omega0;
    p.omega1 = omega1;
    p.delta = detuning_for_resonance(1.0, omega0, omega1);
    p.Gamma0 = p.Gamma1 = Gamma;
    p.g = g;
    p.gamma_m = gamma_m;
    p.n_th = n_th;
    return p;
}

// Eq. 5 interaction-picture model with the effective pump dissipator and the
// mechanical bath; the oracle used for elimination checks.
GeneratorSpec full_model(const SystemParams& p) {
    const DressedFrame f = dressed_frame(p);
    GeneratorSpec gen;
    gen.spin_dim = 3;
    gen.n_modes = 1;
    gen.hamiltonian = interaction_hamiltonian(f, p);
    gen.channels = spin_dissipator_effective(p.Gamma0, p.Gamma1, 1);
    gen.channels.push_back(
        {spec_mode(3, 1, 0, {Ladder::Lower}), p.gamma_m * (p.n_th + 1.0)});
    gen.channels.push_back({spec_mode(3, 1, 0, {Ladder::Raise}), p.gamma_m * p.n_th});
    return gen;
}

// Bare-frame model built from the full Hamiltonian (no rotating-wave step).
GeneratorSpec bare_model(const SystemParams& p) {
    GeneratorSpec gen;
    gen.spin_dim = 3;
    gen.n_modes = 1;
    gen.hamiltonian = bare_hamiltonian(p);
    gen.channels = spin_dissipator_effective(p.Gamma0, p.Gamma1, 1);
    gen.channels.push_back(
        {spec_mode(3, 1, 0, {Ladder::Lower}), p.gamma_m * (p.n_th + 1.0)});
    gen.channels.push_back({spec_mode(3, 1, 0, {Ladder::Raise}), p.gamma_m * p.n_th});
    return gen;
}

} // namespace

TEST_CASE("ladder operator algebra on the truncated space") {
    HilbertSpace space;
    space.fock_dims = {12};
    const OperatorSet ops = build_operators(space);
    const Eigen::MatrixXcd d = ops.d[0];
    const Eigen::MatrixXcd dd = ops.d_dag[0];
    const Eigen::MatrixXcd comm = d * dd - dd * d;
    for (int i = 0; i < 11; ++i) CHECK(comm(i, i) == doctest::Approx(1.0));
    CHECK(comm(11, 11) == doctest::Approx(1.0 - 12.0)); // truncation artifact
    const Eigen::MatrixXcd n = ops.number[0];
    for (int i = 0; i < 12; ++i) CHECK(n(i, i) == doctest::Approx(double(i)));
}

TEST_CASE("spin operator completeness") {
    HilbertSpace space;
    space.spin_dim = 3;
    space.fock_dims = {3};
    const OperatorSet ops = build_operators(space, 0.7);
    const Eigen::MatrixXcd sum =
        Eigen::MatrixXcd(ops.proj_a) + Eigen::MatrixXcd(ops.proj_b) +
        Eigen::MatrixXcd(ops.proj_c);
    CHECK((sum - Eigen::MatrixXcd::Identity(9, 9)).norm() < 1e-13);
    const Eigen::MatrixXcd sz = ops.Sz;
    CHECK((sz * sz * sz - sz).norm() < 1e-13); // spin-1 algebra on this component
}

TEST_CASE("effective spin dissipator reproduces the Bloch equations term by term") {
    CHECK_THROWS_AS((void)spin_dissipator_effective(0.3, 0.2), InvalidRates);
    CHECK(spin_dissipator_effective(0.25, 0.25, 0).size() == 2);

    const double G0 = 0.2, G1 = 0.5;
    HilbertSpace space;
    space.spin_dim = 3;
    space.fock_dims = {};
    GeneratorSpec gen;
    gen.spin_dim = 3;
    gen.n_modes = 0;
    gen.channels = spin_dissipator_effective(G0, G1, 0);
    const Superoperator L = assemble(space, gen);

    auto basis = [](int i, int j) {
        Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(3, 3);
        e(i, j) = 1.0;
        return e;
    };
    // populations: |+1><+1| decays at G0 into |0><0|
    Eigen::MatrixXcd out = L.apply(basis(1, 1));
    CHECK(out(1, 1).real() == doctest::Approx(-G0));
    CHECK(out(0, 0).real() == doctest::Approx(G0));
    // optical coherence decays at G1/2
    out = L.apply(basis(1, 0));
    CHECK(out(1, 0) == cplx(-G1 / 2, 0.0));
    // ground coherence decays at G1
    out = L.apply(basis(2, 1));
    CHECK(out(2, 1) == cplx(-G1, 0.0));
    // |0><0| is dark
    CHECK(L.apply(basis(0, 0)).norm() < 1e-14);
}

TEST_CASE("assemble basics") {
    HilbertSpace space;
    space.fock_dims = {6};

    SUBCASE("empty generator is the zero map") {
        GeneratorSpec gen;
        gen.n_modes = 1;
        CHECK(assemble(space, gen).mat.norm() == 0.0);
    }

    SUBCASE("single decay channel relaxes to vacuum") {
        GeneratorSpec gen;
        gen.n_modes = 1;
        gen.channels.push_back({spec_mode(1, 1, 0, {Ladder::Lower}), 1.0});
        const Eigen::MatrixXcd rho = steady_state(assemble(space, gen));
        CHECK(rho(0, 0).real() == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(std::abs(rho.norm() - 1.0) < 1e-10);
    }

    SUBCASE("trace preservation as the identity-functional row condition") {
        const SystemParams p = resonant_params(0.5, 0.0, 0.25, 0.06, 1e-6, 0.5);
        HilbertSpace sp;
        sp.spin_dim = 3;
        sp.fock_dims = {8};
        const Superoperator L = assemble(sp, full_model(p));
        const int dim = sp.dim();
        Eigen::RowVectorXcd tr = Eigen::RowVectorXcd::Zero(dim * dim);
        for (int k = 0; k < dim; ++k) tr(k * dim + k) = 1.0;
        CHECK((tr * L.mat).norm() < 1e-12 * std::max(1.0, L.norm_f));
    }

    SUBCASE("dimension mismatch is rejected") {
        GeneratorSpec gen;
        gen.n_modes = 2;
        gen.channels.push_back({spec_mode(1, 2, 0, {Ladder::Lower}), 1.0});
        CHECK_THROWS_AS((void)assemble(space, gen), DimensionMismatch);
    }
}

TEST_CASE("steady state of a thermal generator is Bose-Einstein") {
    const double nbar = 1.3;
    HilbertSpace space;
    space.fock_dims = {40};
    GeneratorSpec gen;
    gen.n_modes = 1;
    gen.channels.push_back({spec_mode(1, 1, 0, {Ladder::Lower}), 0.8 * (nbar + 1.0)});
    gen.channels.push_back({spec_mode(1, 1, 0, {Ladder::Raise}), 0.8 * nbar});
    const Eigen::MatrixXcd rho = steady_state(assemble(space, gen));
    const double x = nbar / (nbar + 1.0);
    for (int n = 0; n < 12; ++n)
        CHECK(rho(n, n).real() ==
              doctest::Approx((1.0 - x) * std::pow(x, n)).epsilon(1e-8));
    const cplx n_mean = expectation(space, rho,
                                    spec_mode(1, 1, 0, {Ladder::Raise, Ladder::Lower}));
    CHECK(n_mean.real() == doctest::Approx(nbar).epsilon(1e-9));
}

TEST_CASE("degenerate kernels are detected") {
    SUBCASE("zero generator") {
        HilbertSpace space;
        space.fock_dims = {4};
        GeneratorSpec gen;
        gen.n_modes = 1;
        CHECK_THROWS_AS((void)steady_state(assemble(space, gen)), NumericalError);
    }
    SUBCASE("dark level splits the kernel") {
        // decay 1 -> 0 with level 2 untouched: kernel spans two states
        HilbertSpace space;
        space.spin_dim = 3;
        space.fock_dims = {};
        Eigen::Matrix3cd jump = Eigen::Matrix3cd::Zero();
        jump(0, 1) = 1.0;
        GeneratorSpec gen;
        gen.spin_dim = 3;
        gen.n_modes = 0;
        gen.channels.push_back({spec_spin(jump, 0), 1.0});
        CHECK_THROWS_AS((void)steady_state(assemble(space, gen)), DegenerateKernel);
    }
}

TEST_CASE("full model: spin marginal and mechanical moments at the documented point") {
    // omega0 = 0.4, omega1 = 0, Gamma = 0.25, gamma_m = 1e-4, n_th = 0.5, g = 0.01.
    // The interaction-picture model keeps the pump dissipator in its native
    // frame; that approximation leaves the dressed coherence with an O(0.1)
    // offset while populations track the closed form at the 1e-3 level. The
    // mechanical moments carry a documented elimination tolerance.
    const SystemParams p = resonant_params(0.4, 0.0, 0.25, 0.01, 1e-4, 0.5);
    HilbertSpace space;
    const Eigen::MatrixXcd rho = steady_state_escalating(full_model(p), 16, &space);

    const DressedFrame f = dressed_frame(p);
    const SpinSteadyState s = spin_steady_closed(p);
    const Eigen::Matrix3cd marg = spin_marginal(space, rho);
    const Eigen::Matrix3cd u = dressed_basis(f.theta);
    const Eigen::Matrix3cd md = u.adjoint() * marg * u;
    CHECK(std::abs(md(0, 0).real() - s.rho_aa.real()) < 1e-3);
    CHECK(std::abs(md(1, 1).real() - s.rho_bb.real()) < 1e-3);
    CHECK(std::abs(md(2, 2).real() - s.rho_cc.real()) < 1e-3);
    CHECK(std::abs(md(0, 2) - s.rho_ac) < 0.15); // frame offset, documented

    const ReducedCoefficients c = coefficients_exact(f, s, p.Gamma1);
    const SteadyMoments m = steady_moments(c, p.gamma_m, p.n_th);
    const cplx n_f =
        expectation(space, rho, spec_mode(3, 1, 0, {Ladder::Raise, Ladder::Lower}));
    const cplx p_f =
        expectation(space, rho, spec_mode(3, 1, 0, {Ladder::Lower, Ladder::Lower}));
    CHECK(std::abs(n_f.real() - m.n_ss) / m.n_ss < 0.08);
    CHECK(std::abs(std::abs(p_f) - std::abs(m.pair_ss)) / std::abs(m.pair_ss) < 0.30);
}

TEST_CASE("reduced generator steady state matches the closed moments to 1e-6") {
    const SystemParams p = resonant_params(0.8, 0.0, 0.25, 0.06, 1e-6, 1e3);
    const DressedFrame f = dressed_frame(p);
    const ReducedCoefficients c = coefficients_exact(f, spin_steady_closed(p), p.Gamma1);
    const SteadyMoments m = steady_moments(c, p.gamma_m, p.n_th);
    HilbertSpace space;
    const Eigen::MatrixXcd rho = steady_state_escalating(
        reduced_generator_single(c, p.gamma_m, p.n_th), 32, &space);
    const cplx n_f =
        expectation(space, rho, spec_mode(1, 1, 0, {Ladder::Raise, Ladder::Lower}));
    const cplx p_f =
        expectation(space, rho, spec_mode(1, 1, 0, {Ladder::Lower, Ladder::Lower}));
    CHECK(std::abs(n_f.real() - m.n_ss) < 1e-6);
    CHECK(std::abs(p_f - m.pair_ss) < 1e-6);
}

TEST_CASE("evolve") {
    SUBCASE("zero generator keeps the state") {
        HilbertSpace space;
        space.fock_dims = {4};
        GeneratorSpec gen;
        gen.n_modes = 1;
        Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(4, 4);
        rho0(1, 1) = 1.0;
        const auto traj = evolve(rho0, assemble(space, gen), {0.0, 1.0, 5.0});
        CHECK((traj[2] - rho0).norm() < 1e-12);
    }

    SUBCASE("thermal relaxation follows the analytic law") {
        const double gamma = 0.7, nbar = 0.8;
        HilbertSpace space;
        space.fock_dims = {24};
        GeneratorSpec gen;
        gen.n_modes = 1;
        gen.channels.push_back(
            {spec_mode(1, 1, 0, {Ladder::Lower}), gamma * (nbar + 1.0)});
        gen.channels.push_back({spec_mode(1, 1, 0, {Ladder::Raise}), gamma * nbar});
        Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(24, 24);
        rho0(0, 0) = 1.0; // vacuum
        const std::vector<double> ts = {0.0, 0.5, 1.0, 2.0, 4.0};
        const auto traj = evolve(rho0, assemble(space, gen), ts);
        for (size_t k = 1; k < ts.size(); ++k) {
            const cplx n = expectation(
                space, traj[k], spec_mode(1, 1, 0, {Ladder::Raise, Ladder::Lower}));
            CHECK(std::abs(n.real() - nbar * (1.0 - std::exp(-gamma * ts[k]))) < 1e-6);
        }
    }

    SUBCASE("evolution under a pure Lindblad model stays physical") {
        const SystemParams p = resonant_params(0.5, 0.0, 0.25, 0.06, 1e-3, 0.3);
        HilbertSpace space;
        space.spin_dim = 3;
        space.fock_dims = {10};
        const Superoperator L = assemble(space, full_model(p));
        Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(30, 30);
        rho0(0, 0) = 1.0;
        const auto traj = evolve(rho0, L, {0.0, 5.0, 30.0});
        for (const auto& rho : traj) {
            CHECK(std::abs(rho.trace().real() - 1.0) < 1e-9);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
            CHECK(es.eigenvalues()(0) > -1e-8);
        }
    }
}

TEST_CASE("truncation check") {
    HilbertSpace space;
    space.fock_dims = {32};

    SUBCASE("vacuum always passes") {
        Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(32, 32);
        rho(0, 0) = 1.0;
        CHECK(truncation_check(space, rho));
    }

    SUBCASE("thermal nbar = 1: geometric-tail arithmetic fixes the dimension") {
        // top-two population of the truncated thermal state at x = 1/2:
        // N = 32 -> 6.98e-10 passes at 1e-9; N = 30 -> 2.79e-9 fails.
        auto thermal = [](int n) {
            Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n, n);
            double norm = 0.0;
            for (int k = 0; k < n; ++k) norm += std::pow(0.5, k);
            for (int k = 0; k < n; ++k) rho(k, k) = std::pow(0.5, k) / norm;
            return rho;
        };
        CHECK(truncation_check(space, thermal(32)));
        HilbertSpace s30;
        s30.fock_dims = {30};
        CHECK(!truncation_check(s30, thermal(30)));
    }

    SUBCASE("escalation raises the dimension for a hot bath") {
        GeneratorSpec gen;
        gen.n_modes = 1;
        gen.channels.push_back({spec_mode(1, 1, 0, {Ladder::Lower}), 1.0 * 3.0});
        gen.channels.push_back({spec_mode(1, 1, 0, {Ladder::Raise}), 1.0 * 2.0});
        HilbertSpace out;
        bool escalated = false;
        const Eigen::MatrixXcd rho =
            steady_state_escalating(gen, 8, &out, &escalated);
        CHECK(escalated);
        CHECK(out.fock_dims[0] > 8);
        CHECK(truncation_check(out, rho));

        // cap exceeded for an absurd bath
        GeneratorSpec hot;
        hot.n_modes = 1;
        hot.channels.push_back({spec_mode(1, 1, 0, {Ladder::Lower}), 101.0});
        hot.channels.push_back({spec_mode(1, 1, 0, {Ladder::Raise}), 100.0});
        CHECK_THROWS_AS(
            (void)steady_state_escalating(hot, 8, &out, nullptr, 1e-9, 64),
            TruncationCapExceeded);
    }
}

TEST_CASE("rwa validation: bare-frame and interaction-picture models approach "
          "each other as the rates shrink") {
    double prev = 1e9;
    struct Point {
        double Gamma, g;
        int fock;
    };
    for (const Point pt : {Point{0.25, 0.02, 20}, Point{0.125, 0.01, 18}}) {
        const SystemParams p = resonant_params(0.4, 0.0, pt.Gamma, pt.g, 1e-4, 0.5);
        HilbertSpace space;
        space.spin_dim = 3;
        space.fock_dims = {pt.fock};
        const Eigen::MatrixXcd rho_bare = steady_state(assemble(space, bare_model(p)));
        const Eigen::MatrixXcd rho_rwa = steady_state(assemble(space, full_model(p)));
        const OperatorSpec nop = spec_mode(3, 1, 0, {Ladder::Raise, Ladder::Lower});
        const double n_bare = expectation(space, rho_bare, nop).real();
        const double n_rwa = expectation(space, rho_rwa, nop).real();
        const double rel = std::abs(n_bare - n_rwa) / std::abs(n_bare);
        CHECK(rel < prev);
        prev = rel;
    }
    CHECK(prev < 0.05);
}

TEST_CASE("hermiticity is preserved by the non-Lindblad pair terms") {
    const SystemParams p = resonant_params(0.8, 0.0, 0.25, 0.06, 1e-6, 0.5);
    const ReducedCoefficients c =
        coefficients_exact(dressed_frame(p), spin_steady_closed(p), p.Gamma1);
    HilbertSpace space;
    space.fock_dims = {10};
    GeneratorSpec pair_only;
    pair_only.n_modes = 1;
    GeneratorSpec gen = reduced_generator_single(c, p.gamma_m, p.n_th);
    pair_only.quadratic = gen.quadratic;
    const Superoperator L = assemble(space, pair_only);
    std::mt19937_64 rng(8);
    std::normal_distribution<double> gauss;
    for (int k = 0; k < 10; ++k) {
        Eigen::MatrixXcd a(10, 10);
        for (int i = 0; i < 10; ++i)
            for (int j = 0; j < 10; ++j) a(i, j) = cplx(gauss(rng), gauss(rng));
        const Eigen::MatrixXcd h = 0.5 * (a + a.adjoint());
        const Eigen::MatrixXcd out = L.apply(h);
        CHECK((out - out.adjoint()).norm() < 1e-12 * std::max(1.0, out.norm()));
        CHECK(std::abs(out.trace()) < 1e-12);
    }
}

TEST_CASE("elimination convergence in g at the documented point") {
    // Gamma0 = Gamma1 = 0.25, delta1 = 0, n_th = 0.5; omega0 = 0.4 and
    // gamma_m = 1e-4 keep the pair channel subdominant so the Born-Markov
    // limit is what the comparison probes.
    std::vector<double> errs;
    for (double g : {0.02, 0.01, 0.005}) {
        const SystemParams p = resonant_params(0.4, 0.0, 0.25, g, 1e-4, 0.5);
        const DressedFrame f = dressed_frame(p);
        const ReducedCoefficients c =
            coefficients_exact(f, spin_steady_closed(p), p.Gamma1);
        const SteadyMoments m = steady_moments(c, p.gamma_m, p.n_th);
        HilbertSpace space;
        const Eigen::MatrixXcd rho = steady_state_escalating(full_model(p), 16, &space);
        const double n_full =
            expectation(space, rho, spec_mode(3, 1, 0, {Ladder::Raise, Ladder::Lower}))
                .real();
        errs.push_back(std::abs(n_full - m.n_ss) / n_full);
    }
    CHECK(errs[0] > errs[1]);
    CHECK(errs[1] > errs[2]);
    CHECK(errs[2] < 0.10);
}
