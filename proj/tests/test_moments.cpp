#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nvsq/errors.hpp"
#include "nvsq/liouville.hpp"
#include "nvsq/moments.hpp"

using namespace nvsq;

namespace {
const cplx I{0.0, 1.0};

SystemParams fig_params(double omega0, double omega1 = 0.0) {
    SystemParams p;
    p.omega0 = omega0;
    p.omega1 = omega1;
    p.delta = detuning_for_resonance(1.0, omega0, omega1);
    p.Gamma0 = p.Gamma1 = 0.25;
    p.g = 0.06;
    p.gamma_m = 1e-6;
    p.n_th = 1e3;
    return p;
}

ReducedCoefficients coeffs_at(const SystemParams& p) {
    return coefficients_exact(dressed_frame(p), spin_steady_closed(p), p.Gamma1);
}

} // namespace

TEST_CASE("moment rhs: bare thermal relaxation") {
    ReducedCoefficients c{};
    MomentState m;
    m.occupancy = 7.0;
    m.pair = cplx(0.2, -0.1);
    const MomentState r = moment_rhs(m, c, 0.5, 3.0);
    CHECK(r.occupancy == doctest::Approx(-0.5 * (7.0 - 3.0)).epsilon(1e-14));
    CHECK(std::abs(r.pair - (-0.5) * m.pair) < 1e-14);
}

TEST_CASE("steady moments zero the rhs") {
    for (double omega0 : {0.3, 0.6, 0.9, 1.2}) {
        const SystemParams p = fig_params(omega0);
        const ReducedCoefficients c = coeffs_at(p);
        if (!stability_check(c, p.gamma_m).stable) continue;
        const SteadyMoments m = steady_moments(c, p.gamma_m, p.n_th);
        MomentState st;
        st.occupancy = m.n_ss;
        st.pair = m.pair_ss;
        const MomentState r = moment_rhs(st, c, p.gamma_m, p.n_th);
        const double scale = std::max(1.0, m.n_ss) *
                             std::max(1.0, p.gamma_m + c.a_minus + std::abs(c.a_plus));
        CHECK(std::abs(r.occupancy) / scale < 1e-12);
        CHECK(std::abs(r.pair) / scale < 1e-12);
        CHECK(std::abs(r.mean_d) < 1e-14);
    }
}

TEST_CASE("generator-trace oracle for the moment equations") {
    // On a state supported away from the truncation edge the quadratic
    // generator closes exactly on the first and second moments.
    const SystemParams p = fig_params(0.8);
    const ReducedCoefficients c = coeffs_at(p);
    const double gamma_m = 1e-3, n_th = 0.7;

    const int n = 24, support = 16;
    HilbertSpace space;
    space.fock_dims = {n};
    const Superoperator L = assemble(space, reduced_generator_single(c, gamma_m, n_th));

    std::mt19937_64 rng(41);
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 5; ++trial) {
        Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
        for (int i = 0; i < support; ++i)
            for (int j = 0; j < support; ++j) a(i, j) = cplx(gauss(rng), gauss(rng));
        Eigen::MatrixXcd rho = a * a.adjoint();
        rho /= rho.trace().real();

        MomentState m;
        m.mean_d =
            expectation(space, rho, spec_mode(1, 1, 0, {Ladder::Lower}));
        m.occupancy =
            expectation(space, rho, spec_mode(1, 1, 0, {Ladder::Raise, Ladder::Lower}))
                .real();
        m.pair =
            expectation(space, rho, spec_mode(1, 1, 0, {Ladder::Lower, Ladder::Lower}));

        const MomentState pred = moment_rhs(m, c, gamma_m, n_th);
        const Eigen::MatrixXcd drho = L.apply(rho);
        const cplx dn = expectation(
            space, drho, spec_mode(1, 1, 0, {Ladder::Raise, Ladder::Lower}));
        const cplx dp = expectation(
            space, drho, spec_mode(1, 1, 0, {Ladder::Lower, Ladder::Lower}));
        const cplx dd = expectation(space, drho, spec_mode(1, 1, 0, {Ladder::Lower}));
        CHECK(std::abs(dn.real() - pred.occupancy) < 1e-10);
        CHECK(std::abs(dp - pred.pair) < 1e-10);
        CHECK(std::abs(dd - pred.mean_d) < 1e-10);
    }
}

TEST_CASE("steady moments closed forms") {
    SUBCASE("pure cooling balance") {
        ReducedCoefficients c{};
        c.a_minus = 2e-3;
        const SteadyMoments m = steady_moments(c, 1e-6, 1e3);
        CHECK(m.n_ss == doctest::Approx(1e-6 * 1e3 / (1e-6 + 2e-3)).epsilon(1e-12));
        CHECK(std::abs(m.pair_ss) < 1e-15);
    }
    SUBCASE("no coupling relaxes to the bath") {
        ReducedCoefficients c{};
        const SteadyMoments m = steady_moments(c, 1e-6, 42.0);
        CHECK(m.n_ss == doctest::Approx(42.0).epsilon(1e-12));
    }
    SUBCASE("ground-state cooling at the figure operating point") {
        double best = 1e9;
        for (int i = 0; i < 140; ++i) {
            const double omega0 = 0.01 + (1.4 - 0.01) * i / 139.0;
            const SystemParams p = fig_params(omega0);
            const ReducedCoefficients c = coeffs_at(p);
            if (!stability_check(c, p.gamma_m).stable) continue;
            best = std::min(best, steady_moments(c, p.gamma_m, p.n_th).n_ss);
        }
        CHECK(best < 1.0);
        CHECK(best > 0.0);
    }
}

TEST_CASE("two-mode steady moments") {
    SUBCASE("no coupling") {
        ReducedCoefficients c{};
        const TwoModeMoments t = steady_moments_two_mode(c, 1e-6, 5.0);
        CHECK(t.sum_occupancy == doctest::Approx(10.0).epsilon(1e-12));
        CHECK(std::abs(t.sum_pair) < 1e-15);
    }
    SUBCASE("sum occupancy doubles the single-mode value") {
        const SystemParams p = fig_params(0.8);
        const ReducedCoefficients c = coeffs_at(p);
        const SteadyMoments m = steady_moments(c, p.gamma_m, p.n_th);
        const TwoModeMoments t = steady_moments_two_mode(c, p.gamma_m, p.n_th);
        CHECK(t.sum_occupancy == doctest::Approx(2.0 * m.n_ss).epsilon(1e-12));
        CHECK(std::abs(t.sum_pair - 2.0 * m.pair_ss) < 1e-12);
    }
    SUBCASE("ODE-integration oracle in the physical mode variables") {
        SystemParams p = fig_params(0.8);
        p.n_th = 0.5;
        const ReducedCoefficients c = coeffs_at(p);
        const TwoModeMoments target = steady_moments_two_mode(c, p.gamma_m, p.n_th);

        // moment system of the two-mode generator: n1, n2, c12 = <d1^dag d2>,
        // p1, p2, q = <d1 d2>, derived independently from the master equation
        const double gm = p.gamma_m, nth = p.n_th;
        const double Am = c.a_minus, Ap = c.a_plus, dl = c.delta_shift;
        const cplx S1 = c.s1, S2 = c.s2, dS = S1 - S2;
        struct State {
            double n1, n2;
            cplx c12, p1, p2, q;
        };
        auto rhs = [&](const State& s) {
            State d;
            const double sym = s.n1 + s.n2 + 2.0 * std::real(s.c12);
            d.n1 = -0.25 * Am * (2 * s.n1 + 2 * std::real(s.c12)) +
                   0.25 * Ap * (2 * s.n1 + 2 + 2 * std::real(s.c12)) +
                   0.5 * dl * std::imag(s.c12) +
                   0.25 * std::real(dS * std::conj(s.p1 + s.q)) * 2.0 -
                   gm * (s.n1 - nth);
            d.n2 = -0.25 * Am * (2 * s.n2 + 2 * std::real(s.c12)) +
                   0.25 * Ap * (2 * s.n2 + 2 + 2 * std::real(s.c12)) -
                   0.5 * dl * std::imag(s.c12) +
                   0.25 * std::real(dS * std::conj(s.p2 + s.q)) * 2.0 -
                   gm * (s.n2 - nth);
            d.c12 = -0.25 * Am * (s.n1 + s.n2 + 2.0 * s.c12) +
                    0.25 * Ap * (s.n1 + s.n2 + 2.0 + 2.0 * s.c12) -
                    0.25 * I * dl * (s.n1 - s.n2) +
                    0.25 * dS * std::conj(s.p1 + s.q) +
                    0.25 * std::conj(dS) * (s.p2 + s.q) - gm * s.c12;
            d.p1 = 0.5 * (-Am + Ap - I * dl) * (s.p1 + s.q) +
                   0.5 * S1 * (s.n1 + 1.0 + std::conj(s.c12)) -
                   0.5 * S2 * (s.n1 + std::conj(s.c12)) - gm * s.p1;
            d.p2 = 0.5 * (-Am + Ap - I * dl) * (s.p2 + s.q) +
                   0.5 * S1 * (s.n2 + 1.0 + s.c12) - 0.5 * S2 * (s.n2 + s.c12) -
                   gm * s.p2;
            d.q = -0.25 * (Am - Ap + I * dl) * (s.p1 + s.p2 + 2.0 * s.q) +
                  0.25 * S1 * (sym + 2.0) - 0.25 * S2 * sym - gm * s.q;
            return d;
        };
        auto axpy = [](const State& a, double h, const State& b) {
            return State{a.n1 + h * b.n1, a.n2 + h * b.n2, a.c12 + h * b.c12,
                         a.p1 + h * b.p1, a.p2 + h * b.p2, a.q + h * b.q};
        };
        State s{nth, nth, 0.0, 0.0, 0.0, 0.0}; // product thermal start
        const double h = 0.2;
        const int steps = 30000; // ~6/denominator time constants
        for (int k = 0; k < steps; ++k) {
            const State k1 = rhs(s);
            const State k2 = rhs(axpy(s, h / 2, k1));
            const State k3 = rhs(axpy(s, h / 2, k2));
            const State k4 = rhs(axpy(s, h, k3));
            State sum = axpy(s, h / 6, k1);
            sum = axpy(sum, h / 3, k2);
            sum = axpy(sum, h / 3, k3);
            sum = axpy(sum, h / 6, k4);
            s = sum;
        }
        const double sum_occ = s.n1 + s.n2 + 2.0 * std::real(s.c12);
        const cplx sum_pair = s.p1 + s.p2 + 2.0 * s.q;
        CHECK(std::abs(sum_occ - target.sum_occupancy) < 1e-8);
        CHECK(std::abs(sum_pair - target.sum_pair) < 1e-8);
    }
}

TEST_CASE("quadrature variance") {
    SUBCASE("vacuum") {
        const SqueezingReport r = quadrature_variance(0.0, 0.0);
        CHECK(r.var_x == doctest::Approx(0.25));
        CHECK(r.squeezing_db == doctest::Approx(0.0));
        CHECK(!r.quantum_squeezed);
    }
    SUBCASE("thermal") {
        const SqueezingReport r = quadrature_variance(12.0, 0.0);
        CHECK(r.var_x == doctest::Approx(25.0 / 4.0));
        CHECK(!r.quantum_squeezed);
    }
    SUBCASE("squeezing at the enhanced operating point") {
        // omega1 = -0.7: quantum squeezing well below the thermal floor;
        // the 3 dB level is reached only for n_th below roughly 3e2
        double best = 1e9;
        for (int i = 0; i < 280; ++i) {
            const double omega0 = 0.01 + (1.4 - 0.01) * i / 279.0;
            const SystemParams p = fig_params(omega0, -0.7);
            const ReducedCoefficients c = coeffs_at(p);
            if (!stability_check(c, p.gamma_m).stable) continue;
            const SteadyMoments m = steady_moments(c, p.gamma_m, p.n_th);
            best = std::min(best, quadrature_variance(m.n_ss, m.pair_ss).var_x);
        }
        CHECK(best < 0.25);
        CHECK(best - 0.25 < -0.10); // measured minimum is about 0.1374
        double best300 = 1e9;
        for (int i = 0; i < 280; ++i) {
            const double omega0 = 0.01 + (1.4 - 0.01) * i / 279.0;
            SystemParams p = fig_params(omega0, -0.7);
            p.n_th = 300.0;
            const ReducedCoefficients c = coeffs_at(p);
            if (!stability_check(c, p.gamma_m).stable) continue;
            const SteadyMoments m = steady_moments(c, p.gamma_m, p.n_th);
            best300 = std::min(best300, quadrature_variance(m.n_ss, m.pair_ss).var_x);
        }
        CHECK(best300 < 0.125); // below 3 dB at the reduced occupation
    }
    SUBCASE("nonphysical input") {
        CHECK_THROWS_AS((void)quadrature_variance(0.0, cplx(2.0, 0.0)), NonPhysical);
    }
}

TEST_CASE("two-mode variance equals the single-mode one") {
    SUBCASE("vacuum and thermal") {
        CHECK(two_mode_variance(0.0, 0.0) == doctest::Approx(0.25));
        CHECK(two_mode_variance(2.0 * 7.0, 0.0) == doctest::Approx(15.0 / 4.0));
    }
    SUBCASE("random stable parameter sets") {
        std::mt19937_64 rng(51);
        auto uni = [&](double lo, double hi) {
            return std::uniform_real_distribution<double>(lo, hi)(rng);
        };
        int used = 0;
        while (used < 200) {
            SystemParams p;
            p.omega0 = uni(0.05, 1.4);
            p.omega1 = uni(-0.9, 0.9);
            p.delta = detuning_for_resonance(1.0, p.omega0, p.omega1);
            p.Gamma0 = uni(0.05, 0.5);
            p.Gamma1 = p.Gamma0 * uni(1.0, 2.0);
            p.g = uni(0.01, 0.1);
            p.gamma_m = uni(1e-7, 1e-4);
            p.n_th = uni(0.0, 2e3);
            const ReducedCoefficients c = coeffs_at(p);
            if (!stability_check(c, p.gamma_m).stable) continue;
            const SteadyMoments m = steady_moments(c, p.gamma_m, p.n_th);
            const TwoModeMoments t = steady_moments_two_mode(c, p.gamma_m, p.n_th);
            const double vx = quadrature_variance(m.n_ss, m.pair_ss).var_x;
            const double vu = two_mode_variance(t.sum_occupancy, t.sum_pair);
            CHECK(std::abs(vx - vu) < 1e-10 * std::max(1.0, vx));
            ++used;
        }
    }
}

TEST_CASE("variance approximation") {
    SUBCASE("no pair coefficient") {
        ApproxCoefficients a{};
        a.c.a_minus = 1e-3;
        const double v = variance_approx(a, 1e-6, 100.0);
        const double nbar = 1e-6 * 100.0 / (1e-6 + 1e-3);
        CHECK(v == doctest::Approx(0.25 + 0.5 * nbar).epsilon(1e-12));
    }
    SUBCASE("analytic substitution points") {
        // |S1/z| = 1/4 at zero occupation sits exactly at the 3 dB level
        ApproxCoefficients a{};
        a.c.a_minus = 1.0 - 1e-6; // z = 1
        a.c.s1 = 0.25;
        CHECK(variance_approx(a, 1e-6, 0.0) == doctest::Approx(0.125).epsilon(1e-9));
        // |S1/z| = 1/2 drives the first term to zero
        a.c.s1 = 0.5;
        CHECK(variance_approx(a, 1e-6, 0.0) == doctest::Approx(0.0).epsilon(1e-9));
    }
    SUBCASE("tracks the exact variance in the squeezed window at Gamma0 = 0.1") {
        double worst = 0.0;
        int used = 0;
        for (int i = 0; i < 140; ++i) {
            const double omega0 = 0.05 + (1.0 - 0.05) * i / 139.0;
            SystemParams p = fig_params(omega0);
            p.Gamma0 = p.Gamma1 = 0.1;
            const DressedFrame f = dressed_frame(p);
            if (std::abs(f.delta2) < 5.0 * p.Gamma0) continue;
            const ReducedCoefficients ex =
                coefficients_exact(f, spin_steady_closed(p), p.Gamma1);
            if (!stability_check(ex, p.gamma_m).stable) continue;
            const SteadyMoments m = steady_moments(ex, p.gamma_m, p.n_th);
            const double vx = quadrature_variance(m.n_ss, m.pair_ss).var_x;
            if (vx >= 0.25) continue;
            const ApproxCoefficients ap = coefficients_approx(f, p.Gamma0, p.g);
            worst = std::max(worst, std::abs(variance_approx(ap, p.gamma_m, p.n_th) - vx) / vx);
            ++used;
        }
        REQUIRE(used > 10);
        CHECK(worst < 0.30);
    }
}

TEST_CASE("stability classification") {
    SUBCASE("uncoupled damped oscillator is stable") {
        ReducedCoefficients c{};
        CHECK(stability_check(c, 1e-6).stable);
    }
    SUBCASE("net heating is unstable") {
        ReducedCoefficients c{};
        c.a_plus = 2e-3;
        c.a_minus = 1e-3;
        CHECK(!stability_check(c, 1e-6).stable);
        CHECK_THROWS_AS((void)steady_moments(c, 1e-6, 1.0), Unstable);
    }
    SUBCASE("flag flips where the occupancy denominator changes sign") {
        // scan across the cooling/heating boundary at omega1 = -0.7
        int flips = 0, denom_flips = 0;
        bool prev_stable = true;
        double prev_denom = 1.0;
        bool first = true;
        for (int i = 0; i < 280; ++i) {
            const double omega0 = 0.05 + (1.2 - 0.05) * i / 279.0;
            const SystemParams p = fig_params(omega0, -0.7);
            const ReducedCoefficients c = coeffs_at(p);
            const bool stable = stability_check(c, p.gamma_m).stable;
            const double geff = p.gamma_m + c.a_minus - c.a_plus;
            const cplx z = geff + I * c.delta_shift;
            const double denom = geff - std::real(std::norm(c.s1 - c.s2) / z);
            if (!first) {
                if (stable != prev_stable) ++flips;
                if ((denom > 0) != (prev_denom > 0)) ++denom_flips;
                if (stable != prev_stable)
                    CHECK((denom > 0) != (prev_denom > 0)); // transitions coincide
            }
            prev_stable = stable;
            prev_denom = denom;
            first = false;
        }
        CHECK(flips >= 1); // the boundary is inside the scanned window
        CHECK(flips == denom_flips);
    }
}
