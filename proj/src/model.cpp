#include "nvsq/model.hpp"

#include <cmath>

namespace nvsq {

namespace {
const cplx I{0.0, 1.0};

Eigen::Matrix3cd outer(const Eigen::Vector3cd& u, const Eigen::Vector3cd& v) {
    return u * v.adjoint();
}
} // namespace

Eigen::Matrix3cd spin_Sz() {
    Eigen::Matrix3cd s = Eigen::Matrix3cd::Zero();
    s(1, 1) = 1.0;
    s(2, 2) = -1.0;
    return s;
}

Eigen::Matrix3cd spin_Sy() {
    // -i|+1><-1| + i|-1><+1|
    Eigen::Matrix3cd s = Eigen::Matrix3cd::Zero();
    s(1, 2) = -I;
    s(2, 1) = I;
    return s;
}

Eigen::Matrix3cd spin_Sx() {
    Eigen::Matrix3cd s = Eigen::Matrix3cd::Zero();
    s(1, 2) = 1.0;
    s(2, 1) = 1.0;
    return s;
}

OperatorSpec bare_hamiltonian(const SystemParams& p) {
    validate(p);
    const int nm = 1;
    const ModeMonomial n_op = {Ladder::Raise, Ladder::Lower};
    const ModeMonomial low = {Ladder::Lower};
    const ModeMonomial raise_ = {Ladder::Raise};

    OperatorSpec h = spec_mode(3, nm, 0, n_op, p.omega_m);
    h = spec_add(h, spec_spin(nv_hamiltonian(p), nm));

    const Eigen::Matrix3cd coupling =
        p.g * std::cos(p.phi) * spin_Sz() + p.g * std::sin(p.phi) * spin_Sy();
    OperatorSpec x = spec_add(spec_mode(3, nm, 0, low), spec_mode(3, nm, 0, raise_));
    h = spec_add(h, spec_mul(spec_spin(coupling, nm), x));
    return h;
}

OperatorSpec interaction_hamiltonian(const DressedFrame& f, const SystemParams& p,
                                     std::vector<std::string>* warnings) {
    validate(p);
    if (warnings) {
        auto w = rwa_warnings(f, p);
        warnings->insert(warnings->end(), w.begin(), w.end());
    }
    const Eigen::Matrix3cd u = dressed_basis(f.theta);
    const Eigen::Vector3cd ka = u.col(0), kb = u.col(1), kc = u.col(2);
    const int nm = 1;

    OperatorSpec h = spec_spin(-f.delta0 * outer(ka, ka) - f.delta1 * outer(kb, kb), nm);
    OperatorSpec coupling = spec_add(
        spec_mul(spec_spin(f.gs * outer(kc, kb), nm),
                 spec_mode(3, nm, 0, {Ladder::Raise})),
        spec_mul(spec_spin(f.gc * outer(ka, kb), nm),
                 spec_mode(3, nm, 0, {Ladder::Lower})));
    return spec_add(h, spec_plus_hc(coupling));
}

OperatorSpec two_mode_full_hamiltonian(const DressedFrame& f, const SystemParams& p) {
    validate(p);
    const Eigen::Matrix3cd u = dressed_basis(f.theta);
    const Eigen::Vector3cd ka = u.col(0), kb = u.col(1), kc = u.col(2);
    const double s = std::sin(f.theta), c = std::cos(f.theta);
    const double cp = std::cos(p.phi), sp = std::sin(p.phi);
    const int nm = 2;

    const ModeMonomial n_op = {Ladder::Raise, Ladder::Lower};
    auto x_of = [&](int mode) {
        return spec_add(spec_mode(3, nm, mode, {Ladder::Lower}),
                        spec_mode(3, nm, mode, {Ladder::Raise}));
    };

    OperatorSpec h = spec_mode(3, nm, 0, n_op, p.omega_m);
    h = spec_add(h, spec_mode(3, nm, 1, n_op, p.omega_m));
    h = spec_add(h, spec_spin(f.omega_ac * outer(ka, ka) + f.omega_bc * outer(kb, kb), nm));

    // resonant ladder couplings, mode j with weight cos/sin(phi)
    const double g1s = -p.g * cp * s, g1c = p.g * cp * c;
    const double g2s = -p.g * sp * s, g2c = p.g * sp * c;
    OperatorSpec cpl = spec_mul(spec_spin(g1s * outer(kc, kb) + g1c * outer(kb, ka), nm),
                                x_of(0));
    cpl = spec_add(cpl, spec_mul(spec_spin(g2s * outer(kc, kb) + g2c * outer(kb, ka), nm),
                                 x_of(1)));
    h = spec_add(h, spec_plus_hc(cpl));

    // spin-x block (dropped by the reduced path)
    const Eigen::Matrix3cd sx_dressed =
        s * s * outer(kc, kc) + c * c * outer(ka, ka) - outer(kb, kb) -
        s * c * (outer(kc, ka) + outer(ka, kc));
    OperatorSpec weight = spec_add(spec_scale(x_of(0), p.g * sp),
                                   spec_scale(x_of(1), -p.g * cp));
    h = spec_add(h, spec_mul(weight, spec_spin(sx_dressed, nm)));
    return h;
}

} // namespace nvsq
