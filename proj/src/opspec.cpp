#include "nvsq/opspec.hpp"

#include "nvsq/errors.hpp"

namespace nvsq {

namespace {

Eigen::MatrixXcd spin_identity(int spin_dim) {
    return Eigen::MatrixXcd::Identity(spin_dim, spin_dim);
}

void check_compatible(const OperatorSpec& a, const OperatorSpec& b) {
    if (a.spin_dim != b.spin_dim || a.n_modes != b.n_modes)
        throw DimensionMismatch("operator specs on different spaces");
}

} // namespace

OperatorSpec spec_zero(int spin_dim, int n_modes) {
    return OperatorSpec{spin_dim, n_modes, {}};
}

OperatorSpec spec_identity(int spin_dim, int n_modes) {
    OperatorTerm t;
    t.coeff = 1.0;
    t.spin = spin_identity(spin_dim);
    t.modes.assign(static_cast<size_t>(n_modes), {});
    return OperatorSpec{spin_dim, n_modes, {t}};
}

OperatorSpec spec_spin(const Eigen::MatrixXcd& s, int n_modes, cplx coeff) {
    OperatorTerm t;
    t.coeff = coeff;
    t.spin = s;
    t.modes.assign(static_cast<size_t>(n_modes), {});
    return OperatorSpec{static_cast<int>(s.rows()), n_modes, {t}};
}

OperatorSpec spec_mode(int spin_dim, int n_modes, int mode, const ModeMonomial& m,
                       cplx coeff) {
    if (mode < 0 || mode >= n_modes) throw DimensionMismatch("mode index out of range");
    OperatorTerm t;
    t.coeff = coeff;
    t.spin = spin_identity(spin_dim);
    t.modes.assign(static_cast<size_t>(n_modes), {});
    t.modes[static_cast<size_t>(mode)] = m;
    return OperatorSpec{spin_dim, n_modes, {t}};
}

OperatorSpec spec_add(const OperatorSpec& a, const OperatorSpec& b) {
    check_compatible(a, b);
    OperatorSpec r = a;
    r.terms.insert(r.terms.end(), b.terms.begin(), b.terms.end());
    return r;
}

OperatorSpec spec_scale(const OperatorSpec& a, cplx c) {
    OperatorSpec r = a;
    for (auto& t : r.terms) t.coeff *= c;
    return r;
}

OperatorSpec spec_mul(const OperatorSpec& a, const OperatorSpec& b) {
    check_compatible(a, b);
    OperatorSpec r{a.spin_dim, a.n_modes, {}};
    r.terms.reserve(a.terms.size() * b.terms.size());
    for (const auto& ta : a.terms) {
        for (const auto& tb : b.terms) {
            OperatorTerm t;
            t.coeff = ta.coeff * tb.coeff;
            t.spin = ta.spin * tb.spin;
            t.modes.resize(ta.modes.size());
            for (size_t k = 0; k < ta.modes.size(); ++k) {
                t.modes[k] = ta.modes[k];
                t.modes[k].insert(t.modes[k].end(), tb.modes[k].begin(),
                                  tb.modes[k].end());
            }
            r.terms.push_back(std::move(t));
        }
    }
    return r;
}

OperatorSpec spec_dagger(const OperatorSpec& a) {
    OperatorSpec r = a;
    for (auto& t : r.terms) {
        t.coeff = std::conj(t.coeff);
        t.spin = t.spin.adjoint().eval();
        for (auto& m : t.modes) {
            std::reverse(m.begin(), m.end());
            for (auto& l : m) l = (l == Ladder::Lower) ? Ladder::Raise : Ladder::Lower;
        }
    }
    return r;
}

OperatorSpec spec_plus_hc(const OperatorSpec& a) { return spec_add(a, spec_dagger(a)); }

} // namespace nvsq
