#pragma once

#include <Eigen/Dense>
#include <vector>

#include "nvsq/params.hpp"

namespace nvsq {

// Symbolic operators on (spin) x (Fock modes), independent of any truncation.
// A term is coeff * S (x) m_1 (x) m_2 ... where S is a small spin matrix in
// the bare basis and each m_k is a ladder monomial on mode k, written
// left-to-right as a matrix product ({Raise, Lower} == d^dag d).

enum class Ladder { Lower, Raise };

using ModeMonomial = std::vector<Ladder>;

struct OperatorTerm {
    cplx coeff{1.0, 0.0};
    Eigen::MatrixXcd spin; // spin_dim x spin_dim (1x1 identity when spinless)
    std::vector<ModeMonomial> modes;
};

struct OperatorSpec {
    int spin_dim = 1;
    int n_modes = 0;
    std::vector<OperatorTerm> terms;
};

OperatorSpec spec_zero(int spin_dim, int n_modes);
OperatorSpec spec_identity(int spin_dim, int n_modes);
// coeff * spin-matrix (x) identity on all modes
OperatorSpec spec_spin(const Eigen::MatrixXcd& s, int n_modes, cplx coeff = 1.0);
// coeff * identity-spin (x) monomial on one mode
OperatorSpec spec_mode(int spin_dim, int n_modes, int mode, const ModeMonomial& m,
                       cplx coeff = 1.0);

OperatorSpec spec_add(const OperatorSpec& a, const OperatorSpec& b);
OperatorSpec spec_scale(const OperatorSpec& a, cplx c);
OperatorSpec spec_mul(const OperatorSpec& a, const OperatorSpec& b);
OperatorSpec spec_dagger(const OperatorSpec& a);
// a + a^dag
OperatorSpec spec_plus_hc(const OperatorSpec& a);

struct LindbladChannel {
    OperatorSpec jump;
    double rate;
};

// Non-Lindblad placement: coeff * L rho R.
struct QuadTerm {
    cplx coeff;
    OperatorSpec left;
    OperatorSpec right;
};

struct GeneratorSpec {
    int spin_dim = 1;
    int n_modes = 0;
    OperatorSpec hamiltonian;
    std::vector<LindbladChannel> channels;
    std::vector<QuadTerm> quadratic;
};

} // namespace nvsq
