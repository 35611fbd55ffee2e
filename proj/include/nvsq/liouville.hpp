#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

#include "nvsq/opspec.hpp"

namespace nvsq {

using SparseC = Eigen::SparseMatrix<cplx>;

struct HilbertSpace {
    int spin_dim = 1;           // 1 or 3
    std::vector<int> fock_dims; // >= 2 each
    int max_total = 700;

    int dim() const;
    void check() const; // throws DimensionMismatch on violated bounds
};

// Concrete truncated operators on the full tensor space.
struct OperatorSet {
    std::vector<SparseC> d, d_dag, number; // per mode
    SparseC Sz, Sy, Sx;                    // zero-size when spinless
    SparseC proj_a, proj_b, proj_c;        // dressed projectors for the given theta
};

OperatorSet build_operators(const HilbertSpace& space, double theta = 0.0);

// Materialize a symbolic operator on the truncated space.
SparseC assemble_operator(const HilbertSpace& space, const OperatorSpec& spec);

// Effective optical-pump dissipator: amplitude damping |0><+-1| at Gamma0 and
// population dephasing |+-1><+-1| at Gamma1 - Gamma0. Reproduces the
// ground-triplet Bloch equations term by term. Throws InvalidRates when
// Gamma1 < Gamma0.
std::vector<LindbladChannel> spin_dissipator_effective(double Gamma0, double Gamma1,
                                                       int n_modes = 1);

struct Superoperator {
    int dim = 0;   // Hilbert dimension; matrix is dim^2 x dim^2
    SparseC mat;   // column-major vec convention: vec(A rho B) = (B^T (x) A) vec(rho)
    double norm_f = 0.0;

    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const;
};

Superoperator assemble(const HilbertSpace& space, const GeneratorSpec& gen);

struct SteadyOptions {
    double residual_tol = 1e-9; // relative to ||L||_F
    bool kernel_probe = true;   // second solve with a different pinned row
};

// Null-space steady state: pinned-trace sparse solve, Hermitization and trace
// normalization. Throws DegenerateKernel / NoConvergence.
Eigen::MatrixXcd steady_state(const Superoperator& L, const SteadyOptions& opt = {});

struct EvolveOptions {
    double rtol = 1e-8;
    double atol = 1e-10;
    double max_trace_drift = 1e-9; // per-step renormalization guard
};

// Adaptive RK45 trajectory at the requested times (t_grid[0] is the initial
// time of rho0). Throws StepFailure when the step size underflows.
std::vector<Eigen::MatrixXcd> evolve(const Eigen::MatrixXcd& rho0, const Superoperator& L,
                                     const std::vector<double>& t_grid,
                                     const EvolveOptions& opt = {});

// True when the top two Fock levels of every mode hold less than eps
// of the population.
bool truncation_check(const HilbertSpace& space, const Eigen::MatrixXcd& rho,
                      double eps = 1e-9);

// Marginals and moments.
Eigen::MatrixXcd spin_marginal(const HilbertSpace& space, const Eigen::MatrixXcd& rho);
Eigen::VectorXd mode_populations(const HilbertSpace& space, const Eigen::MatrixXcd& rho,
                                 int mode);
cplx expectation(const HilbertSpace& space, const Eigen::MatrixXcd& rho,
                 const OperatorSpec& op);

// Solve the steady state of the (truncation-independent) generator with
// automatic Fock-dimension doubling until truncation_check passes; all modes
// share the same dimension. Returns the final space in *space_out and whether
// escalation happened in *escalated.
Eigen::MatrixXcd steady_state_escalating(const GeneratorSpec& gen, int fock_start,
                                         HilbertSpace* space_out,
                                         bool* escalated = nullptr, double eps = 1e-9,
                                         int fock_cap = 256,
                                         const SteadyOptions& opt = {});

} // namespace nvsq
