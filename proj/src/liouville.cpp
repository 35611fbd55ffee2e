#include "nvsq/liouville.hpp"

#include <Eigen/SparseLU>
#include <cmath>

#include "nvsq/dressed.hpp"
#include "nvsq/errors.hpp"
#include "nvsq/model.hpp"

namespace nvsq {

namespace {

const cplx I{0.0, 1.0};

SparseC sparse_from_dense(const Eigen::MatrixXcd& m) {
    return m.sparseView(1.0, 1e-300);
}

SparseC kron_sparse(const SparseC& a, const SparseC& b) {
    SparseC r(a.rows() * b.rows(), a.cols() * b.cols());
    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(static_cast<size_t>(a.nonZeros()) * static_cast<size_t>(b.nonZeros()));
    for (int ka = 0; ka < a.outerSize(); ++ka)
        for (SparseC::InnerIterator ia(a, ka); ia; ++ia)
            for (int kb = 0; kb < b.outerSize(); ++kb)
                for (SparseC::InnerIterator ib(b, kb); ib; ++ib)
                    trip.emplace_back(ia.row() * b.rows() + ib.row(),
                                      ia.col() * b.cols() + ib.col(),
                                      ia.value() * ib.value());
    r.setFromTriplets(trip.begin(), trip.end());
    return r;
}

SparseC sparse_identity(int n) {
    SparseC id(n, n);
    id.setIdentity();
    return id;
}

SparseC ladder_lower(int n) {
    SparseC d(n, n);
    std::vector<Eigen::Triplet<cplx>> trip;
    for (int i = 0; i + 1 < n; ++i)
        trip.emplace_back(i, i + 1, std::sqrt(double(i + 1)));
    d.setFromTriplets(trip.begin(), trip.end());
    return d;
}

SparseC monomial_matrix(int n, const ModeMonomial& m) {
    SparseC lower = ladder_lower(n);
    SparseC raise = SparseC(lower.adjoint());
    SparseC r = sparse_identity(n);
    for (Ladder l : m) r = (r * (l == Ladder::Lower ? lower : raise)).pruned();
    return r;
}

} // namespace

int HilbertSpace::dim() const {
    int d = spin_dim;
    for (int n : fock_dims) d *= n;
    return d;
}

void HilbertSpace::check() const {
    if (spin_dim != 1 && spin_dim != 3)
        throw DimensionMismatch("spin_dim must be 1 or 3");
    for (int n : fock_dims)
        if (n < 2) throw DimensionMismatch("fock dimensions must be >= 2");
    if (dim() > max_total)
        throw DimensionMismatch("Hilbert dimension exceeds cap " +
                                std::to_string(max_total));
}

SparseC assemble_operator(const HilbertSpace& space, const OperatorSpec& spec) {
    space.check();
    if (spec.spin_dim != space.spin_dim ||
        spec.n_modes != static_cast<int>(space.fock_dims.size()))
        throw DimensionMismatch("operator spec does not match the Hilbert space");
    const int dim = space.dim();
    SparseC total(dim, dim);
    for (const auto& t : spec.terms) {
        SparseC op = sparse_from_dense(t.spin);
        for (size_t m = 0; m < t.modes.size(); ++m)
            op = kron_sparse(op, monomial_matrix(space.fock_dims[m], t.modes[m]));
        total += SparseC(t.coeff * op);
    }
    total.prune(1e-300, 1.0);
    return total;
}

OperatorSet build_operators(const HilbertSpace& space, double theta) {
    space.check();
    const int nm = static_cast<int>(space.fock_dims.size());
    OperatorSet out;
    for (int m = 0; m < nm; ++m) {
        out.d.push_back(assemble_operator(
            space, spec_mode(space.spin_dim, nm, m, {Ladder::Lower})));
        out.d_dag.push_back(assemble_operator(
            space, spec_mode(space.spin_dim, nm, m, {Ladder::Raise})));
        out.number.push_back(assemble_operator(
            space, spec_mode(space.spin_dim, nm, m, {Ladder::Raise, Ladder::Lower})));
    }
    if (space.spin_dim == 3) {
        out.Sz = assemble_operator(space, spec_spin(spin_Sz(), nm));
        out.Sy = assemble_operator(space, spec_spin(spin_Sy(), nm));
        out.Sx = assemble_operator(space, spec_spin(spin_Sx(), nm));
        const Eigen::Matrix3cd u = dressed_basis(theta);
        auto proj = [&](int col) {
            Eigen::Matrix3cd p = u.col(col) * u.col(col).adjoint();
            return assemble_operator(space, spec_spin(p, nm));
        };
        out.proj_a = proj(0);
        out.proj_b = proj(1);
        out.proj_c = proj(2);
    }
    return out;
}

std::vector<LindbladChannel> spin_dissipator_effective(double Gamma0, double Gamma1,
                                                       int n_modes) {
    if (!(Gamma0 > 0)) throw InvalidRates("Gamma0 must be > 0");
    if (Gamma1 < Gamma0)
        throw InvalidRates("Gamma1 < Gamma0 would need a negative dephasing rate");
    auto ketbra = [&](int i, int j) {
        Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
        m(i, j) = 1.0;
        return spec_spin(m, n_modes);
    };
    // bare basis indices: 0 -> |0>, 1 -> |+1>, 2 -> |-1>
    std::vector<LindbladChannel> ch;
    ch.push_back({ketbra(0, 1), Gamma0});
    ch.push_back({ketbra(0, 2), Gamma0});
    if (Gamma1 > Gamma0) {
        ch.push_back({ketbra(1, 1), Gamma1 - Gamma0});
        ch.push_back({ketbra(2, 2), Gamma1 - Gamma0});
    }
    return ch;
}

Eigen::MatrixXcd Superoperator::apply(const Eigen::MatrixXcd& rho) const {
    Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(rho.data(), dim * dim);
    Eigen::VectorXcd w = mat * v;
    return Eigen::Map<const Eigen::MatrixXcd>(w.data(), dim, dim);
}

Superoperator assemble(const HilbertSpace& space, const GeneratorSpec& gen) {
    space.check();
    const int dim = space.dim();
    const SparseC id = sparse_identity(dim);

    Superoperator sop;
    sop.dim = dim;
    SparseC L(dim * dim, dim * dim);

    // vec convention (column-major): vec(A rho B) = (B^T (x) A) vec(rho)
    if (!gen.hamiltonian.terms.empty()) {
        SparseC h = assemble_operator(space, gen.hamiltonian);
        L += SparseC(-I * (kron_sparse(id, h) -
                           kron_sparse(SparseC(h.transpose()), id)));
    }
    for (const auto& c : gen.channels) {
        if (c.rate == 0.0) continue;
        SparseC j = assemble_operator(space, c.jump);
        SparseC jj = SparseC(j.adjoint()) * j;
        SparseC diss = kron_sparse(SparseC(j.conjugate()), j);
        diss -= SparseC(0.5 * kron_sparse(id, jj));
        diss -= SparseC(0.5 * kron_sparse(SparseC(jj.transpose()), id));
        L += SparseC(c.rate * diss);
    }
    for (const auto& q : gen.quadratic) {
        SparseC a = assemble_operator(space, q.left);
        SparseC b = assemble_operator(space, q.right);
        L += SparseC(q.coeff * kron_sparse(SparseC(b.transpose()), a));
    }
    L.prune(1e-300, 1.0);
    sop.mat = L;
    sop.norm_f = L.norm();
    return sop;
}

namespace {

Eigen::VectorXcd pinned_trace_solve(const SparseC& L, int dim, int pin_row,
                                    bool* singular) {
    const int n = dim * dim;
    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(static_cast<size_t>(L.nonZeros()) + static_cast<size_t>(dim));
    for (int k = 0; k < L.outerSize(); ++k)
        for (SparseC::InnerIterator it(L, k); it; ++it)
            if (it.row() != pin_row) trip.emplace_back(it.row(), it.col(), it.value());
    for (int k = 0; k < dim; ++k)
        trip.emplace_back(pin_row, k * dim + k, 1.0); // trace functional
    SparseC A(n, n);
    A.setFromTriplets(trip.begin(), trip.end());
    A.makeCompressed();

    Eigen::SparseLU<SparseC> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success) {
        *singular = true;
        return Eigen::VectorXcd::Zero(n);
    }
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(n);
    b(pin_row) = 1.0;
    Eigen::VectorXcd x = lu.solve(b);
    *singular = (lu.info() != Eigen::Success);
    return x;
}

Eigen::MatrixXcd hermitize_normalize(const Eigen::VectorXcd& x, int dim) {
    Eigen::MatrixXcd rho = Eigen::Map<const Eigen::MatrixXcd>(x.data(), dim, dim);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    const double tr = rho.trace().real();
    if (std::abs(tr) < 1e-14) throw DegenerateKernel("steady state has zero trace");
    return rho / tr;
}

} // namespace

Eigen::MatrixXcd steady_state(const Superoperator& L, const SteadyOptions& opt) {
    const int dim = L.dim;
    bool sing1 = false;
    Eigen::VectorXcd x = pinned_trace_solve(L.mat, dim, 0, &sing1);
    int probe_row = dim * dim - 1;
    if (sing1) {
        // retry with the last diagonal pinned
        x = pinned_trace_solve(L.mat, dim, probe_row, &sing1);
        probe_row = 0;
        if (sing1) throw DegenerateKernel("pinned-trace factorizations failed");
    }
    Eigen::MatrixXcd rho = hermitize_normalize(x, dim);

    const double scale = std::max(L.norm_f, 1e-300);
    const double res = L.apply(rho).norm() / (scale * rho.norm());
    if (res > opt.residual_tol)
        throw NoConvergence("steady-state residual " + std::to_string(res) +
                            " above tolerance");

    if (opt.kernel_probe) {
        bool sing2 = false;
        Eigen::VectorXcd x2 = pinned_trace_solve(L.mat, dim, probe_row, &sing2);
        if (!sing2) {
            Eigen::MatrixXcd rho2 = hermitize_normalize(x2, dim);
            if ((rho - rho2).norm() > 1e-6 * std::max(1.0, rho.norm()))
                throw DegenerateKernel("kernel is not one-dimensional");
        }
    }
    return rho;
}

std::vector<Eigen::MatrixXcd> evolve(const Eigen::MatrixXcd& rho0,
                                     const Superoperator& L,
                                     const std::vector<double>& t_grid,
                                     const EvolveOptions& opt) {
    if (t_grid.empty()) return {};
    const int dim = L.dim;
    if (rho0.rows() != dim || rho0.cols() != dim)
        throw DimensionMismatch("initial state does not match the superoperator");

    // Dormand-Prince 5(4)
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                        a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                        a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 35.0 / 384 - 5179.0 / 57600,
                        e3 = 500.0 / 1113 - 7571.0 / 16695,
                        e4 = 125.0 / 192 - 393.0 / 640,
                        e5 = -2187.0 / 6784 + 92097.0 / 339200,
                        e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

    Eigen::VectorXcd y = Eigen::Map<const Eigen::VectorXcd>(rho0.data(), dim * dim);
    auto rhs = [&](const Eigen::VectorXcd& v) { return Eigen::VectorXcd(L.mat * v); };
    auto renorm = [&](Eigen::VectorXcd& v) {
        cplx tr = 0.0;
        for (int k = 0; k < dim; ++k) tr += v(k * dim + k);
        if (std::abs(tr) > 1e-14) v /= tr;
        return std::abs(tr - 1.0);
    };
    renorm(y);

    std::vector<Eigen::MatrixXcd> out;
    out.reserve(t_grid.size());
    out.push_back(Eigen::Map<const Eigen::MatrixXcd>(y.data(), dim, dim));

    double t = t_grid.front();
    const double span = t_grid.back() - t;
    double h = span > 0 ? span / 256.0 : 0.0;
    const double hmin = std::max(span * 1e-14, 1e-300);

    Eigen::VectorXcd k1 = rhs(y);
    for (size_t g = 1; g < t_grid.size(); ++g) {
        const double t_target = t_grid[g];
        while (t < t_target) {
            h = std::min(h, t_target - t);
            const Eigen::VectorXcd k2 = rhs(y + h * (a21 * k1));
            const Eigen::VectorXcd k3 = rhs(y + h * (a31 * k1 + a32 * k2));
            const Eigen::VectorXcd k4 = rhs(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
            const Eigen::VectorXcd k5 =
                rhs(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
            const Eigen::VectorXcd k6 =
                rhs(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
            const Eigen::VectorXcd ynew =
                y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            const Eigen::VectorXcd k7 = rhs(ynew);
            const Eigen::VectorXcd err =
                h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

            double norm2 = 0.0;
            for (int i = 0; i < err.size(); ++i) {
                const double sc =
                    opt.atol + opt.rtol * std::max(std::abs(y(i)), std::abs(ynew(i)));
                const double q = std::abs(err(i)) / sc;
                norm2 += q * q;
            }
            const double enorm = std::sqrt(norm2 / double(err.size()));
            if (enorm <= 1.0) {
                t += h;
                y = ynew;
                const double drift = renorm(y);
                if (drift > opt.max_trace_drift)
                    throw StepFailure("trace drift " + std::to_string(drift) +
                                      " in one step");
                k1 = rhs(y);
            }
            const double fac =
                std::clamp(0.9 * std::pow(std::max(enorm, 1e-10), -0.2), 0.2, 5.0);
            h *= fac;
            if (h < hmin) throw StepFailure("step size underflow in evolve");
        }
        out.push_back(Eigen::Map<const Eigen::MatrixXcd>(y.data(), dim, dim));
    }
    return out;
}

Eigen::VectorXd mode_populations(const HilbertSpace& space, const Eigen::MatrixXcd& rho,
                                 int mode) {
    const int nm = static_cast<int>(space.fock_dims.size());
    if (mode < 0 || mode >= nm) throw DimensionMismatch("mode index out of range");
    const int n = space.fock_dims[mode];
    Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
    // index = ((spin * N0 + n0) * N1 + n1) ...
    const int dim = space.dim();
    int stride = 1;
    for (int m = mode + 1; m < nm; ++m) stride *= space.fock_dims[m];
    for (int idx = 0; idx < dim; ++idx) {
        const int level = (idx / stride) % n;
        p(level) += rho(idx, idx).real();
    }
    return p;
}

bool truncation_check(const HilbertSpace& space, const Eigen::MatrixXcd& rho,
                      double eps) {
    for (size_t m = 0; m < space.fock_dims.size(); ++m) {
        const Eigen::VectorXd p = mode_populations(space, rho, static_cast<int>(m));
        const int n = space.fock_dims[m];
        if (p(n - 1) + p(n - 2) >= eps) return false;
    }
    return true;
}

Eigen::MatrixXcd spin_marginal(const HilbertSpace& space, const Eigen::MatrixXcd& rho) {
    const int s = space.spin_dim;
    int mech = 1;
    for (int n : space.fock_dims) mech *= n;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(s, s);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j)
            for (int k = 0; k < mech; ++k) out(i, j) += rho(i * mech + k, j * mech + k);
    return out;
}

cplx expectation(const HilbertSpace& space, const Eigen::MatrixXcd& rho,
                 const OperatorSpec& op) {
    const SparseC m = assemble_operator(space, op);
    return (m * rho).eval().trace();
}

Eigen::MatrixXcd steady_state_escalating(const GeneratorSpec& g, int fock_start,
                                         HilbertSpace* space_out, bool* escalated,
                                         double eps, int fock_cap,
                                         const SteadyOptions& opt) {
    if (escalated) *escalated = false;
    for (int n = fock_start; n <= fock_cap; n *= 2) {
        HilbertSpace space;
        space.spin_dim = g.spin_dim;
        space.fock_dims.assign(static_cast<size_t>(g.n_modes), n);
        if (space.dim() > space.max_total)
            throw TruncationCapExceeded("escalation would exceed the Hilbert cap");
        Eigen::MatrixXcd rho = steady_state(assemble(space, g), opt);
        if (truncation_check(space, rho, eps)) {
            if (space_out) *space_out = space;
            return rho;
        }
        if (escalated) *escalated = true;
    }
    throw TruncationCapExceeded("Fock dimension cap reached without passing the "
                                "truncation check");
}

} // namespace nvsq
