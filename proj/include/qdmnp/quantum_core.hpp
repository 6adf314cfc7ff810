#pragma once

#include <complex>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "qdmnp/errors.hpp"

namespace qdmnp {

template <typename Real>
using ComplexMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using ComplexVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

using Matrix = ComplexMatrix<double>;
using Vector = ComplexVector<double>;
using Complex = std::complex<double>;

/// Truncated plasmon Fock space (0..n_max) tensored with the two-level dot.
///
/// Tensor order is fixed for the whole library: plasmon factor first,
/// exciton factor second, so |n, m> sits at index 2 n + m with m = 0 for
/// the ground state |g> and m = 1 for the excited state |e>.
struct HilbertSpace {
    int n_max = 8;

    explicit HilbertSpace(int cutoff = 8) : n_max(cutoff) {
        if (n_max < 1) throw DimensionError("Fock cutoff must be >= 1, got " + std::to_string(n_max));
    }

    int fock_dim() const noexcept { return n_max + 1; }
    int dim() const noexcept { return 2 * (n_max + 1); }
    int index(int photons, int excited) const noexcept { return 2 * photons + excited; }

    friend bool operator==(const HilbertSpace&, const HilbertSpace&) = default;
};

template <typename Real = double>
struct SystemOperators {
    ComplexMatrix<Real> a, a_dag;          ///< plasmon ladder
    ComplexMatrix<Real> sigma, sigma_dag;  ///< sigma = |g><e|
    ComplexMatrix<Real> number;            ///< a^dag a
    ComplexMatrix<Real> excited;           ///< sigma^dag sigma
    ComplexMatrix<Real> identity;
};

template <typename Real = double>
ComplexMatrix<Real> fock_annihilation(int n_max) {
    ComplexMatrix<Real> a = ComplexMatrix<Real>::Zero(n_max + 1, n_max + 1);
    for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<Real>(n));
    return a;
}

template <typename Real = double>
ComplexMatrix<Real> two_level_lowering() {
    ComplexMatrix<Real> s = ComplexMatrix<Real>::Zero(2, 2);
    s(0, 1) = Real(1);
    return s;
}

template <typename Real = double>
SystemOperators<Real> build_system_operators(const HilbertSpace& space) {
    using M = ComplexMatrix<Real>;
    const M id_fock = M::Identity(space.fock_dim(), space.fock_dim());
    const M id_tls = M::Identity(2, 2);

    SystemOperators<Real> ops;
    ops.a = Eigen::kroneckerProduct(fock_annihilation<Real>(space.n_max), id_tls).eval();
    ops.sigma = Eigen::kroneckerProduct(id_fock, two_level_lowering<Real>()).eval();
    ops.a_dag = ops.a.adjoint();
    ops.sigma_dag = ops.sigma.adjoint();
    ops.number = ops.a_dag * ops.a;
    ops.excited = ops.sigma_dag * ops.sigma;
    ops.identity = M::Identity(space.dim(), space.dim());
    return ops;
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m, Eigen::Index dim, const char* what) {
    if (m.rows() != dim || m.cols() != dim) {
        throw DimensionError(std::string(what) + ": expected " + std::to_string(dim) + "x" + std::to_string(dim) +
                             ", got " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
}

/// Tr[A rho].
template <typename DerivedRho, typename DerivedOp>
auto expectation(const Eigen::MatrixBase<DerivedRho>& rho, const Eigen::MatrixBase<DerivedOp>& op) {
    require_square(rho, op.rows(), "expectation");
    require_square(op, rho.rows(), "expectation");
    // Tr[A rho] = sum_ij A_ij rho_ji
    return (op.array() * rho.transpose().array()).sum();
}

template <typename Real = double>
struct DensityDiagnostics {
    Real hermiticity_defect;  ///< max |rho - rho^dag|
    Real trace_defect;        ///< |Tr rho - 1|
    Real min_eigenvalue;      ///< of the Hermitian part

    static constexpr Real hermiticity_tol = Real(1e-10);
    static constexpr Real trace_tol = Real(1e-10);
    static constexpr Real eigenvalue_tol = Real(-1e-9);

    bool hermitian() const { return hermiticity_defect < hermiticity_tol; }
    bool normalized() const { return trace_defect < trace_tol; }
    bool positive() const { return min_eigenvalue > eigenvalue_tol; }
    bool valid() const { return hermitian() && normalized() && positive(); }
};

template <typename Derived>
auto validate_density_matrix(const Eigen::MatrixBase<Derived>& rho) {
    using Scalar = typename Derived::Scalar;
    using Real = typename Eigen::NumTraits<Scalar>::Real;
    const ComplexMatrix<Real> r = rho;
    DensityDiagnostics<Real> d;
    d.hermiticity_defect = (r - r.adjoint()).cwiseAbs().maxCoeff();
    d.trace_defect = std::abs(r.trace() - Scalar(1));
    const ComplexMatrix<Real> herm = Real(0.5) * (r + r.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix<Real>> es(herm, Eigen::EigenvaluesOnly);
    d.min_eigenvalue = es.eigenvalues().minCoeff();
    return d;
}

/// |psi><psi| for a state vector.
template <typename Derived>
auto projector(const Eigen::MatrixBase<Derived>& psi) {
    return (psi * psi.adjoint()).eval();
}

/// Basis projector |n, m><n, m|.
template <typename Real = double>
ComplexMatrix<Real> basis_state(const HilbertSpace& space, int photons, int excited) {
    ComplexMatrix<Real> rho = ComplexMatrix<Real>::Zero(space.dim(), space.dim());
    const int i = space.index(photons, excited);
    rho(i, i) = Real(1);
    return rho;
}

}  // namespace qdmnp
