#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <unsupported/Eigen/KroneckerProduct>

#include "qdmnp/material_optics.hpp"
#include "qdmnp/quantum_core.hpp"
#include "qdmnp/units.hpp"

namespace qdmnp {

/// Monochromatic drive. Energies in meV.
struct DriveParams {
    double omega_i = 0.0;  ///< incident photon energy
    double rabi = 0.0;     ///< Rabi energy 2 mu E0
};

/// Full physical description of the hybrid molecule. `with_particle` and
/// `with_dot` switch off one partner: the dot alone (no coupling, no plasmon
/// drive, no plasmon dipole) or the particle alone (no coupling, undriven
/// dot with no dipole in the polarization).
struct SystemParams {
    double omega_x = 0.0;  ///< exciton energy [meV]
    double gamma_x = 1e-3; ///< intrinsic exciton linewidth [meV]
    QuasiModeParams mode{};
    CouplingConstants coupling{};
    GeometryParams geometry{};
    DriveParams drive{};
    bool with_particle = true;
    bool with_dot = true;

    double g() const { return with_particle && with_dot ? coupling.g_meV : 0.0; }
    /// Plasmon dipole per unit <a> relative to the dot dipole.
    double chi_over_mu() const { return coupling.chi_enm / geometry.mu_enm; }
    /// chi E0 = (chi / mu) (Omega / 2) [meV]
    double particle_drive() const { return with_particle ? chi_over_mu() * 0.5 * drive.rabi : 0.0; }
    /// mu E0 = Omega / 2 [meV]
    double dot_drive() const { return with_dot ? 0.5 * drive.rabi : 0.0; }
    /// Plasmon-induced dot damping at the exciton energy (zero without the particle).
    double gamma_prime() const { return g() == 0.0 ? 0.0 : effective_qd_damping(g(), mode, omega_x); }

    void validate() const;
};

SystemParams make_system(const QuasiModeParams& mode, const GeometryParams& geometry, double omega_x,
                         double gamma_x, DriveParams drive);

SystemParams dot_only(SystemParams p);
SystemParams particle_only(SystemParams p);

template <typename Real>
using SparseComplexMatrix = Eigen::SparseMatrix<std::complex<Real>>;
using SparseMatrix = SparseComplexMatrix<double>;

/// Lindblad generator on column-stacked density matrices, in 1/ps. Stored
/// sparse: it has O(dim^2) non-zeros out of dim^4 entries.
struct Liouvillian {
    HilbertSpace space;
    SparseMatrix generator;
    /// max(||H||_inf, gamma_sp, gamma_x) / hbar [1/ps]; sets the initial
    /// integration step. Zero when unknown.
    double rate_scale = 0.0;

    Eigen::Index dim() const { return space.dim(); }
    Matrix dense() const { return Matrix(generator); }
};

// Superoperator building blocks, column-stacking convention:
// vec(A X B) = (B^T kron A) vec(X).

template <typename Real>
SparseComplexMatrix<Real> left_multiplication(const ComplexMatrix<Real>& A) {
    SparseComplexMatrix<Real> id(A.rows(), A.cols());
    id.setIdentity();
    return Eigen::kroneckerProduct(id, SparseComplexMatrix<Real>(A.sparseView())).eval();
}

template <typename Real>
SparseComplexMatrix<Real> right_multiplication(const ComplexMatrix<Real>& B) {
    SparseComplexMatrix<Real> id(B.rows(), B.cols());
    id.setIdentity();
    const ComplexMatrix<Real> bt = B.transpose();
    return Eigen::kroneckerProduct(SparseComplexMatrix<Real>(bt.sparseView()), id).eval();
}

/// X -> -i [H, X] (no 1/hbar).
template <typename Real>
SparseComplexMatrix<Real> commutator_superoperator(const ComplexMatrix<Real>& H) {
    const std::complex<Real> minus_i(0, -1);
    return (minus_i * (left_multiplication(H) - right_multiplication(H))).eval();
}

/// X -> c X c^dag - (c^dag c X + X c^dag c) / 2.
template <typename Real>
SparseComplexMatrix<Real> dissipator_superoperator(const ComplexMatrix<Real>& c) {
    const ComplexMatrix<Real> cdc = c.adjoint() * c;
    const ComplexMatrix<Real> cc = c.conjugate();
    const SparseComplexMatrix<Real> jump =
        Eigen::kroneckerProduct(SparseComplexMatrix<Real>(cc.sparseView()), SparseComplexMatrix<Real>(c.sparseView()));
    return (jump - Real(0.5) * left_multiplication(cdc) - Real(0.5) * right_multiplication(cdc)).eval();
}

/// Hamiltonian in the frame rotating at the drive frequency, in meV:
/// (w_sp - w_i) a^dag a + (w_x - w_i) s^dag s + i g (a^dag s - a s^dag)
///   - chi E0 (a^dag + a) - mu E0 (s^dag + s).
Matrix build_hamiltonian(const SystemParams& p, const HilbertSpace& space);

Liouvillian build_liouvillian(const Matrix& H, double gamma_sp, double gamma_x, const HilbertSpace& space);
Liouvillian build_liouvillian(const SystemParams& p, const HilbertSpace& space);

/// d rho / dt = L(rho), reshaped back to a matrix.
Matrix apply_liouvillian(const Liouvillian& L, const Matrix& rho);

/// The trace functional as a row vector: Tr X = trace_row . vec(X).
Vector trace_row(const HilbertSpace& space);

}  // namespace qdmnp
