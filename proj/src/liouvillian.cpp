#include "qdmnp/liouvillian.hpp"

#include <algorithm>
#include <cmath>

namespace qdmnp {

void SystemParams::validate() const {
    if (!(gamma_x > 0.0)) throw ValidationError("exciton linewidth gamma_x must be positive");
    if (!(mode.gamma_sp > 0.0)) throw ValidationError("plasmon linewidth gamma_sp must be positive");
    if (!(drive.rabi >= 0.0)) throw ValidationError("Rabi energy must be non-negative");
    geometry.validate();
}

SystemParams make_system(const QuasiModeParams& mode, const GeometryParams& geometry, double omega_x,
                         double gamma_x, DriveParams drive) {
    SystemParams p;
    p.omega_x = omega_x;
    p.gamma_x = gamma_x;
    p.mode = mode;
    p.geometry = geometry;
    p.coupling = coupling_constants(geometry, mode);
    p.drive = drive;
    p.validate();
    return p;
}

SystemParams dot_only(SystemParams p) {
    p.with_particle = false;
    p.with_dot = true;
    return p;
}

SystemParams particle_only(SystemParams p) {
    p.with_particle = true;
    p.with_dot = false;
    return p;
}

Matrix build_hamiltonian(const SystemParams& p, const HilbertSpace& space) {
    const auto ops = build_system_operators(space);
    const Complex i(0.0, 1.0);
    const double wi = p.drive.omega_i;
    Matrix H = (p.mode.omega_sp - wi) * ops.number + (p.omega_x - wi) * ops.excited;
    H += i * p.g() * (ops.a_dag * ops.sigma - ops.a * ops.sigma_dag);
    H -= p.particle_drive() * (ops.a_dag + ops.a);
    H -= p.dot_drive() * (ops.sigma_dag + ops.sigma);
    return H;
}

Liouvillian build_liouvillian(const Matrix& H, double gamma_sp, double gamma_x, const HilbertSpace& space) {
    require_square(H, space.dim(), "build_liouvillian");
    const auto ops = build_system_operators(space);
    SparseMatrix generator = commutator_superoperator(H) / units::hbar_meV_ps;
    generator += units::rate(gamma_sp) * dissipator_superoperator(ops.a);
    generator += units::rate(gamma_x) * dissipator_superoperator(ops.sigma);
    generator.prune([](Eigen::Index, Eigen::Index, const Complex& v) { return v != Complex(0.0, 0.0); });
    generator.makeCompressed();
    const double h_norm = H.cwiseAbs().rowwise().sum().maxCoeff();
    return Liouvillian{space, std::move(generator), std::max({h_norm, gamma_sp, gamma_x}) / units::hbar_meV_ps};
}

Liouvillian build_liouvillian(const SystemParams& p, const HilbertSpace& space) {
    return build_liouvillian(build_hamiltonian(p, space), p.mode.gamma_sp, p.gamma_x, space);
}

Matrix apply_liouvillian(const Liouvillian& L, const Matrix& rho) {
    require_square(rho, L.dim(), "apply_liouvillian");
    const Eigen::Index d = L.dim();
    Vector v = L.generator * Eigen::Map<const Vector>(rho.data(), d * d);
    return Eigen::Map<const Matrix>(v.data(), d, d);
}

Vector trace_row(const HilbertSpace& space) {
    const Eigen::Index d = space.dim();
    Vector t = Vector::Zero(d * d);
    for (Eigen::Index k = 0; k < d; ++k) t(k * d + k) = 1.0;
    return t;
}

}  // namespace qdmnp
