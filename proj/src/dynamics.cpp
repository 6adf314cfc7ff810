#include "qdmnp/dynamics.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/SparseLU>
#include <unsupported/Eigen/MatrixFunctions>

#include "qdmnp/log.hpp"

namespace qdmnp {

namespace {

Eigen::Map<const Vector> as_vector(const Matrix& m) { return {m.data(), m.size()}; }

Matrix as_matrix(const Vector& v, Eigen::Index dim) { return Eigen::Map<const Matrix>(v.data(), dim, dim); }

double inf_norm(const SparseMatrix& m) {
    Eigen::VectorXd rows = Eigen::VectorXd::Zero(m.rows());
    for (Eigen::Index k = 0; k < m.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(m, k); it; ++it) rows(it.row()) += std::abs(it.value());
    return rows.size() ? rows.maxCoeff() : 0.0;
}

double max_abs(const SparseMatrix& m) {
    double out = 0.0;
    for (Eigen::Index k = 0; k < m.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(m, k); it; ++it) out = std::max(out, std::abs(it.value()));
    return out;
}

class Rk4Stepper {
public:
    Rk4Stepper(const SparseMatrix& generator, double rate_scale, double interval, const EvolveOptions& opt,
               const Vector& probe)
        : G_(generator) {
        const double norm = rate_scale > 0.0 ? rate_scale : inf_norm(G_);
        double h = norm > 0.0 ? std::min(interval, opt.safety / norm) : interval;
        const double h_floor = 1e-14 * std::max(interval, 1e-300);
        while (true) {
            const Vector full = step(probe, h);
            const Vector half = step(step(probe, 0.5 * h), 0.5 * h);
            const double scale = std::max(half.cwiseAbs().maxCoeff(), 1e-300);
            if ((full - half).cwiseAbs().maxCoeff() <= opt.step_tolerance * scale) break;
            h *= 0.5;
            if (h < h_floor) {
                std::ostringstream os;
                os << "RK4 step underflow (h = " << h << " ps, rate scale " << norm
                   << " /ps); reduce the Fock cutoff or rescale units";
                throw StiffnessError(os.str());
            }
        }
        substeps_ = interval > 0.0 ? static_cast<long>(std::ceil(interval / h - 1e-9)) : 0;
        h_ = substeps_ > 0 ? interval / static_cast<double>(substeps_) : 0.0;
    }

    long substeps() const { return substeps_; }

    Vector advance(Vector v) const {
        for (long k = 0; k < substeps_; ++k) v = step(v, h_);
        return v;
    }

    Vector step(const Vector& v, double h) const {
        const Vector k1 = G_ * v;
        const Vector k2 = G_ * (v + 0.5 * h * k1);
        const Vector k3 = G_ * (v + 0.5 * h * k2);
        const Vector k4 = G_ * (v + h * k3);
        return v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

private:
    const SparseMatrix& G_;
    double h_ = 0.0;
    long substeps_ = 0;
};

}  // namespace

double steady_state_residual(const Liouvillian& L, const Matrix& rho) {
    return apply_liouvillian(L, rho).cwiseAbs().maxCoeff();
}

Matrix steady_state(const Liouvillian& L, double tolerance) {
    const Eigen::Index d = L.dim();
    const double scale = std::max(max_abs(L.generator), 1.0);
    // Row 0 of the generator is the equation for rho_00; swap it for the
    // trace constraint.
    std::vector<Eigen::Triplet<Complex>> triplets;
    triplets.reserve(static_cast<std::size_t>(L.generator.nonZeros() + d));
    for (Eigen::Index k = 0; k < L.generator.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(L.generator, k); it; ++it)
            if (it.row() != 0) triplets.emplace_back(it.row(), it.col(), it.value());
    for (Eigen::Index k = 0; k < d; ++k) triplets.emplace_back(0, k * d + k, scale);
    SparseMatrix bordered(d * d, d * d);
    bordered.setFromTriplets(triplets.begin(), triplets.end());
    bordered.makeCompressed();
    Vector rhs = Vector::Zero(d * d);
    rhs(0) = scale;

    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(bordered);
    if (lu.info() != Eigen::Success) {
        throw NonUniqueSteadyStateError("bordered steady-state system is singular; steady state not unique (" +
                                        lu.lastErrorMessage() + ")");
    }
    Vector x = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !x.allFinite()) {
        throw NonUniqueSteadyStateError("bordered steady-state solve failed; steady state not unique");
    }
    for (int pass = 0; pass < 2; ++pass) {
        const Vector correction = lu.solve(rhs - bordered * x);
        if (!correction.allFinite()) break;
        x += correction;
    }
    // Exactly singular systems often factor with rounding-level pivots, so
    // probe the inverse with a fixed vector to catch them.
    Vector probe(d * d);
    for (Eigen::Index k = 0; k < probe.size(); ++k) probe(k) = std::polar(1.0, 0.7 * static_cast<double>(k));
    const Vector y = lu.solve(probe);
    const double condition = y.cwiseAbs().maxCoeff() * inf_norm(bordered);
    if (!(condition < 1e13)) {
        std::ostringstream os;
        os << "bordered steady-state system is numerically singular (condition estimate " << condition
           << "); steady state not unique";
        throw NonUniqueSteadyStateError(os.str());
    }
    Matrix rho = as_matrix(x, d);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace();

    const double residual = steady_state_residual(L, rho);
    if (!(residual <= tolerance)) {
        std::ostringstream os;
        os << "steady-state residual " << residual << " /ps exceeds " << tolerance;
        throw ConvergenceError(os.str());
    }
    return rho;
}

Matrix evolve(const Liouvillian& L, const Matrix& rho0, double t_ps, const EvolveOptions& opt) {
    require_square(rho0, L.dim(), "evolve");
    if (t_ps < 0.0) throw ValidationError("evolve: negative duration");
    if (t_ps == 0.0) return rho0;
    const Vector v0 = as_vector(rho0);
    const Rk4Stepper stepper(L.generator, L.rate_scale, t_ps, opt, v0);
    if (stepper.substeps() > opt.max_rk4_steps) {
        log::info("evolve: " + std::to_string(stepper.substeps()) + " RK4 steps needed, using exp(L t)");
        const Matrix propagator = (L.dense() * t_ps).exp();
        return as_matrix(propagator * v0, L.dim());
    }
    return as_matrix(stepper.advance(v0), L.dim());
}

void TauGrid::validate() const {
    if (count < 1) throw ValidationError("tau grid needs at least one point");
    if (!(start >= 0.0)) throw ValidationError("tau grid must be non-negative");
    if (count > 1 && !(step > 0.0)) throw ValidationError("tau grid step must be positive");
}

CorrelatorSeries two_time_correlator(const Liouvillian& L, const Matrix& rho_ss, const Matrix& A, const Matrix& B,
                                     const Matrix& C, const TauGrid& grid, std::string label) {
    grid.validate();
    const Eigen::Index d = L.dim();
    require_square(rho_ss, d, "two_time_correlator");
    require_square(A, d, "two_time_correlator");
    require_square(B, d, "two_time_correlator");
    require_square(C, d, "two_time_correlator");

    CorrelatorSeries out;
    out.label = std::move(label);
    out.tau.reserve(grid.count);
    out.values.reserve(grid.count);

    Matrix m0 = C * rho_ss * A;
    if (grid.start > 0.0) m0 = evolve(L, m0, grid.start);
    Vector v = as_vector(m0);
    // Tr[B M] = vec(B^T) . vec(M)
    const Matrix bt = B.transpose();
    const auto probe = as_vector(bt);
    const auto record = [&](int k, const Vector& x) {
        out.tau.push_back(grid[k]);
        out.values.push_back(probe.transpose() * x);
    };

    record(0, v);
    if (grid.count == 1) return out;

    if (grid.count > 500) {
        const Matrix propagator = (L.dense() * grid.step).exp();
        for (int k = 1; k < grid.count; ++k) {
            v = propagator * v;
            record(k, v);
        }
    } else {
        const Rk4Stepper stepper(L.generator, L.rate_scale, grid.step, EvolveOptions{}, v);
        for (int k = 1; k < grid.count; ++k) {
            v = stepper.advance(v);
            record(k, v);
        }
    }
    return out;
}

CorrelatorSeries two_time_correlator(const Liouvillian& L, const Matrix& rho_ss, const Matrix& A, const Matrix& B,
                                     const TauGrid& grid, std::string label) {
    return two_time_correlator(L, rho_ss, A, B, Matrix::Identity(L.dim(), L.dim()), grid, std::move(label));
}

TauGrid default_tau_grid(const SystemParams& p, int count) {
    const double slowest = std::min(p.gamma_x + p.gamma_prime(), p.mode.gamma_sp);
    const double span = 40.0 * units::hbar_meV_ps / slowest;
    return TauGrid{0.0, span / (count - 1), count};
}

FockConvergence converge_fock_cutoff(const SystemParams& p, const SteadyObservable& observable, double tol,
                                     int start, int cap) {
    if (!(tol > 0.0)) throw ValidationError("convergence tolerance must be positive");
    const auto evaluate = [&](int n_max) {
        const HilbertSpace space(n_max);
        const auto L = build_liouvillian(p, space);
        const Matrix rho = steady_state(L);
        return observable(rho, build_system_operators(space), p);
    };
    int n = start;
    double value = evaluate(n);
    while (true) {
        const int next = 2 * n;
        if (next > cap) {
            std::ostringstream os;
            os << "Fock cutoff did not converge below cap " << cap << " (last value " << value << ")";
            throw ConvergenceError(os.str());
        }
        const double next_value = evaluate(next);
        const double change = std::abs(next_value - value) / std::max(std::abs(next_value), 1e-300);
        if (change < tol) return {n, value, change};
        n = next;
        value = next_value;
    }
}

}  // namespace qdmnp
