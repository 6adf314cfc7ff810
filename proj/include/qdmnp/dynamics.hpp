#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qdmnp/liouvillian.hpp"

namespace qdmnp {

/// Steady state of L by the bordered solve {L(rho) = 0, Tr rho = 1}: the
/// equation of the (0,0) element is replaced by the trace constraint. The
/// result is Hermitized; throws NonUniqueSteadyStateError when the bordered
/// system is singular and ConvergenceError when the residual
/// max|L(rho)| exceeds `tolerance` (1/ps).
Matrix steady_state(const Liouvillian& L, double tolerance = 1e-10);

/// max |L(rho)| in 1/ps.
double steady_state_residual(const Liouvillian& L, const Matrix& rho);

struct EvolveOptions {
    double safety = 0.1;            ///< h <= safety / L.rate_scale (||L||_inf if unset)
    double step_tolerance = 1e-12;  ///< accepted RK4 half-step discrepancy, relative
    long max_rk4_steps = 200000;    ///< beyond this, propagate with a matrix exponential
};

/// rho(t) = exp(L t) rho0 with fixed-step RK4 (step chosen by halving until
/// the one-step / two-half-steps discrepancy is below tolerance). Works on
/// any matrix, not only density matrices. Throws StiffnessError when the
/// step underflows.
Matrix evolve(const Liouvillian& L, const Matrix& rho0, double t_ps, const EvolveOptions& opt = {});

/// Uniform non-negative time grid tau_k = start + k step, k < count.
struct TauGrid {
    double start = 0.0;
    double step = 0.0;
    int count = 0;

    double operator[](int k) const { return start + k * step; }
    double stop() const { return (*this)[count - 1]; }
    void validate() const;
};

struct CorrelatorSeries {
    std::vector<double> tau;     ///< ps
    std::vector<Complex> values;
    std::string label;
};

/// <A(t) B(t+tau) C(t)> in the steady state by the quantum regression
/// theorem: M(0) = C rho_ss A evolves under L and is traced against B.
CorrelatorSeries two_time_correlator(const Liouvillian& L, const Matrix& rho_ss, const Matrix& A, const Matrix& B,
                                     const Matrix& C, const TauGrid& grid, std::string label = {});

/// Two-operator case <A(t) B(t+tau)>, M(0) = rho_ss A.
CorrelatorSeries two_time_correlator(const Liouvillian& L, const Matrix& rho_ss, const Matrix& A, const Matrix& B,
                                     const TauGrid& grid, std::string label = {});

/// Default correlator grid: 2048 points over 40 hbar / min(gamma_x + Gamma', gamma_sp).
TauGrid default_tau_grid(const SystemParams& p, int count = 2048);

/// A scalar computed from the steady state of a system at a given cutoff.
using SteadyObservable =
    std::function<double(const Matrix& rho, const SystemOperators<double>& ops, const SystemParams& p)>;

struct FockConvergence {
    int n_max;
    double value;
    double relative_change;
};

/// Doubles the cutoff from `start` until the observable changes by less
/// than `tol` (relative) between consecutive cutoffs and returns the
/// smaller one. ConvergenceError beyond `cap`.
FockConvergence converge_fock_cutoff(const SystemParams& p, const SteadyObservable& observable, double tol,
                                     int start = 4, int cap = 64);

}  // namespace qdmnp
