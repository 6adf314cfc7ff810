#include "qdmnp/semiclassical.hpp"

#include <cmath>
#include <sstream>

namespace qdmnp {

namespace {

struct Amplitudes {
    Complex a, sigma;
};

// z_sp a - g s = i F_sp ;  g q a + z_x s = i F_x q  with q = 1 - 2 n.
Amplitudes solve_amplitudes(const SystemParams& p, double population) {
    const Complex i(0.0, 1.0);
    const double q = 1.0 - 2.0 * population;
    const double g = p.g();
    const Complex z_sp = i * (p.mode.omega_sp - p.drive.omega_i) + 0.5 * p.mode.gamma_sp;
    const Complex z_x = i * (p.omega_x - p.drive.omega_i) + 0.5 * p.gamma_x;
    const Complex f_sp = i * p.particle_drive();
    const Complex f_x = i * p.dot_drive() * q;
    const Complex det = z_sp * z_x + g * g * q;
    if (std::abs(det) == 0.0) throw ModelError("mean-field equations are singular");
    return {(f_sp * z_x + g * f_x) / det, (z_sp * f_x - g * q * f_sp) / det};
}

// gamma_x n - (Omega Im s - 2 g Re(a^* s)): zero at the steady state.
double population_balance(const SystemParams& p, double population, Amplitudes* amps = nullptr) {
    const Amplitudes x = solve_amplitudes(p, population);
    if (amps) *amps = x;
    const double pumped = 2.0 * p.dot_drive() * x.sigma.imag() - 2.0 * p.g() * (std::conj(x.a) * x.sigma).real();
    return p.gamma_x * population - pumped;
}

}  // namespace

MeanFieldState weak_drive_response(const SystemParams& p) {
    const Complex i(0.0, 1.0);
    const double g = p.g();
    const Complex z_sp = i * (p.mode.omega_sp - p.drive.omega_i) + 0.5 * p.mode.gamma_sp;
    const Complex z_x = i * (p.omega_x - p.drive.omega_i) + 0.5 * p.gamma_x;
    const Complex det = z_sp * z_x + g * g;
    if (std::abs(det) == 0.0) throw ModelError("linear-response system is singular");
    const Complex f_sp = i * p.particle_drive();
    const Complex f_x = i * p.dot_drive();
    MeanFieldState s;
    s.a = (f_sp * z_x + g * f_x) / det;
    s.sigma = (z_sp * f_x - g * f_sp) / det;
    s.population = std::norm(s.sigma);
    return s;
}

MeanFieldState mean_field_steady_state(const SystemParams& p) {
    double lo = 0.0, hi = 0.5;
    double f_lo = population_balance(p, lo);
    if (f_lo == 0.0) {
        MeanFieldState s;
        const auto x = solve_amplitudes(p, 0.0);
        s.a = x.a;
        s.sigma = x.sigma;
        return s;
    }
    if (f_lo > 0.0) {
        std::ostringstream os;
        os << "population balance has no root on [0, 1/2] (balance at 0: " << f_lo << ")";
        throw ConvergenceError(os.str());
    }
    int it = 0;
    for (; it < 10000 && hi - lo > 1e-17; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double f_mid = population_balance(p, mid);
        if (f_mid <= 0.0) lo = mid;
        else hi = mid;
    }
    MeanFieldState s;
    s.population = 0.5 * (lo + hi);
    Amplitudes x;
    s.residual = std::abs(population_balance(p, s.population, &x));
    s.a = x.a;
    s.sigma = x.sigma;
    s.iterations = it;
    return s;
}

double coherent_intensity(const MeanFieldState& s, const SystemParams& p) {
    Complex pol(0.0, 0.0);
    if (p.with_particle) pol += p.chi_over_mu() * s.a;
    if (p.with_dot) pol += s.sigma;
    return std::norm(pol);
}

}  // namespace qdmnp
