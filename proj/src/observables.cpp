#include "qdmnp/observables.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qdmnp {

namespace {

constexpr double kMinIntensity = 1e-30;

G2Series normalize(const CorrelatorSeries& c, double denominator) {
    G2Series out;
    out.tau = c.tau;
    out.values.reserve(c.values.size());
    for (const auto& v : c.values) {
        const Complex g = v / (denominator * denominator);
        out.values.push_back(g.real());
        out.max_imag = std::max(out.max_imag, std::abs(g.imag()));
    }
    return out;
}

std::vector<double> transform(const std::vector<Complex>& corr, const TauGrid& grid, double omega_i,
                              const std::vector<double>& omega_s, bool hann) {
    const double dt = grid.step / units::hbar_meV_ps;
    const int n = grid.count;
    std::vector<Complex> weighted(n);
    for (int k = 0; k < n; ++k) {
        double w = (k == 0 || k == n - 1) ? 0.5 : 1.0;
        if (hann) w *= 0.5 * (1.0 + std::cos(units::pi * k / (n - 1)));
        weighted[k] = w * dt * corr[k];
    }
    std::vector<double> out;
    out.reserve(omega_s.size());
    for (double ws : omega_s) {
        const double phase = (ws - omega_i) * dt;
        // Recurrence for e^{i phase k}.
        const Complex step(std::cos(phase), std::sin(phase));
        Complex rot(1.0, 0.0), acc(0.0, 0.0);
        for (int k = 0; k < n; ++k) {
            acc += weighted[k] * rot;
            rot *= step;
            if ((k & 63) == 63) rot /= std::abs(rot);
        }
        out.push_back(2.0 * acc.real());
    }
    return out;
}

}  // namespace

PolarizationOps polarization_ops(const SystemParams& p, const SystemOperators<double>& ops) {
    PolarizationOps pol;
    pol.plus = Matrix::Zero(ops.a.rows(), ops.a.cols());
    if (p.with_particle) pol.plus += p.chi_over_mu() * ops.a;
    if (p.with_dot) pol.plus += ops.sigma;
    pol.minus = pol.plus.adjoint();
    return pol;
}

ScatteringResult scattering_intensities(const Matrix& rho_ss, const PolarizationOps& pol, double omega_i) {
    ScatteringResult r;
    r.omega_i = omega_i;
    r.total = expectation(rho_ss, (pol.minus * pol.plus).eval()).real();
    r.coherent = std::norm(expectation(rho_ss, pol.plus));
    r.incoherent = r.total - r.coherent;
    return r;
}

Spectrum fluorescence_spectrum(const Liouvillian& L, const Matrix& rho_ss, const PolarizationOps& pol,
                               double omega_i, const std::vector<double>& omega_s, const TauGrid& grid) {
    grid.validate();
    if (grid.start != 0.0) throw ValidationError("spectrum grid must start at tau = 0");
    auto corr = two_time_correlator(L, rho_ss, pol.minus, pol.plus, grid, "<P-(0) P+(tau)>");
    const Complex coherent = expectation(rho_ss, pol.minus) * expectation(rho_ss, pol.plus);
    for (auto& c : corr.values) c -= coherent;

    const double c0 = std::abs(corr.values.front());
    const double tail = std::abs(corr.values.back());
    if (tail > 1e-4 * c0) {
        std::ostringstream os;
        os << "connected correlator has not decayed at tau = " << grid.stop() << " ps (|C(tau_max)| / |C(0)| = "
           << tail / c0 << ")";
        throw GridTooShortError(os.str());
    }

    Spectrum s;
    s.omega_s = omega_s;
    s.values = transform(corr.values, grid, omega_i, omega_s, false);
    s.window = "none";
    const double peak = *std::max_element(s.values.begin(), s.values.end());
    const double trough = *std::min_element(s.values.begin(), s.values.end());
    if (trough < -0.01 * peak) {
        s.values = transform(corr.values, grid, omega_i, omega_s, true);
        s.window = "hann";
    }
    s.max_imag_residue = std::abs(corr.values.front().imag()) / std::max(c0, 1e-300);
    return s;
}

G2Series g2_scattered(const Liouvillian& L, const Matrix& rho_ss, const PolarizationOps& pol, const TauGrid& grid) {
    const double intensity = expectation(rho_ss, (pol.minus * pol.plus).eval()).real();
    if (!(intensity > kMinIntensity)) {
        throw UndefinedCorrelationError("scattered intensity vanishes; g2 undefined");
    }
    const Matrix nn = pol.minus * pol.plus;
    const auto c = two_time_correlator(L, rho_ss, pol.minus, nn, pol.plus, grid, "<P- P-(tau) P+(tau) P+>");
    return normalize(c, intensity);
}

G2Series g2_incoherent(const Liouvillian& L, const Matrix& rho_ss, const SystemOperators<double>& ops,
                       const TauGrid& grid) {
    const double population = expectation(rho_ss, ops.excited).real();
    if (!(population > kMinIntensity)) {
        throw UndefinedCorrelationError("exciton population vanishes; g2 undefined");
    }
    const auto c = two_time_correlator(L, rho_ss, ops.sigma_dag, ops.excited, ops.sigma, grid,
                                       "<s+ s+(tau) s(tau) s>");
    return normalize(c, population);
}

double g2_zero_direct(const Matrix& rho_ss, const PolarizationOps& pol) {
    const Matrix nn = pol.minus * pol.plus;
    const double intensity = expectation(rho_ss, nn).real();
    if (!(intensity > kMinIntensity)) {
        throw UndefinedCorrelationError("scattered intensity vanishes; g2 undefined");
    }
    const Matrix fourth = pol.minus * pol.minus * pol.plus * pol.plus;
    return expectation(rho_ss, fourth).real() / (intensity * intensity);
}

}  // namespace qdmnp
