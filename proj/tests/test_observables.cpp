#include <doctest.h>

#include <random>

#include <Eigen/LU>

#include "qdmnp/dynamics.hpp"
#include "qdmnp/observables.hpp"
#include "support.hpp"

using namespace qdmnp;
using test::hybrid;

namespace {

struct Solved {
    SystemParams p;
    HilbertSpace space;
    Liouvillian L;
    Matrix rho;
    SystemOperators<double> ops;
    PolarizationOps pol;
};

Solved solve(const SystemParams& p, int n_max) {
    const HilbertSpace space(n_max);
    auto L = build_liouvillian(p, space);
    Matrix rho = steady_state(L);
    auto ops = build_system_operators<double>(space);
    auto pol = polarization_ops(p, ops);
    return {p, space, std::move(L), std::move(rho), std::move(ops), std::move(pol)};
}

// S(nu) = 2 Re Tr[P+ (-(L + i nu / hbar))^{-1} M] / hbar with the connected
// initial operator M = rho P- - <P-> rho: the Laplace transform of the
// regression solution evaluated in closed form.
double resolvent_spectrum(const Solved& s, double nu) {
    const double hbar = units::hbar_meV_ps;
    const Eigen::Index d = s.L.dim();
    const Matrix m0 = s.rho * s.pol.minus - expectation(s.rho, s.pol.minus) * s.rho;
    const Eigen::Map<const Vector> v(m0.data(), m0.size());
    const Matrix shifted = -(s.L.dense() + Complex(0, nu / hbar) * Matrix::Identity(d * d, d * d));
    const Vector x = shifted.partialPivLu().solve(v);
    const Matrix X = Eigen::Map<const Matrix>(x.data(), d, d);
    return 2.0 * (s.pol.plus * X).trace().real() / hbar;
}

}  // namespace

TEST_CASE("intensity decomposition") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 8; ++k) {
        const auto s = solve(hybrid(-80 + 160 * u(rng), 1.5 * u(rng), -3 + 6 * u(rng)), 6);
        const auto r = scattering_intensities(s.rho, s.pol, s.p.drive.omega_i);
        CHECK(std::abs(r.coherent + r.incoherent - r.total) <= 1e-12 * r.total);
        CHECK(r.coherent >= -1e-12);
        CHECK(r.incoherent >= -1e-12 * r.total);
        CHECK(s.pol.minus == s.pol.plus.adjoint());
    }
}

TEST_CASE("particle alone scatters coherently") {
    const auto s = solve(particle_only(hybrid(0.0, 0.5, 2.0)), 8);
    const auto r = scattering_intensities(s.rho, s.pol, s.p.drive.omega_i);
    CHECK(r.total > 0.0);
    // only Fock truncation at n = 8 leaves an incoherent remainder
    CHECK(std::abs(r.incoherent) < 1e-9 * r.total);
}

TEST_CASE("saturated bare dot: population and incoherent intensity approach one half") {
    SystemParams p = dot_only(hybrid(0.0, 0.0));
    double prev_pop = 0.0;
    std::vector<double> coherent;
    for (double rabi : {0.0002, 0.0005, 0.001, 0.002, 0.01, 0.1, 1.0, 10.0}) {
        p.drive.rabi = rabi;
        const auto s = solve(p, 1);
        const auto r = scattering_intensities(s.rho, s.pol, p.drive.omega_i);
        const double pop = expectation(s.rho, s.ops.excited).real();
        CHECK(pop > prev_pop);
        CHECK(pop < 0.5);
        prev_pop = pop;
        coherent.push_back(r.coherent);
        if (rabi == 10.0) CHECK(r.incoherent == doctest::Approx(0.5).epsilon(1e-6));
    }
    const auto peak = std::max_element(coherent.begin(), coherent.end());
    CHECK(peak != coherent.begin());
    CHECK(peak != coherent.end() - 1);
}

TEST_CASE("Fano dip and peak around the exciton at R = 14 nm") {
    double lowest = 1e300, highest = 0.0, below = 0.0, above = 0.0;
    for (int k = -40; k <= 40; ++k) {
        const double off = 0.05 * k;
        const auto h = solve(hybrid(-60.0, 0.02, off), 4);
        const auto m = solve(particle_only(hybrid(-60.0, 0.02, off)), 4);
        const double ih = scattering_intensities(h.rho, h.pol, 0).total;
        const double im = scattering_intensities(m.rho, m.pol, 0).total;
        if (ih / im < lowest) lowest = ih / im, below = off;
        if (ih / im > highest) highest = ih / im, above = off;
    }
    CHECK(lowest < 0.5);
    CHECK(highest > 2.0);
    CHECK(above < below);
}

TEST_CASE("spectrum matches the resolvent oracle and the sum rule") {
    const auto s = solve(hybrid(0.0, 1.0), 16);
    const auto grid = default_tau_grid(s.p);
    std::vector<double> ws;
    for (int k = -300; k <= 300; ++k) ws.push_back(s.p.drive.omega_i + 0.1 * k + 0.0123);
    const auto spec = fluorescence_spectrum(s.L, s.rho, s.pol, s.p.drive.omega_i, ws, grid);
    CHECK(spec.window == "none");
    const double peak = *std::max_element(spec.values.begin(), spec.values.end());
    for (std::size_t k = 0; k < ws.size(); k += 25) {
        const double oracle = resolvent_spectrum(s, ws[k] - s.p.drive.omega_i);
        CHECK(std::abs(spec.values[k] - oracle) < 1e-3 * peak);
    }
    double integral = 0.0;
    for (std::size_t k = 0; k + 1 < ws.size(); ++k) integral += 0.5 * (spec.values[k] + spec.values[k + 1]) * 0.1;
    const auto r = scattering_intensities(s.rho, s.pol, s.p.drive.omega_i);
    CHECK(integral / (2 * units::pi) == doctest::Approx(r.incoherent).epsilon(0.01));
    CHECK(*std::min_element(spec.values.begin(), spec.values.end()) > -0.01 * peak);
}

TEST_CASE("weak drive gives a single spectral peak at the exciton") {
    const auto s = solve(hybrid(0.0, 0.02), 4);
    std::vector<double> ws;
    for (int k = -200; k <= 200; ++k) ws.push_back(s.p.omega_x + 0.1 * k);
    const auto spec = fluorescence_spectrum(s.L, s.rho, s.pol, s.p.drive.omega_i, ws, default_tau_grid(s.p));
    int maxima = 0;
    for (std::size_t k = 1; k + 1 < ws.size(); ++k)
        if (spec.values[k] > spec.values[k - 1] && spec.values[k] >= spec.values[k + 1]) ++maxima;
    CHECK(maxima == 1);
    const auto top = std::max_element(spec.values.begin(), spec.values.end()) - spec.values.begin();
    CHECK(std::abs(ws[top] - s.p.omega_x) < 0.15);
}

TEST_CASE("Mollow sidebands move out with the drive") {
    double previous = 0.0;
    for (double rabi : {1.0, 1.5}) {
        const auto s = solve(hybrid(0.0, rabi), 16);
        std::vector<double> ws;
        for (int k = 0; k <= 400; ++k) ws.push_back(s.p.drive.omega_i + 0.1 * k);
        const auto spec = fluorescence_spectrum(s.L, s.rho, s.pol, s.p.drive.omega_i, ws, default_tau_grid(s.p));
        double side = 0.0;
        for (std::size_t k = 1; k + 1 < ws.size(); ++k)
            if (spec.values[k] > spec.values[k - 1] && spec.values[k] >= spec.values[k + 1]) side = ws[k] - ws[0];
        CHECK(side > previous);
        previous = side;
    }
}

TEST_CASE("truncated correlator grid is rejected") {
    const auto s = solve(hybrid(0.0, 0.5), 8);
    const TauGrid short_grid{0.0, 0.001, 100};
    CHECK_THROWS_AS(fluorescence_spectrum(s.L, s.rho, s.pol, s.p.drive.omega_i, {s.p.omega_x}, short_grid),
                    GridTooShortError);
    CHECK_THROWS_AS(fluorescence_spectrum(s.L, s.rho, s.pol, s.p.drive.omega_i, {s.p.omega_x}, TauGrid{1.0, 0.1, 10}),
                    ValidationError);
}

TEST_CASE("coherent light has flat g2") {
    const auto s = solve(particle_only(hybrid(0.0, 0.3, 1.0)), 10);
    const auto g2 = g2_scattered(s.L, s.rho, s.pol, TauGrid{0.0, 0.02, 200});
    for (double v : g2.values) CHECK(std::abs(v - 1.0) < 1e-6);
}

TEST_CASE("bunching at the Fano dip and antibunching at the peak") {
    const auto dip = solve(hybrid(-60.0, 0.02, 0.0387), 4);
    const auto peak = solve(hybrid(-60.0, 0.02, -0.844), 4);
    CHECK(g2_zero_direct(dip.rho, dip.pol) > 100.0);
    CHECK(g2_zero_direct(peak.rho, peak.pol) < 1.0);
}

TEST_CASE("regression g2 at zero delay equals the direct fourth moment and decays to one") {
    const auto s = solve(hybrid(-60.0, 0.2, -0.4), 6);
    const auto g2 = g2_scattered(s.L, s.rho, s.pol, TauGrid{0.0, 0.2, 300});
    CHECK(g2.values[0] == doctest::Approx(g2_zero_direct(s.rho, s.pol)).epsilon(1e-10));
    CHECK(std::abs(g2.values.back() - 1.0) < 1e-4);
    CHECK(g2.max_imag < 1e-8 * std::abs(g2.values[0]));
}

TEST_CASE("incoherent g2 starts at zero and recovers") {
    const auto s = solve(hybrid(0.0, 0.02), 4);
    const auto g2 = g2_incoherent(s.L, s.rho, s.ops, TauGrid{0.0, 0.05, 101});
    CHECK(g2.values[0] == 0.0);
    CHECK(g2.values.back() == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("g2 is undefined without light") {
    const auto s = solve(hybrid(0.0, 0.0), 2);
    CHECK_THROWS_AS(g2_scattered(s.L, s.rho, s.pol, TauGrid{0.0, 0.1, 3}), UndefinedCorrelationError);
    CHECK_THROWS_AS(g2_incoherent(s.L, s.rho, s.ops, TauGrid{0.0, 0.1, 3}), UndefinedCorrelationError);
    CHECK_THROWS_AS(g2_zero_direct(s.rho, s.pol), UndefinedCorrelationError);
}
