#include <doctest.h>

#include "qdmnp/dynamics.hpp"
#include "qdmnp/observables.hpp"
#include "qdmnp/semiclassical.hpp"
#include "support.hpp"

using namespace qdmnp;
using test::hybrid;

TEST_CASE("weak drive without coupling gives the driven Lorentzian amplitude") {
    const SystemParams p = particle_only(hybrid(0.0, 1e-4, 12.0));
    const auto s = weak_drive_response(p);
    const Complex i(0, 1);
    const double hbar = units::hbar_meV_ps;
    const Complex expected = i * p.particle_drive() / hbar /
                             (i * (p.mode.omega_sp - p.drive.omega_i) / hbar + p.mode.gamma_sp / (2 * hbar));
    CHECK(std::abs(s.a - expected) < 1e-14 * std::abs(expected));
    CHECK(s.sigma == Complex(0.0));
}

TEST_CASE("mean field reduces to linear response at vanishing drive") {
    for (double off : {-1.0, 0.04, 2.0}) {
        const SystemParams p = hybrid(-60.0, 1e-7, off);
        const auto lin = weak_drive_response(p);
        const auto mf = mean_field_steady_state(p);
        CHECK(std::abs(mf.a - lin.a) < 1e-10 * std::abs(lin.a));
        CHECK(std::abs(mf.sigma - lin.sigma) < 1e-10 * std::abs(lin.sigma));
    }
}

TEST_CASE("mean field is exact for the bare dot") {
    SystemParams p = dot_only(hybrid(0.0, 0.0));
    p.gamma_x = 0.01;
    for (double rabi : {0.001, 0.05, 1.0}) {
        for (double det : {0.0, 0.02}) {
            p.drive.rabi = rabi;
            p.drive.omega_i = p.omega_x - det;
            const auto mf = mean_field_steady_state(p);
            const double expected = (rabi * rabi / 4) / (det * det + p.gamma_x * p.gamma_x / 4 + rabi * rabi / 2);
            CHECK(mf.population == doctest::Approx(expected).epsilon(1e-10));
            CHECK(std::norm(mf.sigma) <= mf.population + 1e-15);
        }
    }
}

TEST_CASE("mean field saturates below one half") {
    const auto mf = mean_field_steady_state(hybrid(0.0, 1.0));
    CHECK(mf.population < 0.5);
    CHECK(mf.population > 0.45);
    // the balance terms are of order 0.5 meV
    CHECK(mf.residual < 1e-10);
}

TEST_CASE("linear response agrees with the full quantum solution at weak drive") {
    for (double off : {-70.0, -1.0, 0.04, 25.0}) {
        const SystemParams p = hybrid(-60.0, 1e-4, off);
        const HilbertSpace space(3);
        const auto L = build_liouvillian(p, space);
        const Matrix rho = steady_state(L);
        const auto ops = build_system_operators<double>(space);
        const auto lin = weak_drive_response(p);
        CHECK(std::abs(expectation(rho, ops.a) - lin.a) < 1e-3 * std::abs(lin.a));
        CHECK(std::abs(expectation(rho, ops.sigma) - lin.sigma) < 1e-3 * std::abs(lin.sigma));
    }
}

TEST_CASE("an overdamped dot decouples") {
    SystemParams p = hybrid(-60.0, 1e-4, 0.0);
    p.gamma_x = 1e6;
    const double with_dot = coherent_intensity(weak_drive_response(p), p);
    const double alone = coherent_intensity(weak_drive_response(particle_only(p)), particle_only(p));
    CHECK(with_dot == doctest::Approx(alone).epsilon(1e-4));
}

TEST_CASE("linear response shows the Fano dip and peak near the exciton") {
    std::vector<double> offs, vals;
    for (int k = -300; k <= 300; ++k) {
        const SystemParams p = hybrid(-60.0, 1e-4, 0.01 * k);
        offs.push_back(0.01 * k);
        vals.push_back(coherent_intensity(weak_drive_response(p), p));
    }
    const auto lo = std::min_element(vals.begin(), vals.end()) - vals.begin();
    const auto hi = std::max_element(vals.begin(), vals.end()) - vals.begin();
    CHECK(std::abs(offs[lo]) < 0.2);
    CHECK(offs[hi] < offs[lo]);
    CHECK(offs[hi] > -2.0);
}

TEST_CASE("factorized model: saturation flattens the spectrum") {
    for (double det : {-60.0, 0.0, 60.0}) {
        // On resonance the dressed line is broad and strong drive power-broadens
        // it into the far wings, so only the line itself is checked there.
        const SystemParams weak = hybrid(det, 0.02);
        const double window = det == 0.0 ? weak.gamma_x + weak.gamma_prime() : 6.0;
        for (int k = -12; k <= 12; ++k) {
            if (std::abs(0.5 * k) > window) continue;
            double prev = 1e300;
            for (double rabi : {0.02, 0.4, 1.0}) {
                const SystemParams p = hybrid(det, rabi, 0.5 * k);
                const SystemParams m = particle_only(p);
                const double hybrid_i = coherent_intensity(mean_field_steady_state(p), p);
                const double particle_i = coherent_intensity(weak_drive_response(m), m);
                const double deviation = std::abs(hybrid_i / particle_i - 1.0);
                CHECK(deviation <= prev * (1 + 1e-9));
                prev = deviation;
            }
        }
    }
}
