#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "qdmnp/liouvillian.hpp"
#include "qdmnp/material_optics.hpp"

namespace qdmnp::test {

inline const QuasiModeParams& silver_mode() {
    static const QuasiModeParams q = quasi_mode_params(load_permittivity_table(default_silver_table()), 3.0);
    return q;
}

// Hybrid at R = 14 nm with the exciton detuned by `detuning` from the plasmon
// and the drive at omega_x + offset.
inline SystemParams hybrid(double detuning, double rabi, double offset = 0.0, double R = 14.0) {
    GeometryParams geo;
    geo.R_nm = R;
    const auto& q = silver_mode();
    const double wx = q.omega_sp + detuning;
    return make_system(q, geo, wx, 1e-3, DriveParams{wx + offset, rabi});
}

// Drude metal eps = eps_inf - wp^2 / (w (w + i gam)), energies in eV.
struct Drude {
    double eps_inf = 5.0;
    double wp = 9.0;
    double gam = 0.05;

    std::complex<double> operator()(double w) const {
        return eps_inf - wp * wp / (w * std::complex<double>(w, gam));
    }
    PermittivityTable table(double lo, double hi, int n) const {
        std::vector<PermittivitySample> rows;
        for (int k = 0; k < n; ++k) {
            const double w = lo + (hi - lo) * k / (n - 1);
            const auto e = (*this)(w);
            rows.push_back({w, e.real(), e.imag()});
        }
        return PermittivityTable(rows, "drude");
    }
};

inline Matrix random_matrix(Eigen::Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> d;
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = Complex(d(rng), d(rng));
    return m;
}

inline Matrix random_density(Eigen::Index n, std::mt19937_64& rng) {
    const Matrix a = random_matrix(n, rng);
    Matrix rho = a * a.adjoint();
    return rho / rho.trace();
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace qdmnp::test
