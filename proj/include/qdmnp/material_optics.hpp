#pragma once

#include <complex>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "qdmnp/interpolation.hpp"

namespace qdmnp {

struct PermittivitySample {
    double energy_eV;
    double eps_re;
    double eps_im;
};

/// Tabulated complex dielectric function of the metal, with a monotone
/// cubic interpolant on the real and imaginary parts. Immutable after
/// construction.
class PermittivityTable {
public:
    /// Validates the rows: strictly increasing energies, at least four rows,
    /// and Im eps >= 0 everywhere. Throws ValidationError otherwise.
    PermittivityTable(std::vector<PermittivitySample> rows, std::string source);

    const std::vector<PermittivitySample>& rows() const noexcept { return rows_; }
    const std::string& source() const noexcept { return source_; }
    double min_energy() const noexcept { return rows_.front().energy_eV; }
    double max_energy() const noexcept { return rows_.back().energy_eV; }

    /// eps_m at a photon energy in eV; DomainError outside the table.
    std::complex<double> operator()(double energy_eV) const;
    /// d eps_m / d(energy) per eV, from the interpolant.
    std::complex<double> derivative(double energy_eV) const;

private:
    void check_domain(double energy_eV) const;

    std::vector<PermittivitySample> rows_;
    std::string source_;
    MonotoneCubic<double> re_, im_;
};

/// CSV with header `energy_ev,eps_re,eps_im`.
PermittivityTable load_permittivity_table(const std::filesystem::path& path);
PermittivityTable parse_permittivity_table(std::istream& in, const std::string& source);

/// Path of the bundled silver table.
std::filesystem::path default_silver_table();

std::complex<double> permittivity(const PermittivityTable& table, double energy_eV);

/// Every energy (eV) where Re eps_m = -2 eps_b, ascending.
std::vector<double> find_sp_resonances(const PermittivityTable& table, double eps_b);

/// Lowest-energy root of Re eps_m(w) + 2 eps_b, in eV. Logs a warning when
/// more than one root exists. Throws NoResonanceError if there is none.
double find_sp_resonance(const PermittivityTable& table, double eps_b);

/// Lorentzian quasi-mode reduction of the dipolar particle response. All
/// energies in meV.
struct QuasiModeParams {
    double omega_sp;  ///< resonance energy
    double gamma_sp;  ///< linewidth, 2 eta Im eps_m(omega_sp)
    double eta;       ///< inverse slope of Re eps_m at the resonance
    double eps_b;     ///< background permittivity
};

QuasiModeParams quasi_mode_params(const PermittivityTable& table, double eps_b);

/// beta(w) = 3 i eps_b eta / (i (omega_sp - w) + gamma_sp / 2), w in meV.
std::complex<double> beta_lorentzian(double omega_meV, const QuasiModeParams& q);

/// Quasi-static polarizability factor (eps_m - eps_b) / (2 eps_b + eps_m).
std::complex<double> beta_exact(const PermittivityTable& table, double omega_meV, double eps_b);

struct GeometryParams {
    double R_nm = 14.0;     ///< centre-to-centre dot/particle distance
    double r_m_nm = 7.0;    ///< particle radius
    double s_alpha = 2.0;   ///< 2 for a field along the axis, -1 across it
    double mu_enm = 0.7;    ///< dot dipole moment

    void validate() const;
};

/// Dot/plasmon coupling and the plasmon dipole coefficient.
struct CouplingConstants {
    double g_meV;      ///< coupling energy (hbar g)
    double chi_enm;    ///< plasmon dipole per unit <a>, in e*nm
    double field;      ///< vacuum field at the dot, in meV/(e*nm)

    double chi_SI() const;    ///< C*m
    double field_SI() const;  ///< V/m
};

/// Vacuum field amplitude at the dot and plasmon dipole coefficient from
/// the quasi-mode parameters, evaluated in SI and returned in internal units.
CouplingConstants coupling_constants(const GeometryParams& geo, const QuasiModeParams& q);

/// Plasmon-induced damping of the dot, g^2 gamma_sp / ((gamma_sp/2)^2 + (omega_sp - w)^2).
double effective_qd_damping(double g_meV, const QuasiModeParams& q, double omega_meV);

}  // namespace qdmnp
