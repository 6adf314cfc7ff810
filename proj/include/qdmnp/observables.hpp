#pragma once

#include <string>
#include <vector>

#include "qdmnp/dynamics.hpp"

namespace qdmnp {

/// Total polarization P+ = chi a + mu sigma in units of the dot dipole mu,
/// so intensities come out in mu^2 units.
struct PolarizationOps {
    Matrix plus;
    Matrix minus;
};

PolarizationOps polarization_ops(const SystemParams& p, const SystemOperators<double>& ops);

struct ScatteringResult {
    double omega_i;
    double total;       ///< <P- P+>
    double coherent;    ///< |<P+>|^2
    double incoherent;  ///< total - coherent
};

ScatteringResult scattering_intensities(const Matrix& rho_ss, const PolarizationOps& pol, double omega_i);

struct Spectrum {
    std::vector<double> omega_s;  ///< detection energy, lab frame [meV]
    std::vector<double> values;   ///< normalized so that sum S d(omega)/(2 pi) = I_incoh
    std::string window;           ///< "none" or "hann"
    double max_imag_residue = 0.0;
};

/// Incoherent resonance-fluorescence spectrum
/// S(w) = 2 Re int_0^inf <P-(0), P+(tau)> e^{i w tau / hbar} d tau / hbar
/// from the connected correlator on `grid`. A Hann taper on the tau tail is
/// applied when the untapered transform dips below -1% of its peak.
/// GridTooShortError when the correlator has not decayed by the last point.
Spectrum fluorescence_spectrum(const Liouvillian& L, const Matrix& rho_ss, const PolarizationOps& pol,
                               double omega_i, const std::vector<double>& omega_s, const TauGrid& grid);

/// Real-valued normalized correlation function.
struct G2Series {
    std::vector<double> tau;
    std::vector<double> values;
    double max_imag = 0.0;  ///< largest |Im| before taking the real part
};

/// <P-(t) P-(t+tau) P+(t+tau) P+(t)> / <P- P+>^2.
G2Series g2_scattered(const Liouvillian& L, const Matrix& rho_ss, const PolarizationOps& pol, const TauGrid& grid);

/// <s^dag(t) s^dag(t+tau) s(t+tau) s(t)> / <s^dag s>^2.
G2Series g2_incoherent(const Liouvillian& L, const Matrix& rho_ss, const SystemOperators<double>& ops,
                       const TauGrid& grid);

/// Direct fourth moment <P- P- P+ P+> / <P- P+>^2 on the steady state.
double g2_zero_direct(const Matrix& rho_ss, const PolarizationOps& pol);

}  // namespace qdmnp
