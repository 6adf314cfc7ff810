#pragma once

// Internal unit system: energies in meV, times in ps, lengths in nm,
// dipole moments in e*nm, fields in meV/(e*nm). SI only appears inside
// material_optics, where the coupling constants are derived.

namespace qdmnp::units {

inline constexpr double hbar_meV_ps = 0.6582119569;

inline constexpr double elementary_charge_C = 1.602176634e-19;
inline constexpr double vacuum_permittivity_F_per_m = 8.8541878128e-12;
inline constexpr double debye_C_m = 3.33564095198152e-30;
inline constexpr double pi = 3.14159265358979323846;

inline constexpr double meV_to_J = 1e-3 * elementary_charge_C;
inline constexpr double nm_to_m = 1e-9;

// 1 e*nm in C*m
inline constexpr double enm_to_C_m = elementary_charge_C * nm_to_m;
// 1 meV/(e*nm) = 1e-3 V / 1e-9 m
inline constexpr double field_unit_to_V_per_m = 1e6;

constexpr double dipole_to_SI(double dipole_enm) { return dipole_enm * enm_to_C_m; }
constexpr double dipole_from_SI(double dipole_C_m) { return dipole_C_m / enm_to_C_m; }
constexpr double field_to_SI(double field) { return field * field_unit_to_V_per_m; }
constexpr double field_from_SI(double field_V_per_m) { return field_V_per_m / field_unit_to_V_per_m; }
constexpr double energy_to_SI(double meV) { return meV * meV_to_J; }
constexpr double energy_from_SI(double joule) { return joule / meV_to_J; }
constexpr double dipole_to_debye(double dipole_enm) { return dipole_to_SI(dipole_enm) / debye_C_m; }

// Energy [meV] -> angular rate [1/ps].
constexpr double rate(double energy_meV) { return energy_meV / hbar_meV_ps; }

}  // namespace qdmnp::units
