#pragma once

#include "qdmnp/liouvillian.hpp"

namespace qdmnp {

/// Steady-state first moments of the coupled plasmon/exciton equations of
/// motion, in the frame rotating at the drive frequency.
struct MeanFieldState {
    Complex a;
    Complex sigma;
    double population = 0.0;  ///< <s^dag s>
    double residual = 0.0;
    int iterations = 0;
};

/// Linear response: the equations of motion for <a> and <s> with the
/// population terms dropped, solved as a 2x2 system. Meaningful for
/// Omega below ~1e-3 meV. `population` is reported as |<s>|^2.
MeanFieldState weak_drive_response(const SystemParams& p);

/// Factorized closure <a s^dag s> = <a><s^dag s> with the population
/// equation kept. The population is the root of the steady-state balance
/// on [0, 1/2], found by bisection.
MeanFieldState mean_field_steady_state(const SystemParams& p);

/// |chi/mu <a> + <s>|^2 in mu^2 units (respecting the partner switches).
double coherent_intensity(const MeanFieldState& s, const SystemParams& p);

}  // namespace qdmnp
