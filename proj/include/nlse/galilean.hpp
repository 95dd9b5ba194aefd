// Galilean boosts of states and the covariance test that certifies (or
// refutes) frame invariance of each dynamics family.
#pragma once

#include "nlse/grid.hpp"
#include "nlse/integrators.hpp"
#include "nlse/models.hpp"
#include "nlse/potentials.hpp"

namespace nlse {

/// psi'(x) = exp(i [ -m dv x + m dv^2 t / 2 ]) * psi(x + dv t), the
/// coordinate shift done as a Fourier phase shift (unitary, exact for
/// band-limited states). The boosted state moves with velocity reduced
/// by dv. The t-dependent part of the phase is a global constant at each
/// time and therefore unobservable in any diagnostic here.
ComplexField boost(const Grid& grid, const ComplexField& psi, double mass, double dv, double t);

/// Normalized, phase-aligned L2 distance between [evolve T, then boost]
/// and [boost, then evolve T]. Potentials other than Zero are rejected:
/// a boost does not preserve an external potential.
double covariance_error(const Model& model, const Grid& grid, const ComplexField& initial,
                        const Potential& potential, double dv, double t_final,
                        Scheme scheme, double dt);

}  // namespace nlse
