// Time propagation: explicit RK4 for every family, and an independent
// split-step Fourier scheme for the multiplier-potential families used as
// a cross-validation oracle.
#pragma once

#include <cstddef>
#include <functional>

#include "nlse/grid.hpp"
#include "nlse/models.hpp"
#include "nlse/observables.hpp"
#include "nlse/potentials.hpp"

namespace nlse {

enum class Scheme { Rk4, SplitStep };

struct StepperConfig {
    Scheme scheme = Scheme::Rk4;
    double dt = 1e-3;
    double t_final = 1.0;
    std::size_t sample_every = 1;
};

/// Largest stable RK4 step for the spectral Laplacian: the dominant
/// eigenvalue is k_max^2 / 2m and the RK4 imaginary-axis stability reach
/// is about 2.83, so dt must stay below 2.8 * 2m / k_max^2.
double rk4_stability_limit(const Grid& grid, double mass);

/// One classical RK4 step over rhs(). Aborts if the output magnitude
/// exceeds 1e6 times the input peak (blow-up guard).
ComplexField step_rk4(const Model& model, const Grid& grid, const ComplexField& psi,
                      const Potential& potential, double t, double dt);

/// One Strang step: half potential phase, full kinetic phase in Fourier
/// space, half potential phase. Exactly norm-preserving. The multiplier
/// includes the density self-interaction (rho is invariant under the
/// potential phase, so the factor is exact within its substep). Rejects
/// the current-coupled family, whose extra term is not a multiplier that
/// commutes with either basis.
ComplexField step_split_fourier(const Model& model, const Grid& grid, const ComplexField& psi,
                                const Potential& potential, double dt);

/// Advance by `steps` uniform steps of size dt without recording.
ComplexField propagate(const Model& model, const Grid& grid, ComplexField psi,
                       const Potential& potential, Scheme scheme, double dt, std::size_t steps,
                       double t0 = 0.0);

/// Called at every recorded sample with the step index, time and state.
using SampleObserver = std::function<void(std::size_t, double, const ComplexField&)>;

/// Everything a propagation needs, assembled by the scenario layer.
struct RunSpec {
    Grid grid;
    ComplexField initial;
    Model model;
    Potential potential;
    StepperConfig stepper;
    std::string digest;
    SampleObserver observer;  ///< optional
};

/// Step-count and effective-dt policy for one run: the step count is
/// rounded so that t_final is hit exactly and the sample windows divide
/// the run evenly (dt is nudged down, never up).
struct StepPlan {
    std::size_t steps = 0;
    double dt = 0.0;
};
StepPlan plan_steps(double t_final, double dt, std::size_t sample_every);

/// Propagate from t = 0 to t_final, recording observables every
/// sample_every steps (and at t = 0). Enforces the stability guard, the
/// boundary-clearance rule and the blow-up guard; violations abort with
/// the step index in the diagnostic.
TimeSeries run(const RunSpec& spec);

}  // namespace nlse
