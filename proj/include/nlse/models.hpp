// Right-hand sides d(psi)/dt = -i H[psi] psi for the three dynamics families.
#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "nlse/grid.hpp"
#include "nlse/potentials.hpp"

namespace nlse {

struct LinearModel {};

/// Self-interaction O(rho) psi with O = g rho^a, or O = g (K * rho) when a
/// sampled convolution kernel is present. Kernels are restricted to even
/// functions on the periodic grid so that integral(rho * d/dx O(rho)) = 0
/// holds and the mean-position law survives the nonlinearity.
struct DensityFunctionalModel {
    double g = 0.0;
    double exponent = 1.0;
    std::optional<RealField> kernel;  ///< sampled, unit integral, even
};

/// Current-coupled nonlinearity lambda * d/dx(j/rho) psi. The velocity
/// ratio is regularized as j / (rho + epsilon * max rho); node-crossing
/// states are flagged, not evolved through silently. Linearized about any
/// state the term grows wavenumber-q perturbations at rate lambda q^2/2m
/// (for lambda > 0), so the propagated multiplier is restricted to the
/// fixed physical band |k| <= band; packet-scale content passes unchanged.
struct DoebnerGoldinModel {
    double lambda = 0.0;
    double epsilon = 1e-12;
    double band = 4.0;
};

using ModelFamily = std::variant<LinearModel, DensityFunctionalModel, DoebnerGoldinModel>;

struct Model {
    ModelFamily family;
    double mass = 1.0;
};

bool is_linear(const Model& m);
bool is_density_functional(const Model& m);
bool is_doebner_goldin(const Model& m);

std::vector<std::string> validate_model(const Model& m, const Grid& grid);

/// Probability current j = (1/m) Im(conj(psi) d/dx psi), the Noether flux
/// of the global phase symmetry.
RealField current(const Grid& grid, const ComplexField& psi, double mass);

struct VelocityField {
    RealField values;
    /// Set when the density dips below epsilon * max(rho) inside the
    /// packet support, i.e. the regularization is actually shaping the
    /// field there (a node or near-node is present).
    bool node_regularized = false;
};

/// The support-dip test behind VelocityField::node_regularized.
bool node_regularization_active(const RealField& rho, double epsilon);

/// j / (rho + epsilon max rho); equals (d/dx phase)/m wherever
/// rho >> epsilon * max rho.
VelocityField phase_velocity_field(const Grid& grid, const ComplexField& psi, double mass,
                                   double epsilon);

struct DgTerm {
    ComplexField values;
    bool node_regularized = false;
};

/// lambda * d/dx(j/rho) * psi, the current-coupled multiplier term exactly
/// as the propagator applies it (quotient form, support window, band limit).
DgTerm dg_term(const Grid& grid, const ComplexField& psi, double mass, double lambda,
               double epsilon, double band = DoebnerGoldinModel{}.band);

/// O(rho): g rho^a, or g (K * rho) via circular convolution.
RealField density_functional_term(const DensityFunctionalModel& model, const Grid& grid,
                                  const RealField& rho);

/// Normalized even Gaussian kernel sampled with minimum-image distance,
/// unit integral. Suitable for DensityFunctionalModel::kernel.
RealField make_gaussian_kernel(const Grid& grid, double width);

/// d(psi)/dt = -i [ -(1/2m) psi'' + (U + O(rho) + lambda d/dx(j/rho)) psi ]
/// with the O and current terms present per model family. Throws if the
/// output is not finite everywhere.
ComplexField rhs(const Model& model, const Grid& grid, const ComplexField& psi,
                 const Potential& potential, double t);

}  // namespace nlse
