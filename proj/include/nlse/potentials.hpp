// External potentials U(x) and the density-coupled variant U(rho, x).
#pragma once

#include <variant>
#include <vector>

#include "nlse/grid.hpp"

namespace nlse {

struct ZeroPotential {};

/// U = 1/2 m omega^2 d^2 with d the minimum-image distance to the center.
struct HarmonicPotential {
    double omega = 1.0;
    double center = 0.0;
};

/// U = -f0 * x (constant force f0).
struct UniformForcePotential {
    double f0 = 0.0;
};

/// U = height * exp(-d^2 / (2 width^2)), d minimum-image to the center.
struct GaussianBarrierPotential {
    double height = 0.0;
    double width = 1.0;
    double center = 0.0;
};

using SimplePotential =
    std::variant<ZeroPotential, HarmonicPotential, UniformForcePotential, GaussianBarrierPotential>;

/// U(rho, x) = U_base(x) * (1 + eta * rho(x)). The base may not itself be
/// density-coupled.
struct DensityCoupledPotential {
    SimplePotential base;
    double eta = 0.0;
};

using Potential = std::variant<ZeroPotential, HarmonicPotential, UniformForcePotential,
                               GaussianBarrierPotential, DensityCoupledPotential>;

/// Which derivative of a density-coupled potential to take: the full
/// spatial gradient d/dx U(rho(x), x) including the rho'(x) term, or the
/// partial gradient at frozen rho. They coincide for plain potentials.
enum class GradientMode { Full, Partial };

bool is_zero(const Potential& p);
bool is_density_coupled(const Potential& p);

/// Parameter sanity (omega > 0, width > 0, finite values); returns all
/// problems found, empty when valid.
std::vector<std::string> validate_potential(const Potential& p);

/// Samples of U on the grid. rho must be supplied iff p is density-coupled
/// (plain potentials ignore it).
RealField evaluate_potential(const Potential& p, const Grid& grid, double mass,
                             const RealField* rho);

/// Analytic gradient for the closed-form potentials; for the
/// density-coupled case the rho' term is evaluated spectrally.
RealField potential_gradient(const Potential& p, const Grid& grid, double mass,
                             const RealField* rho, GradientMode mode);

}  // namespace nlse
