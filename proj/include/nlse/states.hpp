// Construction and normalization of initial wavefunctions.
#pragma once

#include "nlse/grid.hpp"

namespace nlse {

/// Packets must stay localized away from the periodic seam for the
/// centroid and force integrals to be meaningful: density at the domain
/// edge may not exceed this fraction of the peak. Constructors enforce
/// it and the scenario runner re-checks it at every output step.
inline constexpr double kBoundaryClearance = 1e-10;

struct GaussianSpec {
    double center = 0.0;   ///< x0, must lie inside (0, L)
    double sigma = 1.0;    ///< density width: rho ~ exp(-(x-x0)^2 / (2 sigma^2))
    double k0 = 0.0;       ///< mean wavenumber
    double chirp = 0.0;    ///< b, quadratic phase b*(x-x0)^2
    double cubic = 0.0;    ///< c, cubic phase c*(x-x0)^3
};

/// Normalized Gaussian packet
///   psi(x) ~ exp(-(x-x0)^2/(4 sigma^2)) * exp(i[k0 u + b u^2 + c u^3]), u = x-x0.
/// The quadratic (chirp) and cubic phase terms give the velocity field
/// structure that current-coupled dynamics respond to.
ComplexField gaussian_packet(const Grid& grid, const GaussianSpec& spec);

/// psi = exp(i k x)/sqrt(L) with k = 2 pi mode / L; rejects |mode| >= n/2.
ComplexField plane_wave(const Grid& grid, long mode);

/// Rescale to unit norm; rejects an identically-zero field.
ComplexField normalize(const Grid& grid, const ComplexField& psi);

/// Largest density sample at the periodic seam divided by the peak.
double edge_density_ratio(const Grid& grid, const RealField& rho);

/// Throws std::runtime_error if the clearance rule is violated.
void require_boundary_clearance(const Grid& grid, const RealField& rho, const char* context);

}  // namespace nlse
