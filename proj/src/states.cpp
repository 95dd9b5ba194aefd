#include "nlse/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nlse {

ComplexField gaussian_packet(const Grid& grid, const GaussianSpec& spec) {
    if (!(spec.sigma > 0.0) || !std::isfinite(spec.sigma)) {
        throw std::invalid_argument("gaussian_packet: sigma must be positive");
    }
    if (!(spec.center > 0.0) || !(spec.center < grid.length())) {
        throw std::invalid_argument("gaussian_packet: center must lie inside (0, L)");
    }
    if (!std::isfinite(spec.k0) || !std::isfinite(spec.chirp) || !std::isfinite(spec.cubic)) {
        throw std::invalid_argument("gaussian_packet: phase parameters must be finite");
    }

    ComplexField psi = zeros_complex(grid);
    const double inv4s2 = 1.0 / (4.0 * spec.sigma * spec.sigma);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double u = grid.point(i) - spec.center;
        const double amp = std::exp(-u * u * inv4s2);
        const double phase = u * (spec.k0 + u * (spec.chirp + u * spec.cubic));
        psi[i] = amp * Complex(std::cos(phase), std::sin(phase));
    }

    const RealField rho = density(grid, psi);
    if (edge_density_ratio(grid, rho) > kBoundaryClearance) {
        throw std::invalid_argument(
            "gaussian_packet: packet violates boundary clearance (edge density > " +
            std::to_string(kBoundaryClearance) + " of peak); reduce sigma or recenter");
    }
    return normalize(grid, psi);
}

ComplexField plane_wave(const Grid& grid, long mode) {
    const long half = static_cast<long>(grid.size()) / 2;
    if (mode <= -half || mode >= half) {
        throw std::invalid_argument("plane_wave: mode " + std::to_string(mode) +
                                    " is aliased on an n=" + std::to_string(grid.size()) +
                                    " grid (need |mode| < n/2)");
    }
    const double k = 2.0 * std::numbers::pi * static_cast<double>(mode) / grid.length();
    const double amp = 1.0 / std::sqrt(grid.length());
    ComplexField psi = zeros_complex(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double phase = k * grid.point(i);
        psi[i] = amp * Complex(std::cos(phase), std::sin(phase));
    }
    return psi;
}

ComplexField normalize(const Grid& grid, const ComplexField& psi) {
    const double nrm = field_norm(grid, psi);
    if (!(nrm > 0.0) || !std::isfinite(nrm)) {
        throw std::invalid_argument("normalize: field has zero or non-finite norm");
    }
    ComplexField out = psi;
    const double scale = 1.0 / nrm;
    for (auto& v : out.values) v *= scale;
    return out;
}

double edge_density_ratio(const Grid& grid, const RealField& rho) {
    if (rho.size() != grid.size()) {
        throw std::invalid_argument("edge_density_ratio: field not bound to grid");
    }
    const double peak = *std::max_element(rho.values.begin(), rho.values.end());
    if (!(peak > 0.0)) return 0.0;
    return std::max(rho.values.front(), rho.values.back()) / peak;
}

void require_boundary_clearance(const Grid& grid, const RealField& rho, const char* context) {
    const double ratio = edge_density_ratio(grid, rho);
    if (ratio > kBoundaryClearance) {
        throw std::runtime_error(std::string(context) +
                                 ": boundary clearance violated (edge density ratio " +
                                 std::to_string(ratio) + " > 1e-10 of peak)");
    }
}

}  // namespace nlse
