#include "nlse/potentials.hpp"

#include <cmath>
#include <stdexcept>

namespace nlse {

namespace {

void check_rho(const Potential& p, const Grid& grid, const RealField* rho) {
    if (is_density_coupled(p)) {
        if (rho == nullptr) {
            throw std::invalid_argument("density-coupled potential requires rho");
        }
        if (rho->size() != grid.size()) {
            throw std::invalid_argument("potential: rho not bound to grid");
        }
    }
}

RealField evaluate_simple(const SimplePotential& p, const Grid& grid, double mass) {
    RealField u = zeros_real(grid);
    std::visit(
        [&](const auto& pot) {
            using T = std::decay_t<decltype(pot)>;
            if constexpr (std::is_same_v<T, ZeroPotential>) {
                // already zero
            } else if constexpr (std::is_same_v<T, HarmonicPotential>) {
                const double c = 0.5 * mass * pot.omega * pot.omega;
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    const double d = min_image(grid.point(i) - pot.center, grid.length());
                    u[i] = c * d * d;
                }
            } else if constexpr (std::is_same_v<T, UniformForcePotential>) {
                for (std::size_t i = 0; i < grid.size(); ++i) u[i] = -pot.f0 * grid.point(i);
            } else if constexpr (std::is_same_v<T, GaussianBarrierPotential>) {
                const double inv2w2 = 1.0 / (2.0 * pot.width * pot.width);
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    const double d = min_image(grid.point(i) - pot.center, grid.length());
                    u[i] = pot.height * std::exp(-d * d * inv2w2);
                }
            }
        },
        p);
    return u;
}

RealField gradient_simple(const SimplePotential& p, const Grid& grid, double mass) {
    RealField g = zeros_real(grid);
    std::visit(
        [&](const auto& pot) {
            using T = std::decay_t<decltype(pot)>;
            if constexpr (std::is_same_v<T, ZeroPotential>) {
                // zero
            } else if constexpr (std::is_same_v<T, HarmonicPotential>) {
                const double c = mass * pot.omega * pot.omega;
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    g[i] = c * min_image(grid.point(i) - pot.center, grid.length());
                }
            } else if constexpr (std::is_same_v<T, UniformForcePotential>) {
                for (auto& v : g.values) v = -pot.f0;
            } else if constexpr (std::is_same_v<T, GaussianBarrierPotential>) {
                const double inv2w2 = 1.0 / (2.0 * pot.width * pot.width);
                const double invw2 = 1.0 / (pot.width * pot.width);
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    const double d = min_image(grid.point(i) - pot.center, grid.length());
                    g[i] = -pot.height * d * invw2 * std::exp(-d * d * inv2w2);
                }
            }
        },
        p);
    return g;
}

std::vector<std::string> validate_simple(const SimplePotential& p) {
    std::vector<std::string> errors;
    std::visit(
        [&](const auto& pot) {
            using T = std::decay_t<decltype(pot)>;
            if constexpr (std::is_same_v<T, HarmonicPotential>) {
                if (!(pot.omega > 0.0) || !std::isfinite(pot.omega)) {
                    errors.push_back("harmonic potential: omega must be positive");
                }
                if (!std::isfinite(pot.center)) {
                    errors.push_back("harmonic potential: center must be finite");
                }
            } else if constexpr (std::is_same_v<T, UniformForcePotential>) {
                if (!std::isfinite(pot.f0)) {
                    errors.push_back("uniform potential: f0 must be finite");
                }
            } else if constexpr (std::is_same_v<T, GaussianBarrierPotential>) {
                if (!(pot.width > 0.0) || !std::isfinite(pot.width)) {
                    errors.push_back("gaussian barrier: width must be positive");
                }
                if (!std::isfinite(pot.height) || !std::isfinite(pot.center)) {
                    errors.push_back("gaussian barrier: height and center must be finite");
                }
            }
        },
        p);
    return errors;
}

}  // namespace

bool is_zero(const Potential& p) { return std::holds_alternative<ZeroPotential>(p); }

bool is_density_coupled(const Potential& p) {
    return std::holds_alternative<DensityCoupledPotential>(p);
}

std::vector<std::string> validate_potential(const Potential& p) {
    if (const auto* dc = std::get_if<DensityCoupledPotential>(&p)) {
        auto errors = validate_simple(dc->base);
        if (!std::isfinite(dc->eta)) {
            errors.push_back("density-coupled potential: eta must be finite");
        }
        return errors;
    }
    SimplePotential s;
    std::visit(
        [&](const auto& pot) {
            using T = std::decay_t<decltype(pot)>;
            if constexpr (!std::is_same_v<T, DensityCoupledPotential>) s = pot;
        },
        p);
    return validate_simple(s);
}

RealField evaluate_potential(const Potential& p, const Grid& grid, double mass,
                             const RealField* rho) {
    check_rho(p, grid, rho);
    if (const auto* dc = std::get_if<DensityCoupledPotential>(&p)) {
        RealField u = evaluate_simple(dc->base, grid, mass);
        for (std::size_t i = 0; i < grid.size(); ++i) u[i] *= 1.0 + dc->eta * (*rho)[i];
        return u;
    }
    SimplePotential s;
    std::visit(
        [&](const auto& pot) {
            using T = std::decay_t<decltype(pot)>;
            if constexpr (!std::is_same_v<T, DensityCoupledPotential>) s = pot;
        },
        p);
    return evaluate_simple(s, grid, mass);
}

RealField potential_gradient(const Potential& p, const Grid& grid, double mass,
                             const RealField* rho, GradientMode mode) {
    check_rho(p, grid, rho);
    if (const auto* dc = std::get_if<DensityCoupledPotential>(&p)) {
        const RealField base_u = evaluate_simple(dc->base, grid, mass);
        const RealField base_g = gradient_simple(dc->base, grid, mass);
        RealField g = zeros_real(grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            g[i] = base_g[i] * (1.0 + dc->eta * (*rho)[i]);
        }
        if (mode == GradientMode::Full) {
            const RealField drho = real_derivative(grid, *rho);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                g[i] += base_u[i] * dc->eta * drho[i];
            }
        }
        return g;
    }
    SimplePotential s;
    std::visit(
        [&](const auto& pot) {
            using T = std::decay_t<decltype(pot)>;
            if constexpr (!std::is_same_v<T, DensityCoupledPotential>) s = pot;
        },
        p);
    return gradient_simple(s, grid, mass);
}

}  // namespace nlse
