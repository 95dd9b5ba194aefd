#include "nlse/galilean.hpp"

#include <cmath>
#include <stdexcept>

#include "nlse/states.hpp"

namespace nlse {

ComplexField boost(const Grid& grid, const ComplexField& psi, double mass, double dv, double t) {
    if (psi.size() != grid.size()) {
        throw std::invalid_argument("boost: psi not bound to grid");
    }
    if (dv == 0.0) return psi;
    const double shift = dv * t;
    if (!(std::abs(shift) < 0.25 * grid.length())) {
        throw std::invalid_argument("boost: |dv * t| must stay below L/4");
    }
    // only a state that was clear of the seam can lose clearance by shifting;
    // delocalized states (plane waves) pass through unchecked
    const bool input_cleared =
        edge_density_ratio(grid, density(grid, psi)) <= kBoundaryClearance;

    ComplexField out = psi;
    if (shift != 0.0) {
        auto hat = grid.forward(out.values);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double phase = grid.wavenumber(i) * shift;  // psi(x + s)
            hat[i] *= Complex(std::cos(phase), std::sin(phase));
        }
        out.values = grid.inverse(hat);
    }

    const double quad = 0.5 * mass * dv * dv * t;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double phase = quad - mass * dv * grid.point(i);
        out[i] *= Complex(std::cos(phase), std::sin(phase));
    }

    if (input_cleared) require_boundary_clearance(grid, density(grid, out), "boost");
    return out;
}

double covariance_error(const Model& model, const Grid& grid, const ComplexField& initial,
                        const Potential& potential, double dv, double t_final,
                        Scheme scheme, double dt) {
    if (!is_zero(potential)) {
        throw std::invalid_argument(
            "covariance_error: boosts are only meaningful with a zero potential");
    }
    const auto steps = static_cast<std::size_t>(std::llround(t_final / dt));
    if (steps == 0) throw std::invalid_argument("covariance_error: t_final/dt rounds to zero");
    const double dt_eff = t_final / static_cast<double>(steps);

    const ComplexField evolved =
        propagate(model, grid, initial, potential, scheme, dt_eff, steps);
    const ComplexField path_a = boost(grid, evolved, model.mass, dv, t_final);

    const ComplexField boosted = boost(grid, initial, model.mass, dv, 0.0);
    const ComplexField path_b =
        propagate(model, grid, boosted, potential, scheme, dt_eff, steps);

    // distance minimized over a global phase: |A - e^{ia} B|^2 = |A|^2 + |B|^2 - 2|<A,B>|
    const double na = field_norm(grid, path_a);
    const double nb = field_norm(grid, path_b);
    const double overlap = std::abs(inner_product(grid, path_a, path_b));
    const double d2 = std::max(0.0, na * na + nb * nb - 2.0 * overlap);
    return std::sqrt(d2) / nb;
}

}  // namespace nlse
