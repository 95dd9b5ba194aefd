#include "nlse/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlse/states.hpp"

namespace nlse {

void validate_series(const TimeSeries& series) {
    const auto& r = series.records;
    for (std::size_t i = 1; i < r.size(); ++i) {
        if (!(r[i].t > r[i - 1].t)) {
            throw std::invalid_argument("time series: sample times must strictly increase");
        }
    }
    if (r.size() >= 3) {
        const double h = r[1].t - r[0].t;
        for (std::size_t i = 2; i < r.size(); ++i) {
            if (std::abs((r[i].t - r[i - 1].t) - h) > 1e-9 * std::max(1.0, h)) {
                throw std::invalid_argument("time series: sample spacing must be uniform");
            }
        }
    }
}

TimeSeries decimate(const TimeSeries& series, std::size_t stride) {
    if (stride == 0) throw std::invalid_argument("decimate: stride must be >= 1");
    if (series.records.size() > 1 && (series.records.size() - 1) % stride != 0) {
        throw std::invalid_argument("decimate: stride must divide the window count");
    }
    TimeSeries out;
    out.scenario_digest = series.scenario_digest;
    out.sample_spacing = series.sample_spacing * static_cast<double>(stride);
    out.node_flagged = series.node_flagged;
    for (std::size_t i = 0; i < series.records.size(); i += stride) {
        out.records.push_back(series.records[i]);
    }
    return out;
}

double centroid(const Grid& grid, const ComplexField& psi, ClearancePolicy policy) {
    const RealField rho = density(grid, psi);
    if (policy == ClearancePolicy::Enforce) {
        require_boundary_clearance(grid, rho, "centroid");
    }
    double wsum = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        wsum += rho[i] * grid.point(i);
        sum += rho[i];
    }
    return wsum / sum;
}

double mean_velocity(const Grid& grid, const ComplexField& psi, double mass) {
    return integrate(grid, current(grid, psi, mass));
}

double total_momentum(const Grid& grid, const ComplexField& psi, double mass) {
    return mass * mean_velocity(grid, psi, mass);
}

double force(const Grid& grid, const RealField& rho, const Potential& potential, double mass,
             GradientMode mode) {
    const RealField grad = potential_gradient(potential, grid, mass,
                                              is_density_coupled(potential) ? &rho : nullptr,
                                              mode);
    double sum = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) sum += rho[i] * grad[i];
    return -grid.spacing() * sum;
}

DgViolation dg_violation_term(const Grid& grid, const ComplexField& psi, double mass,
                              double lambda, double epsilon) {
    // lambda * int rho' * d/dx[ j/(rho + eps max rho) ] dx with the
    // derivative of the ratio expanded by the quotient rule,
    //   [(rho + floor) j' - j rho'] / (rho + floor)^2,
    // which is the same function evaluated without differentiating after
    // the division (doing that amplifies tail round-off into the core).
    const RealField rho = density(grid, psi);
    const ComplexField psi_x = spectral_derivative(grid, psi, 1);
    const ComplexField psi_xx = spectral_derivative(grid, psi, 2);
    const double peak = *std::max_element(rho.values.begin(), rho.values.end());
    const double floor = epsilon * peak;

    double sum = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Complex p = std::conj(psi[i]);
        const double j = std::imag(p * psi_x[i]) / mass;
        const double dj = std::imag(p * psi_xx[i]) / mass;
        const double drho = 2.0 * std::real(p * psi_x[i]);
        const double denom = rho[i] + floor;
        sum += drho * (denom * dj - j * drho) / (denom * denom);
    }

    return DgViolation{lambda * grid.spacing() * sum,
                       node_regularization_active(rho, epsilon)};
}

std::optional<double> energy(const Model& model, const Grid& grid, const ComplexField& psi,
                             const Potential& potential) {
    if (is_doebner_goldin(model)) return std::nullopt;

    const ComplexField dpsi = spectral_derivative(grid, psi, 1);
    const RealField rho = density(grid, psi);

    double kinetic = 0.0;
    for (const Complex& v : dpsi.values) kinetic += std::norm(v);
    kinetic *= grid.spacing() * 0.5 / model.mass;

    double pot = 0.0;
    if (!is_zero(potential)) {
        if (const auto* dc = std::get_if<DensityCoupledPotential>(&potential)) {
            // E_pot = int U_base rho (1 + eta rho / 2): its rho-derivative
            // reproduces the multiplier U_base (1 + eta rho)
            const Potential base = std::visit(
                [](const auto& b) -> Potential { return b; }, dc->base);
            const RealField u = evaluate_potential(base, grid, model.mass, nullptr);
            double sum = 0.0;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                sum += u[i] * rho[i] * (1.0 + 0.5 * dc->eta * rho[i]);
            }
            pot = grid.spacing() * sum;
        } else {
            const RealField u = evaluate_potential(potential, grid, model.mass, nullptr);
            double sum = 0.0;
            for (std::size_t i = 0; i < grid.size(); ++i) sum += u[i] * rho[i];
            pot = grid.spacing() * sum;
        }
    }

    double self = 0.0;
    if (const auto* df = std::get_if<DensityFunctionalModel>(&model.family)) {
        if (df->kernel) {
            // quadratic nonlocal functional: (g/2) int rho (K * rho)
            const RealField o = density_functional_term(*df, grid, rho);
            double sum = 0.0;
            for (std::size_t i = 0; i < grid.size(); ++i) sum += rho[i] * o[i];
            self = 0.5 * grid.spacing() * sum;
        } else {
            double sum = 0.0;
            const double p = df->exponent + 1.0;
            for (std::size_t i = 0; i < grid.size(); ++i) sum += std::pow(rho[i], p);
            self = df->g / p * grid.spacing() * sum;
        }
    }
    return kinetic + pot + self;
}

ObservableRecord record_observables(const Model& model, const Grid& grid,
                                    const ComplexField& psi, const Potential& potential,
                                    double t, bool* node_flag) {
    const RealField rho = density(grid, psi);
    require_boundary_clearance(grid, rho, "record_observables");

    ObservableRecord rec;
    rec.t = t;
    rec.norm = integrate(grid, rho);
    rec.x_mean = centroid(grid, psi, ClearancePolicy::Ignore);
    rec.v_mean = mean_velocity(grid, psi, model.mass);
    rec.p_total = model.mass * rec.v_mean;
    rec.force_full = force(grid, rho, potential, model.mass, GradientMode::Full);
    rec.force_partial = is_density_coupled(potential)
                            ? force(grid, rho, potential, model.mass, GradientMode::Partial)
                            : rec.force_full;
    if (const auto* dg = std::get_if<DoebnerGoldinModel>(&model.family)) {
        const DgViolation v = dg_violation_term(grid, psi, model.mass, dg->lambda, dg->epsilon);
        rec.dg_violation = v.value;
        if (node_flag != nullptr && v.node_regularized) *node_flag = true;
    }
    rec.energy = energy(model, grid, psi, potential);
    return rec;
}

double DefectSeries::max_abs() const {
    double m = 0.0;
    for (double v : value) m = std::max(m, std::abs(v));
    return m;
}

namespace {

template <typename Getter>
DefectSeries centered_defect(const TimeSeries& series, Getter numerator_value,
                             bool subtract_force, double scale) {
    validate_series(series);
    const auto& r = series.records;
    if (r.size() < 3) {
        throw std::invalid_argument("defect series: need at least 3 samples");
    }
    const double h = r[1].t - r[0].t;
    DefectSeries out;
    out.t.reserve(r.size() - 2);
    out.value.reserve(r.size() - 2);
    for (std::size_t i = 1; i + 1 < r.size(); ++i) {
        const double ddt = (numerator_value(r[i + 1]) - numerator_value(r[i - 1])) / (2.0 * h);
        double v = scale * ddt;
        if (subtract_force) v -= r[i].force_full;
        else v -= r[i].v_mean;
        out.t.push_back(r[i].t);
        out.value.push_back(v);
    }
    return out;
}

}  // namespace

DefectSeries ehrenfest_residual(const TimeSeries& series, double mass) {
    return centered_defect(
        series, [](const ObservableRecord& r) { return r.v_mean; }, true, mass);
}

DefectSeries momentum_law_defect(const TimeSeries& series, double mass) {
    (void)mass;  // p_total already carries the mass factor
    return centered_defect(
        series, [](const ObservableRecord& r) { return r.p_total; }, true, 1.0);
}

DefectSeries centroid_velocity_defect(const TimeSeries& series) {
    return centered_defect(
        series, [](const ObservableRecord& r) { return r.x_mean; }, false, 1.0);
}

}  // namespace nlse
