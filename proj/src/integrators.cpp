#include "nlse/integrators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "nlse/states.hpp"

namespace nlse {

namespace {

double max_abs(const ComplexField& f) {
    double m = 0.0;
    for (const Complex& v : f.values) m = std::max(m, std::abs(v));
    return m;
}

// out = psi + c * k
ComplexField axpy(const ComplexField& psi, double c, const ComplexField& k) {
    ComplexField out = psi;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += c * k[i];
    return out;
}

void apply_potential_phase(const Model& model, const Grid& grid, const Potential& potential,
                           ComplexField& psi, double dt_half) {
    const bool df = is_density_functional(model);
    if (is_zero(potential) && !df) return;

    RealField rho;
    if (!is_zero(potential) || df) rho = density(grid, psi);

    RealField w = zeros_real(grid);
    if (!is_zero(potential)) {
        const RealField u = evaluate_potential(potential, grid, model.mass,
                                               is_density_coupled(potential) ? &rho : nullptr);
        for (std::size_t i = 0; i < grid.size(); ++i) w[i] += u[i];
    }
    if (df) {
        const auto& m = std::get<DensityFunctionalModel>(model.family);
        const RealField o = density_functional_term(m, grid, rho);
        for (std::size_t i = 0; i < grid.size(); ++i) w[i] += o[i];
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double phase = -w[i] * dt_half;
        psi[i] *= Complex(std::cos(phase), std::sin(phase));
    }
}

}  // namespace

double rk4_stability_limit(const Grid& grid, double mass) {
    const double kmax = grid.max_wavenumber();
    return 2.8 * 2.0 * mass / (kmax * kmax);
}

ComplexField step_rk4(const Model& model, const Grid& grid, const ComplexField& psi,
                      const Potential& potential, double t, double dt) {
    if (dt == 0.0) return psi;
    const ComplexField k1 = rhs(model, grid, psi, potential, t);
    const ComplexField k2 = rhs(model, grid, axpy(psi, 0.5 * dt, k1), potential, t + 0.5 * dt);
    const ComplexField k3 = rhs(model, grid, axpy(psi, 0.5 * dt, k2), potential, t + 0.5 * dt);
    const ComplexField k4 = rhs(model, grid, axpy(psi, dt, k3), potential, t + dt);

    ComplexField out = psi;
    const double c = dt / 6.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] += c * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }

    const double before = max_abs(psi);
    const double after = max_abs(out);
    if (!(after <= 1e6 * before) || !all_finite(out)) {
        throw std::runtime_error("step_rk4: blow-up detected (|psi| grew from " +
                                 std::to_string(before) + " to " + std::to_string(after) + ")");
    }
    return out;
}

ComplexField step_split_fourier(const Model& model, const Grid& grid, const ComplexField& psi,
                                const Potential& potential, double dt) {
    if (is_doebner_goldin(model)) {
        throw std::invalid_argument(
            "step_split_fourier: the current-coupled (doebner_goldin) family has no "
            "multiplier splitting; use rk4");
    }
    ComplexField out = psi;
    apply_potential_phase(model, grid, potential, out, 0.5 * dt);

    auto hat = grid.forward(out.values);
    const double c = 0.5 * dt / model.mass;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double k = grid.wavenumber(i);
        const double phase = -c * k * k;
        hat[i] *= Complex(std::cos(phase), std::sin(phase));
    }
    out.values = grid.inverse(hat);

    apply_potential_phase(model, grid, potential, out, 0.5 * dt);
    return out;
}

ComplexField propagate(const Model& model, const Grid& grid, ComplexField psi,
                       const Potential& potential, Scheme scheme, double dt, std::size_t steps,
                       double t0) {
    for (std::size_t s = 0; s < steps; ++s) {
        const double t = t0 + static_cast<double>(s) * dt;
        psi = (scheme == Scheme::Rk4) ? step_rk4(model, grid, psi, potential, t, dt)
                                      : step_split_fourier(model, grid, psi, potential, dt);
    }
    return psi;
}

StepPlan plan_steps(double t_final, double dt, std::size_t sample_every) {
    if (t_final <= 0.0) return {0, 0.0};
    auto steps = static_cast<std::size_t>(std::llround(t_final / dt));
    steps = std::max<std::size_t>(steps, 1);
    const std::size_t rem = steps % sample_every;
    if (rem != 0) steps += sample_every - rem;
    return {steps, t_final / static_cast<double>(steps)};
}

TimeSeries run(const RunSpec& spec) {
    const Grid& grid = spec.grid;
    if (spec.initial.size() != grid.size()) {
        throw std::invalid_argument("run: initial state not bound to grid");
    }
    if (auto errs = validate_model(spec.model, grid); !errs.empty()) {
        throw std::invalid_argument("run: " + errs.front());
    }
    if (auto errs = validate_potential(spec.potential); !errs.empty()) {
        throw std::invalid_argument("run: " + errs.front());
    }
    const StepperConfig& st = spec.stepper;
    if (!(st.dt > 0.0) || st.sample_every == 0 || !(st.t_final >= 0.0)) {
        throw std::invalid_argument("run: invalid stepper configuration");
    }
    if (st.scheme == Scheme::SplitStep && is_doebner_goldin(spec.model)) {
        throw std::invalid_argument("run: doebner_goldin model requires the rk4 scheme");
    }

    const StepPlan plan = plan_steps(st.t_final, st.dt, st.sample_every);
    if (st.scheme == Scheme::Rk4 && plan.steps > 0) {
        const double limit = rk4_stability_limit(grid, spec.model.mass);
        if (plan.dt > limit) {
            throw std::invalid_argument(
                "run: dt = " + std::to_string(plan.dt) +
                " violates the RK4 stability guard dt <= 2.8*2m/k_max^2 = " +
                std::to_string(limit));
        }
    }

    TimeSeries series;
    series.scenario_digest = spec.digest;
    series.sample_spacing = plan.dt * static_cast<double>(st.sample_every);

    ComplexField psi = spec.initial;
    const double initial_peak = max_abs(psi);

    auto sample = [&](std::size_t step_index) {
        const double t = static_cast<double>(step_index) * plan.dt;
        try {
            series.records.push_back(record_observables(spec.model, grid, psi, spec.potential, t,
                                                        &series.node_flagged));
        } catch (const std::runtime_error& e) {
            throw std::runtime_error("run aborted at step " + std::to_string(step_index) + ": " +
                                     e.what());
        }
        if (max_abs(psi) > 1e6 * initial_peak) {
            throw std::runtime_error("run aborted at step " + std::to_string(step_index) +
                                     ": blow-up (|psi| exceeds 1e6 x initial peak)");
        }
        if (spec.observer) spec.observer(step_index, t, psi);
    };

    sample(0);
    for (std::size_t s = 0; s < plan.steps; ++s) {
        const double t = static_cast<double>(s) * plan.dt;
        try {
            psi = (st.scheme == Scheme::Rk4)
                      ? step_rk4(spec.model, grid, psi, spec.potential, t, plan.dt)
                      : step_split_fourier(spec.model, grid, psi, spec.potential, plan.dt);
        } catch (const std::runtime_error& e) {
            throw std::runtime_error("run aborted at step " + std::to_string(s + 1) + ": " +
                                     e.what());
        }
        if ((s + 1) % st.sample_every == 0) sample(s + 1);
    }
    return series;
}

}  // namespace nlse
