#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nlse/integrators.hpp"
#include "nlse/states.hpp"

using namespace nlse;

namespace {

double state_distance(const Grid& g, const ComplexField& a, const ComplexField& b) {
    ComplexField d = a;
    for (std::size_t i = 0; i < d.size(); ++i) d[i] -= b[i];
    return field_norm(g, d);
}

RunSpec harmonic_spec(std::size_t n, Scheme scheme, double dt, double t_final,
                      std::size_t sample_every) {
    Grid grid = make_grid(n, 40.0);
    ComplexField psi = gaussian_packet(grid, {.center = 22.0, .sigma = 1.0});
    return RunSpec{std::move(grid), std::move(psi), Model{LinearModel{}, 1.0},
                   HarmonicPotential{1.0, 20.0},
                   StepperConfig{scheme, dt, t_final, sample_every},
                   "test"};
}

}  // namespace

TEST_SUITE("integrators") {

TEST_CASE("rk4 step with dt = 0 is the identity") {
    const Grid g = make_grid(64, 10.0);
    const ComplexField psi = plane_wave(g, 2);
    const ComplexField out = step_rk4(Model{LinearModel{}, 1.0}, g, psi, ZeroPotential{}, 0.0,
                                      0.0);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(out[i] == psi[i]);
}

TEST_CASE("one rk4 step reproduces the free plane-wave phase factor") {
    const Grid g = make_grid(64, 2.0 * std::numbers::pi);  // mode 1 has k = 1
    const double mass = 1.0, dt = 1e-3, k = 1.0;
    const ComplexField psi = plane_wave(g, 1);
    const ComplexField out =
        step_rk4(Model{LinearModel{}, mass}, g, psi, ZeroPotential{}, 0.0, dt);
    const Complex factor = std::exp(Complex(0.0, -k * k / (2.0 * mass) * dt));
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(std::abs(out[i] - factor * psi[i]) <= 1e-10);
    }
}

TEST_CASE("rk4 halves the step, the one-period error drops ~16x") {
    const std::size_t n = 256;
    const double T = 2.0 * std::numbers::pi;
    const RunSpec spec = harmonic_spec(n, Scheme::Rk4, 2e-3, T, 1);

    const auto final_state = [&](double dt) {
        const auto steps = static_cast<std::size_t>(std::llround(T / dt));
        return propagate(spec.model, spec.grid, spec.initial, spec.potential, Scheme::Rk4,
                         T / static_cast<double>(steps), steps);
    };
    const ComplexField ref = final_state(2.5e-4);  // 8x finer reference
    const double e1 = state_distance(spec.grid, final_state(2e-3), ref);
    const double e2 = state_distance(spec.grid, final_state(1e-3), ref);
    const double ratio = e1 / e2;
    CHECK(ratio >= 13.0);
    CHECK(ratio <= 19.0);
}

TEST_CASE("split step is exact for free linear evolution") {
    const Grid g = make_grid(256, 40.0);
    const ComplexField psi0 = gaussian_packet(g, {.center = 20.0, .sigma = 1.0, .k0 = 1.0});
    const Model model{LinearModel{}, 1.0};

    const double dt = 0.05;  // far beyond any rk4 guard: splitting has no such limit
    const std::size_t steps = 100;
    const ComplexField evolved =
        propagate(model, g, psi0, ZeroPotential{}, Scheme::SplitStep, dt, steps);

    // oracle: per-mode phase evolution of the initial spectrum
    auto hat = g.forward(psi0.values);
    const double T = dt * static_cast<double>(steps);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double k = g.wavenumber(i);
        hat[i] *= std::exp(Complex(0.0, -k * k / 2.0 * T));
    }
    const ComplexField exact{g.inverse(hat)};
    CHECK(state_distance(g, evolved, exact) <= 1e-13);
}

TEST_CASE("split step preserves the norm over 1e4 steps") {
    const Grid g = make_grid(64, 40.0);
    const ComplexField psi0 = gaussian_packet(g, {.center = 20.0, .sigma = 1.5});
    const Model gpe{DensityFunctionalModel{1.0, 1.0, std::nullopt}, 1.0};
    const ComplexField out = propagate(gpe, g, psi0, HarmonicPotential{1.0, 20.0},
                                       Scheme::SplitStep, 1e-3, 10000);
    // every factor is unitary; the drift left is 1e4 accumulated FFT round-offs
    CHECK(std::abs(field_norm(g, out) - 1.0) <= 5e-13);
}

TEST_CASE("split step rejects the current-coupled family") {
    const Grid g = make_grid(64, 10.0);
    const ComplexField psi = plane_wave(g, 1);
    CHECK_THROWS_AS(step_split_fourier(Model{DoebnerGoldinModel{0.3, 1e-12}, 1.0}, g, psi,
                                       ZeroPotential{}, 1e-3),
                    std::invalid_argument);
}

TEST_CASE("run with t_final = 0 produces a single record") {
    RunSpec spec = harmonic_spec(256, Scheme::Rk4, 1e-3, 0.0, 10);
    const TimeSeries series = run(spec);
    CHECK(series.size() == 1);
    CHECK(series.records.front().t == 0.0);
}

TEST_CASE("free packet drifts at k0/m") {
    Grid grid = make_grid(512, 40.0);
    ComplexField psi = gaussian_packet(grid, {.center = 20.0, .sigma = 1.0, .k0 = 1.0});
    RunSpec spec{std::move(grid), std::move(psi), Model{LinearModel{}, 1.0}, ZeroPotential{},
                 StepperConfig{Scheme::Rk4, 5e-4, 2.0, 40}, "drift"};
    const TimeSeries series = run(spec);
    CHECK(std::abs(series.records.back().x_mean - 22.0) <= 1e-6);
    CHECK(std::abs(series.records.back().norm - 1.0) <= 1e-8);
}

TEST_CASE("rk4 and split-step agree on the recorded scalars") {
    RunSpec rk4 = harmonic_spec(512, Scheme::Rk4, 5e-4, 2.0, 40);
    const TimeSeries a = run(rk4);
    RunSpec split = harmonic_spec(512, Scheme::SplitStep, 1e-4, 2.0, 200);
    const TimeSeries b = run(split);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(std::abs(a.records[i].x_mean - b.records[i].x_mean) <= 1e-7);
        CHECK(std::abs(a.records[i].v_mean - b.records[i].v_mean) <= 1e-7);
        CHECK(std::abs(a.records[i].energy.value() - b.records[i].energy.value()) <= 1e-7);
    }
}

TEST_CASE("stability guard rejects oversized rk4 steps") {
    const Grid g = make_grid(1024, 40.0);
    CHECK(rk4_stability_limit(g, 1.0) == doctest::Approx(8.6578e-4).epsilon(1e-3));

    RunSpec spec = harmonic_spec(1024, Scheme::Rk4, 1e-3, 1.0, 10);  // above the guard
    CHECK_THROWS_WITH_AS(run(spec), doctest::Contains("stability"), std::invalid_argument);
}

TEST_CASE("unstable stepping trips the blow-up guard") {
    const Grid g = make_grid(64, 10.0);
    const Model model{LinearModel{}, 1.0};
    // seed the top mode so the unstable eigenvalue is actually excited;
    // the amplification must clear the 1e6-per-step guard
    ComplexField psi = plane_wave(g, 31);
    const double dt = 30.0 * rk4_stability_limit(g, 1.0);
    bool threw = false;
    double t = 0.0;
    for (int s = 0; s < 20 && !threw; ++s) {
        try {
            psi = step_rk4(model, g, psi, ZeroPotential{}, t, dt);
            t += dt;
        } catch (const std::runtime_error&) {
            threw = true;
        }
    }
    CHECK(threw);
}

TEST_CASE("plan_steps nudges dt down onto the sample windows") {
    const StepPlan none = plan_steps(0.0, 1e-3, 10);
    CHECK(none.steps == 0);

    const StepPlan plan = plan_steps(1.0, 3e-4, 25);
    CHECK(plan.steps % 25 == 0);
    CHECK(plan.dt * static_cast<double>(plan.steps) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(plan.dt <= 3e-4 * 1.01);

    // t_final below one step still yields a single full step
    const StepPlan tiny = plan_steps(1e-5, 1e-3, 1);
    CHECK(tiny.steps == 1);
    CHECK(tiny.dt == doctest::Approx(1e-5));
}

}  // TEST_SUITE
