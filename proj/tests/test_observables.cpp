#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nlse/observables.hpp"
#include "nlse/states.hpp"

using namespace nlse;

namespace {

// synthetic uniformly-sampled series with prescribed scalar trajectories
TimeSeries synthetic_series(double h, std::size_t count, double (*v_of_t)(double),
                            double (*force_of_t)(double), double mass) {
    TimeSeries s;
    s.sample_spacing = h;
    for (std::size_t i = 0; i < count; ++i) {
        ObservableRecord r;
        r.t = h * static_cast<double>(i);
        r.v_mean = v_of_t(r.t);
        r.p_total = mass * r.v_mean;
        r.force_full = force_of_t(r.t);
        r.force_partial = r.force_full;
        r.norm = 1.0;
        s.records.push_back(r);
    }
    return s;
}

}  // namespace

TEST_SUITE("observables") {

TEST_CASE("centroid of symmetric states") {
    const Grid g = make_grid(512, 40.0);
    const ComplexField psi = gaussian_packet(g, {.center = 17.5, .sigma = 1.0});
    CHECK(std::abs(centroid(g, psi) - 17.5) <= 1e-10);

    // 50/50 two-packet mix centered on x0: linearity of the mean
    const ComplexField a = gaussian_packet(g, {.center = 17.0, .sigma = 1.0});
    const ComplexField b = gaussian_packet(g, {.center = 23.0, .sigma = 1.0});
    ComplexField mix = zeros_complex(g);
    for (std::size_t i = 0; i < g.size(); ++i) mix[i] = a[i] + b[i];
    mix = normalize(g, mix);
    CHECK(std::abs(centroid(g, mix) - 20.0) <= 1e-8);
}

TEST_CASE("centroid of a plane wave needs the clearance override") {
    const Grid g = make_grid(512, 40.0);
    const ComplexField pw = plane_wave(g, 3);
    CHECK_THROWS_AS(centroid(g, pw), std::runtime_error);  // uniform density: no clearance
    // test-only path: uniform density centroid sits mid-domain (up to the
    // half-cell offset of the one-sided quadrature of x)
    const double c = centroid(g, pw, ClearancePolicy::Ignore);
    CHECK(std::abs(c - 20.0) <= 0.5 * g.spacing() + 1e-12);
}

TEST_CASE("mean velocity and total momentum") {
    const Grid g = make_grid(512, 40.0);
    const ComplexField real_psi = gaussian_packet(g, {.center = 20.0, .sigma = 1.0});
    CHECK(std::abs(mean_velocity(g, real_psi, 1.0)) <= 1e-12);
    CHECK(std::abs(total_momentum(g, real_psi, 1.0)) <= 1e-12);

    const ComplexField moving = gaussian_packet(g, {.center = 20.0, .sigma = 1.0, .k0 = 2.0});
    const double mass = 1.5;
    CHECK(std::abs(total_momentum(g, moving, mass) - 2.0) <= 1e-10);

    const Grid g10 = make_grid(64, 10.0);
    const long mode = 4;
    const double k = 2.0 * std::numbers::pi * static_cast<double>(mode) / g10.length();
    CHECK(std::abs(total_momentum(g10, plane_wave(g10, mode), 2.0) - k) <= 1e-12);
}

TEST_CASE("force against closed forms") {
    const Grid g = make_grid(512, 40.0);
    const double mass = 1.2, omega = 1.4, center = 20.0, x0 = 21.5;
    const ComplexField psi = gaussian_packet(g, {.center = x0, .sigma = 1.0});
    const RealField rho = density(g, psi);

    const double f_harm =
        force(g, rho, HarmonicPotential{omega, center}, mass, GradientMode::Full);
    CHECK(std::abs(f_harm - (-mass * omega * omega * (x0 - center))) <= 1e-8);

    const double f_unif = force(g, rho, UniformForcePotential{0.3}, mass, GradientMode::Full);
    CHECK(f_unif == doctest::Approx(0.3).epsilon(1e-12));

    CHECK(force(g, rho, ZeroPotential{}, mass, GradientMode::Full) == 0.0);
}

TEST_CASE("violation quadrature: zero for real and pure-chirp states") {
    const Grid g = make_grid(1024, 40.0);
    const double lambda = 0.3, eps = 1e-12;

    const ComplexField real_psi = gaussian_packet(g, {.center = 20.0, .sigma = 1.0});
    CHECK(std::abs(dg_violation_term(g, real_psi, 1.0, lambda, eps).value) <= 1e-10);

    const ComplexField chirped =
        gaussian_packet(g, {.center = 20.0, .sigma = 1.0, .chirp = 0.3});
    CHECK(std::abs(dg_violation_term(g, chirped, 1.0, lambda, eps).value) <= 1e-9);
}

TEST_CASE("violation quadrature matches -6 lambda c / m and the analytic integrand") {
    const Grid g = make_grid(1024, 40.0);
    const double lambda = 0.3, mass = 1.0, c = 0.05, sigma = 1.0, x0 = 20.0;
    const ComplexField psi = gaussian_packet(g, {.center = x0, .sigma = sigma, .cubic = c});

    const double measured = dg_violation_term(g, psi, mass, lambda, 1e-12).value;

    // oracle: quadrature of the analytic integrand
    //   rho = exp(-u^2/2s^2)/(s sqrt(2 pi)),  d rho/dx = -(u/s^2) rho,
    //   d(v)/dx = 6 c u / m
    double oracle = 0.0;
    const double norm = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double u = g.point(i) - x0;
        const double rho = norm * std::exp(-0.5 * u * u / (sigma * sigma));
        oracle += (-(u / (sigma * sigma)) * rho) * (6.0 * c * u / mass);
    }
    oracle *= lambda * g.spacing();

    const double closed_form = -6.0 * lambda * c / mass;
    CHECK(std::abs(oracle - closed_form) <= 1e-8);    // the oracle itself is consistent
    CHECK(std::abs(measured - oracle) <= 1e-7);
    CHECK(std::abs(measured - closed_form) <= 1e-6);
}

TEST_CASE("energy closed forms and the absent case") {
    const Grid g = make_grid(64, 10.0);
    const long mode = 3;
    const double mass = 2.0;
    const double k = 2.0 * std::numbers::pi * static_cast<double>(mode) / g.length();
    const ComplexField pw = plane_wave(g, mode);

    const auto e_lin = energy(Model{LinearModel{}, mass}, g, pw, ZeroPotential{});
    REQUIRE(e_lin.has_value());
    CHECK(*e_lin == doctest::Approx(k * k / (2.0 * mass)).epsilon(1e-12));

    const double gcoup = 1.3;
    const auto e_df =
        energy(Model{DensityFunctionalModel{gcoup, 1.0, std::nullopt}, mass}, g, pw,
               ZeroPotential{});
    REQUIRE(e_df.has_value());
    CHECK(*e_df ==
          doctest::Approx(k * k / (2.0 * mass) + gcoup / (2.0 * g.length())).epsilon(1e-12));

    CHECK_FALSE(energy(Model{DoebnerGoldinModel{0.3, 1e-12}, mass}, g, pw, ZeroPotential{})
                    .has_value());
}

TEST_CASE("residual series: finite-difference defect behaves as h^2") {
    const double mass = 1.3;
    const double h = 0.01;
    const auto series = synthetic_series(
        h, 101, [](double t) { return std::sin(t); },
        [](double t) { return 1.3 * std::cos(t); }, mass);

    const DefectSeries r = ehrenfest_residual(series, mass);
    CHECK(r.t.size() == 99);
    // centered-difference truncation: |r| <= m h^2 |v'''| / 6
    CHECK(r.max_abs() <= mass * h * h / 6.0 * 1.01);
    CHECK(r.max_abs() >= mass * h * h / 6.0 * 0.5);  // and it is genuinely there

    const DefectSeries p = momentum_law_defect(series, mass);
    for (std::size_t i = 0; i < r.value.size(); ++i) {
        CHECK(p.value[i] == doctest::Approx(r.value[i]).epsilon(1e-12));
    }
}

TEST_CASE("constant-velocity series has zero residual") {
    const auto series = synthetic_series(
        0.02, 51, [](double) { return 0.7; }, [](double) { return 0.0; }, 1.0);
    CHECK(ehrenfest_residual(series, 1.0).max_abs() <= 1e-15);
}

TEST_CASE("centroid-slope defect against synthetic trajectories") {
    TimeSeries s;
    const double h = 0.01;
    s.sample_spacing = h;
    for (std::size_t i = 0; i < 80; ++i) {
        ObservableRecord r;
        r.t = h * static_cast<double>(i);
        r.x_mean = -std::cos(r.t);
        r.v_mean = std::sin(r.t);
        s.records.push_back(r);
    }
    CHECK(centroid_velocity_defect(s).max_abs() <= h * h / 6.0 * 1.01);
}

TEST_CASE("series validation and decimation") {
    TimeSeries bad;
    for (double t : {0.0, 0.1, 0.05}) {
        ObservableRecord r;
        r.t = t;
        bad.records.push_back(r);
    }
    CHECK_THROWS_AS(validate_series(bad), std::invalid_argument);

    TimeSeries nonuniform;
    for (double t : {0.0, 0.1, 0.3}) {
        ObservableRecord r;
        r.t = t;
        nonuniform.records.push_back(r);
    }
    CHECK_THROWS_AS(ehrenfest_residual(nonuniform, 1.0), std::invalid_argument);

    TimeSeries two;
    for (double t : {0.0, 0.1}) {
        ObservableRecord r;
        r.t = t;
        two.records.push_back(r);
    }
    CHECK_THROWS_AS(ehrenfest_residual(two, 1.0), std::invalid_argument);

    const auto series = synthetic_series(
        0.01, 9, [](double t) { return t; }, [](double) { return 1.0; }, 1.0);
    const TimeSeries half = decimate(series, 2);
    CHECK(half.size() == 5);
    CHECK(half.sample_spacing == doctest::Approx(0.02));
    CHECK_THROWS_AS(decimate(series, 3), std::invalid_argument);  // 8 windows, stride 3
}

}  // TEST_SUITE
