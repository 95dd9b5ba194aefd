#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nlse/models.hpp"
#include "nlse/observables.hpp"
#include "nlse/states.hpp"

using namespace nlse;

TEST_SUITE("states") {

TEST_CASE("centered Gaussian is normalized with centroid at x0") {
    const Grid g = make_grid(512, 40.0);
    const ComplexField psi = gaussian_packet(g, {.center = 20.0, .sigma = 1.0});
    CHECK(std::abs(field_norm(g, psi) - 1.0) <= 1e-12);
    CHECK(std::abs(centroid(g, psi) - 20.0) <= 1e-10);
}

TEST_CASE("mean wavenumber sets the mean velocity k0/m") {
    const Grid g = make_grid(512, 40.0);
    const ComplexField psi = gaussian_packet(g, {.center = 20.0, .sigma = 1.0, .k0 = 2.0});
    CHECK(std::abs(mean_velocity(g, psi, 1.0) - 2.0) <= 1e-10);
    CHECK(std::abs(mean_velocity(g, psi, 4.0) - 0.5) <= 1e-10);
}

TEST_CASE("chirp produces the linear velocity field 2b(x-x0)/m") {
    const Grid g = make_grid(1024, 40.0);
    const double b = 0.3, m = 1.0, x0 = 20.0, sigma = 1.0;
    const ComplexField psi = gaussian_packet(g, {.center = x0, .sigma = sigma, .chirp = b});
    const VelocityField v = phase_velocity_field(g, psi, m, 1e-12);
    CHECK_FALSE(v.node_regularized);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double u = g.point(i) - x0;
        if (std::abs(u) <= 3.0 * sigma) {
            CHECK(std::abs(v.values[i] - 2.0 * b * u / m) <= 1e-8);
        }
    }
}

TEST_CASE("plane waves are uniform eigenstates") {
    const Grid g = make_grid(64, 10.0);

    const ComplexField flat = plane_wave(g, 0);
    for (const auto& v : flat.values) {
        CHECK(v.real() == doctest::Approx(1.0 / std::sqrt(10.0)).epsilon(1e-14));
        CHECK(v.imag() == 0.0);
    }

    const Grid g2pi = make_grid(64, 2.0 * std::numbers::pi);
    const ComplexField one = plane_wave(g2pi, 1);
    const double amp = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    for (std::size_t i = 0; i < g2pi.size(); ++i) {
        const double x = g2pi.point(i);
        CHECK(std::abs(one[i] - amp * std::exp(Complex(0.0, x))) <= 1e-13);
    }

    // |psi| constant, current uniform j = k/(mL)
    const long mode = 3;
    const double mass = 2.0;
    const ComplexField pw = plane_wave(g, mode);
    const double k = 2.0 * std::numbers::pi * static_cast<double>(mode) / g.length();
    const RealField j = current(g, pw, mass);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(std::abs(pw[i]) == doctest::Approx(1.0 / std::sqrt(10.0)).epsilon(1e-13));
        CHECK(j[i] == doctest::Approx(k / (mass * g.length())).epsilon(1e-12));
    }
    CHECK(field_norm(g, pw) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("aliased plane-wave modes are rejected") {
    const Grid g = make_grid(64, 10.0);
    CHECK_THROWS_AS(plane_wave(g, 32), std::invalid_argument);
    CHECK_THROWS_AS(plane_wave(g, -32), std::invalid_argument);
    CHECK_NOTHROW(plane_wave(g, 31));
}

TEST_CASE("normalize rescales and is idempotent") {
    const Grid g = make_grid(256, 40.0);
    ComplexField psi = gaussian_packet(g, {.center = 20.0, .sigma = 1.5});
    for (auto& v : psi.values) v *= 4.0;
    const ComplexField unit = normalize(g, psi);
    CHECK(field_norm(g, unit) == doctest::Approx(1.0).epsilon(1e-13));

    const ComplexField again = normalize(g, unit);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(std::abs(again[i] - unit[i]) <= 1e-14);
    }

    CHECK_THROWS_AS(normalize(g, zeros_complex(g)), std::invalid_argument);
}

TEST_CASE("constructor preconditions") {
    const Grid g = make_grid(256, 40.0);
    CHECK_THROWS_AS(gaussian_packet(g, {.center = 20.0, .sigma = 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_packet(g, {.center = 20.0, .sigma = -1.0}), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_packet(g, {.center = 41.0, .sigma = 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_packet(g, {.center = 0.0, .sigma = 1.0}), std::invalid_argument);
    // too wide: edge density above the clearance bound
    CHECK_THROWS_AS(gaussian_packet(g, {.center = 20.0, .sigma = 8.0}), std::invalid_argument);
    // off-center enough that one edge is hot
    CHECK_THROWS_AS(gaussian_packet(g, {.center = 4.0, .sigma = 1.5}), std::invalid_argument);
}

TEST_CASE("every constructed packet has unit norm and the advertised moments") {
    const Grid g = make_grid(1024, 40.0);
    const double m = 1.3;
    for (const GaussianSpec spec :
         {GaussianSpec{.center = 20.0, .sigma = 0.7, .k0 = 1.0},
          GaussianSpec{.center = 14.0, .sigma = 1.2, .k0 = -2.0},
          GaussianSpec{.center = 25.0, .sigma = 2.0, .k0 = 0.5}}) {
        const ComplexField psi = gaussian_packet(g, spec);
        CHECK(std::abs(field_norm(g, psi) - 1.0) <= 1e-12);
        CHECK(std::abs(centroid(g, psi) - spec.center) <= 1e-10);
        CHECK(std::abs(mean_velocity(g, psi, m) - spec.k0 / m) <= 1e-10);
    }
}

}  // TEST_SUITE
