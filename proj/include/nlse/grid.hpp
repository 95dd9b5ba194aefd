// Periodic 1-D grid, field containers, quadrature and spectral differentiation.
#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace nlse {

using Complex = std::complex<double>;

namespace detail {
class FftPlan;
}

/// Uniform periodic grid on [0, L): x_i = i*L/n for i = 0..n-1, index n
/// identified with index 0. n must be a power of two (>= 8) so the FFT
/// backend applies unconditionally; dx*n == length holds exactly because
/// division by a power of two is exact in binary floating point.
///
/// The grid owns the FFT plan for its size. Grids are immutable after
/// construction and cheap to share; all operations on fields are pure
/// functions of their inputs and safe to call concurrently.
class Grid {
public:
    Grid(std::size_t n, double length);

    std::size_t size() const { return n_; }
    double length() const { return length_; }
    double spacing() const { return dx_; }

    double point(std::size_t i) const { return points_[i]; }
    std::span<const double> points() const { return points_; }

    /// Wavenumber of DFT mode i in standard ordering:
    /// k_i = 2*pi*i/L for i < n/2, k_i = 2*pi*(i-n)/L for i >= n/2.
    double wavenumber(std::size_t i) const { return wavenumbers_[i]; }
    std::span<const double> wavenumbers() const { return wavenumbers_; }

    /// Largest resolved wavenumber magnitude, pi/dx.
    double max_wavenumber() const;

    /// Unnormalized forward DFT; inverse applies the 1/n factor.
    void forward(std::span<const Complex> in, std::span<Complex> out) const;
    void inverse(std::span<const Complex> in, std::span<Complex> out) const;

    std::vector<Complex> forward(const std::vector<Complex>& in) const;
    std::vector<Complex> inverse(const std::vector<Complex>& in) const;

private:
    std::size_t n_;
    double length_;
    double dx_;
    std::vector<double> points_;
    std::vector<double> wavenumbers_;
    std::shared_ptr<const detail::FftPlan> plan_;
};

/// Sampled complex field (wavefunction) on a grid. Values are a plain
/// vector; every operation checks that the length matches the grid.
struct ComplexField {
    std::vector<Complex> values;

    std::size_t size() const { return values.size(); }
    Complex& operator[](std::size_t i) { return values[i]; }
    const Complex& operator[](std::size_t i) const { return values[i]; }
    auto begin() { return values.begin(); }
    auto end() { return values.end(); }
    auto begin() const { return values.begin(); }
    auto end() const { return values.end(); }
};

/// Sampled real field (density, current, potential, ...) on a grid.
struct RealField {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    const double& operator[](std::size_t i) const { return values[i]; }
    auto begin() { return values.begin(); }
    auto end() { return values.end(); }
    auto begin() const { return values.begin(); }
    auto end() const { return values.end(); }
};

Grid make_grid(std::size_t n, double length);

ComplexField zeros_complex(const Grid& grid);
RealField zeros_real(const Grid& grid);

/// Periodic trapezoid quadrature: dx * sum(values).
double integrate(const Grid& grid, const RealField& field);

/// dx * sum(conj(a) * b).
Complex inner_product(const Grid& grid, const ComplexField& a, const ComplexField& b);

/// sqrt(integral of |psi|^2).
double field_norm(const Grid& grid, const ComplexField& psi);

/// rho = |psi|^2.
RealField density(const Grid& grid, const ComplexField& psi);

/// Spectral derivative of given order (1 or 2): transform, multiply by
/// (ik)^order, transform back. Exact for band-limited fields.
ComplexField spectral_derivative(const Grid& grid, const ComplexField& field, int order);

/// First derivative of a real field via the complex spectral path,
/// returning the real part (equivalent to the odd-derivative convention
/// at the Nyquist mode).
RealField real_derivative(const Grid& grid, const RealField& field);

bool all_finite(const ComplexField& field);
bool all_finite(const RealField& field);

/// Displacement u wrapped to the minimum-image interval [-L/2, L/2).
double min_image(double u, double length);

}  // namespace nlse
