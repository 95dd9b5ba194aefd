#include "nlse/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace nlse {

namespace detail {

namespace {
// The FFTW planner is not thread-safe; plan creation/destruction is
// serialized. fftw_execute_dft on distinct buffers is thread-safe.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }
}  // namespace

class FftPlan {
public:
    explicit FftPlan(std::size_t n) : n_(n) {
        std::vector<Complex> a(n), b(n);
        std::lock_guard lock(planner_mutex());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        forward_ = fftw_plan_dft_1d(static_cast<int>(n), as_fftw(a.data()),
                                    as_fftw(b.data()), FFTW_FORWARD, flags);
        backward_ = fftw_plan_dft_1d(static_cast<int>(n), as_fftw(a.data()),
                                     as_fftw(b.data()), FFTW_BACKWARD, flags);
        if (forward_ == nullptr || backward_ == nullptr) {
            throw std::runtime_error("FFT plan creation failed");
        }
    }

    ~FftPlan() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(backward_);
    }

    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;

    void forward(const Complex* in, Complex* out) const {
        fftw_execute_dft(forward_, as_fftw(const_cast<Complex*>(in)), as_fftw(out));
    }

    void backward(const Complex* in, Complex* out) const {
        fftw_execute_dft(backward_, as_fftw(const_cast<Complex*>(in)), as_fftw(out));
    }

    std::size_t size() const { return n_; }

private:
    std::size_t n_;
    fftw_plan forward_;
    fftw_plan backward_;
};

}  // namespace detail

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void check_bound(const Grid& grid, std::size_t field_size, const char* what) {
    if (field_size != grid.size()) {
        throw std::invalid_argument(std::string(what) + ": field length " +
                                    std::to_string(field_size) + " does not match grid size " +
                                    std::to_string(grid.size()));
    }
}

}  // namespace

Grid::Grid(std::size_t n, double length) : n_(n), length_(length) {
    if (!is_power_of_two(n) || n < 8) {
        throw std::invalid_argument("grid size must be a power of two >= 8, got " +
                                    std::to_string(n));
    }
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw std::invalid_argument("grid length must be positive and finite");
    }
    dx_ = length / static_cast<double>(n);
    points_.resize(n);
    wavenumbers_.resize(n);
    const double dk = 2.0 * std::numbers::pi / length;
    for (std::size_t i = 0; i < n; ++i) {
        points_[i] = static_cast<double>(i) * dx_;
        const auto si = static_cast<std::ptrdiff_t>(i);
        const auto sn = static_cast<std::ptrdiff_t>(n);
        wavenumbers_[i] = dk * static_cast<double>(i < n / 2 ? si : si - sn);
    }
    plan_ = std::make_shared<const detail::FftPlan>(n);
}

double Grid::max_wavenumber() const { return std::numbers::pi / dx_; }

void Grid::forward(std::span<const Complex> in, std::span<Complex> out) const {
    if (in.size() != n_ || out.size() != n_) {
        throw std::invalid_argument("forward: buffer length does not match grid size");
    }
    plan_->forward(in.data(), out.data());
}

void Grid::inverse(std::span<const Complex> in, std::span<Complex> out) const {
    if (in.size() != n_ || out.size() != n_) {
        throw std::invalid_argument("inverse: buffer length does not match grid size");
    }
    plan_->backward(in.data(), out.data());
    const double scale = 1.0 / static_cast<double>(n_);
    for (auto& v : out) v *= scale;
}

std::vector<Complex> Grid::forward(const std::vector<Complex>& in) const {
    std::vector<Complex> out(n_);
    forward(std::span<const Complex>(in), std::span<Complex>(out));
    return out;
}

std::vector<Complex> Grid::inverse(const std::vector<Complex>& in) const {
    std::vector<Complex> out(n_);
    inverse(std::span<const Complex>(in), std::span<Complex>(out));
    return out;
}

Grid make_grid(std::size_t n, double length) { return Grid(n, length); }

ComplexField zeros_complex(const Grid& grid) {
    return ComplexField{std::vector<Complex>(grid.size())};
}

RealField zeros_real(const Grid& grid) {
    return RealField{std::vector<double>(grid.size())};
}

double integrate(const Grid& grid, const RealField& field) {
    check_bound(grid, field.size(), "integrate");
    double sum = 0.0;
    for (double v : field.values) sum += v;
    return grid.spacing() * sum;
}

Complex inner_product(const Grid& grid, const ComplexField& a, const ComplexField& b) {
    check_bound(grid, a.size(), "inner_product");
    check_bound(grid, b.size(), "inner_product");
    Complex sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += std::conj(a[i]) * b[i];
    return grid.spacing() * sum;
}

double field_norm(const Grid& grid, const ComplexField& psi) {
    check_bound(grid, psi.size(), "field_norm");
    double sum = 0.0;
    for (const Complex& v : psi.values) sum += std::norm(v);
    return std::sqrt(grid.spacing() * sum);
}

RealField density(const Grid& grid, const ComplexField& psi) {
    check_bound(grid, psi.size(), "density");
    RealField rho{std::vector<double>(psi.size())};
    for (std::size_t i = 0; i < psi.size(); ++i) rho[i] = std::norm(psi[i]);
    return rho;
}

ComplexField spectral_derivative(const Grid& grid, const ComplexField& field, int order) {
    check_bound(grid, field.size(), "spectral_derivative");
    if (order != 1 && order != 2) {
        throw std::invalid_argument("spectral_derivative: order must be 1 or 2");
    }
    std::vector<Complex> hat = grid.forward(field.values);
    for (std::size_t i = 0; i < hat.size(); ++i) {
        const double k = grid.wavenumber(i);
        hat[i] *= (order == 1) ? Complex(0.0, k) : Complex(-k * k, 0.0);
    }
    return ComplexField{grid.inverse(hat)};
}

RealField real_derivative(const Grid& grid, const RealField& field) {
    check_bound(grid, field.size(), "real_derivative");
    ComplexField tmp{std::vector<Complex>(field.size())};
    for (std::size_t i = 0; i < field.size(); ++i) tmp[i] = field[i];
    const ComplexField d = spectral_derivative(grid, tmp, 1);
    RealField out{std::vector<double>(field.size())};
    for (std::size_t i = 0; i < field.size(); ++i) out[i] = d[i].real();
    return out;
}

bool all_finite(const ComplexField& field) {
    for (const Complex& v : field.values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
    return true;
}

bool all_finite(const RealField& field) {
    for (double v : field.values) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

double min_image(double u, double length) {
    double d = u - length * std::round(u / length);
    if (d >= 0.5 * length) d -= length;  // round-half-away ties
    return d;
}

}  // namespace nlse
