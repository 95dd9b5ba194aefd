#include "nlse/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nlse {

namespace {

// Fraction of the peak density that counts as "inside the packet" when
// deciding whether the velocity regularization touched the support.
constexpr double kSupportThreshold = 1e-8;

// Smooth support weight chi(rho) = s/(1+s), s = (rho / (tau max rho))^0.8,
// equal to (1 + tanh(ln(rho/tau max rho)/2.5))/2. It fades the propagated
// current term out below the support threshold over about one packet
// width, so the window adds no sharp feature of its own. A function of
// rho alone is exactly boost and gauge covariant.
double support_weight(double rho, double peak) {
    const double tau = kSupportThreshold * peak;
    if (!(rho > 0.0)) return 0.0;
    const double s = std::pow(rho / tau, 0.8);
    return s / (1.0 + s);
}

// The multiplier d/dx(j/rho) of the current-coupled family, regularized
// for propagation. Three ingredients, each load-bearing:
//
//  * quotient form (rho j' - j rho') / (rho + eps max rho)^2 with
//      j   = Im(conj(psi) psi') / m
//      j'  = Im(conj(psi) psi'') / m    (the Im(conj(psi') psi') term vanishes)
//      rho' = 2 Re(conj(psi) psi')
//    so the transforms act on smooth fields only and every division is
//    followed by purely local products. Differentiating the ratio itself
//    would amplify tail round-off by ~1/sqrt(eps max rho) into spikes and
//    then spread them grid-wide.
//
//  * the support window chi, which removes the ratio's response where the
//    density no longer tracks the phase gradient.
//
//  * a fixed physical band limit. Linearized about any state, the raw
//    term feeds perturbations of wavenumber q back with a growth rate of
//    lambda q^2 / 2m (measured to match this dispersion law), i.e. the
//    equation without its diffusive companion term is ill-posed at high
//    wavenumber for lambda > 0. Restricting the multiplier to |k| <= band
//    caps the amplification at exp(lambda band^2 t / 2m) while passing
//    the packet-scale physics unchanged. The filter is smooth (quasi-local
//    kernel) and translation invariant, so covariance is preserved.
RealField weighted_velocity_gradient(const Grid& grid, const ComplexField& psi,
                                     const ComplexField& psi_x, const ComplexField& psi_xx,
                                     const RealField& rho, double mass, double epsilon,
                                     double band) {
    const double peak = *std::max_element(rho.values.begin(), rho.values.end());
    const double floor = epsilon * peak;
    RealField out = zeros_real(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Complex p = std::conj(psi[i]);
        const double j = std::imag(p * psi_x[i]) / mass;
        const double dj = std::imag(p * psi_xx[i]) / mass;
        const double drho = 2.0 * std::real(p * psi_x[i]);
        const double denom = rho[i] + floor;
        out[i] = (denom * dj - j * drho) / (denom * denom) * support_weight(rho[i], peak);
    }

    std::vector<Complex> tmp(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) tmp[i] = out[i];
    std::vector<Complex> hat(grid.size());
    grid.forward(tmp, hat);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = std::abs(grid.wavenumber(i)) / band;
        hat[i] *= std::exp(-36.0 * std::pow(r, 16));
    }
    grid.inverse(hat, tmp);
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = tmp[i].real();
    return out;
}

// Smallest density on the contiguous support arc (wrapping allowed):
// the arc complementary to the longest run of below-threshold samples.
double support_min_density(const RealField& rho, double peak) {
    const std::size_t n = rho.size();
    const double tau = kSupportThreshold * peak;

    std::size_t best_len = 0, best_start = 0, run_len = 0, run_start = 0;
    // scan twice around the circle to capture wrapping runs
    for (std::size_t i = 0; i < 2 * n; ++i) {
        if (rho[i % n] < tau) {
            if (run_len == 0) run_start = i;
            ++run_len;
            if (run_len > best_len) {
                best_len = run_len;
                best_start = run_start;
            }
        } else {
            run_len = 0;
        }
        if (best_len >= n) break;
    }
    if (best_len == 0) {
        // no below-threshold samples: support is the whole circle
        return *std::min_element(rho.values.begin(), rho.values.end());
    }
    if (best_len >= n) return peak;  // everything below threshold (cannot happen: peak >= tau)

    // support arc runs from the end of the gap around to its start
    const std::size_t arc_begin = (best_start + best_len) % n;
    const std::size_t arc_len = n - std::min<std::size_t>(best_len, n);
    double lo = peak;
    for (std::size_t j = 0; j < arc_len; ++j) lo = std::min(lo, rho[(arc_begin + j) % n]);
    return lo;
}

}  // namespace

bool is_linear(const Model& m) { return std::holds_alternative<LinearModel>(m.family); }

bool is_density_functional(const Model& m) {
    return std::holds_alternative<DensityFunctionalModel>(m.family);
}

bool is_doebner_goldin(const Model& m) {
    return std::holds_alternative<DoebnerGoldinModel>(m.family);
}

std::vector<std::string> validate_model(const Model& m, const Grid& grid) {
    std::vector<std::string> errors;
    if (!(m.mass > 0.0) || !std::isfinite(m.mass)) {
        errors.push_back("model: mass must be positive");
    }
    if (const auto* df = std::get_if<DensityFunctionalModel>(&m.family)) {
        if (!std::isfinite(df->g)) errors.push_back("density functional: g must be finite");
        if (!(df->exponent >= 1.0) || !std::isfinite(df->exponent)) {
            errors.push_back("density functional: exponent must be >= 1");
        }
        if (df->kernel) {
            const RealField& K = *df->kernel;
            if (K.size() != grid.size()) {
                errors.push_back("density functional: kernel not bound to grid");
            } else {
                for (std::size_t i = 1; i < K.size(); ++i) {
                    if (std::abs(K[i] - K[K.size() - i]) >
                        1e-12 * std::max(1.0, std::abs(K[i]))) {
                        errors.push_back("density functional: kernel must be even, K(x) = K(-x)");
                        break;
                    }
                }
            }
        }
    } else if (const auto* dg = std::get_if<DoebnerGoldinModel>(&m.family)) {
        if (!std::isfinite(dg->lambda)) errors.push_back("doebner-goldin: lambda must be finite");
        if (!(dg->epsilon >= 0.0) || !std::isfinite(dg->epsilon)) {
            errors.push_back("doebner-goldin: epsilon must be >= 0");
        }
        if (!(dg->band > 0.0) || !std::isfinite(dg->band)) {
            errors.push_back("doebner-goldin: band must be positive");
        }
    }
    return errors;
}

RealField current(const Grid& grid, const ComplexField& psi, double mass) {
    const ComplexField dpsi = spectral_derivative(grid, psi, 1);
    RealField j = zeros_real(grid);
    const double invm = 1.0 / mass;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        j[i] = invm * std::imag(std::conj(psi[i]) * dpsi[i]);
    }
    return j;
}

bool node_regularization_active(const RealField& rho, double epsilon) {
    const double peak = *std::max_element(rho.values.begin(), rho.values.end());
    if (!(peak > 0.0) || !(epsilon > 0.0)) return false;
    return support_min_density(rho, peak) < epsilon * peak;
}

VelocityField phase_velocity_field(const Grid& grid, const ComplexField& psi, double mass,
                                   double epsilon) {
    const RealField rho = density(grid, psi);
    const RealField j = current(grid, psi, mass);
    const double peak = *std::max_element(rho.values.begin(), rho.values.end());
    const double floor = epsilon * peak;

    VelocityField out{zeros_real(grid), false};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out.values[i] = j[i] / (rho[i] + floor);
    }
    out.node_regularized = node_regularization_active(rho, epsilon);
    return out;
}

DgTerm dg_term(const Grid& grid, const ComplexField& psi, double mass, double lambda,
               double epsilon, double band) {
    const RealField rho = density(grid, psi);
    const ComplexField psi_x = spectral_derivative(grid, psi, 1);
    const ComplexField psi_xx = spectral_derivative(grid, psi, 2);
    const RealField dv =
        weighted_velocity_gradient(grid, psi, psi_x, psi_xx, rho, mass, epsilon, band);
    DgTerm out{zeros_complex(grid), node_regularization_active(rho, epsilon)};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out.values[i] = lambda * dv[i] * psi[i];
    }
    return out;
}

RealField density_functional_term(const DensityFunctionalModel& model, const Grid& grid,
                                  const RealField& rho) {
    if (rho.size() != grid.size()) {
        throw std::invalid_argument("density_functional_term: rho not bound to grid");
    }
    RealField out = zeros_real(grid);
    if (model.kernel) {
        // circular convolution, spectrally: (K * rho)(x) ~ dx * IFFT(K^ * rho^)
        const RealField& K = *model.kernel;
        std::vector<Complex> kc(grid.size()), rc(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            kc[i] = K[i];
            rc[i] = rho[i];
        }
        const auto khat = grid.forward(kc);
        auto rhat = grid.forward(rc);
        for (std::size_t i = 0; i < grid.size(); ++i) rhat[i] *= khat[i];
        const auto conv = grid.inverse(rhat);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            out[i] = model.g * grid.spacing() * conv[i].real();
        }
    } else if (model.exponent == 1.0) {
        for (std::size_t i = 0; i < grid.size(); ++i) out[i] = model.g * rho[i];
    } else {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            out[i] = model.g * std::pow(rho[i], model.exponent);
        }
    }
    return out;
}

RealField make_gaussian_kernel(const Grid& grid, double width) {
    if (!(width > 0.0) || !std::isfinite(width)) {
        throw std::invalid_argument("make_gaussian_kernel: width must be positive");
    }
    RealField K = zeros_real(grid);
    const double inv2w2 = 1.0 / (2.0 * width * width);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double d = min_image(grid.point(i), grid.length());
        K[i] = std::exp(-d * d * inv2w2);
    }
    const double z = integrate(grid, K);
    for (auto& v : K.values) v /= z;
    return K;
}

ComplexField rhs(const Model& model, const Grid& grid, const ComplexField& psi,
                 const Potential& potential, double t) {
    (void)t;  // no time-dependent potentials
    if (psi.size() != grid.size()) {
        throw std::invalid_argument("rhs: psi not bound to grid");
    }
    const double mass = model.mass;

    // One forward transform serves both derivatives.
    const std::vector<Complex> hat = grid.forward(psi.values);
    std::vector<Complex> tmp(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double k = grid.wavenumber(i);
        tmp[i] = -k * k * hat[i];
    }
    const std::vector<Complex> psi_xx = grid.inverse(tmp);

    const bool needs_rho = !is_zero(potential) || is_density_functional(model);
    RealField rho;
    if (needs_rho || is_doebner_goldin(model)) rho = density(grid, psi);

    // Real multiplier W = U + O(rho) + lambda d/dx(j/rho)
    RealField w = zeros_real(grid);
    if (!is_zero(potential)) {
        const RealField u = evaluate_potential(potential, grid, mass,
                                               is_density_coupled(potential) ? &rho : nullptr);
        for (std::size_t i = 0; i < grid.size(); ++i) w[i] += u[i];
    }
    if (const auto* df = std::get_if<DensityFunctionalModel>(&model.family)) {
        const RealField o = density_functional_term(*df, grid, rho);
        for (std::size_t i = 0; i < grid.size(); ++i) w[i] += o[i];
    } else if (const auto* dg = std::get_if<DoebnerGoldinModel>(&model.family)) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            tmp[i] = Complex(0.0, grid.wavenumber(i)) * hat[i];
        }
        ComplexField psi_x{grid.inverse(tmp)};
        const RealField dv = weighted_velocity_gradient(
            grid, psi, psi_x, ComplexField{psi_xx}, rho, mass, dg->epsilon, dg->band);
        for (std::size_t i = 0; i < grid.size(); ++i) w[i] += dg->lambda * dv[i];
    }

    const double half_inv_m = 0.5 / mass;
    ComplexField out = zeros_complex(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        // -i * ( -psi''/2m + W psi )
        out[i] = Complex(0.0, -1.0) * (-half_inv_m * psi_xx[i] + w[i] * psi[i]);
    }
    if (!all_finite(out)) {
        std::size_t first = 0;
        for (std::size_t i = 0; i < out.size(); ++i) {
            if (!std::isfinite(out[i].real()) || !std::isfinite(out[i].imag())) {
                first = i;
                break;
            }
        }
        throw std::runtime_error("rhs: non-finite value at grid index " + std::to_string(first));
    }
    return out;
}

}  // namespace nlse
