// Integral diagnostics: centroid, mean velocity, momentum, force, energy,
// and the defect series that test the mean-value equations of motion.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nlse/grid.hpp"
#include "nlse/models.hpp"
#include "nlse/potentials.hpp"

namespace nlse {

struct ObservableRecord {
    double t = 0.0;
    double norm = 0.0;        ///< integral of rho
    double x_mean = 0.0;      ///< Born centroid <x>
    double v_mean = 0.0;      ///< <v> = integral of j
    double p_total = 0.0;     ///< m * integral of j
    double force_full = 0.0;  ///< -int rho * dU/dx (full gradient)
    double force_partial = 0.0;
    double dg_violation = 0.0;  ///< lambda * int rho' (j/rho)' dx; 0 unless current-coupled
    std::optional<double> energy;  ///< absent for Doebner-Goldin (no conserved functional)
};

struct TimeSeries {
    std::vector<ObservableRecord> records;
    std::string scenario_digest;
    double sample_spacing = 0.0;
    bool node_flagged = false;

    std::size_t size() const { return records.size(); }
};

/// Throws unless t strictly increases with uniform spacing.
void validate_series(const TimeSeries& series);

/// Keep every stride-th record (including the first). The stride must
/// divide the record count minus one so the final time is preserved.
TimeSeries decimate(const TimeSeries& series, std::size_t stride);

enum class ClearancePolicy { Enforce, Ignore };

/// <x> = int rho x dx / int rho dx. The boundary-clearance precondition is
/// checked unless explicitly ignored (test-only paths).
double centroid(const Grid& grid, const ComplexField& psi,
                ClearancePolicy policy = ClearancePolicy::Enforce);

/// <v> = integral of the probability current.
double mean_velocity(const Grid& grid, const ComplexField& psi, double mass);

/// Integrated field momentum; equal to m * <v> on the periodic domain.
double total_momentum(const Grid& grid, const ComplexField& psi, double mass);

/// F = -int rho * potential_gradient(mode) dx.
double force(const Grid& grid, const RealField& rho, const Potential& potential, double mass,
             GradientMode mode);

struct DgViolation {
    double value = 0.0;
    bool node_regularized = false;
};

/// lambda * int (d rho/dx) * d(j/rho)/dx dx — the predicted defect of the
/// mean-velocity force law for the current-coupled family.
DgViolation dg_violation_term(const Grid& grid, const ComplexField& psi, double mass,
                              double lambda, double epsilon);

/// Conserved functional int |psi'|^2/2m + E_pot(rho) + E_self(rho) dx for
/// the families that have one; std::nullopt for Doebner-Goldin.
std::optional<double> energy(const Model& model, const Grid& grid, const ComplexField& psi,
                             const Potential& potential);

/// One fully-populated record at time t (clearance enforced).
ObservableRecord record_observables(const Model& model, const Grid& grid,
                                    const ComplexField& psi, const Potential& potential,
                                    double t, bool* node_flag = nullptr);

struct DefectSeries {
    std::vector<double> t;      ///< interior sample times
    std::vector<double> value;  ///< defect at those times

    double max_abs() const;
};

/// r(t_i) = m (v_{i+1} - v_{i-1}) / (2h) - force_full(t_i) at interior
/// samples; zero (to finite-difference tolerance) when the mean-value
/// second law holds.
DefectSeries ehrenfest_residual(const TimeSeries& series, double mass);

/// dP/dt - force_full via centered differences of p_total; coincides with
/// ehrenfest_residual because P = m <v> here, and is computed separately
/// to expose the field-momentum form of the law.
DefectSeries momentum_law_defect(const TimeSeries& series, double mass);

/// d<x>/dt - <v> via centered differences; tests the velocity definition.
DefectSeries centroid_velocity_defect(const TimeSeries& series);

}  // namespace nlse
