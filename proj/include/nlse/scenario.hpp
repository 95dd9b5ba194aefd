// Scenario configuration: the documented key/value schema, strict parsing
// (all errors reported, unknown keys rejected), validation and lowering to
// a runnable spec.
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nlse/integrators.hpp"
#include "nlse/models.hpp"
#include "nlse/potentials.hpp"
#include "nlse/states.hpp"

namespace nlse {

struct StateCfg {
    enum class Kind { Gaussian, PlaneWave };
    Kind kind = Kind::Gaussian;
    GaussianSpec gaussian;
    long mode = 0;
};

struct ModelCfg {
    enum class Family { Linear, DensityFunctional, DoebnerGoldin };
    Family family = Family::Linear;
    double mass = 1.0;
    // density_functional
    double g = 0.0;
    double exponent = 1.0;
    bool gaussian_kernel = false;
    double kernel_width = 1.0;
    // doebner_goldin
    double lambda = 0.0;
    double epsilon = 1e-12;
    double band = 4.0;
};

/// One fully-described deterministic experiment: grid, initial state,
/// dynamics family, external potential, stepper and output plan.
struct Scenario {
    std::size_t grid_n = 0;
    double grid_length = 0.0;
    StateCfg state;
    ModelCfg model;
    Potential potential = ZeroPotential{};
    StepperConfig stepper;
    std::string output_series = "series.csv";
};

struct ParseOutcome {
    std::optional<Scenario> scenario;   ///< set iff errors is empty
    std::vector<std::string> errors;    ///< every problem found, not just the first
};

/// Parse and validate a scenario document. The format is INI-style
/// sections [grid] [state] [model] [potential] [stepper] [output] with
/// key = value lines; '#' starts a comment. Unknown sections or keys are
/// errors; missing required keys are enumerated.
ParseOutcome parse_scenario(std::string_view text);

/// All validation problems of an already-assembled Scenario (empty = ok).
std::vector<std::string> validate_scenario(const Scenario& sc);

/// Deterministic canonical re-serialization (also the digest input).
std::string canonical_document(const Scenario& sc);

/// FNV-1a hash of the canonical document, as fixed-width hex.
std::string scenario_digest(const Scenario& sc);

Model build_model(const ModelCfg& cfg, const Grid& grid);
ComplexField build_state(const StateCfg& cfg, const Grid& grid);

/// Lower a validated scenario to a runnable spec (throws on violations).
RunSpec build_run_spec(const Scenario& sc);

TimeSeries run_scenario(const Scenario& sc);

/// The RK4 guard limit for a scenario's grid and mass.
double scenario_rk4_limit(const Scenario& sc);

}  // namespace nlse
