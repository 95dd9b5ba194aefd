#include "nlse/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "nlse/galilean.hpp"
#include "nlse/preset_documents.hpp"
#include "nlse/series_io.hpp"

namespace nlse::experiments {

namespace {

// Finite-difference tolerance coefficients: tol_fd = C * h^2 for sample
// spacing h. Each C is pinned from the measured truncation constant of
// its scenario with a factor >= 3 of headroom; the halving checks verify
// the h^2 scaling so a residual that is genuinely wrong (not truncation)
// cannot hide under these.
constexpr double kFdCoeffHarmonic = 1.0;
constexpr double kFdCoeffGpe = 2.0;
constexpr double kFdCoeffDg = 2.0;
constexpr double kFdCoeffNonlinearForce = 2.0;

constexpr double kBoostVelocity = 0.5;

double tol_fd(double coeff, const TimeSeries& series) {
    return coeff * series.sample_spacing * series.sample_spacing;
}

void add_check(ExperimentReport& rep, std::string name, double measured, double bound,
               std::string note = {}) {
    const bool pass = measured <= bound;
    rep.checks.push_back({std::move(name), measured, bound, pass, std::move(note)});
}

void add_check_flag(ExperimentReport& rep, std::string name, double measured, double bound,
                    bool pass, std::string note = {}) {
    rep.checks.push_back({std::move(name), measured, bound, pass, std::move(note)});
}

TimeSeries run_and_emit(const Scenario& sc, const std::filesystem::path& out_dir,
                        ExperimentReport& rep, SampleObserver observer = {}) {
    RunSpec spec = build_run_spec(sc);
    spec.observer = std::move(observer);
    TimeSeries series = run(spec);
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        const std::filesystem::path path = out_dir / sc.output_series;
        emit_series(series, path);
        rep.artifacts.push_back(path.string());
    }
    return series;
}

double max_norm_drift(const TimeSeries& series) {
    double m = 0.0;
    for (const auto& r : series.records) m = std::max(m, std::abs(r.norm - 1.0));
    return m;
}

double max_momentum_drift(const TimeSeries& series) {
    double m = 0.0;
    const double p0 = series.records.front().p_total;
    for (const auto& r : series.records) m = std::max(m, std::abs(r.p_total - p0));
    return m;
}

double max_energy_drift(const TimeSeries& series) {
    double m = 0.0;
    const double e0 = series.records.front().energy.value();
    for (const auto& r : series.records) m = std::max(m, std::abs(r.energy.value() - e0));
    return m;
}

Scenario with_sample_every(Scenario sc, std::size_t sample_every) {
    sc.stepper.sample_every = sample_every;
    return sc;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

const HarmonicPotential& harmonic_of(const Scenario& sc) {
    return std::get<HarmonicPotential>(sc.potential);
}

// ---- criterion evaluators -------------------------------------------------

void eval_free_packet(ExperimentReport& rep, const std::filesystem::path& out_dir) {
    const Scenario sc = load_fixture("free-packet");
    const TimeSeries series = run_and_emit(sc, out_dir, rep);
    const auto& last = series.records.back();
    const double drift_target =
        sc.state.gaussian.center + sc.state.gaussian.k0 / sc.model.mass * sc.stepper.t_final;
    add_check(rep, "final centroid matches x0 + v0*T", std::abs(last.x_mean - drift_target),
              1e-6);
    add_check(rep, "norm drift", max_norm_drift(series), 1e-8);
}

void eval_linear_harmonic(ExperimentReport& rep, const std::filesystem::path& out_dir) {
    const Scenario sc = load_fixture("linear-harmonic");
    const TimeSeries series = run_and_emit(sc, out_dir, rep);

    const HarmonicPotential& trap = harmonic_of(sc);
    const double amplitude = sc.state.gaussian.center - trap.center;
    double traj_err = 0.0;
    for (const auto& r : series.records) {
        const double exact = trap.center + amplitude * std::cos(trap.omega * r.t);
        traj_err = std::max(traj_err, std::abs(r.x_mean - exact));
    }
    add_check(rep, "centroid traces center + A cos(w t)", traj_err, 1e-5);

    const double tol = tol_fd(kFdCoeffHarmonic, series);
    const double res = ehrenfest_residual(series, sc.model.mass).max_abs();
    add_check(rep, "mean-velocity force-law residual", res, tol,
              "tol_fd = " + fmt(kFdCoeffHarmonic) + "*h^2, h = " + fmt(series.sample_spacing));
    add_check(rep, "centroid slope matches mean velocity",
              centroid_velocity_defect(series).max_abs(), tol);

    // halving the sampling interval must shrink the residual ~4x
    const TimeSeries fine = run_scenario(with_sample_every(sc, sc.stepper.sample_every / 2));
    const double res_fine = ehrenfest_residual(fine, sc.model.mass).max_abs();
    const double ratio = res / res_fine;
    add_check_flag(rep, "residual shrinks ~4x when h is halved", ratio, 4.0,
                   ratio >= 3.5 && ratio <= 4.5, "accepted range [3.5, 4.5]");
}

void eval_uniform_force(ExperimentReport& rep, const std::filesystem::path& out_dir) {
    const Scenario sc = load_fixture("uniform-force");
    const TimeSeries series = run_and_emit(sc, out_dir, rep);
    const auto& last = series.records.back();
    const double f0 = std::get<UniformForcePotential>(sc.potential).f0;
    const double T = sc.stepper.t_final;
    const double v0 = sc.state.gaussian.k0 / sc.model.mass;
    const double exact =
        sc.state.gaussian.center + v0 * T + 0.5 * f0 / sc.model.mass * T * T;
    add_check(rep, "final centroid matches x0 + v0*T + f0*T^2/2m",
              std::abs(last.x_mean - exact), 1e-5);
}

void eval_gpe_variant(ExperimentReport& rep, const std::filesystem::path& out_dir,
                      const char* fixture, const char* label) {
    const Scenario sc = load_fixture(fixture);
    RunSpec probe = build_run_spec(sc);

    // self-interaction transparency identity: int rho * d/dx O(rho) == 0
    double identity_max = 0.0;
    const auto& df = std::get<DensityFunctionalModel>(probe.model.family);
    const Grid& grid = probe.grid;
    SampleObserver observer = [&](std::size_t, double, const ComplexField& psi) {
        const RealField rho = density(grid, psi);
        const RealField o = density_functional_term(df, grid, rho);
        const RealField dodx = real_derivative(grid, o);
        double sum = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) sum += rho[i] * dodx[i];
        identity_max = std::max(identity_max, std::abs(grid.spacing() * sum));
    };

    const TimeSeries series = run_and_emit(sc, out_dir, rep, observer);
    const std::string tag = std::string(" [") + label + "]";

    const double tol = tol_fd(kFdCoeffGpe, series);
    add_check(rep, "mean-velocity force-law residual" + tag,
              ehrenfest_residual(series, sc.model.mass).max_abs(), tol,
              "tol_fd = " + fmt(kFdCoeffGpe) + "*h^2, h = " + fmt(series.sample_spacing));
    add_check(rep, "self-force quadrature |int rho d/dx O(rho)|" + tag, identity_max, 1e-10);
    add_check(rep, "energy drift" + tag, max_energy_drift(series), 1e-8);
    add_check(rep, "norm drift" + tag, max_norm_drift(series), 1e-8);

    const TimeSeries fine = run_scenario(with_sample_every(sc, sc.stepper.sample_every / 2));
    const double ratio = ehrenfest_residual(series, sc.model.mass).max_abs() /
                         ehrenfest_residual(fine, sc.model.mass).max_abs();
    add_check_flag(rep, "residual shrinks ~4x when h is halved" + tag, ratio, 4.0,
                   ratio >= 3.0 && ratio <= 5.0, "accepted range [3.0, 5.0]");
}

void eval_gpe_trap(ExperimentReport& rep, const std::filesystem::path& out_dir) {
    eval_gpe_variant(rep, out_dir, "gpe-trap", "local");
    eval_gpe_variant(rep, out_dir, "gpe-trap-kernel", "kernel");
}

void eval_dg_violation(ExperimentReport& rep, const std::filesystem::path& out_dir) {
    const Scenario sc = load_fixture("dg-violation");
    const double lambda = sc.model.lambda;
    const double mass = sc.model.mass;
    const double cubic = sc.state.gaussian.cubic;

    {
        // instantaneous prediction at t = 0 against the closed form -6 lambda c / m
        const Grid grid = make_grid(sc.grid_n, sc.grid_length);
        const ComplexField psi0 = build_state(sc.state, grid);
        const DgViolation v0 =
            dg_violation_term(grid, psi0, mass, lambda, sc.model.epsilon);
        const double closed_form = -6.0 * lambda * cubic / mass;
        add_check(rep, "t=0 violation quadrature matches -6*lambda*c/m",
                  std::abs(v0.value - closed_form), 1e-6,
                  "quadrature " + fmt(v0.value) + " vs closed form " + fmt(closed_form));
    }

    const TimeSeries series = run_and_emit(sc, out_dir, rep);
    const double tol = tol_fd(kFdCoeffDg, series);
    const DefectSeries res = ehrenfest_residual(series, mass);

    double max_dgv = 0.0;
    for (const auto& r : series.records) max_dgv = std::max(max_dgv, std::abs(r.dg_violation));

    // the sign convention is measured, not assumed; the magnitude match is the criterion
    double dot = 0.0, dgv_sq = 0.0, match_err = 0.0;
    for (std::size_t i = 0; i < res.value.size(); ++i) {
        const double dgv = series.records[i + 1].dg_violation;
        dot += res.value[i] * dgv;
        dgv_sq += dgv * dgv;
    }
    const double sign = dot >= 0.0 ? 1.0 : -1.0;
    for (std::size_t i = 0; i < res.value.size(); ++i) {
        const double dgv = series.records[i + 1].dg_violation;
        match_err = std::max(match_err, std::abs(res.value[i] - sign * dgv));
    }
    rep.info.emplace_back("measured_sign", sign > 0 ? "+1" : "-1");
    rep.info.emplace_back("measured_factor", fmt(dgv_sq > 0 ? dot / dgv_sq : 0.0));

    add_check(rep, "residual tracks predicted violation over the run", match_err,
              1e-2 * max_dgv, "relative to max |violation| = " + fmt(max_dgv));
    add_check_flag(rep, "violation resolved above fd noise (10x tol_fd)", max_dgv, 10.0 * tol,
                   max_dgv > 10.0 * tol);
    add_check(rep, "norm drift", max_norm_drift(series), 1e-8);

    const Scenario control = load_fixture("dg-violation-control");
    const TimeSeries cseries = run_and_emit(control, out_dir, rep);
    add_check(rep, "lambda=0 control residual", ehrenfest_residual(cseries, mass).max_abs(),
              tol_fd(kFdCoeffDg, cseries));
}

void eval_boost_check(ExperimentReport& rep, const std::filesystem::path&) {
    const Scenario sc = load_fixture("boost-base");
    const Grid grid = make_grid(sc.grid_n, sc.grid_length);
    const ComplexField psi0 = build_state(sc.state, grid);
    rep.info.emplace_back("dv", fmt(kBoostVelocity));

    const auto check_model = [&](const char* label, Model model) {
        const double err =
            covariance_error(model, grid, psi0, ZeroPotential{}, kBoostVelocity,
                             sc.stepper.t_final, Scheme::Rk4, sc.stepper.dt);
        add_check(rep, std::string("covariance error [") + label + "]", err, 1e-6);
    };
    check_model("linear", Model{LinearModel{}, sc.model.mass});
    check_model("density_functional g=1",
                Model{DensityFunctionalModel{1.0, 1.0, std::nullopt}, sc.model.mass});
    // The density floor eps*max(rho) is the one ingredient of the velocity
    // regularization that is not frame covariant (the boosted current gains
    // -dv*rho, the floor does not follow); its coupling scales away with
    // eps, so the covariance measurement runs at the smallest float-safe
    // floor rather than the propagation default.
    check_model("doebner_goldin lambda=0.3",
                Model{DoebnerGoldinModel{0.3, 1e-14, 4.0}, sc.model.mass});
}

void eval_momentum_law(ExperimentReport& rep, const std::filesystem::path& out_dir) {
    {
        const Scenario sc = load_fixture("linear-harmonic");
        const TimeSeries series = run_scenario(sc);
        add_check(rep, "field-momentum law defect [linear-harmonic]",
                  momentum_law_defect(series, sc.model.mass).max_abs(),
                  tol_fd(kFdCoeffHarmonic, series));
    }
    {
        const Scenario sc = load_fixture("gpe-trap");
        const TimeSeries series = run_scenario(sc);
        add_check(rep, "field-momentum law defect [gpe-trap]",
                  momentum_law_defect(series, sc.model.mass).max_abs(),
                  tol_fd(kFdCoeffGpe, series));
    }
    for (const char* fixture :
         {"momentum-free-linear", "momentum-free-gpe", "momentum-free-dg"}) {
        const Scenario sc = load_fixture(fixture);
        const TimeSeries series = run_and_emit(sc, out_dir, rep);
        add_check(rep, std::string("free momentum drift [") + fixture + "]",
                  max_momentum_drift(series), 1e-8);
    }
}

double series_max_difference(const TimeSeries& a, const TimeSeries& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& ra = a.records[i];
        const auto& rb = b.records[i];
        m = std::max({m, std::abs(ra.norm - rb.norm), std::abs(ra.x_mean - rb.x_mean),
                      std::abs(ra.v_mean - rb.v_mean), std::abs(ra.p_total - rb.p_total),
                      std::abs(ra.force_full - rb.force_full),
                      std::abs(ra.force_partial - rb.force_partial),
                      std::abs(ra.dg_violation - rb.dg_violation)});
        if (ra.energy && rb.energy) m = std::max(m, std::abs(*ra.energy - *rb.energy));
    }
    return m;
}

double state_distance(const Grid& grid, const ComplexField& a, const ComplexField& b) {
    ComplexField d = a;
    for (std::size_t i = 0; i < d.size(); ++i) d[i] -= b[i];
    return field_norm(grid, d);
}

double measured_order(const RunSpec& spec, Scheme scheme, double dt_base) {
    const double T = spec.stepper.t_final;
    const auto steps = static_cast<std::size_t>(std::llround(T / dt_base));
    const double dt = T / static_cast<double>(steps);
    const ComplexField c1 =
        propagate(spec.model, spec.grid, spec.initial, spec.potential, scheme, dt, steps);
    const ComplexField c2 = propagate(spec.model, spec.grid, spec.initial, spec.potential,
                                      scheme, dt / 2.0, steps * 2);
    const ComplexField c4 = propagate(spec.model, spec.grid, spec.initial, spec.potential,
                                      scheme, dt / 4.0, steps * 4);
    const double d1 = state_distance(spec.grid, c1, c2);
    const double d2 = state_distance(spec.grid, c2, c4);
    return std::log2(d1 / d2);
}

void eval_scheme_check(ExperimentReport& rep, const std::filesystem::path&) {
    for (const char* fixture : {"free-packet", "linear-harmonic", "uniform-force", "gpe-trap",
                                "gpe-trap-kernel"}) {
        const Scenario sc = load_fixture(fixture);
        const TimeSeries rk4 = run_scenario(sc);

        Scenario split = sc;
        split.stepper.scheme = Scheme::SplitStep;
        split.stepper.dt = sc.stepper.dt / 5.0;  // second-order scheme needs the smaller step
        split.stepper.sample_every = sc.stepper.sample_every * 5;
        const TimeSeries ss = run_scenario(split);

        add_check(rep, std::string("scheme agreement in all recorded scalars [") + fixture + "]",
                  series_max_difference(rk4, ss), 1e-7);
    }

    const RunSpec spec = build_run_spec(load_fixture("linear-harmonic"));
    const double order_rk4 = measured_order(spec, Scheme::Rk4, 8e-4);
    add_check_flag(rep, "measured rk4 convergence order", order_rk4, 4.0,
                   std::abs(order_rk4 - 4.0) <= 0.2, "accepted 4 +- 0.2");
    const double order_split = measured_order(spec, Scheme::SplitStep, 4e-3);
    add_check_flag(rep, "measured split-step convergence order", order_split, 2.0,
                   std::abs(order_split - 2.0) <= 0.2, "accepted 2 +- 0.2");
}

void eval_nonlinear_force(ExperimentReport& rep, const std::filesystem::path& out_dir) {
    const Scenario sc = load_fixture("nonlinear-force");
    const TimeSeries series = run_and_emit(sc, out_dir, rep);
    const double tol = tol_fd(kFdCoeffNonlinearForce, series);

    const double defect_full = ehrenfest_residual(series, sc.model.mass).max_abs();

    // same centered derivative held against the partial-gradient candidate
    double defect_partial = 0.0;
    {
        const auto& r = series.records;
        const double h = series.sample_spacing;
        for (std::size_t i = 1; i + 1 < r.size(); ++i) {
            const double ddt = sc.model.mass * (r[i + 1].v_mean - r[i - 1].v_mean) / (2.0 * h);
            defect_partial = std::max(defect_partial, std::abs(ddt - r[i].force_partial));
        }
    }

    const bool full_closes = defect_full <= tol;
    const bool partial_closes = defect_partial <= tol;
    const char* closer = full_closes && !partial_closes    ? "full"
                         : partial_closes && !full_closes  ? "partial"
                         : full_closes && partial_closes   ? "both"
                                                           : "neither";
    rep.info.emplace_back("closing_gradient", closer);
    add_check_flag(rep, "exactly one force candidate closes the mean-velocity law",
                   std::min(defect_full, defect_partial), tol, full_closes != partial_closes,
                   "full gradient defect " + fmt(defect_full) + ", partial gradient defect " +
                       fmt(defect_partial) + "; closes: " + closer);
}

struct PresetEntry {
    const char* name;
    void (*eval)(ExperimentReport&, const std::filesystem::path&);
};

constexpr PresetEntry kPresets[] = {
    {"free-packet", eval_free_packet},
    {"linear-harmonic", eval_linear_harmonic},
    {"uniform-force", eval_uniform_force},
    {"gpe-trap", eval_gpe_trap},
    {"dg-violation", eval_dg_violation},
    {"boost-check", eval_boost_check},
    {"momentum-law", eval_momentum_law},
    {"scheme-check", eval_scheme_check},
    {"nonlinear-force", eval_nonlinear_force},
};

}  // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& p : kPresets) v.emplace_back(p.name);
        return v;
    }();
    return names;
}

const std::vector<std::string>& fixture_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [name, doc] : embedded::kPresetDocuments) v.emplace_back(name);
        return v;
    }();
    return names;
}

std::string_view fixture_document(std::string_view name) {
    for (const auto& [key, doc] : embedded::kPresetDocuments) {
        if (key == name) return doc;
    }
    throw std::invalid_argument("unknown fixture document '" + std::string(name) + "'");
}

Scenario load_fixture(std::string_view name) {
    const ParseOutcome outcome = parse_scenario(fixture_document(name));
    if (!outcome.scenario) {
        std::string msg = "fixture '" + std::string(name) + "' failed to parse:";
        for (const auto& e : outcome.errors) msg += "\n  " + e;
        throw std::logic_error(msg);
    }
    return *outcome.scenario;
}

ExperimentReport run_experiment(std::string_view preset, const std::filesystem::path& out_dir) {
    const PresetEntry* entry = nullptr;
    for (const auto& p : kPresets) {
        if (preset == p.name) {
            entry = &p;
            break;
        }
    }
    if (entry == nullptr) {
        std::string msg = "unknown preset '" + std::string(preset) + "'; available presets:";
        for (const auto& p : kPresets) msg += std::string(" ") + p.name;
        throw std::invalid_argument(msg);
    }

    ExperimentReport rep;
    rep.preset = entry->name;
    const auto start = std::chrono::steady_clock::now();
    try {
        entry->eval(rep, out_dir);
        rep.pass = std::all_of(rep.checks.begin(), rep.checks.end(),
                               [](const Check& c) { return c.pass; });
    } catch (const std::exception& e) {
        rep.pass = false;
        rep.diagnostic = e.what();
    }
    rep.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        const std::filesystem::path path = out_dir / (rep.preset + ".json");
        std::ofstream file(path, std::ios::binary | std::ios::trunc);
        file << report_to_json(rep) << "\n";
        if (!file) throw std::runtime_error("cannot write report '" + path.string() + "'");
        rep.artifacts.push_back(path.string());
    }
    return rep;
}

std::string report_to_json(const ExperimentReport& report) {
    nlohmann::json j;
    j["preset"] = report.preset;
    j["pass"] = report.pass;
    j["runtime_seconds"] = report.runtime_seconds;
    j["checks"] = nlohmann::json::array();
    for (const auto& c : report.checks) {
        nlohmann::json cj;
        cj["name"] = c.name;
        cj["measured"] = c.measured;
        cj["bound"] = c.bound;
        cj["pass"] = c.pass;
        if (!c.note.empty()) cj["note"] = c.note;
        j["checks"].push_back(cj);
    }
    if (!report.info.empty()) {
        nlohmann::json ij;
        for (const auto& [k, v] : report.info) ij[k] = v;
        j["info"] = ij;
    }
    if (!report.artifacts.empty()) j["artifacts"] = report.artifacts;
    if (!report.diagnostic.empty()) j["diagnostic"] = report.diagnostic;
    return j.dump(2);
}

std::string format_report(const ExperimentReport& report) {
    std::string out;
    out += (report.pass ? "PASS " : "FAIL ") + report.preset + "\n";
    if (!report.diagnostic.empty()) {
        out += "  aborted: " + report.diagnostic + "\n";
        return out;
    }
    char buf[256];
    for (const auto& c : report.checks) {
        std::snprintf(buf, sizeof(buf), "  %s  %-58s measured %.6g vs %.6g%s%s\n",
                      c.pass ? "ok  " : "FAIL", c.name.c_str(), c.measured, c.bound,
                      c.note.empty() ? "" : "  | ", c.note.c_str());
        out += buf;
    }
    for (const auto& [k, v] : report.info) out += "  note  " + k + " = " + v + "\n";
    return out;
}

}  // namespace nlse::experiments
