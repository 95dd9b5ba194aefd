// nlselab: scenario runner, experiment presets and the full verification
// sweep for the 1-D pseudo-spectral Schrodinger laboratory.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "nlse/experiments.hpp"
#include "nlse/galilean.hpp"
#include "nlse/scenario.hpp"
#include "nlse/series_io.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::string preset_help() {
    std::string out = "Available presets:\n";
    for (const auto& name : nlse::experiments::preset_names()) out += "  " + name + "\n";
    out +=
        "\nScenario document schema (INI-style, '#' comments, unknown keys rejected):\n"
        "  [grid]       n (power of two >= 8), length\n"
        "  [state]      type = gaussian (x0, sigma, k0, chirp, cubic)\n"
        "               type = plane_wave (mode)\n"
        "  [model]      type = linear | density_functional (g, exponent, kernel,\n"
        "               kernel_width) | doebner_goldin (lambda, epsilon); mass\n"
        "  [potential]  type = zero | harmonic (omega, center) | uniform (f0) |\n"
        "               gaussian_barrier (height, width, center) |\n"
        "               density_coupled (eta, base_type, base_*)\n"
        "  [stepper]    scheme = rk4 | split_step; dt, t_final, sample_every\n"
        "  [output]     series = <csv filename>\n";
    return out;
}

int run_config(const std::string& config_path, const std::string& out_dir) {
    std::ifstream file(config_path);
    if (!file) {
        std::cerr << "error: cannot read config '" << config_path << "'\n";
        return kExitUsage;
    }
    std::stringstream buffer;
    buffer << file.rdbuf();

    const nlse::ParseOutcome outcome = nlse::parse_scenario(buffer.str());
    if (!outcome.scenario) {
        std::cerr << "invalid scenario '" << config_path << "':\n";
        for (const auto& e : outcome.errors) std::cerr << "  " << e << "\n";
        return kExitUsage;
    }
    try {
        const nlse::TimeSeries series = nlse::run_scenario(*outcome.scenario);
        std::filesystem::create_directories(out_dir);
        const std::filesystem::path path =
            std::filesystem::path(out_dir) / outcome.scenario->output_series;
        nlse::emit_series(series, path);
        std::cout << "wrote " << path.string() << " (" << series.size() << " samples, digest "
                  << series.scenario_digest << ")\n";
        if (series.node_flagged) {
            std::cout << "note: velocity-field regularization was active inside the packet "
                         "support (node or near-node present)\n";
        }
        return kExitPass;
    } catch (const std::exception& e) {
        std::cerr << "run failed: " << e.what() << "\n";
        return kExitFail;
    }
}

int run_presets(const std::vector<std::string>& names, const std::string& out_dir) {
    bool all_pass = true;
    for (const auto& name : names) {
        try {
            const auto report = nlse::experiments::run_experiment(name, out_dir);
            std::cout << nlse::experiments::format_report(report);
            all_pass = all_pass && report.pass;
        } catch (const std::invalid_argument& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitUsage;
        }
    }
    return all_pass ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "nlselab - pseudo-spectral simulator for linear and nonlinear Schrodinger\n"
        "equations on a periodic 1-D domain, with mean-value law, frame-covariance\n"
        "and conservation diagnostics."};
    app.footer(preset_help());
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::string preset_name;
    std::string model_tag = "linear";
    double dv = 0.5;
    double horizon = 1.0;
    double coupling = 1.0;
    double tolerance = 1e-6;
    double epsilon = 1e-14;
    double band = 4.0;

    auto* cmd_run = app.add_subcommand("run", "run one scenario document and write its CSV");
    cmd_run->add_option("--config", config_path, "scenario document path")->required();
    cmd_run->add_option("--out", out_dir, "output directory");

    auto* cmd_exp = app.add_subcommand("experiment", "run one named preset experiment");
    cmd_exp->add_option("preset", preset_name, "preset name")->required();
    cmd_exp->add_option("--out", out_dir, "output directory");

    auto* cmd_check = app.add_subcommand("check", "run every preset; nonzero exit on failure");
    cmd_check->add_option("--out", out_dir, "output directory");

    auto* cmd_boost = app.add_subcommand(
        "boost-test", "frame-covariance error for one model family at a given boost");
    cmd_boost->add_option("--model", model_tag,
                          "linear | density_functional | doebner_goldin");
    cmd_boost->add_option("--dv", dv, "boost velocity");
    cmd_boost->add_option("--T", horizon, "evolution horizon");
    cmd_boost->add_option("--coupling", coupling,
                          "g (density_functional) or lambda (doebner_goldin)");
    cmd_boost->add_option("--tol", tolerance, "pass threshold");
    cmd_boost->add_option("--epsilon", epsilon, "velocity-ratio density floor (doebner_goldin)");
    cmd_boost->add_option("--band", band, "current-term band limit (doebner_goldin)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (cmd_run->parsed()) return run_config(config_path, out_dir);
        if (cmd_exp->parsed()) return run_presets({preset_name}, out_dir);
        if (cmd_check->parsed()) return run_presets(nlse::experiments::preset_names(), out_dir);

        if (cmd_boost->parsed()) {
            const nlse::Scenario base = nlse::experiments::load_fixture("boost-base");
            const nlse::Grid grid = nlse::make_grid(base.grid_n, base.grid_length);
            const nlse::ComplexField psi0 = nlse::build_state(base.state, grid);

            nlse::Model model{nlse::LinearModel{}, base.model.mass};
            if (model_tag == "density_functional") {
                model.family = nlse::DensityFunctionalModel{coupling, 1.0, std::nullopt};
            } else if (model_tag == "doebner_goldin") {
                model.family = nlse::DoebnerGoldinModel{coupling, 1e-12};
            } else if (model_tag != "linear") {
                std::cerr << "error: unknown model '" << model_tag
                          << "' (expected linear | density_functional | doebner_goldin)\n";
                return kExitUsage;
            }
            const double err = nlse::covariance_error(model, grid, psi0, nlse::ZeroPotential{},
                                                      dv, horizon, nlse::Scheme::Rk4,
                                                      base.stepper.dt);
            const bool pass = err <= tolerance;
            std::cout << (pass ? "PASS" : "FAIL") << " covariance error " << err << " (tol "
                      << tolerance << ", model " << model_tag << ", dv " << dv << ", T "
                      << horizon << ")\n";
            return pass ? kExitPass : kExitFail;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
    return kExitUsage;
}
