#include "nlse/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

namespace nlse {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

using Section = std::map<std::string, Entry>;

struct Document {
    std::map<std::string, Section> sections;
    std::vector<std::string> errors;
};

const std::set<std::string> kKnownSections = {"grid", "state", "model",
                                              "potential", "stepper", "output"};

Document lex(std::string_view text) {
    Document doc;
    std::string current;
    int line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                doc.errors.push_back("line " + std::to_string(line_no) +
                                     ": malformed section header '" + line + "'");
                continue;
            }
            current = trim(line.substr(1, line.size() - 2));
            if (!kKnownSections.count(current)) {
                doc.errors.push_back("line " + std::to_string(line_no) + ": unknown section [" +
                                     current + "]");
                current.clear();
                continue;
            }
            doc.sections[current];  // section may legitimately be empty
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            doc.errors.push_back("line " + std::to_string(line_no) +
                                 ": expected 'key = value', got '" + line + "'");
            continue;
        }
        if (current.empty()) {
            doc.errors.push_back("line " + std::to_string(line_no) +
                                 ": key outside of any section");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        auto [it, inserted] = doc.sections[current].emplace(key, Entry{value, line_no, false});
        if (!inserted) {
            doc.errors.push_back("line " + std::to_string(line_no) + ": duplicate key '" + key +
                                 "' in section [" + current + "]");
        }
    }
    return doc;
}

// Typed access into one section, collecting all problems.
class Reader {
public:
    Reader(Document& doc, const std::string& section, std::vector<std::string>& errors)
        : doc_(doc), name_(section), errors_(errors) {
        auto it = doc.sections.find(section);
        section_ = (it == doc.sections.end()) ? nullptr : &it->second;
    }

    bool present() const { return section_ != nullptr; }

    void require_present() {
        if (!present()) errors_.push_back("missing required section [" + name_ + "]");
    }

    bool has(const std::string& key) const {
        return section_ != nullptr && section_->count(key) > 0;
    }

    std::optional<std::string> raw(const std::string& key) {
        if (section_ == nullptr) return std::nullopt;
        auto it = section_->find(key);
        if (it == section_->end()) return std::nullopt;
        it->second.used = true;
        return it->second.value;
    }

    std::optional<double> number(const std::string& key) {
        auto v = raw(key);
        if (!v) return std::nullopt;
        try {
            std::size_t pos = 0;
            const double d = std::stod(*v, &pos);
            if (pos != v->size()) throw std::invalid_argument("trailing characters");
            return d;
        } catch (const std::exception&) {
            fail(key, "expected a number, got '" + *v + "'");
            return std::nullopt;
        }
    }

    std::optional<long long> integer(const std::string& key) {
        auto v = raw(key);
        if (!v) return std::nullopt;
        try {
            std::size_t pos = 0;
            const long long n = std::stoll(*v, &pos);
            if (pos != v->size()) throw std::invalid_argument("trailing characters");
            return n;
        } catch (const std::exception&) {
            fail(key, "expected an integer, got '" + *v + "'");
            return std::nullopt;
        }
    }

    double number_or(const std::string& key, double fallback) {
        auto v = number(key);
        return v.value_or(fallback);
    }

    std::optional<double> required_number(const std::string& key, const std::string& context) {
        if (!has(key)) {
            if (present()) {
                errors_.push_back("[" + name_ + "]" + context + ": missing required key '" +
                                  key + "'");
            }
            return std::nullopt;
        }
        return number(key);
    }

    std::optional<long long> required_integer(const std::string& key,
                                              const std::string& context) {
        if (!has(key)) {
            if (present()) {
                errors_.push_back("[" + name_ + "]" + context + ": missing required key '" +
                                  key + "'");
            }
            return std::nullopt;
        }
        return integer(key);
    }

    std::optional<std::string> required_raw(const std::string& key, const std::string& context) {
        if (!has(key)) {
            if (present()) {
                errors_.push_back("[" + name_ + "]" + context + ": missing required key '" +
                                  key + "'");
            }
            return std::nullopt;
        }
        return raw(key);
    }

    void fail(const std::string& key, const std::string& message) {
        errors_.push_back("[" + name_ + "] key '" + key + "': " + message);
    }

    void report_unused() {
        if (section_ == nullptr) return;
        for (const auto& [key, entry] : *section_) {
            if (!entry.used) {
                errors_.push_back("line " + std::to_string(entry.line) + ": unknown key '" +
                                  key + "' in section [" + name_ + "]");
            }
        }
    }

private:
    Document& doc_;
    std::string name_;
    Section* section_;
    std::vector<std::string>& errors_;
};

SimplePotential parse_simple_potential(Reader& r, const std::string& type,
                                       const std::string& prefix,
                                       std::vector<std::string>& errors) {
    const std::string ctx = prefix.empty() ? "" : " (base)";
    if (type == "zero") return ZeroPotential{};
    if (type == "harmonic") {
        HarmonicPotential p;
        p.omega = r.required_number(prefix + "omega", ctx).value_or(p.omega);
        p.center = r.required_number(prefix + "center", ctx).value_or(p.center);
        return p;
    }
    if (type == "uniform") {
        UniformForcePotential p;
        p.f0 = r.required_number(prefix + "f0", ctx).value_or(p.f0);
        return p;
    }
    if (type == "gaussian_barrier") {
        GaussianBarrierPotential p;
        p.height = r.required_number(prefix + "height", ctx).value_or(p.height);
        p.width = r.required_number(prefix + "width", ctx).value_or(p.width);
        p.center = r.required_number(prefix + "center", ctx).value_or(p.center);
        return p;
    }
    errors.push_back("[potential]: unknown " + std::string(prefix.empty() ? "type" : "base_type") +
                     " '" + type + "' (expected zero | harmonic | uniform | gaussian_barrier" +
                     (prefix.empty() ? " | density_coupled)" : ")"));
    return ZeroPotential{};
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void append_simple_potential(std::ostream& out, const SimplePotential& p,
                             const std::string& prefix) {
    std::visit(
        [&](const auto& pot) {
            using T = std::decay_t<decltype(pot)>;
            if constexpr (std::is_same_v<T, ZeroPotential>) {
                out << prefix << "type = zero\n";
            } else if constexpr (std::is_same_v<T, HarmonicPotential>) {
                out << prefix << "type = harmonic\n"
                    << prefix << "omega = " << format_double(pot.omega) << "\n"
                    << prefix << "center = " << format_double(pot.center) << "\n";
            } else if constexpr (std::is_same_v<T, UniformForcePotential>) {
                out << prefix << "type = uniform\n"
                    << prefix << "f0 = " << format_double(pot.f0) << "\n";
            } else if constexpr (std::is_same_v<T, GaussianBarrierPotential>) {
                out << prefix << "type = gaussian_barrier\n"
                    << prefix << "height = " << format_double(pot.height) << "\n"
                    << prefix << "width = " << format_double(pot.width) << "\n"
                    << prefix << "center = " << format_double(pot.center) << "\n";
            }
        },
        p);
}

}  // namespace

ParseOutcome parse_scenario(std::string_view text) {
    Document doc = lex(text);
    std::vector<std::string> errors = std::move(doc.errors);
    Scenario sc;

    {
        Reader r(doc, "grid", errors);
        r.require_present();
        if (auto n = r.required_integer("n", "")) {
            if (*n <= 0) {
                r.fail("n", "must be positive");
            } else {
                sc.grid_n = static_cast<std::size_t>(*n);
            }
        }
        sc.grid_length = r.required_number("length", "").value_or(0.0);
        r.report_unused();
    }

    {
        Reader r(doc, "state", errors);
        r.require_present();
        const auto type = r.required_raw("type", "");
        if (type && *type == "gaussian") {
            sc.state.kind = StateCfg::Kind::Gaussian;
            sc.state.gaussian.center = r.required_number("x0", " type=gaussian").value_or(0.0);
            sc.state.gaussian.sigma = r.required_number("sigma", " type=gaussian").value_or(0.0);
            sc.state.gaussian.k0 = r.number_or("k0", 0.0);
            sc.state.gaussian.chirp = r.number_or("chirp", 0.0);
            sc.state.gaussian.cubic = r.number_or("cubic", 0.0);
        } else if (type && *type == "plane_wave") {
            sc.state.kind = StateCfg::Kind::PlaneWave;
            sc.state.mode =
                static_cast<long>(r.required_integer("mode", " type=plane_wave").value_or(0));
        } else if (type) {
            r.fail("type", "unknown state type '" + *type + "' (expected gaussian | plane_wave)");
        }
        r.report_unused();
    }

    {
        Reader r(doc, "model", errors);
        r.require_present();
        const auto type = r.required_raw("type", "");
        sc.model.mass = r.number_or("mass", 1.0);
        if (type && *type == "linear") {
            sc.model.family = ModelCfg::Family::Linear;
        } else if (type && *type == "density_functional") {
            sc.model.family = ModelCfg::Family::DensityFunctional;
            sc.model.g = r.required_number("g", " type=density_functional").value_or(0.0);
            sc.model.exponent = r.number_or("exponent", 1.0);
            if (auto kernel = r.raw("kernel")) {
                if (*kernel == "gaussian") {
                    sc.model.gaussian_kernel = true;
                    sc.model.kernel_width =
                        r.required_number("kernel_width", " kernel=gaussian").value_or(1.0);
                } else if (*kernel != "none") {
                    r.fail("kernel", "expected none | gaussian, got '" + *kernel + "'");
                }
            }
            if (!sc.model.gaussian_kernel && r.has("kernel_width")) {
                r.raw("kernel_width");
                r.fail("kernel_width", "only meaningful with kernel = gaussian");
            }
        } else if (type && *type == "doebner_goldin") {
            sc.model.family = ModelCfg::Family::DoebnerGoldin;
            sc.model.lambda = r.required_number("lambda", " type=doebner_goldin").value_or(0.0);
            sc.model.epsilon = r.number_or("epsilon", 1e-12);
            sc.model.band = r.number_or("band_limit", 4.0);
        } else if (type) {
            r.fail("type", "unknown model type '" + *type +
                               "' (expected linear | density_functional | doebner_goldin)");
        }
        r.report_unused();
    }

    {
        Reader r(doc, "potential", errors);
        if (r.present()) {
            const auto type = r.required_raw("type", "");
            if (type) {
                if (*type == "density_coupled") {
                    DensityCoupledPotential dc;
                    dc.eta = r.required_number("eta", " type=density_coupled").value_or(0.0);
                    const auto base = r.required_raw("base_type", " type=density_coupled");
                    if (base) {
                        if (*base == "density_coupled") {
                            errors.push_back(
                                "[potential]: base_type may not itself be density_coupled");
                        } else {
                            dc.base = parse_simple_potential(r, *base, "base_", errors);
                        }
                    }
                    sc.potential = dc;
                } else {
                    const SimplePotential p = parse_simple_potential(r, *type, "", errors);
                    std::visit([&](const auto& pot) { sc.potential = pot; }, p);
                }
            }
        }
        r.report_unused();
    }

    {
        Reader r(doc, "stepper", errors);
        r.require_present();
        if (const auto scheme = r.required_raw("scheme", "")) {
            if (*scheme == "rk4") {
                sc.stepper.scheme = Scheme::Rk4;
            } else if (*scheme == "split_step") {
                sc.stepper.scheme = Scheme::SplitStep;
            } else {
                r.fail("scheme", "expected rk4 | split_step, got '" + *scheme + "'");
            }
        }
        sc.stepper.dt = r.required_number("dt", "").value_or(0.0);
        sc.stepper.t_final = r.required_number("t_final", "").value_or(0.0);
        if (auto se = r.integer("sample_every")) {
            if (*se < 1) {
                r.fail("sample_every", "must be >= 1");
            } else {
                sc.stepper.sample_every = static_cast<std::size_t>(*se);
            }
        }
        r.report_unused();
    }

    {
        Reader r(doc, "output", errors);
        if (auto s = r.raw("series")) sc.output_series = *s;
        r.report_unused();
    }

    // Semantic validation runs whenever the document structure is intact,
    // so a single pass reports every problem, not just the first layer.
    const bool structural_ok =
        std::none_of(errors.begin(), errors.end(), [](const std::string& e) {
            return e.find("missing required section") != std::string::npos;
        });
    if (structural_ok) {
        for (auto& e : validate_scenario(sc)) {
            if (std::find(errors.begin(), errors.end(), e) == errors.end()) {
                errors.push_back(std::move(e));
            }
        }
    }

    ParseOutcome out;
    out.errors = std::move(errors);
    if (out.errors.empty()) out.scenario = std::move(sc);
    return out;
}

double scenario_rk4_limit(const Scenario& sc) {
    const double kmax =
        std::numbers::pi * static_cast<double>(sc.grid_n) / sc.grid_length;
    return 2.8 * 2.0 * sc.model.mass / (kmax * kmax);
}

std::vector<std::string> validate_scenario(const Scenario& sc) {
    std::vector<std::string> errors;

    const bool n_ok = sc.grid_n >= 8 && (sc.grid_n & (sc.grid_n - 1)) == 0;
    if (!n_ok) {
        errors.push_back("[grid] n = " + std::to_string(sc.grid_n) +
                         " is not a power of two >= 8");
    }
    const bool len_ok = sc.grid_length > 0.0 && std::isfinite(sc.grid_length);
    if (!len_ok) errors.push_back("[grid] length must be positive and finite");

    if (sc.state.kind == StateCfg::Kind::Gaussian) {
        if (!(sc.state.gaussian.sigma > 0.0)) {
            errors.push_back("[state] sigma must be positive");
        }
        if (len_ok &&
            !(sc.state.gaussian.center > 0.0 && sc.state.gaussian.center < sc.grid_length)) {
            errors.push_back("[state] x0 must lie inside (0, length)");
        }
    } else if (n_ok) {
        const long half = static_cast<long>(sc.grid_n) / 2;
        if (sc.state.mode <= -half || sc.state.mode >= half) {
            errors.push_back("[state] mode " + std::to_string(sc.state.mode) +
                             " is aliased (need |mode| < n/2 = " + std::to_string(half) + ")");
        }
    }

    {
        ModelCfg m = sc.model;
        if (!(m.mass > 0.0) || !std::isfinite(m.mass)) {
            errors.push_back("[model] mass must be positive");
        }
        if (m.family == ModelCfg::Family::DensityFunctional) {
            if (!(m.exponent >= 1.0)) errors.push_back("[model] exponent must be >= 1");
            if (!std::isfinite(m.g)) errors.push_back("[model] g must be finite");
            if (m.gaussian_kernel && !(m.kernel_width > 0.0)) {
                errors.push_back("[model] kernel_width must be positive");
            }
        } else if (m.family == ModelCfg::Family::DoebnerGoldin) {
            if (!std::isfinite(m.lambda)) errors.push_back("[model] lambda must be finite");
            if (!(m.epsilon >= 0.0)) errors.push_back("[model] epsilon must be >= 0");
            if (!(m.band > 0.0)) errors.push_back("[model] band_limit must be positive");
        }
    }

    for (const auto& e : validate_potential(sc.potential)) errors.push_back("[potential] " + e);

    if (!(sc.stepper.dt > 0.0) || !std::isfinite(sc.stepper.dt)) {
        errors.push_back("[stepper] dt must be positive");
    }
    if (!(sc.stepper.t_final >= 0.0) || !std::isfinite(sc.stepper.t_final)) {
        errors.push_back("[stepper] t_final must be >= 0");
    }
    if (sc.stepper.sample_every == 0) errors.push_back("[stepper] sample_every must be >= 1");

    if (sc.model.family == ModelCfg::Family::DoebnerGoldin &&
        sc.stepper.scheme == Scheme::SplitStep) {
        errors.push_back(
            "[stepper] scheme = split_step cannot propagate the doebner_goldin model "
            "(its current term is not a pure multiplier in either basis); use rk4");
    }

    if (n_ok && len_ok && sc.stepper.scheme == Scheme::Rk4 && sc.stepper.dt > 0.0 &&
        sc.stepper.t_final > 0.0 && sc.stepper.sample_every >= 1 && sc.model.mass > 0.0) {
        const double limit = scenario_rk4_limit(sc);
        const StepPlan plan = plan_steps(sc.stepper.t_final, sc.stepper.dt, sc.stepper.sample_every);
        if (plan.dt > limit) {
            errors.push_back("[stepper] dt = " + format_double(plan.dt) +
                             " violates the RK4 stability guard dt <= 2.8*2m/k_max^2 = " +
                             format_double(limit));
        }
    }

    // Construct grid and state to apply the boundary-clearance rule, but
    // only once everything above is structurally sound.
    if (errors.empty()) {
        try {
            const Grid grid = make_grid(sc.grid_n, sc.grid_length);
            (void)build_state(sc.state, grid);
        } catch (const std::exception& e) {
            errors.push_back(std::string("[state] ") + e.what());
        }
    }
    return errors;
}

std::string canonical_document(const Scenario& sc) {
    std::ostringstream out;
    out << "[grid]\n"
        << "n = " << sc.grid_n << "\n"
        << "length = " << format_double(sc.grid_length) << "\n";

    out << "[state]\n";
    if (sc.state.kind == StateCfg::Kind::Gaussian) {
        out << "type = gaussian\n"
            << "x0 = " << format_double(sc.state.gaussian.center) << "\n"
            << "sigma = " << format_double(sc.state.gaussian.sigma) << "\n"
            << "k0 = " << format_double(sc.state.gaussian.k0) << "\n"
            << "chirp = " << format_double(sc.state.gaussian.chirp) << "\n"
            << "cubic = " << format_double(sc.state.gaussian.cubic) << "\n";
    } else {
        out << "type = plane_wave\n"
            << "mode = " << sc.state.mode << "\n";
    }

    out << "[model]\n";
    switch (sc.model.family) {
        case ModelCfg::Family::Linear:
            out << "type = linear\n";
            break;
        case ModelCfg::Family::DensityFunctional:
            out << "type = density_functional\n"
                << "g = " << format_double(sc.model.g) << "\n"
                << "exponent = " << format_double(sc.model.exponent) << "\n";
            if (sc.model.gaussian_kernel) {
                out << "kernel = gaussian\n"
                    << "kernel_width = " << format_double(sc.model.kernel_width) << "\n";
            }
            break;
        case ModelCfg::Family::DoebnerGoldin:
            out << "type = doebner_goldin\n"
                << "lambda = " << format_double(sc.model.lambda) << "\n"
                << "epsilon = " << format_double(sc.model.epsilon) << "\n"
                << "band_limit = " << format_double(sc.model.band) << "\n";
            break;
    }
    out << "mass = " << format_double(sc.model.mass) << "\n";

    out << "[potential]\n";
    if (const auto* dc = std::get_if<DensityCoupledPotential>(&sc.potential)) {
        out << "type = density_coupled\n"
            << "eta = " << format_double(dc->eta) << "\n";
        append_simple_potential(out, dc->base, "base_");
    } else {
        std::visit(
            [&](const auto& pot) {
                using T = std::decay_t<decltype(pot)>;
                if constexpr (!std::is_same_v<T, DensityCoupledPotential>) {
                    append_simple_potential(out, SimplePotential{pot}, "");
                }
            },
            sc.potential);
    }

    out << "[stepper]\n"
        << "scheme = " << (sc.stepper.scheme == Scheme::Rk4 ? "rk4" : "split_step") << "\n"
        << "dt = " << format_double(sc.stepper.dt) << "\n"
        << "t_final = " << format_double(sc.stepper.t_final) << "\n"
        << "sample_every = " << sc.stepper.sample_every << "\n";

    out << "[output]\n"
        << "series = " << sc.output_series << "\n";
    return out.str();
}

std::string scenario_digest(const Scenario& sc) {
    const std::string doc = canonical_document(sc);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : doc) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return buf;
}

Model build_model(const ModelCfg& cfg, const Grid& grid) {
    Model m;
    m.mass = cfg.mass;
    switch (cfg.family) {
        case ModelCfg::Family::Linear:
            m.family = LinearModel{};
            break;
        case ModelCfg::Family::DensityFunctional: {
            DensityFunctionalModel df;
            df.g = cfg.g;
            df.exponent = cfg.exponent;
            if (cfg.gaussian_kernel) df.kernel = make_gaussian_kernel(grid, cfg.kernel_width);
            m.family = std::move(df);
            break;
        }
        case ModelCfg::Family::DoebnerGoldin:
            m.family = DoebnerGoldinModel{cfg.lambda, cfg.epsilon, cfg.band};
            break;
    }
    return m;
}

ComplexField build_state(const StateCfg& cfg, const Grid& grid) {
    if (cfg.kind == StateCfg::Kind::Gaussian) return gaussian_packet(grid, cfg.gaussian);
    return plane_wave(grid, cfg.mode);
}

RunSpec build_run_spec(const Scenario& sc) {
    if (auto errors = validate_scenario(sc); !errors.empty()) {
        std::string joined = "invalid scenario:";
        for (const auto& e : errors) joined += "\n  " + e;
        throw std::invalid_argument(joined);
    }
    Grid grid = make_grid(sc.grid_n, sc.grid_length);
    ComplexField initial = build_state(sc.state, grid);
    Model model = build_model(sc.model, grid);
    return RunSpec{std::move(grid), std::move(initial), std::move(model), sc.potential,
                   sc.stepper, scenario_digest(sc), {}};
}

TimeSeries run_scenario(const Scenario& sc) { return run(build_run_spec(sc)); }

}  // namespace nlse
