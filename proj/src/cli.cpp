#include "hslab/cli.hpp"

#include "hslab/builders.hpp"
#include "hslab/scenarios.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace hslab::cli {

namespace {

// Errors raised when the geometry itself rules out the operation, as opposed
// to malformed input.
bool is_geometric_failure(const std::exception& e) {
    return dynamic_cast<const MetricDegeneracyError*>(&e) || dynamic_cast<const LagrangianDefectError*>(&e) ||
           dynamic_cast<const RankDeficiencyError*>(&e) || dynamic_cast<const UnwrapError*>(&e) ||
           dynamic_cast<const FoldError*>(&e) || dynamic_cast<const CoverageError*>(&e) ||
           dynamic_cast<const WindowError*>(&e);
}

Json load(const std::string& path) { return read_json_file(path); }

VectorN to_vector(const std::vector<Real>& v) {
    VectorN out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
    return out;
}

struct Output {
    Json report;
    bool passed = true;
    // Set for reports that have a per-sample CSV form.
    std::function<void(std::ostream&)> csv;
};

void write_rows_csv(std::ostream& os, const Json& rows) {
    if (!rows.is_array() || rows.empty() || !rows.front().is_object())
        throw InvalidInput("report has no tabular form; use --format json");
    std::vector<std::string> keys;
    for (const auto& [k, v] : rows.front().items())
        if (v.is_primitive()) keys.push_back(k);
    for (std::size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << keys[i];
    os << '\n' << std::setprecision(17);
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < keys.size(); ++i) {
            if (i) os << ',';
            const Json& v = row.at(keys[i]);
            if (v.is_number_float()) {
                const Real x = v.get<Real>();
                if (std::isfinite(x)) os << x;
            } else if (v.is_boolean()) {
                os << (v.get<bool>() ? 1 : 0);
            } else if (v.is_string()) {
                os << v.get<std::string>();
            } else if (!v.is_null()) {
                os << v.dump();
            }
        }
        os << '\n';
    }
}

const Json* find_rows(const Json& report) {
    if (report.contains("rows")) return &report["rows"];
    for (const auto& key : {"steps", "report"})
        if (report.contains(key)) {
            const Json& inner = report[key];
            if (inner.is_array()) return &inner;
            if (inner.is_object() && inner.contains("steps")) return &inner["steps"];
        }
    if (report.contains("checks")) return &report["checks"];
    return nullptr;
}

class Driver {
public:
    Driver(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}
    int run(const std::vector<std::string>& args);

private:
    void add_global_options();
    void add_commands();
    void apply_config_file();
    Output dispatch();
    void emit(const std::string& name, const Output& o);

    Output analyze_cmd();
    Output immersion_cmd();
    Output rotate_cmd();
    Output solve_cmd();
    Output curve_cmd();
    Output varifold_cmd();
    Output scenario_cmd();

    std::ostream& out_;
    std::ostream& err_;
    CLI::App app_{"Hamiltonian-stationary Lagrangian geometry toolkit"};
    RunConfig cfg_;
    std::string config_path_;
    std::map<std::string, CLI::Option*> globals_;

    // Subcommands and their arguments.
    CLI::App *analyze_ = nullptr, *immersion_ = nullptr, *rotate_ = nullptr, *solve_ = nullptr, *curve_ = nullptr,
             *varifold_ = nullptr, *scenario_ = nullptr;
    CLI::App *c_residual_ = nullptr, *c_rays_ = nullptr, *c_mult_ = nullptr, *c_split_ = nullptr, *c_shrink_ = nullptr;
    CLI::App *v_variation_ = nullptr, *v_density_ = nullptr, *v_epsreg_ = nullptr, *v_budget_ = nullptr,
             *v_nbhdvol_ = nullptr, *v_cutoff_ = nullptr;

    std::string input_, builtin_, field_path_, points_path_, initial_path_, scenario_name_;
    std::string scheme_ = "coupled";
    Real angle_ = kPi / 6;
    int max_outer_ = 50;
    int curve_multiplicity_ = 1;
    bool expect_circle_ = false;
    std::vector<Real> center_, radii_;
    Real radius_ = 0, r0_ = 0;
    int shrink_count_ = 50;
    std::vector<int> concentric_;
    int budget_n_ = 2;
    Real c1_ = 1, c2_ = 1, c3_ = 1, c4_ = 1, abound_ = 1;
    Real trend_tol_ = 0.05;
};

void Driver::add_global_options() {
    globals_["tol_residual"] = app_.add_option("--tol-residual", cfg_.tol_residual, "Hamiltonian-stationary residual tolerance");
    globals_["eps_tol"] = app_.add_option("--eps-tol", cfg_.eps_tol, "tolerance for first-variation identities");
    globals_["tau_circle"] = app_.add_option("--tau-circle", cfg_.tau_circle, "circle-likeness threshold at 256 samples");
    globals_["lagrangian_tol"] = app_.add_option("--lagrangian-tol", cfg_.lagrangian_tol, "normalised symplectic defect tolerance");
    globals_["epsilon0"] = app_.add_option("--eps0", cfg_.epsilon0, "total-curvature smallness threshold");
    globals_["threads"] = app_.add_option("--threads", cfg_.threads, "worker threads inside module operations");
    globals_["output_dir"] = app_.add_option("--out", cfg_.output_dir, "directory for report files (default: stdout)");
    globals_["format"] = app_.add_option("--format", cfg_.format, "report format")->check(CLI::IsMember({"json", "csv"}));
    globals_["seed"] = app_.add_option("--seed", cfg_.seed, "random seed for scenario inputs");
    app_.add_option("--config", config_path_, "JSON file with defaults for the options above")->check(CLI::ExistingFile);
}

void Driver::add_commands() {
    app_.require_subcommand(1);

    analyze_ = app_.add_subcommand("analyze", "geometry of a gradient-graph patch");
    analyze_->add_option("input", input_, "patch JSON");
    analyze_->add_option("--builtin", builtin_, "built-in patch instead of a file");

    immersion_ = app_.add_subcommand("immersion", "geometry of a parametric immersion");
    immersion_->add_option("input", input_, "immersed patch JSON")->required();

    rotate_ = app_.add_subcommand("rotate", "Lewy-Yuan rotation of a gradient graph");
    rotate_->add_option("input", input_, "patch JSON")->required();
    rotate_->add_option("--angle", angle_, "rotation angle in radians")->capture_default_str();

    solve_ = app_.add_subcommand("solve", "Dirichlet problem for Delta_g theta = 0");
    solve_->add_option("input", input_, "patch JSON whose collar carries the boundary data")->required();
    solve_->add_option("--initial", initial_path_, "patch JSON with the initial guess");
    solve_->add_option("--max-outer", max_outer_, "outer iteration cap")->capture_default_str();
    solve_->add_option("--scheme", scheme_, "iteration scheme")->check(CLI::IsMember({"coupled", "alternating"}));

    curve_ = app_.add_subcommand("curve", "closed plane curves and rays");
    curve_->require_subcommand(1);
    c_residual_ = curve_->add_subcommand("residual", "discrete phase residual of a closed polyline");
    c_residual_->add_option("input", input_, "curve JSON or two-column CSV")->required();
    c_residual_->add_option("--multiplicity", curve_multiplicity_, "multiplicity for CSV input");
    c_residual_->add_flag("--expect-circle", expect_circle_, "fail unless the curve is circle-like");
    c_rays_ = curve_->add_subcommand("rays", "first variation of a weighted ray configuration");
    c_rays_->add_option("input", input_, "ray configuration JSON")->required();
    c_rays_->add_option("--field", field_path_, "test function JSON (on R^2)")->required();
    c_mult_ = curve_->add_subcommand("multiplicity", "covering multiplicity of a sampled loop");
    c_mult_->add_option("input", input_, "JSON {\"points\": [[x, y], ...]} at t_j = j/M")->required();
    c_split_ = curve_->add_subcommand("split", "components of a curve inside a ball");
    c_split_->add_option("input", input_, "curve JSON")->required();
    c_split_->add_option("--center", center_, "ball centre x,y")->delimiter(',')->expected(2)->required();
    c_split_->add_option("--radius", radius_, "ball radius")->required();
    c_shrink_ = curve_->add_subcommand("shrink", "shrinking circles r_i = 1/i and concentric pairs");
    c_shrink_->add_option("--count", shrink_count_, "number of circles")->capture_default_str();
    c_shrink_->add_option("--k", concentric_, "concentric-pair indices")->delimiter(',');
    c_shrink_->add_option("--samples", cfg_.samples, "polygon vertices per circle (0: 4096)");

    varifold_ = app_.add_subcommand("varifold", "varifold diagnostics");
    varifold_->require_subcommand(1);
    v_variation_ = varifold_->add_subcommand("variation", "Hamiltonian first variation in two forms");
    v_variation_->add_option("input", input_, "varifold JSON")->required();
    v_variation_->add_option("--field", field_path_, "test function JSON (on R^2n)")->required();
    v_density_ = varifold_->add_subcommand("density", "density ratios mu(B_rho)/rho^n");
    v_density_->add_option("input", input_, "varifold JSON")->required();
    v_density_->add_option("--center", center_, "ball centre in R^2n")->delimiter(',')->required();
    v_density_->add_option("--radii", radii_, "strictly decreasing radii")->delimiter(',')->required();
    v_density_->add_option("--trend-tol", trend_tol_, "allowed log-log slope of the normalised ratio");
    v_epsreg_ = varifold_->add_subcommand("epsreg", "small-total-curvature curvature bound");
    v_epsreg_->add_option("input", input_, "patch JSON");
    v_epsreg_->add_option("--builtin", builtin_, "built-in patch instead of a file");
    v_epsreg_->add_option("--center", center_, "ball centre in parameter space")->delimiter(',')->required();
    v_epsreg_->add_option("--r0", r0_, "ball radius")->required();
    v_budget_ = varifold_->add_subcommand("budget", "ball-count arithmetic of the covering argument");
    v_budget_->add_option("--n", budget_n_, "dimension")->required();
    v_budget_->add_option("--c1", c1_, "mass bound")->required();
    v_budget_->add_option("--c2", c2_, "total-curvature bound")->required();
    v_budget_->add_option("--abound", abound_, "curvature bound on good balls")->required();
    v_nbhdvol_ = varifold_->add_subcommand("nbhdvol", "mass of eps-neighbourhoods of a point set");
    v_nbhdvol_->add_option("input", input_, "varifold JSON")->required();
    v_nbhdvol_->add_option("--points", points_path_, "point-set JSON")->required();
    v_nbhdvol_->add_option("--radii", radii_, "eps values")->delimiter(',')->required();
    v_nbhdvol_->add_option("--c2", c2_, "total-curvature constant");
    v_nbhdvol_->add_option("--c3", c3_, "separation constant");
    v_nbhdvol_->add_option("--c4", c4_, "isoperimetric constant");
    v_cutoff_ = varifold_->add_subcommand("cutoff", "first variation with the point set cut out");
    v_cutoff_->add_option("input", input_, "varifold JSON")->required();
    v_cutoff_->add_option("--points", points_path_, "point-set JSON")->required();
    v_cutoff_->add_option("--field", field_path_, "test function JSON (on R^2n)")->required();
    v_cutoff_->add_option("--radii", radii_, "cutoff radii")->delimiter(',')->required();

    scenario_ = app_.add_subcommand("scenario", "named oracle run");
    scenario_->add_option("name", scenario_name_, "scenario")->required()->check(CLI::IsMember(scenario_names()));
    scenario_->add_option("--n", cfg_.samples, "grid or polygon size (0: scenario default)");
    scenario_->add_option("--r1", cfg_.r1, "first torus radius");
    scenario_->add_option("--r2", cfg_.r2, "second torus radius");
    scenario_->add_option("--k", cfg_.k, "concentric-pair index");
}

void Driver::apply_config_file() {
    if (config_path_.empty()) return;
    const Json j = load(config_path_);
    if (!j.is_object()) throw InvalidInput("config: expected an object");
    for (const auto& [key, value] : j.items()) {
        const auto it = globals_.find(key);
        if (it == globals_.end()) throw InvalidInput("config: unknown key '/" + key + "'");
        if (it->second->count() > 0) continue;  // flags win
        try {
            if (key == "tol_residual") cfg_.tol_residual = value.get<Real>();
            else if (key == "eps_tol") cfg_.eps_tol = value.get<Real>();
            else if (key == "tau_circle") cfg_.tau_circle = value.get<Real>();
            else if (key == "lagrangian_tol") cfg_.lagrangian_tol = value.get<Real>();
            else if (key == "epsilon0") cfg_.epsilon0 = value.get<Real>();
            else if (key == "threads") cfg_.threads = value.get<int>();
            else if (key == "output_dir") cfg_.output_dir = value.get<std::string>();
            else if (key == "format") cfg_.format = value.get<std::string>();
            else if (key == "seed") cfg_.seed = value.get<std::uint64_t>();
        } catch (const nlohmann::json::exception&) {
            throw InvalidInput("config: bad value at '/" + key + "'");
        }
    }
}

GradientGraphPatch load_patch(const std::string& input, const std::string& builtin) {
    if (!builtin.empty()) {
        for (const auto& p : builtin_patches())
            if (p.name == builtin) return p.patch;
        throw InvalidInput("unknown built-in patch '" + builtin + "'");
    }
    if (input.empty()) throw InvalidInput("an input file or --builtin is required");
    return patch_from_json(load(input));
}

Output Driver::analyze_cmd() {
    const GeometryReport r = analyze(load_patch(input_, builtin_), cfg_.threads);
    Output o;
    o.report = report_to_json(r);
    o.report["summary"]["hamiltonian_stationary"] = r.max_abs_interior(r.phase_residual) <= cfg_.tol_residual;
    o.csv = [r](std::ostream& os) { write_csv(os, r); };
    return o;
}

Output Driver::immersion_cmd() {
    ImmersionOptions opt;
    opt.lagrangian_tolerance = cfg_.lagrangian_tol;
    opt.threads = cfg_.threads;
    const ImmersionReport r = analyze_immersion(immersed_patch_from_json(load(input_)), opt);
    Output o;
    o.report = report_to_json(r);
    o.report["summary"]["hamiltonian_stationary"] = r.max_abs_interior(r.phase_residual) <= cfg_.tol_residual;
    o.csv = [r](std::ostream& os) { write_csv(os, r); };
    return o;
}

Output Driver::rotate_cmd() {
    RotationOptions opt;
    opt.angle = angle_;
    const RotationResult r = lewy_yuan_rotate(patch_from_json(load(input_)), opt);
    Output o;
    o.report = report_to_json(r);
    const Real t12 = std::tan(kPi / 12);
    if (std::abs(angle_ - kPi / 6) <= 1e-15 && r.input_max_abs_eigenvalue <= t12 + 1e-9) {
        const EigenWindowCheck w = eigen_window_check(r);
        o.report["window_check"] = {{"inside", w.inside}, {"lower_margin", w.lower_margin}, {"upper_margin", w.upper_margin}};
        o.passed = w.inside;
    }
    return o;
}

Output Driver::solve_cmd() {
    const GradientGraphPatch data = patch_from_json(load(input_));
    SolverProblem problem;
    problem.grid = data.grid();
    problem.boundary_u = data.values();
    problem.options.max_outer = max_outer_;
    problem.options.tol_residual = cfg_.tol_residual;
    problem.options.scheme = scheme_ == "alternating" ? SolverScheme::Alternating : SolverScheme::Coupled;
    const SolverReport r = initial_path_.empty() ? solve_hs(problem)
                                                 : solve_hs(problem, patch_from_json(load(initial_path_)));
    Output o;
    o.report = report_to_json(r);
    o.passed = r.converged;
    return o;
}

Output Driver::curve_cmd() {
    Output o;
    if (c_residual_->parsed()) {
        CurveImmersion c;
        if (std::filesystem::path(input_).extension() == ".csv") {
            std::ifstream in(input_);
            if (!in) throw InvalidInput("cannot open '" + input_ + "'");
            c = curve_from_csv(in, curve_multiplicity_);
        } else {
            c = curve_from_json(load(input_));
        }
        const CurveResidual r = curve_phase_residual(c, cfg_.tau_circle);
        o.report = report_to_json(r);
        o.passed = !expect_circle_ || r.circle_like;
    } else if (c_rays_->parsed()) {
        const RayConfiguration rays = rays_from_json(load(input_));
        const FieldPtr f = field_from_json(load(field_path_), 2);
        const RayVariation v = ray_first_variation(rays, *f);
        o.report = {{"schema_version", kSchemaVersion},
                    {"kind", "ray_variation"},
                    {"quadrature", v.quadrature},
                    {"closed_form", v.closed_form},
                    {"gap", std::abs(v.quadrature - v.closed_form)}};
        o.passed = std::abs(v.quadrature - v.closed_form) <= cfg_.eps_tol;
    } else if (c_mult_->parsed()) {
        const Json j = load(input_);
        if (!j.is_object() || !j.contains("points")) throw InvalidInput("/points: missing");
        const MultiplicityResult m = detect_multiplicity(points2_from_json(j["points"], "/points"));
        Json reduced = Json::array();
        for (const auto& p : m.reduced) reduced.push_back({p.x(), p.y()});
        o.report = {{"schema_version", kSchemaVersion},
                    {"kind", "multiplicity"},
                    {"multiplicity", m.multiplicity},
                    {"reduced", reduced}};
    } else if (c_split_->parsed()) {
        const auto comps = split_components(curve_from_json(load(input_)), Vector2(center_[0], center_[1]), radius_);
        Json list = Json::array();
        for (const auto& c : comps) {
            Json pts = Json::array();
            for (const auto& p : c.points) pts.push_back({p.x(), p.y()});
            list.push_back({{"parameter_begin", c.parameter_begin},
                            {"parameter_end", c.parameter_end},
                            {"closed", c.closed},
                            {"points", pts}});
        }
        o.report = {{"schema_version", kSchemaVersion},
                    {"kind", "curve_components"},
                    {"count", comps.size()},
                    {"components", list}};
    } else {
        if (shrink_count_ < 0) throw InvalidInput("--count must be >= 0");
        std::vector<Real> radii;
        for (int i = 1; i <= shrink_count_; ++i) radii.push_back(1.0 / i);
        const ShrinkReport r =
            shrink_sequence_scenario(radii, concentric_, cfg_.samples > 0 ? cfg_.samples : 4096, cfg_.tau_circle);
        o.report = report_to_json(r);
        o.passed = r.residuals_ok && r.lengths_decreasing;
    }
    return o;
}

Output Driver::varifold_cmd() {
    Output o;
    if (v_budget_->parsed()) {
        o.report = report_to_json(covering_budget(budget_n_, c1_, c2_, abound_, cfg_.epsilon0));
        return o;
    }
    if (v_epsreg_->parsed()) {
        const GeometryReport g = analyze(load_patch(input_, builtin_), cfg_.threads);
        const EpsRegularity e = eps_regularity_check(g, to_vector(center_), r0_, cfg_.epsilon0);
        o.report = report_to_json(e);
        o.passed = e.verdict != Verdict::Fail;
        return o;
    }
    const VarifoldSample s = varifold_from_json(load(input_));
    if (v_variation_->parsed()) {
        const FieldPtr f = field_from_json(load(field_path_), 2 * s.dim);
        const FirstVariation v = first_variation(s, *f);
        o.report = report_to_json(v);
        o.passed = v.gap <= cfg_.eps_tol;
    } else if (v_density_->parsed()) {
        const DensityAudit d = density_ratio_audit(s, to_vector(center_), radii_, trend_tol_);
        o.report = report_to_json(d);
        o.passed = d.trend_ok;
    } else if (v_nbhdvol_->parsed()) {
        const auto pts = point_set_from_json(load(points_path_), 2 * s.dim);
        const NeighborhoodVolume v = neighborhood_volume_estimate(s, pts, radii_, 0, c2_, c3_, c4_);
        o.report = report_to_json(v);
        o.passed = v.decay_ok;
    } else {
        const auto pts = point_set_from_json(load(points_path_), 2 * s.dim);
        const FieldPtr f = field_from_json(load(field_path_), 2 * s.dim);
        const CutoffAudit c = cutoff_first_variation_audit(s, pts, *f, radii_);
        o.report = report_to_json(c);
        o.passed = c.all_within && c.gap_decreasing;
    }
    return o;
}

Output Driver::scenario_cmd() {
    const ScenarioResult r = run_scenario(scenario_name_, cfg_);
    return {r.report, r.passed, {}};
}

Output Driver::dispatch() {
    if (analyze_->parsed()) return analyze_cmd();
    if (immersion_->parsed()) return immersion_cmd();
    if (rotate_->parsed()) return rotate_cmd();
    if (solve_->parsed()) return solve_cmd();
    if (curve_->parsed()) return curve_cmd();
    if (varifold_->parsed()) return varifold_cmd();
    return scenario_cmd();
}

std::string report_name(const CLI::App& app, const std::string& scenario) {
    std::string name;
    for (const CLI::App* a = &app; a;) {
        const auto subs = a->get_subcommands();
        if (subs.empty()) break;
        a = subs.front();
        name += (name.empty() ? "" : "-") + a->get_name();
    }
    if (!scenario.empty()) name += "-" + scenario;
    return name;
}

void Driver::emit(const std::string& name, const Output& o) {
    std::ostringstream body;
    if (cfg_.format == "csv") {
        if (o.csv) {
            o.csv(body);
        } else {
            const Json* rows = find_rows(o.report);
            if (!rows) throw InvalidInput("report has no tabular form; use --format json");
            write_rows_csv(body, *rows);
        }
    } else {
        body << dump(o.report);
    }
    if (cfg_.output_dir.empty()) {
        out_ << body.str();
        return;
    }
    std::filesystem::create_directories(cfg_.output_dir);
    const auto path = std::filesystem::path(cfg_.output_dir) / (name + "." + cfg_.format);
    std::ofstream file(path);
    if (!file) throw InvalidInput("cannot write '" + path.string() + "'");
    file << body.str();
}

void print_failed_checks(std::ostream& err, const Json& report) {
    if (!report.contains("checks")) return;
    for (const auto& c : report["checks"])
        if (!c["ok"].get<bool>())
            err << "check failed: " << c["name"].get<std::string>() << " = " << c["value"].dump() << " (need "
                << c["relation"].get<std::string>() << " " << c["limit"].dump() << ")\n";
}

int Driver::run(const std::vector<std::string>& args) {
    app_.name("hslab");
    app_.fallthrough();
    add_global_options();
    add_commands();
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app_.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out_ << app_.help();
        return kPass;
    } catch (const CLI::CallForAllHelp&) {
        out_ << app_.help("", CLI::AppFormatMode::All);
        return kPass;
    } catch (const CLI::ParseError& e) {
        err_ << "error: " << e.what() << '\n';
        return kInputError;
    }
    try {
        apply_config_file();
        cfg_.validate();
        const Output o = dispatch();
        emit(report_name(app_, scenario_->parsed() ? scenario_name_ : ""), o);
        if (!o.passed) {
            print_failed_checks(err_, o.report);
            err_ << "checks failed\n";
            return kCheckFailure;
        }
        return kPass;
    } catch (const Error& e) {
        err_ << "error: " << e.what() << '\n';
        return is_geometric_failure(e) ? kCheckFailure : kInputError;
    } catch (const nlohmann::json::exception& e) {
        err_ << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::filesystem::filesystem_error& e) {
        err_ << "error: " << e.what() << '\n';
        return kInputError;
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Driver d(out, err);
    return d.run(args);
}

}  // namespace hslab::cli
