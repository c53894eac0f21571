#include "hslab/scenarios.hpp"

#include "hslab/builders.hpp"
#include "hslab/curve_lab.hpp"

#include <cmath>
#include <random>

namespace hslab {

void RunConfig::validate() const {
    for (Real t : {tol_residual, eps_tol, tau_circle, lagrangian_tol, epsilon0})
        if (!(t > 0)) throw InvalidInput("tolerances must be positive");
    if (format != "json" && format != "csv") throw InvalidInput("format must be json or csv");
    if (threads < 1) throw InvalidInput("threads must be >= 1");
    if (samples < 0) throw InvalidInput("samples must be >= 0");
    if (!(r1 > 0) || !(r2 > 0)) throw InvalidInput("torus radii must be positive");
    if (k < 1) throw InvalidInput("k must be >= 1");
}

namespace {

Json check(const std::string& name, Real value, const std::string& relation, Real limit) {
    bool ok = false;
    if (relation == "<=") ok = value <= limit;
    if (relation == ">=") ok = value >= limit;
    if (relation == "==") ok = value == limit;
    return {{"name", name}, {"value", value}, {"relation", relation}, {"limit", limit}, {"ok", ok}};
}

ScenarioResult finish(Json report, const Json& checks) {
    bool ok = true;
    for (const auto& c : checks) ok = ok && c["ok"].get<bool>();
    report["checks"] = checks;
    report["passed"] = ok;
    return {report, ok};
}

Json scenario_header(const std::string& name) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "scenario";
    j["scenario"] = name;
    return j;
}

Real rel(Real x, Real ref) { return std::abs(x - ref) / std::abs(ref); }

ScenarioResult flat(const RunConfig& cfg) {
    const int m = cfg.samples > 0 ? cfg.samples : 65;
    const GeometryReport r = analyze(flat_patch(2, m), cfg.threads);
    Json rep = scenario_header("flat");
    Json checks = Json::array();
    checks.push_back(check("max |theta|", r.max_abs_interior(r.phase), "==", 0));
    checks.push_back(check("max |Delta_g theta|", r.max_abs_interior(r.phase_residual), "==", 0));
    checks.push_back(check("max |A|", r.max_abs_interior(r.sff_norm), "==", 0));
    checks.push_back(check("max |H|", r.max_abs_interior(r.mean_curv_norm), "==", 0));
    rep["volume"] = r.volume;
    return finish(rep, checks);
}

ScenarioResult quadratic(const RunConfig& cfg) {
    const int m = cfg.samples > 0 ? cfg.samples : 65;
    std::mt19937_64 rng(cfg.seed);
    const MatrixN q = dyadic_round(random_symmetric(rng, 2, 1.0));
    const GeometryReport r = analyze(quadratic_patch(q, m), cfg.threads);
    Json rep = scenario_header("quadratic");
    rep["Q"] = {{q(0, 0), q(0, 1)}, {q(1, 0), q(1, 1)}};
    Json checks = Json::array();
    checks.push_back(check("max |Delta_g theta|", r.max_abs_interior(r.phase_residual), "<=", 1e-10));
    checks.push_back(check("max |A|", r.max_abs_interior(r.sff_norm), "<=", 1e-10));
    return finish(rep, checks);
}

ScenarioResult harmonic_cubic(const RunConfig& cfg) {
    // Central differences reproduce D^2u exactly for a cubic, so the discrete
    // phase vanishes in exact arithmetic and max |Delta_g theta| is pure
    // rounding. It is checked against the round-off floor; the convergence
    // order is measured on the non-polynomial harmonic u = 0.3 Re e^z.
    Json rep = scenario_header("harmonic-cubic");
    Json checks = Json::array();
    Json rows = Json::array();
    std::vector<Real> res_cubic, res_exp;
    const std::vector<Real> hs{1.0 / 32, 1.0 / 64, 1.0 / 128};
    for (Real h : hs) {
        const GradientGraphPatch cp = harmonic_cubic_patch(h);
        const GeometryReport c = analyze(cp, cfg.threads);
        const GeometryReport e = analyze(harmonic_exponential_patch(h), cfg.threads);
        res_cubic.push_back(c.max_abs_interior(c.phase_residual));
        res_exp.push_back(e.max_abs_interior(e.phase_residual));
        const Real theta = c.max_abs_interior(c.phase);
        const Real floor = phase_residual_roundoff(cp);
        rows.push_back({{"h", h},
                        {"max_abs_theta", theta},
                        {"max_abs_residual", res_cubic.back()},
                        {"roundoff_floor", floor},
                        {"exponential_max_abs_residual", res_exp.back()}});
        const std::string at = " at h = 1/" + std::to_string(static_cast<int>(std::lround(1 / h)));
        checks.push_back(check("max |theta| / h^2" + at, theta / (h * h), "<=", 5));
        checks.push_back(check("cubic max |Delta_g theta| / round-off floor" + at, res_cubic.back() / floor, "<=", 1));
    }
    for (std::size_t i = 1; i < hs.size(); ++i)
        checks.push_back(check("exponential residual order, h = 1/" + std::to_string(static_cast<int>(std::lround(1 / hs[i]))),
                               std::log2(res_exp[i - 1] / res_exp[i]), ">=", 1.8));
    rep["rows"] = rows;
    rep["cubic_orders"] = {std::log2(res_cubic[0] / res_cubic[1]), std::log2(res_cubic[1] / res_cubic[2])};
    return finish(rep, checks);
}

ScenarioResult circle(const RunConfig& cfg) {
    const int m = cfg.samples > 0 ? cfg.samples : 256;
    const CurveResidual cr = curve_phase_residual(CurveImmersion::circle(1, m), cfg.tau_circle);
    const Real r = cfg.r1;
    const ImmersedPatch patch = product_torus_patch({r}, m);
    ImmersionOptions opt;
    opt.lagrangian_tolerance = cfg.lagrangian_tol;
    opt.threads = cfg.threads;
    const ImmersionReport ir = analyze_immersion(patch, opt);
    Real amin = std::numeric_limits<Real>::infinity(), amax = 0;
    for (std::size_t p = 0; p < ir.sff_norm.size(); ++p) {
        if (!ir.interior_mask[p]) continue;
        amin = std::min(amin, ir.sff_norm[p]);
        amax = std::max(amax, ir.sff_norm[p]);
    }
    Json rep = scenario_header("circle");
    rep["polygon"] = report_to_json(cr);
    rep["volume"] = ir.volume;
    Json checks = Json::array();
    checks.push_back(check("polygon scaled residual", cr.scaled_residual, "<=", cr.threshold));
    checks.push_back(check("max |Delta_g theta|", ir.max_abs_interior(ir.phase_residual), "<=", 1e-6));
    checks.push_back(check("max | |A| r - 1 |", std::max(std::abs(amin * r - 1), std::abs(amax * r - 1)), "<=", 1e-3));
    checks.push_back(check("volume / (2 pi r) - 1", rel(ir.volume, 2 * kPi * r), "<=", 1e-3));
    return finish(rep, checks);
}

ScenarioResult ellipse(const RunConfig& cfg) {
    const int m = cfg.samples > 0 ? cfg.samples : 256;
    const CurveResidual cr = curve_phase_residual(CurveImmersion::ellipse(2, 1, m), cfg.tau_circle);
    Json rep = scenario_header("ellipse");
    rep["polygon"] = report_to_json(cr);
    Json checks = Json::array();
    checks.push_back(check("scaled residual / threshold", cr.scaled_residual / cr.threshold, ">=", 10));
    checks.push_back(check("circle_like", cr.circle_like ? 1 : 0, "==", 0));
    return finish(rep, checks);
}

ScenarioResult torus(const RunConfig& cfg) {
    const int m = cfg.samples > 0 ? cfg.samples : 256;
    const Real r1 = cfg.r1, r2 = cfg.r2;
    ImmersionOptions opt;
    opt.lagrangian_tolerance = cfg.lagrangian_tol;
    opt.threads = cfg.threads;
    const ImmersionReport ir = analyze_immersion(product_torus_patch({r1, r2}, m), opt);
    const Real a2 = 1 / (r1 * r1) + 1 / (r2 * r2);
    Real worst_a2 = 0;
    for (std::size_t p = 0; p < ir.sff_norm.size(); ++p)
        if (ir.interior_mask[p]) worst_a2 = std::max(worst_a2, rel(ir.sff_norm[p] * ir.sff_norm[p], a2));
    Json rep = scenario_header("torus");
    rep["r1"] = r1;
    rep["r2"] = r2;
    rep["samples"] = m;
    rep["volume"] = ir.volume;
    rep["total_extrinsic"] = ir.total_extrinsic;
    rep["exact_volume"] = 4 * kPi * kPi * r1 * r2;
    rep["exact_total_extrinsic"] = 4 * kPi * kPi * (r1 / r2 + r2 / r1);
    Json checks = Json::array();
    checks.push_back(check("max Lagrangian defect", ir.max_lagrangian_defect, "<=", 1e-8));
    checks.push_back(check("max |Delta_g theta|", ir.max_abs_interior(ir.phase_residual), "<=", 1e-3));
    checks.push_back(check("volume relative error", rel(ir.volume, 4 * kPi * kPi * r1 * r2), "<=", 1e-3));
    checks.push_back(check("|A|^2 relative error", worst_a2, "<=", 5e-3));
    checks.push_back(check("int |A|^2 relative error", rel(ir.total_extrinsic, 4 * kPi * kPi * (r1 / r2 + r2 / r1)), "<=", 1e-2));
    return finish(rep, checks);
}

ScenarioResult rays_balanced(const RunConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    RayConfiguration tri;
    tri.truncation_radius = 2;
    for (int i = 0; i < 3; ++i) tri.rays.push_back({Vector2(std::cos(2 * kPi * i / 3), std::sin(2 * kPi * i / 3)), 1});
    Real worst = 0;
    Json rows = Json::array();
    for (int t = 0; t < 10; ++t) {
        const FieldPtr f = random_bump_field(rng, Eigen::VectorXd::Zero(2), 1.5);
        const RayVariation v = ray_first_variation(tri, *f);
        worst = std::max(worst, std::abs(v.quadrature));
        rows.push_back({{"quadrature", v.quadrature}, {"closed_form", v.closed_form}});
    }
    RayConfiguration ell;
    ell.truncation_radius = 2;
    ell.rays = {{Vector2(1, 0), 1}, {Vector2(0, 1), 1}};
    const FieldPtr f = product(product(gaussian_field(Eigen::VectorXd::Zero(2), std::sqrt(0.5)),
                                       affine_field(Eigen::Vector2d(1, 0))),
                               compact_bump(Eigen::VectorXd::Zero(2), 1.8));
    const RayVariation lv = ray_first_variation(ell, *f);
    Json rep = scenario_header("rays-balanced");
    rep["balanced"] = rows;
    rep["l_config"] = {{"quadrature", lv.quadrature}, {"closed_form", lv.closed_form}};
    Json checks = Json::array();
    checks.push_back(check("max |delta| over balanced trials", worst, "<=", 1e-8));
    checks.push_back(check("L-config |quadrature - closed form|", std::abs(lv.quadrature - lv.closed_form), "<=", 1e-8));
    checks.push_back(check("L-config |closed form|", std::abs(lv.closed_form), ">=", 0.5));
    return finish(rep, checks);
}

ScenarioResult shrink_family(const RunConfig& cfg) {
    std::vector<Real> radii;
    for (int i = 1; i <= 50; ++i) radii.push_back(1.0 / i);
    const ShrinkReport sr = shrink_sequence_scenario(radii, {}, cfg.samples > 0 ? cfg.samples : 4096, cfg.tau_circle);
    Real len_err = 0, haus_err = 0;
    for (const auto& s : sr.steps) {
        len_err = std::max(len_err, std::abs(s.length - s.exact_length));
        haus_err = std::max(haus_err, std::abs(s.hausdorff_to_limit - s.radius));
    }
    Json rep = scenario_header("shrink-family");
    rep["report"] = report_to_json(sr);
    Json checks = Json::array();
    checks.push_back(check("max |length - 2 pi / i|", len_err, "<=", 1e-6));
    checks.push_back(check("max |hausdorff - r_i|", haus_err, "<=", 1e-12));
    checks.push_back(check("residuals circle-like", sr.residuals_ok ? 1 : 0, "==", 1));
    checks.push_back(check("lengths decreasing", sr.lengths_decreasing ? 1 : 0, "==", 1));
    return finish(rep, checks);
}

ScenarioResult concentric_pair(const RunConfig& cfg) {
    const ShrinkReport sr = shrink_sequence_scenario({}, {cfg.k}, cfg.samples > 0 ? cfg.samples : 4096, cfg.tau_circle);
    const auto& c = sr.concentric.front();
    Json rep = scenario_header("concentric-pair");
    rep["report"] = report_to_json(sr);
    Json checks = Json::array();
    checks.push_back(check("|total length - 2 pi (2 + 1/k)|", std::abs(c.total_length - c.exact_total_length), "<=", 1e-3));
    checks.push_back(check("hausdorff to unit circle", c.hausdorff_to_unit_circle, "<=", 1.0 / cfg.k + 1e-12));
    return finish(rep, checks);
}

std::vector<Vector2> loop_samples(int count, const std::function<Vector2(Real)>& gamma) {
    std::vector<Vector2> v;
    for (int j = 0; j < count; ++j) v.push_back(gamma(static_cast<Real>(j) / count));
    return v;
}

ScenarioResult zm_cover(const RunConfig& cfg) {
    const int count = cfg.samples > 0 ? cfg.samples : 300;
    auto zm = [](int m) {
        return [m](Real t) { return Vector2(std::cos(2 * kPi * m * t), std::sin(2 * kPi * m * t)); };
    };
    auto limacon = [](Real s) {
        const Real r = 1 + 0.3 * std::cos(2 * kPi * s);
        return Vector2(r * std::cos(2 * kPi * s), r * std::sin(2 * kPi * s));
    };
    const int m3 = detect_multiplicity(loop_samples(count, zm(3))).multiplicity;
    const int m1 = detect_multiplicity(loop_samples(count, zm(1))).multiplicity;
    const int m2 = detect_multiplicity(loop_samples(count, [&](Real t) { return limacon(2 * t); })).multiplicity;
    const CurveImmersion doubled(loop_samples(512, zm(2)));
    const auto comps = split_components(doubled, Vector2(1, 0), 0.5);
    Json rep = scenario_header("zm-cover");
    rep["multiplicity_z3"] = m3;
    rep["multiplicity_z1"] = m1;
    rep["multiplicity_doubled_limacon"] = m2;
    rep["components_z2_at_1"] = comps.size();
    Json checks = Json::array();
    checks.push_back(check("z^3 multiplicity", m3, "==", 3));
    checks.push_back(check("unit circle multiplicity", m1, "==", 1));
    checks.push_back(check("doubled limacon multiplicity", m2, "==", 2));
    checks.push_back(check("components of z^2 in B_0.5(1)", static_cast<Real>(comps.size()), "==", 2));
    return finish(rep, checks);
}

}  // namespace

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names{"flat",          "quadratic",    "harmonic-cubic", "circle",
                                                "ellipse",       "torus",        "rays-balanced",  "shrink-family",
                                                "concentric-pair", "zm-cover"};
    return names;
}

ScenarioResult run_scenario(const std::string& name, const RunConfig& cfg) {
    cfg.validate();
    if (name == "flat") return flat(cfg);
    if (name == "quadratic") return quadratic(cfg);
    if (name == "harmonic-cubic") return harmonic_cubic(cfg);
    if (name == "circle") return circle(cfg);
    if (name == "ellipse") return ellipse(cfg);
    if (name == "torus") return torus(cfg);
    if (name == "rays-balanced") return rays_balanced(cfg);
    if (name == "shrink-family") return shrink_family(cfg);
    if (name == "concentric-pair") return concentric_pair(cfg);
    if (name == "zm-cover") return zm_cover(cfg);
    throw InvalidInput("unknown scenario '" + name + "'");
}

}  // namespace hslab
