#include "hslab/io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace hslab {

namespace {

[[noreturn]] void fail(const std::string& pointer, const std::string& what) {
    throw InvalidInput((pointer.empty() ? std::string("/") : pointer) + ": " + what);
}

const Json& field(const Json& j, const std::string& key, const std::string& pointer) {
    if (!j.is_object()) fail(pointer, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(pointer + "/" + key, "missing required field");
    return *it;
}

Real number(const Json& j, const std::string& pointer) {
    if (!j.is_number()) fail(pointer, "expected a number");
    return j.get<Real>();
}

int integer(const Json& j, const std::string& pointer) {
    if (!j.is_number_integer()) fail(pointer, "expected an integer");
    return j.get<int>();
}

std::vector<Real> numbers(const Json& j, const std::string& pointer) {
    if (!j.is_array()) fail(pointer, "expected an array");
    std::vector<Real> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], pointer + "/" + std::to_string(i)));
    return out;
}

Eigen::VectorXd vector_of(const Json& j, const std::string& pointer, long expected = -1) {
    const auto v = numbers(j, pointer);
    if (expected >= 0 && static_cast<long>(v.size()) != expected)
        fail(pointer, "expected " + std::to_string(expected) + " entries, got " + std::to_string(v.size()));
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

template <typename V>
Json array_of(const V& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

Json header(const std::string& kind) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = kind;
    return j;
}

}  // namespace

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidInput(std::string("JSON parse error: ") + e.what());
    }
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json(ss.str());
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Grid grid_from_json(const Json& j, const std::string& ptr) {
    const int dim = integer(field(j, "dim", ptr), ptr + "/dim");
    if (dim < 1 || dim > kMaxDim) fail(ptr + "/dim", "dimension must be in 1..8");
    const VectorN origin = vector_of(field(j, "origin", ptr), ptr + "/origin", dim);
    const VectorN spacing = vector_of(field(j, "spacing", ptr), ptr + "/spacing", dim);
    const Json& shape_j = field(j, "shape", ptr);
    if (!shape_j.is_array() || static_cast<int>(shape_j.size()) != dim) fail(ptr + "/shape", "expected dim integers");
    std::vector<int> shape;
    for (int a = 0; a < dim; ++a) shape.push_back(integer(shape_j[a], ptr + "/shape/" + std::to_string(a)));
    return Grid(origin, spacing, shape);
}

Json grid_to_json(const Grid& g) {
    Json j;
    j["dim"] = g.dim();
    j["origin"] = array_of(g.origin());
    j["spacing"] = array_of(g.spacing());
    j["shape"] = g.shape();
    return j;
}

GradientGraphPatch patch_from_json(const Json& j) {
    const Grid g = grid_from_json(j);
    const auto u = numbers(field(j, "u", ""), "/u");
    if (u.size() != g.size()) fail("/u", "expected " + std::to_string(g.size()) + " samples");
    return GradientGraphPatch(g, u);
}

Json patch_to_json(const GradientGraphPatch& p) {
    Json j = header("gradient_graph_patch");
    j.update(grid_to_json(p.grid()));
    j["u"] = p.values();
    return j;
}

ImmersedPatch immersed_patch_from_json(const Json& j) {
    const Grid g = grid_from_json(j);
    const int n = g.dim();
    std::array<bool, kMaxDim> periodic{};
    if (j.contains("periodic")) {
        const Json& pj = j["periodic"];
        if (!pj.is_array() || static_cast<int>(pj.size()) != n) fail("/periodic", "expected dim booleans");
        for (int a = 0; a < n; ++a) {
            if (!pj[a].is_boolean()) fail("/periodic/" + std::to_string(a), "expected a boolean");
            periodic[a] = pj[a].get<bool>();
        }
    }
    const Json& pts = field(j, "points", "");
    if (!pts.is_array() || pts.size() != g.size()) fail("/points", "expected " + std::to_string(g.size()) + " points");
    std::vector<Vector2N> points;
    points.reserve(g.size());
    for (std::size_t i = 0; i < pts.size(); ++i) points.push_back(vector_of(pts[i], "/points/" + std::to_string(i), 2 * n));
    const int m = j.contains("multiplicity") ? integer(j["multiplicity"], "/multiplicity") : 1;
    return ImmersedPatch(g, periodic, std::move(points), m);
}

Json immersed_patch_to_json(const ImmersedPatch& p) {
    Json j = header("immersed_patch");
    j.update(grid_to_json(p.grid()));
    Json per = Json::array();
    for (int a = 0; a < p.dim(); ++a) per.push_back(p.periodic()[a]);
    j["periodic"] = per;
    Json pts = Json::array();
    for (const auto& x : p.points()) pts.push_back(array_of(x));
    j["points"] = pts;
    j["multiplicity"] = p.multiplicity();
    return j;
}

std::vector<Vector2> points2_from_json(const Json& j, const std::string& ptr) {
    if (!j.is_array()) fail(ptr, "expected an array of [x, y] pairs");
    std::vector<Vector2> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(vector_of(j[i], ptr + "/" + std::to_string(i), 2));
    return out;
}

CurveImmersion curve_from_json(const Json& j) {
    const int m = j.contains("multiplicity") ? integer(j["multiplicity"], "/multiplicity") : 1;
    return CurveImmersion(points2_from_json(field(j, "vertices", ""), "/vertices"), m);
}

CurveImmersion curve_from_csv(std::istream& in, int multiplicity) {
    std::vector<Vector2> v;
    std::string line;
    int row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        Real x, y;
        if (!(ls >> x >> y)) {
            if (row == 1) continue;  // header
            throw InvalidInput("CSV row " + std::to_string(row) + ": expected two numbers");
        }
        v.emplace_back(x, y);
    }
    return CurveImmersion(std::move(v), multiplicity);
}

Json curve_to_json(const CurveImmersion& c) {
    Json j = header("curve");
    Json v = Json::array();
    for (const auto& p : c.vertices()) v.push_back({p.x(), p.y()});
    j["vertices"] = v;
    j["multiplicity"] = c.multiplicity();
    return j;
}

RayConfiguration rays_from_json(const Json& j) {
    RayConfiguration c;
    c.truncation_radius = number(field(j, "truncation_radius", ""), "/truncation_radius");
    const Json& rays = field(j, "rays", "");
    if (!rays.is_array()) fail("/rays", "expected an array");
    for (std::size_t i = 0; i < rays.size(); ++i) {
        const std::string ptr = "/rays/" + std::to_string(i);
        Ray r;
        r.direction = vector_of(field(rays[i], "direction", ptr), ptr + "/direction", 2);
        r.multiplicity = rays[i].contains("multiplicity") ? integer(rays[i]["multiplicity"], ptr + "/multiplicity") : 1;
        c.rays.push_back(r);
    }
    c.validate();
    return c;
}

VarifoldSample varifold_from_json(const Json& j) {
    VarifoldSample s;
    s.dim = integer(field(j, "dim", ""), "/dim");
    if (s.dim < 1 || s.dim > kMaxDim) fail("/dim", "dimension must be in 1..8");
    const int n = s.dim;
    const Json& pts = field(j, "points", "");
    const Json& tan = field(j, "tangents", "");
    const Json& mc = field(j, "mean_curv", "");
    s.weights = numbers(field(j, "weights", ""), "/weights");
    const std::size_t m = s.weights.size();
    if (!pts.is_array() || pts.size() != m) fail("/points", "expected one point per weight");
    if (!tan.is_array() || tan.size() != m) fail("/tangents", "expected one frame per weight");
    if (!mc.is_array() || mc.size() != m) fail("/mean_curv", "expected one vector per weight");
    for (std::size_t i = 0; i < m; ++i) {
        const std::string idx = "/" + std::to_string(i);
        s.points.push_back(vector_of(pts[i], "/points" + idx, 2 * n));
        s.mean_curv.push_back(vector_of(mc[i], "/mean_curv" + idx, 2 * n));
        if (!tan[i].is_array() || static_cast<int>(tan[i].size()) != n) fail("/tangents" + idx, "expected n vectors");
        Eigen::MatrixXd e(2 * n, n);
        for (int a = 0; a < n; ++a) e.col(a) = vector_of(tan[i][a], "/tangents" + idx + "/" + std::to_string(a), 2 * n);
        s.tangents.push_back(e);
    }
    s.validate();
    return s;
}

Json varifold_to_json(const VarifoldSample& s) {
    Json j = header("varifold_sample");
    j["dim"] = s.dim;
    Json pts = Json::array(), tan = Json::array(), mc = Json::array();
    for (std::size_t i = 0; i < s.size(); ++i) {
        pts.push_back(array_of(s.points[i]));
        mc.push_back(array_of(s.mean_curv[i]));
        Json frame = Json::array();
        for (int a = 0; a < s.dim; ++a) frame.push_back(array_of(Eigen::VectorXd(s.tangents[i].col(a))));
        tan.push_back(frame);
    }
    j["points"] = pts;
    j["weights"] = s.weights;
    j["tangents"] = tan;
    j["mean_curv"] = mc;
    return j;
}

std::vector<Vector2N> point_set_from_json(const Json& j, int ambient) {
    const Json& pts = j.is_object() ? field(j, "points", "") : j;
    const std::string base = j.is_object() ? "/points" : "";
    if (!pts.is_array()) fail(base, "expected an array of points");
    std::vector<Vector2N> out;
    for (std::size_t i = 0; i < pts.size(); ++i) out.push_back(vector_of(pts[i], base + "/" + std::to_string(i), ambient));
    return out;
}

FieldPtr field_from_json(const Json& j, int dim, const std::string& ptr) {
    if (!j.is_object()) fail(ptr, "expected a field object");
    const Json& type_j = field(j, "type", ptr);
    if (!type_j.is_string()) fail(ptr + "/type", "expected a string");
    const std::string type = type_j.get<std::string>();
    auto list = [&](const std::string& key) {
        const Json& a = field(j, key, ptr);
        if (!a.is_array() || a.empty()) fail(ptr + "/" + key, "expected a non-empty array of fields");
        FieldPtr acc;
        for (std::size_t i = 0; i < a.size(); ++i) {
            FieldPtr f = field_from_json(a[i], dim, ptr + "/" + key + "/" + std::to_string(i));
            acc = !acc ? f : (key == "factors" ? product(acc, f) : sum(acc, f));
        }
        return acc;
    };
    if (type == "gaussian")
        return gaussian_field(vector_of(field(j, "center", ptr), ptr + "/center", dim),
                              number(field(j, "sigma", ptr), ptr + "/sigma"),
                              j.contains("amplitude") ? number(j["amplitude"], ptr + "/amplitude") : 1.0);
    if (type == "bump")
        return compact_bump(vector_of(field(j, "center", ptr), ptr + "/center", dim),
                            number(field(j, "radius", ptr), ptr + "/radius"));
    if (type == "affine")
        return affine_field(vector_of(field(j, "a", ptr), ptr + "/a", dim),
                            j.contains("b") ? number(j["b"], ptr + "/b") : 0.0);
    if (type == "product") return list("factors");
    if (type == "sum") return list("terms");
    if (type == "scaled")
        return scaled(field_from_json(field(j, "field", ptr), dim, ptr + "/field"),
                      number(field(j, "factor", ptr), ptr + "/factor"));
    fail(ptr + "/type", "unknown field type '" + type + "'");
}

Json report_to_json(const GeometryReport& r) {
    Json j = header("geometry_report");
    j.update(grid_to_json(r.grid));
    Json s;
    s["interior_count"] = r.interior_count();
    s["volume"] = r.volume;
    s["total_extrinsic"] = r.total_extrinsic;
    s["max_abs_phase"] = r.max_abs_interior(r.phase);
    s["max_abs_phase_residual"] = r.max_abs_interior(r.phase_residual);
    s["max_sff_norm"] = r.max_abs_interior(r.sff_norm);
    s["max_mean_curv_norm"] = r.max_abs_interior(r.mean_curv_norm);
    j["summary"] = s;
    Json mask = Json::array();
    for (char c : r.interior_mask) mask.push_back(c != 0);
    j["interior_mask"] = mask;
    j["phase"] = r.phase;
    j["phase_residual"] = r.phase_residual;
    j["mean_curv_norm"] = r.mean_curv_norm;
    j["sff_norm"] = r.sff_norm;
    j["volume_element"] = r.volume_element;
    Json eig = Json::array();
    for (const auto& e : r.eigenvalues) eig.push_back(e.size() ? array_of(e) : Json(nullptr));
    j["eigenvalues"] = eig;
    return j;
}

Json report_to_json(const ImmersionReport& r) {
    Json j = header("immersion_report");
    j.update(grid_to_json(r.grid));
    Json per = Json::array();
    for (int a = 0; a < r.grid.dim(); ++a) per.push_back(r.periodic[a]);
    j["periodic"] = per;
    j["multiplicity"] = r.multiplicity;
    Json s;
    s["interior_count"] = r.interior_count();
    s["volume"] = r.volume;
    s["total_extrinsic"] = r.total_extrinsic;
    s["max_lagrangian_defect"] = r.max_lagrangian_defect;
    s["max_abs_phase_residual"] = r.max_abs_interior(r.phase_residual);
    s["max_sff_norm"] = r.max_abs_interior(r.sff_norm);
    s["max_mean_curv_norm"] = r.max_abs_interior(r.mean_curv_norm);
    j["summary"] = s;
    j["lagrangian_defect"] = r.lagrangian_defect;
    j["phase"] = r.phase;
    j["phase_residual"] = r.phase_residual;
    j["mean_curv_norm"] = r.mean_curv_norm;
    j["sff_norm"] = r.sff_norm;
    j["volume_element"] = r.volume_element;
    return j;
}

Json report_to_json(const RotationResult& r) {
    Json j = header("rotation_result");
    j["angle"] = r.angle;
    j["center"] = array_of(r.center);
    j["jacobian_min"] = r.jacobian_min;
    j["jacobian_lower"] = r.jacobian_lower;
    j["eigen_window"] = {r.eigen_window_min, r.eigen_window_max};
    j["input_max_abs_eigenvalue"] = r.input_max_abs_eigenvalue;
    j["input_radius"] = r.input_radius;
    j["guaranteed_radius"] = r.guaranteed_radius;
    j["gradient_check_error"] = r.gradient_check_error;
    j["rotated_patch"] = patch_to_json(r.rotated_patch);
    return j;
}

Json report_to_json(const SolverReport& r) {
    Json j = header("solver_report");
    j["converged"] = r.converged;
    j["message"] = r.message;
    j["outer_iterations"] = r.outer_iterations;
    j["effective_tolerance"] = r.effective_tolerance;
    j["residual_history"] = r.residual_history;
    j["phase_match_history"] = r.phase_match_history;
    j["linear_sweeps"] = r.linear_sweeps;
    j["residual_monotone"] = r.residual_monotone;
    j["newton_monotone"] = r.newton_monotone;
    Json nh = Json::array();
    for (const auto& h : r.newton_histories) nh.push_back(h);
    j["newton_histories"] = nh;
    j["solution"] = patch_to_json(r.solution);
    return j;
}

Json report_to_json(const CurveResidual& r) {
    Json j = header("curve_residual");
    j["length"] = r.length;
    j["max_residual"] = r.max_residual;
    j["scaled_residual"] = r.scaled_residual;
    j["threshold"] = r.threshold;
    j["circle_like"] = r.circle_like;
    j["phase"] = r.phase;
    j["residual"] = r.residual;
    return j;
}

Json report_to_json(const ShrinkReport& r) {
    Json j = header("shrink_report");
    Json steps = Json::array();
    for (const auto& s : r.steps)
        steps.push_back({{"radius", s.radius},
                         {"length", s.length},
                         {"exact_length", s.exact_length},
                         {"hausdorff_to_limit", s.hausdorff_to_limit},
                         {"max_residual", s.max_residual},
                         {"circle_like", s.circle_like}});
    j["steps"] = steps;
    Json conc = Json::array();
    for (const auto& c : r.concentric)
        conc.push_back({{"k", c.k},
                        {"total_length", c.total_length},
                        {"exact_total_length", c.exact_total_length},
                        {"hausdorff_to_unit_circle", c.hausdorff_to_unit_circle}});
    j["concentric"] = conc;
    j["residuals_ok"] = r.residuals_ok;
    j["lengths_decreasing"] = r.lengths_decreasing;
    return j;
}

Json report_to_json(const DensityAudit& r) {
    Json j = header("density_audit");
    j["omega_n"] = r.omega_n;
    j["fitted_constant"] = r.fitted_constant;
    j["trend_slopes"] = r.trend_slopes;
    j["trend_ok"] = r.trend_ok;
    Json rows = Json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"radius", row.radius}, {"mass", row.mass}, {"ratio", row.ratio}, {"bound_unit", row.bound_unit}});
    j["rows"] = rows;
    return j;
}

Json report_to_json(const EpsRegularity& r) {
    Json j = header("eps_regularity");
    j["verdict"] = to_string(r.verdict);
    j["total_curvature"] = r.total_curvature;
    j["bound"] = r.bound;
    j["worst"] = r.worst;
    j["witness"] = r.witness.size() ? array_of(r.witness) : Json(nullptr);
    j["witness_sigma"] = r.witness_sigma;
    j["margin"] = r.margin;
    return j;
}

Json report_to_json(const CoveringBudget& b) {
    Json j = header("covering_budget");
    j["n"] = b.n;
    j["C1"] = b.C1;
    j["C2"] = b.C2;
    j["A_bound"] = b.A_bound;
    j["epsilon0"] = b.epsilon0;
    j["omega_n"] = b.omega_n;
    j["r1"] = b.r1;
    j["r1_smooth"] = b.r1_smooth;
    j["good_balls"] = b.good_balls;
    j["bad_balls"] = b.bad_balls;
    j["R0"] = b.R0;
    return j;
}

Json report_to_json(const NeighborhoodVolume& r) {
    Json j = header("neighborhood_volume");
    j["exponent_required"] = r.exponent_required;
    j["fitted_exponent"] = r.fitted_exponent;
    j["vanishing"] = r.vanishing;
    j["decay_ok"] = r.decay_ok;
    Json rows = Json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"epsilon", row.epsilon},
                        {"measured", row.measured},
                        {"disjoint_count", row.disjoint_count},
                        {"ceiling", row.ceiling},
                        {"uniform_ceiling", row.uniform_ceiling},
                        {"within", row.within}});
    j["rows"] = rows;
    return j;
}

Json report_to_json(const CutoffAudit& r) {
    Json j = header("cutoff_audit");
    j["C_f"] = r.C_f;
    j["all_within"] = r.all_within;
    j["gap_decreasing"] = r.gap_decreasing;
    Json rows = Json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"epsilon", row.epsilon},
                        {"full", row.full},
                        {"cut", row.cut},
                        {"gap", row.gap},
                        {"cut_derivative", row.cut_derivative},
                        {"derivative_gap", row.derivative_gap},
                        {"annulus_term", row.annulus_term},
                        {"ceiling", row.ceiling},
                        {"ok", row.ok}});
    j["rows"] = rows;
    return j;
}

Json report_to_json(const FirstVariation& r) {
    Json j = header("first_variation");
    j["mean_curvature_form"] = r.mean_curvature_form;
    j["divergence_form"] = r.divergence_form;
    j["gap"] = r.gap;
    return j;
}

namespace {
template <typename Report>
void write_fields_csv(std::ostream& out, const Grid& g, const Report& r) {
    const int n = g.dim();
    out << std::setprecision(17);
    for (int a = 0; a < n; ++a) out << "x" << a + 1 << ",";
    out << "theta,res,A,H,sqrtdetg\n";
    auto cell = [&](Real v) {
        if (std::isfinite(v)) out << v;
    };
    for (std::size_t p = 0; p < g.size(); ++p) {
        const VectorN x = g.coordinate(p);
        for (int a = 0; a < n; ++a) out << x(a) << ",";
        cell(r.phase[p]);
        out << ",";
        cell(r.phase_residual[p]);
        out << ",";
        cell(r.sff_norm[p]);
        out << ",";
        cell(r.mean_curv_norm[p]);
        out << ",";
        cell(r.volume_element[p]);
        out << "\n";
    }
}
}  // namespace

void write_csv(std::ostream& out, const GeometryReport& r) { write_fields_csv(out, r.grid, r); }
void write_csv(std::ostream& out, const ImmersionReport& r) { write_fields_csv(out, r.grid, r); }

}  // namespace hslab
