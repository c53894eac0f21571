#pragma once

// JSON and CSV exchange formats. Every document written carries
// "schema_version"; parse failures throw InvalidInput naming the JSON
// pointer of the offending value.

#include "hslab/curve_lab.hpp"
#include "hslab/diagnostics.hpp"
#include "hslab/fields.hpp"
#include "hslab/graph_calculus.hpp"
#include "hslab/immersion_calculus.hpp"
#include "hslab/rotation.hpp"
#include "hslab/solver.hpp"
#include "hslab/varifold.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace hslab {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

Json read_json_file(const std::string& path);
Json parse_json(const std::string& text);
/// Two spaces of indentation and a trailing newline.
std::string dump(const Json& j);

Grid grid_from_json(const Json& j, const std::string& pointer = "");
Json grid_to_json(const Grid& g);

GradientGraphPatch patch_from_json(const Json& j);
Json patch_to_json(const GradientGraphPatch& p);

ImmersedPatch immersed_patch_from_json(const Json& j);
Json immersed_patch_to_json(const ImmersedPatch& p);

CurveImmersion curve_from_json(const Json& j);
/// Two numeric columns, optional header row.
CurveImmersion curve_from_csv(std::istream& in, int multiplicity = 1);
std::vector<Vector2> points2_from_json(const Json& j, const std::string& pointer);
Json curve_to_json(const CurveImmersion& c);

RayConfiguration rays_from_json(const Json& j);

VarifoldSample varifold_from_json(const Json& j);
Json varifold_to_json(const VarifoldSample& s);
std::vector<Vector2N> point_set_from_json(const Json& j, int ambient_dim);

/// {"type": "gaussian"|"bump"|"affine"|"product"|"sum"|"scaled", ...}
FieldPtr field_from_json(const Json& j, int dim, const std::string& pointer = "");

Json report_to_json(const GeometryReport& r);
Json report_to_json(const ImmersionReport& r);
Json report_to_json(const RotationResult& r);
Json report_to_json(const SolverReport& r);
Json report_to_json(const CurveResidual& r);
Json report_to_json(const ShrinkReport& r);
Json report_to_json(const DensityAudit& r);
Json report_to_json(const EpsRegularity& r);
Json report_to_json(const CoveringBudget& r);
Json report_to_json(const NeighborhoodVolume& r);
Json report_to_json(const CutoffAudit& r);
Json report_to_json(const FirstVariation& r);

/// Columns x1..xn, theta, res, A, H, sqrtdetg; one row per sample.
void write_csv(std::ostream& out, const GeometryReport& r);
void write_csv(std::ostream& out, const ImmersionReport& r);

}  // namespace hslab
