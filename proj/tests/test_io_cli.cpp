#include <doctest.h>

#include "hslab/builders.hpp"
#include "hslab/cli.hpp"
#include "hslab/io.hpp"
#include "hslab/scenarios.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace hslab;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& body) {
    const auto dir = std::filesystem::temp_directory_path() / "hslab_tests";
    std::filesystem::create_directories(dir);
    const auto path = dir / name;
    std::ofstream(path) << body;
    return path.string();
}

}  // namespace

TEST_CASE("patch and varifold round-trip through JSON") {
    const GradientGraphPatch p = gaussian_bump_patch(2, 9, 0.1, 0.3);
    const GradientGraphPatch q = patch_from_json(parse_json(dump(patch_to_json(p))));
    CHECK(q.values() == p.values());
    CHECK(q.grid().shape() == p.grid().shape());

    const VarifoldSample s = circle_varifold(1, 16);
    const VarifoldSample t = varifold_from_json(parse_json(dump(varifold_to_json(s))));
    CHECK(t.weights == s.weights);
    CHECK((t.points[5] - s.points[5]).norm() == 0);

    const CurveImmersion c = CurveImmersion::circle(1, 12);
    CHECK(curve_from_json(curve_to_json(c)).vertices() == c.vertices());
}

TEST_CASE("parse errors name the offending pointer") {
    Json j = patch_to_json(flat_patch(1, 5));
    j["u"][3] = "x";
    try {
        patch_from_json(j);
        FAIL("expected InvalidInput");
    } catch (const InvalidInput& e) {
        CHECK(std::string(e.what()).find("/u/3") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_json("{"), InvalidInput);
    CHECK_THROWS_AS(field_from_json(parse_json(R"({"type": "cone"})"), 2), InvalidInput);
}

TEST_CASE("reports carry a schema version and parse back") {
    const Json r = report_to_json(analyze(flat_patch(2, 7)));
    CHECK(r["schema_version"] == kSchemaVersion);
    // NaN fields are written as null, so compare the serialised forms.
    CHECK(dump(parse_json(dump(r))) == dump(r));
}

TEST_CASE("CSV output has a header row") {
    std::ostringstream os;
    write_csv(os, analyze(flat_patch(2, 7)));
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    CHECK(header == "x1,x2,theta,res,A,H,sqrtdetg");
    std::string row;
    int rows = 0;
    while (std::getline(is, row)) ++rows;
    CHECK(rows == 49);
}

TEST_CASE("scenario flat exits 0 with vanishing fields") {
    const Run r = invoke({"scenario", "flat"});
    CHECK(r.code == cli::kPass);
    const Json j = parse_json(r.out);
    CHECK(j["passed"] == true);
    for (const auto& c : j["checks"]) CHECK(c["value"] == 0.0);
}

TEST_CASE("budget subcommand echoes R0") {
    const Run r = invoke({"varifold", "budget", "--n", "2", "--c1", "1", "--c2", "1", "--eps0", "0.1", "--abound", "2.17"});
    REQUIRE(r.code == cli::kPass);
    const Json j = parse_json(r.out);
    const Real r1 = kPi / (12 * 2.17) * std::cos(kPi / 12);
    CHECK(j["R0"].get<Real>() == doctest::Approx(1 / (kPi * r1 * r1) + 10).epsilon(1e-14));
}

TEST_CASE("torus scenario with explicit radii") {
    const Run r = invoke({"scenario", "torus", "--r1", "1", "--r2", "2", "--n", "128"});
    CHECK(r.code == cli::kPass);
    const Json j = parse_json(r.out);
    CHECK(j["total_extrinsic"].get<Real>() == doctest::Approx(10 * kPi * kPi).epsilon(1e-2));
}

TEST_CASE("reports are deterministic") {
    CHECK(invoke({"scenario", "quadratic"}).out == invoke({"scenario", "quadratic"}).out);
    CHECK(invoke({"scenario", "quadratic", "--seed", "5"}).out != invoke({"scenario", "quadratic"}).out);
}

TEST_CASE("exit codes") {
    CHECK(invoke({"scenario", "nope"}).code == cli::kInputError);
    CHECK(invoke({"analyze", "/nonexistent.json"}).code == cli::kInputError);
    CHECK(invoke({"--tol-residual", "-1", "scenario", "flat"}).code == cli::kInputError);

    const std::string ellipse = temp_file("ellipse.json", dump(curve_to_json(CurveImmersion::ellipse(2, 1, 256))));
    CHECK(invoke({"curve", "residual", ellipse}).code == cli::kPass);
    const Run strict = invoke({"curve", "residual", ellipse, "--expect-circle"});
    CHECK(strict.code == cli::kCheckFailure);

    // (x1, x2) -> (x1, x2, x2, 0) is not Lagrangian.
    Json bad = immersed_patch_to_json(ImmersedPatch::sample(box_grid(2, 0, 1, 9), {}, [](const VectorN& x) {
        Vector2N p(4);
        p << x(0), x(1), x(1), 0;
        return p;
    }));
    CHECK(invoke({"immersion", temp_file("bad.json", dump(bad))}).code == cli::kCheckFailure);

    Json broken = patch_to_json(flat_patch(2, 7));
    broken["u"].erase(0);
    const Run b = invoke({"analyze", temp_file("broken.json", dump(broken))});
    CHECK(b.code == cli::kInputError);
}

TEST_CASE("analyze writes CSV and report files") {
    const std::string patch = temp_file("patch.json", dump(patch_to_json(flat_patch(2, 7))));
    const Run r = invoke({"analyze", patch, "--format", "csv"});
    CHECK(r.code == cli::kPass);
    CHECK(r.out.rfind("x1,x2,theta", 0) == 0);

    const auto dir = (std::filesystem::temp_directory_path() / "hslab_tests" / "out").string();
    CHECK(invoke({"--out", dir, "analyze", "--builtin", "quadratic"}).code == cli::kPass);
    CHECK(std::filesystem::exists(std::filesystem::path(dir) / "analyze.json"));
}

TEST_CASE("config file supplies defaults and flags win") {
    const std::string cfg = temp_file("cfg.json", R"({"tau_circle": 1e-20})");
    const std::string circle = temp_file("circle.json", dump(curve_to_json(CurveImmersion::circle(1, 256))));
    CHECK(invoke({"--config", cfg, "curve", "residual", circle, "--expect-circle"}).code == cli::kCheckFailure);
    CHECK(invoke({"--config", cfg, "--tau-circle", "1e-3", "curve", "residual", circle, "--expect-circle"}).code ==
          cli::kPass);
    const std::string unknown = temp_file("cfg_bad.json", R"({"tau": 1})");
    CHECK(invoke({"--config", unknown, "scenario", "flat"}).code == cli::kInputError);
}

TEST_CASE("every named scenario passes") {
    for (const auto& name : scenario_names()) {
        CAPTURE(name);
        const ScenarioResult r = run_scenario(name, RunConfig{});
        CHECK(r.passed);
    }
}
