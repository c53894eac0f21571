#include <doctest.h>

#include "hslab/builders.hpp"
#include "hslab/immersion_calculus.hpp"

#include <cmath>

using namespace hslab;

TEST_CASE("circle immersion has constant curvature") {
    for (Real r : {0.5, 1.0, 3.0}) {
        const ImmersionReport ir = analyze_immersion(product_torus_patch({r}, 256));
        CHECK(ir.volume == doctest::Approx(2 * kPi * r).epsilon(1e-3));
        for (std::size_t p = 0; p < ir.sff_norm.size(); ++p) {
            CHECK(ir.sff_norm[p] * r == doctest::Approx(1).epsilon(1e-3));
            CHECK(std::abs(ir.phase_residual[p]) < 1e-8);
        }
    }
}

TEST_CASE("product torus matches closed forms") {
    const Real r1 = 1, r2 = 3;
    const ImmersionReport ir = analyze_immersion(product_torus_patch({r1, r2}, 128));
    CHECK(ir.max_lagrangian_defect < 1e-12);
    CHECK(ir.volume == doctest::Approx(4 * kPi * kPi * r1 * r2).epsilon(2e-3));
    CHECK(ir.total_extrinsic == doctest::Approx(4 * kPi * kPi * (r1 / r2 + r2 / r1)).epsilon(1e-2));
    CHECK(ir.max_abs_interior(ir.phase_residual) < 1e-6);
}

TEST_CASE("double cover doubles the mass") {
    const ImmersionReport a = analyze_immersion(product_torus_patch({1.0}, 128, 1));
    const ImmersionReport b = analyze_immersion(product_torus_patch({1.0}, 128, 2));
    CHECK(b.volume == doctest::Approx(2 * a.volume));
}

TEST_CASE("gradient graph immersion agrees with the graph analysis") {
    const GradientGraphPatch g = gaussian_bump_patch(2, 65, 0.02, 0.25);
    const GeometryReport gr = analyze(g);
    const ImmersionReport ir = analyze_immersion(ImmersedPatch::from_gradient_graph(g));
    CHECK(ir.max_lagrangian_defect < 1e-12);
    // The immersion grid drops the outer ring of the graph grid.
    const Grid& gg = gr.grid;
    const Grid& ig = ir.grid;
    Real worst = 0;
    for (std::size_t p = 0; p < ig.size(); ++p) {
        if (!ir.interior_mask[p]) continue;
        GridIndex idx = ig.unflatten(p);
        for (int a = 0; a < 2; ++a) ++idx[a];
        const std::size_t q = gg.flatten(idx);
        if (!gr.interior_mask[q]) continue;
        worst = std::max(worst, std::abs(wrap_angle(ir.phase[p] - gr.phase[q])));
    }
    // Different stencils: the immersion differentiates the central gradient.
    CHECK(worst < 3e-3);
}

TEST_CASE("phase of a rotated real plane") {
    for (int n : {1, 2, 3}) {
        const Real alpha = 0.3;
        Eigen::MatrixXd frame = Eigen::MatrixXd::Zero(2 * n, n);
        for (int k = 0; k < n; ++k) {
            frame(k, k) = std::cos(alpha);
            frame(k + n, k) = std::sin(alpha);
        }
        CHECK(immersion_phase(frame) == doctest::Approx(wrap_angle(n * alpha)));
    }
}

TEST_CASE("non-Lagrangian and degenerate frames are rejected") {
    Eigen::MatrixXd frame(4, 2);
    frame << 1, 0, 0, 1, 0, 1, 0, 0;
    CHECK(lagrangian_defect(frame) == doctest::Approx(std::sqrt(0.5)));
    CHECK_THROWS_AS(immersion_phase(frame), LagrangianDefectError);
    Eigen::MatrixXd flat(4, 2);
    flat << 1, 2, 0, 0, 0, 0, 0, 0;
    CHECK_THROWS_AS(immersion_phase(flat), RankDeficiencyError);

    const Grid g = box_grid(2, 0, 1, 9);
    const ImmersedPatch bad = ImmersedPatch::sample(g, {}, [](const VectorN& x) {
        Vector2N p(4);
        p << x(0), x(1), x(1), 0;
        return p;
    });
    CHECK_THROWS_AS(analyze_immersion(bad), LagrangianDefectError);
    const ImmersedPatch line = ImmersedPatch::sample(g, {}, [](const VectorN& x) {
        Vector2N p(4);
        p << x(0), 0, 0, 0;
        return p;
    });
    CHECK_THROWS_AS(analyze_immersion(line), RankDeficiencyError);
}

TEST_CASE("wrap_angle range") {
    CHECK(wrap_angle(3 * kPi) == doctest::Approx(kPi));
    CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));
    CHECK(wrap_angle(0.25) == doctest::Approx(0.25));
    CHECK(wrap_angle(-2 * kPi + 0.1) == doctest::Approx(0.1));
}

TEST_CASE("immersed patch validation") {
    const Grid g = box_grid(1, 0, 1, 9);
    CHECK_THROWS_AS(ImmersedPatch(g, {}, std::vector<Vector2N>(8, Vector2N::Zero(2))), InvalidInput);
    CHECK_THROWS_AS(ImmersedPatch(g, {}, std::vector<Vector2N>(9, Vector2N::Zero(3))), InvalidInput);
    CHECK_THROWS_AS(ImmersedPatch(g, {}, std::vector<Vector2N>(9, Vector2N::Zero(2)), 0), InvalidInput);
}
