#include <doctest.h>

#include "hslab/curve_lab.hpp"
#include "hslab/immersion_calculus.hpp"

#include <cmath>
#include <random>

using namespace hslab;

TEST_CASE("regular polygons are circle-like at every scale") {
    for (Real r : {1e-3, 1.0, 1e3})
        for (int n : {64, 256, 1024}) {
            const CurveResidual c = curve_phase_residual(CurveImmersion::circle(r, n, Vector2(0.3, -2)));
            CHECK(c.circle_like);
            CHECK(c.length == doctest::Approx(2 * n * r * std::sin(kPi / n)));
        }
}

TEST_CASE("ellipses are not circle-like") {
    for (Real a : {1.2, 2.0, 4.0}) CHECK_FALSE(curve_phase_residual(CurveImmersion::ellipse(a, 1, 256)).circle_like);
}

TEST_CASE("phase of a polygon advances by one turn") {
    const CurveResidual c = curve_phase_residual(CurveImmersion::circle(1, 100));
    const Real advance = wrap_angle(c.phase.front() - c.phase.back());
    CHECK(advance == doctest::Approx(2 * kPi / 100));
    CHECK(c.phase.back() - c.phase.front() == doctest::Approx(2 * kPi * 99 / 100));
}

TEST_CASE("curve construction errors") {
    std::vector<Vector2> v;
    for (int i = 0; i < 8; ++i) v.emplace_back(std::cos(i * kPi / 4), std::sin(i * kPi / 4));
    CHECK_NOTHROW(CurveImmersion(v, 1));
    auto closed = v;
    closed.push_back(v.front());
    CHECK_THROWS_AS(CurveImmersion(closed, 1), DegenerateCurveError);
    auto dup = v;
    dup.insert(dup.begin() + 3, dup[3]);
    CHECK_THROWS_AS(CurveImmersion(dup, 1), DegenerateCurveError);
    CHECK_THROWS_AS(CurveImmersion(std::vector<Vector2>(v.begin(), v.begin() + 7)), InvalidInput);
    CHECK_THROWS_AS(CurveImmersion(v, 0), InvalidInput);
}

TEST_CASE("a polyline traversed back and forth is not a closed curve") {
    std::vector<Vector2> v;
    for (int i = 0; i < 5; ++i) v.emplace_back(i, 0);
    for (int i = 3; i >= 1; --i) v.emplace_back(i, 0);
    CHECK_THROWS_AS(curve_phase_residual(CurveImmersion(v)), PreconditionError);
}

TEST_CASE("balanced rays have vanishing first variation") {
    std::mt19937_64 rng(9);
    RayConfiguration c;
    c.truncation_radius = 1.5;
    // Weighted rays with sum m eta = 0: 2 e1 + (-e1 + sqrt3 e2) + (-e1 - sqrt3 e2) scaled.
    c.rays = {{Vector2(1, 0), 2}, {Vector2(-0.5, std::sqrt(3) / 2), 2}, {Vector2(-0.5, -std::sqrt(3) / 2), 2}};
    for (int t = 0; t < 5; ++t) {
        const RayVariation v = ray_first_variation(c, *random_bump_field(rng, Eigen::Vector2d::Zero(), 1.2));
        CHECK(std::abs(v.quadrature) < 1e-10);
        CHECK(std::abs(v.closed_form) < 1e-12);
    }
}

TEST_CASE("unbalanced rays match the vertex term") {
    RayConfiguration c;
    c.truncation_radius = 2;
    c.rays = {{Vector2(1, 0), 3}};
    const FieldPtr f = product(affine_field(Eigen::Vector2d(0.7, -0.2), 0.1), compact_bump(Eigen::Vector2d::Zero(), 1.9));
    const RayVariation v = ray_first_variation(c, *f);
    // The bump is 1 with zero gradient at 0, so J Df(0) = (0.2, 0.7).
    CHECK(v.closed_form == doctest::Approx(3 * 0.2));
    CHECK(v.quadrature == doctest::Approx(v.closed_form).epsilon(1e-10));
}

TEST_CASE("ray fields must vanish at the truncation radius") {
    RayConfiguration c;
    c.truncation_radius = 1;
    c.rays = {{Vector2(1, 0), 1}};
    CHECK_THROWS_AS(ray_first_variation(c, *gaussian_field(Eigen::Vector2d::Zero(), 1)), SupportViolationError);
    c.rays = {{Vector2(2, 0), 1}};
    CHECK_THROWS_AS(ray_first_variation(c, *gaussian_field(Eigen::Vector2d::Zero(), 1)), InvalidInput);
}

TEST_CASE("covering multiplicity of z -> z^m") {
    for (int m : {1, 2, 3, 5}) {
        std::vector<Vector2> s;
        for (int j = 0; j < 360; ++j) s.emplace_back(std::cos(2 * kPi * m * j / 360.0), std::sin(2 * kPi * m * j / 360.0));
        const MultiplicityResult r = detect_multiplicity(s);
        CHECK(r.multiplicity == m);
        CHECK(r.reduced.size() == 360u / m);
    }
}

TEST_CASE("components inside a ball") {
    const CurveImmersion c = CurveImmersion::circle(1, 720);
    CHECK(split_components(c, Vector2(1, 0), 0.3).size() == 1);
    CHECK(split_components(c, Vector2(3, 0), 0.3).empty());
    const auto whole = split_components(c, Vector2(0, 0), 2);
    REQUIRE(whole.size() == 1);
    CHECK(whole.front().closed);

    std::vector<Vector2> twice;
    for (int j = 0; j < 720; ++j) twice.emplace_back(std::cos(4 * kPi * j / 720.0), std::sin(4 * kPi * j / 720.0));
    const auto comps = split_components(CurveImmersion(twice), Vector2(1, 0), 0.3);
    CHECK(comps.size() == 2);
    for (const auto& k : comps)
        for (const auto& p : k.points) CHECK((p - Vector2(1, 0)).norm() <= 0.3 + 1e-12);
    // The wrap-around piece at the seam is one component.
    CHECK(split_components(c, Vector2(1, 0), 0.3).front().parameter_begin < 0);
}

TEST_CASE("shrinking circles and concentric pairs") {
    const ShrinkReport r = shrink_sequence_scenario({1, 0.5, 0.25}, {1, 10}, 2048);
    REQUIRE(r.steps.size() == 3);
    CHECK(r.lengths_decreasing);
    CHECK(r.residuals_ok);
    for (const auto& s : r.steps) {
        CHECK(s.length == doctest::Approx(2 * kPi * s.radius).epsilon(1e-6));
        CHECK(s.hausdorff_to_limit == doctest::Approx(s.radius));
    }
    CHECK(r.concentric[1].total_length == doctest::Approx(2 * kPi * 2.1).epsilon(1e-6));
    CHECK(r.concentric[0].hausdorff_to_unit_circle == doctest::Approx(1));
    CHECK_FALSE(shrink_sequence_scenario({0.5, 1}).lengths_decreasing);
    CHECK_THROWS_AS(shrink_sequence_scenario({-1}), DomainError);
}
