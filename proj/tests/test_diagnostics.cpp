#include <doctest.h>

#include "hslab/builders.hpp"
#include "hslab/diagnostics.hpp"
#include "hslab/varifold.hpp"

#include <cmath>
#include <random>

using namespace hslab;

namespace {

Vector2N vec(std::initializer_list<Real> v) {
    Vector2N out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (Real x : v) out(i++) = x;
    return out;
}

}  // namespace

TEST_CASE("varifold samples carry the expected mass") {
    CHECK(circle_varifold(2, 512).mass() == doctest::Approx(4 * kPi));
    CHECK(circle_varifold(1, 512, 3).mass() == doctest::Approx(6 * kPi));
    CHECK(torus_varifold(1, 2, 64).mass() == doctest::Approx(8 * kPi * kPi));
    CHECK(real_plane_varifold(2, 0.5, 0.05).mass() == doctest::Approx(1.0));
    const VarifoldSample t = torus_varifold(1, 2, 32);
    CHECK_NOTHROW(t.validate());
    for (std::size_t i = 0; i < t.size(); i += 17)
        CHECK(t.mean_curv[i].squaredNorm() == doctest::Approx(1.0 + 0.25));
}

TEST_CASE("varifold validation") {
    VarifoldSample s = circle_varifold(1, 16);
    s.tangents[3] *= 1.01;
    CHECK_THROWS_AS(s.validate(), FrameError);
    s = circle_varifold(1, 16);
    s.weights[0] = 0;
    CHECK_THROWS_AS(s.validate(), InvalidInput);
    CHECK_THROWS_AS(merge(circle_varifold(1, 16), torus_varifold(1, 1, 8)), InvalidInput);
}

TEST_CASE("first-variation forms agree on closed samples") {
    std::mt19937_64 rng(12);
    const VarifoldSample e = ellipse_varifold(1.5, 1, 4096);
    for (int t = 0; t < 5; ++t) {
        const FieldPtr f = random_bump_field(rng, Eigen::Vector2d(1.5, 0), 1.0);
        const FirstVariation v = first_variation(e, *f);
        CHECK(v.gap < 1e-9);
    }
}

TEST_CASE("round circles are Hamiltonian stationary, ellipses are not") {
    const FieldPtr f = product(gaussian_field(Eigen::Vector2d(0.9, 0.1), 0.3), affine_field(Eigen::Vector2d(1, 2)));
    CHECK(std::abs(first_variation(circle_varifold(1, 2048), *f).mean_curvature_form) < 1e-12);
    CHECK(std::abs(first_variation(ellipse_varifold(2, 1, 2048), *f).mean_curvature_form) > 1e-3);
}

TEST_CASE("density ratio of a plane") {
    std::vector<Real> radii{0.4, 0.2, 0.1};
    const DensityAudit a = density_ratio_audit(real_plane_varifold(2, 0.45, 0.004), vec({1e-4, 2e-4, 0, 0}), radii);
    CHECK(a.omega_n == doctest::Approx(kPi));
    for (const auto& r : a.rows) CHECK(r.ratio == doctest::Approx(kPi).epsilon(5e-3));
    CHECK(a.trend_ok);
    CHECK(std::isfinite(a.fitted_constant));
}

TEST_CASE("density audit refuses radii below the resolution") {
    const VarifoldSample s = real_plane_varifold(2, 0.5, 0.05);
    CHECK_THROWS_AS(density_ratio_audit(s, vec({0, 0, 0, 0}), {0.4, 0.1}), ResolutionError);
    CHECK_THROWS_AS(density_ratio_audit(s, vec({0, 0, 0, 0}), {0.4, 0.4}), InvalidInput);
    CHECK_THROWS_AS(density_ratio_audit(s, vec({0, 0}), {0.4}), InvalidInput);
}

TEST_CASE("eps-regularity verdicts") {
    const GeometryReport flat = analyze(flat_patch(2, 33));
    const EpsRegularity f = eps_regularity_check(flat, VectorN::Zero(2), 0.4);
    CHECK(f.verdict == Verdict::Pass);
    CHECK(f.worst == 0);
    CHECK(f.bound == doctest::Approx(std::pow(kPi / 24, 2)));

    const GeometryReport bump = analyze(gaussian_bump_patch(2, 65, 0.05, 0.1));
    const EpsRegularity b = eps_regularity_check(bump, VectorN::Zero(2), 0.4);
    CHECK(b.total_curvature > 1e-2);
    CHECK(b.verdict == Verdict::NotApplicable);

    const GeometryReport gentle = analyze(gaussian_bump_patch(2, 65, 1e-3, 0.25));
    const EpsRegularity g = eps_regularity_check(gentle, VectorN::Zero(2), 0.4);
    CHECK(g.total_curvature < 1e-2);
    CHECK(g.verdict == Verdict::Pass);
    CHECK(g.margin > 0);
    CHECK_THROWS_AS(eps_regularity_check(gentle, VectorN::Zero(2), 0.6), InvalidInput);
    CHECK(to_string(Verdict::NotApplicable) == "not-applicable");
}

TEST_CASE("covering budget arithmetic") {
    const CoveringBudget b = covering_budget(2, 1, 1, 2.17, 0.1);
    const Real r1 = kPi / (12 * 2.17) * std::cos(kPi / 12);
    CHECK(b.r1 == doctest::Approx(r1).epsilon(1e-14));
    CHECK(b.R0 == doctest::Approx(1 / (kPi * r1 * r1) + 10).epsilon(1e-14));
    CHECK(b.r1_smooth < b.r1);
    CHECK(covering_budget(1, 1, 1, 1, 0.1).omega_n == doctest::Approx(2));
    CHECK(covering_budget(3, 1, 1, 1, 0.1).omega_n == doctest::Approx(4 * kPi / 3));
    CHECK_THROWS_AS(covering_budget(2, -1, 1, 1, 0.1), DomainError);
}

TEST_CASE("neighbourhood volume of a point on a plane") {
    const VarifoldSample s = real_plane_varifold(2, 0.5, 0.0025);
    const NeighborhoodVolume v =
        neighborhood_volume_estimate(s, {vec({1e-4, 1e-4, 0, 0})}, {0.2, 0.1, 0.05}, 0, 1, 1, 1);
    CHECK(v.exponent_required == doctest::Approx(2));
    CHECK(v.fitted_exponent == doctest::Approx(2).epsilon(0.02));
    CHECK(v.decay_ok);
    CHECK_FALSE(v.vanishing);

    const NeighborhoodVolume away =
        neighborhood_volume_estimate(s, {vec({0, 0, 1, 0})}, {0.2, 0.1, 0.05}, 0, 1, 1, 1);
    CHECK(away.vanishing);
    CHECK_THROWS_AS(neighborhood_volume_estimate(s, {vec({0, 0, 0, 0})}, {0.1}, 1, 1, 1, 1), DomainError);
    CHECK_THROWS_AS(neighborhood_volume_estimate(circle_varifold(1, 64), {vec({1, 0})}, {0.1}, 0, 1, 1, 1),
                    DomainError);
}

TEST_CASE("cutoff gap shrinks with the cut radius") {
    const VarifoldSample c = circle_varifold(1, 4096);
    const FieldPtr f = gaussian_field(Eigen::Vector2d(0.5, 0.5), 0.8);
    const CutoffAudit a = cutoff_first_variation_audit(c, {vec({0, 1})}, *f, {0.4, 0.2, 0.1, 0.05});
    CHECK(a.all_within);
    CHECK(a.gap_decreasing);
    for (const auto& r : a.rows) {
        CHECK(r.gap <= r.ceiling);
        CHECK(r.full == doctest::Approx(a.rows.front().full));
    }
}

TEST_CASE("immersion varifold inherits mass and mean curvature") {
    const ImmersedPatch p = product_torus_patch({1, 2}, 64);
    const ImmersionReport r = analyze_immersion(p);
    const VarifoldSample s = varifold_from_immersion(p, r);
    CHECK(s.mass() == doctest::Approx(r.volume));
    const Real exact = std::sqrt(1 + 0.25);
    for (std::size_t i = 0; i < s.size(); i += 31) {
        CHECK(s.mean_curv[i].norm() == doctest::Approx(exact).epsilon(2e-3));
        CHECK(r.mean_curv_norm[i] == doctest::Approx(exact).epsilon(2e-3));
    }
}
