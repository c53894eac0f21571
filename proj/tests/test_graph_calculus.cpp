#include <doctest.h>

#include "hslab/builders.hpp"
#include "hslab/graph_calculus.hpp"

#include <cmath>
#include <random>

using namespace hslab;

namespace {

Grid line_grid(Real lo, Real hi, int samples) {
    VectorN o(1), h(1);
    o << lo;
    h << (hi - lo) / (samples - 1);
    return Grid(o, h, {samples});
}

// u(x) = a sin x, so the curve is (x, y(x)) with y = a cos x.
struct SineCurve {
    Real a = 0.5;
    Real y1(Real x) const { return -a * std::sin(x); }  // u''
    Real y2(Real x) const { return -a * std::cos(x); }
    Real y3(Real x) const { return a * std::sin(x); }
    Real curvature(Real x) const { return y2(x) / std::pow(1 + y1(x) * y1(x), 1.5); }
    // Delta_g theta = kappa' / sqrt(g) for a curve.
    Real laplacian(Real x) const {
        const Real g = 1 + y1(x) * y1(x);
        const Real dk = y3(x) / std::pow(g, 1.5) - 3 * y1(x) * y2(x) * y2(x) / std::pow(g, 2.5);
        return dk / std::sqrt(g);
    }
};

struct CurveErrors {
    Real phase = 0, sff = 0, residual = 0;
};

CurveErrors sine_errors(int samples) {
    const SineCurve c;
    const Grid g = line_grid(0, 1, samples);
    const GeometryReport r = analyze(GradientGraphPatch::sample(g, [&](const VectorN& x) { return c.a * std::sin(x(0)); }));
    CurveErrors e;
    for (std::size_t p = 0; p < g.size(); ++p) {
        if (!r.interior_mask[p]) continue;
        const Real x = g.coordinate(p)(0);
        e.phase = std::max(e.phase, std::abs(r.phase[p] - std::atan(c.y1(x))));
        e.sff = std::max(e.sff, std::abs(r.sff_norm[p] - std::abs(c.curvature(x))));
        e.residual = std::max(e.residual, std::abs(r.phase_residual[p] - c.laplacian(x)));
    }
    return e;
}

}  // namespace

TEST_CASE("flat patch has vanishing geometry") {
    for (int n : {1, 2, 3}) {
        const GeometryReport r = analyze(flat_patch(n, 9));
        CHECK(r.interior_count() > 0);
        CHECK(r.max_abs_interior(r.phase) == 0);
        CHECK(r.max_abs_interior(r.phase_residual) == 0);
        CHECK(r.max_abs_interior(r.sff_norm) == 0);
        CHECK(r.max_abs_interior(r.mean_curv_norm) == 0);
    }
}

TEST_CASE("quadratic phase matches the closed-form eigenvalues") {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 5; ++t) {
        const MatrixN q = random_symmetric(rng, 2, 2.0);
        const Real tr = q.trace(), det = q.determinant();
        const Real disc = std::sqrt(tr * tr / 4 - det);
        const Real theta = std::atan(tr / 2 + disc) + std::atan(tr / 2 - disc);
        const GeometryReport r = analyze(quadratic_patch(q, 17));
        for (std::size_t p = 0; p < r.grid.size(); ++p)
            if (r.interior_mask[p]) CHECK(r.phase[p] == doctest::Approx(theta).epsilon(1e-11));
        CHECK(r.max_abs_interior(r.sff_norm) < 1e-8);
    }
}

TEST_CASE("dyadic quadratic samples give an exactly stationary graph") {
    std::mt19937_64 rng(2);
    const GeometryReport r = analyze(quadratic_patch(dyadic_round(random_symmetric(rng, 3, 1.0)), 17));
    CHECK(r.max_abs_interior(r.phase_residual) == 0);
    CHECK(r.max_abs_interior(r.sff_norm) == 0);
}

TEST_CASE("curve geometry converges at second order") {
    const CurveErrors coarse = sine_errors(65), fine = sine_errors(129);
    CHECK(coarse.phase < 1e-4);
    CHECK(coarse.sff < 1e-3);
    CHECK(coarse.residual < 1e-2);
    CHECK(std::log2(coarse.phase / fine.phase) > 1.8);
    CHECK(std::log2(coarse.sff / fine.sff) > 1.8);
    CHECK(std::log2(coarse.residual / fine.residual) > 1.8);
}

TEST_CASE("in one dimension |H| equals |A|") {
    const Grid g = line_grid(0, 1, 65);
    const GeometryReport r = analyze(GradientGraphPatch::sample(g, [](const VectorN& x) { return std::cosh(x(0)); }));
    for (std::size_t p = 0; p < g.size(); ++p)
        if (r.interior_mask[p]) CHECK(r.mean_curv_norm[p] == doctest::Approx(r.sff_norm[p]).epsilon(1e-3));
}

TEST_CASE("separable potential has additive phase") {
    const Grid g = box_grid(2, -0.5, 0.5, 65);
    auto u = [](const VectorN& x) { return 0.4 * std::cos(x(0)) + 0.2 * x(1) * x(1) * x(1); };
    const GeometryReport r = analyze(GradientGraphPatch::sample(g, u));
    Real worst = 0;
    for (std::size_t p = 0; p < g.size(); ++p) {
        if (!r.interior_mask[p]) continue;
        const VectorN x = g.coordinate(p);
        worst = std::max(worst, std::abs(r.phase[p] - (std::atan(-0.4 * std::cos(x(0))) + std::atan(1.2 * x(1)))));
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("mean curvature is dominated by the second fundamental form") {
    const GeometryReport r = analyze(gaussian_bump_patch(2, 33, 0.02, 0.2));
    for (std::size_t p = 0; p < r.grid.size(); ++p)
        if (r.interior_mask[p]) CHECK(r.mean_curv_norm[p] <= std::sqrt(2.0) * r.sff_norm[p] + 1e-12);
}

TEST_CASE("analysis does not depend on the thread count") {
    const GradientGraphPatch p = gaussian_bump_patch(2, 41, 0.05, 0.2);
    const GeometryReport a = analyze(p, 1), b = analyze(p, 4);
    for (std::size_t i = 0; i < a.grid.size(); ++i) {
        if (!a.interior_mask[i]) continue;
        CHECK(a.phase_residual[i] == b.phase_residual[i]);
        CHECK(a.sff_norm[i] == b.sff_norm[i]);
    }
    CHECK(a.volume == b.volume);
}

TEST_CASE("boundary ring is excluded from the interior") {
    const GeometryReport r = analyze(flat_patch(2, 9));
    CHECK(r.interior_count() == 25);
    CHECK(std::isnan(r.phase_residual[0]));
}

TEST_CASE("graphical radius formula") {
    const GraphicalRadius g = graphical_radius(2.0);
    CHECK(g.ball_radius == doctest::Approx(kPi / 24));
    CHECK(g.radius == doctest::Approx(kPi / 24 * std::cos(kPi / 12)));
    CHECK_THROWS_AS(graphical_radius(0), DomainError);
}

TEST_CASE("patch validation") {
    CHECK_THROWS_AS(GradientGraphPatch(box_grid(2, 0, 1, 4), std::vector<Real>(16, 0.0)), InvalidInput);
    CHECK_THROWS_AS(GradientGraphPatch(box_grid(2, 0, 1, 5), std::vector<Real>(24, 0.0)), InvalidInput);
    std::vector<Real> u(25, 0.0);
    u[7] = std::nan("");
    CHECK_THROWS_AS(GradientGraphPatch(box_grid(2, 0, 1, 5), u), InvalidInput);
}
