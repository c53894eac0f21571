#include <doctest.h>

#include "hslab/builders.hpp"
#include "hslab/interpolation.hpp"
#include "hslab/rotation.hpp"

#include <cmath>
#include <random>

using namespace hslab;

namespace {

// Potential with analytic derivatives used as an independent reference.
struct Wave {
    Real a = 0.1;
    Real u(const VectorN& x) const { return a * std::sin(x(0)) * std::cos(x(1)); }
    VectorN du(const VectorN& x) const {
        VectorN g(2);
        g << a * std::cos(x(0)) * std::cos(x(1)), -a * std::sin(x(0)) * std::sin(x(1));
        return g;
    }
    MatrixN d2u(const VectorN& x) const {
        MatrixN h(2, 2);
        h << -a * std::sin(x(0)) * std::cos(x(1)), -a * std::cos(x(0)) * std::sin(x(1)),
            -a * std::cos(x(0)) * std::sin(x(1)), -a * std::sin(x(0)) * std::cos(x(1));
        return h;
    }
};

}  // namespace

TEST_CASE("rotation of a quadratic shifts every eigenvalue angle") {
    std::mt19937_64 rng(4);
    for (Real alpha : {kPi / 6, 0.2, -0.3}) {
        const MatrixN q = random_symmetric(rng, 2, 0.25);
        RotationOptions opt;
        opt.angle = alpha;
        const RotationResult r = lewy_yuan_rotate(quadratic_patch(q, 25), opt);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q);
        const Real theta = std::atan(es.eigenvalues()(0)) + std::atan(es.eigenvalues()(1));
        const GeometryReport g = analyze(r.rotated_patch);
        for (std::size_t p = 0; p < g.grid.size(); ++p)
            if (g.interior_mask[p]) CHECK(g.phase[p] == doctest::Approx(theta + 2 * alpha).epsilon(1e-9));
        CHECK(r.gradient_check_error < 1e-10);
        CHECK(r.jacobian_min > 0);
    }
}

TEST_CASE("zero angle reproduces the input") {
    const Wave w;
    const Grid g = box_grid(2, -0.5, 0.5, 33);
    RotationOptions opt;
    opt.angle = 0;
    const RotationResult r = lewy_yuan_rotate(GradientGraphPatch::sample(g, [&](const VectorN& x) { return w.u(x); }), opt);
    const Grid& out = r.rotated_patch.grid();
    for (std::size_t p = 0; p < out.size(); ++p)
        CHECK(r.rotated_patch.value(p) == doctest::Approx(w.u(out.coordinate(p))).epsilon(1e-9));
}

TEST_CASE("rotated potential matches the analytic change of variables") {
    const Wave w;
    const Real alpha = kPi / 6, c = std::cos(alpha), s = std::sin(alpha);
    const Grid g = box_grid(2, -0.5, 0.5, 65);
    const RotationResult r = lewy_yuan_rotate(GradientGraphPatch::sample(g, [&](const VectorN& x) { return w.u(x); }));
    const Grid& out = r.rotated_patch.grid();
    Real worst = 0;
    for (std::size_t p = 0; p < out.size(); p += 37) {
        const VectorN target = out.coordinate(p);
        VectorN x = target / c;
        for (int it = 0; it < 50; ++it) {
            const VectorN f = c * x - s * w.du(x) - target;
            const MatrixN jac = c * MatrixN::Identity(2, 2) - s * w.d2u(x);
            x -= jac.lu().solve(f);
        }
        const VectorN du = w.du(x);
        const Real ubar = w.u(x) - s * c * 0.5 * (du.squaredNorm() - x.squaredNorm()) - s * s * du.dot(x);
        worst = std::max(worst, std::abs(r.rotated_patch.value(p) - ubar));
    }
    CHECK(worst < 1e-8);
    CHECK(r.gradient_check_error < 1e-5);
}

TEST_CASE("output box fits in the guaranteed ball") {
    const RotationResult r = lewy_yuan_rotate(gaussian_bump_patch(2, 33, 0.005, 0.25));
    const Grid& out = r.rotated_patch.grid();
    for (std::size_t p = 0; p < out.size(); ++p)
        CHECK((out.coordinate(p) - r.center).norm() <= r.guaranteed_radius * (1 + 1e-12));
    CHECK(r.guaranteed_radius < r.input_radius);
}

TEST_CASE("rotation preconditions") {
    MatrixN big(2, 2);
    big << 2, 0, 0, 0;
    RotationOptions opt;
    opt.angle = kPi / 3;  // needs |lambda| < tan(pi/6)
    CHECK_THROWS_AS(lewy_yuan_rotate(quadratic_patch(big, 17), opt), PreconditionError);
    opt.angle = kPi / 2;
    CHECK_THROWS_AS(lewy_yuan_rotate(quadratic_patch(big, 17), opt), DomainError);

    MatrixN ok(2, 2);
    ok << 0.1, 0, 0, -0.1;
    opt.angle = 0.2;
    const RotationResult r = lewy_yuan_rotate(quadratic_patch(ok, 17), opt);
    CHECK_THROWS_AS(eigen_window_check(r), PreconditionError);
    MatrixN mid(2, 2);
    mid << 0.5, 0, 0, 0;
    CHECK_THROWS_AS(eigen_window_check(lewy_yuan_rotate(quadratic_patch(mid, 17))), PreconditionError);
}

TEST_CASE("eigen window after a rotation by pi/6") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 10; ++t) {
        const RotationResult r = lewy_yuan_rotate(quadratic_patch(random_symmetric(rng, 2, std::tan(kPi / 12)), 17));
        const EigenWindowCheck w = eigen_window_check(r);
        CHECK(w.inside);
        CHECK(w.lower_margin >= 0);
        CHECK(w.upper_margin >= 0);
        CHECK(r.jacobian_lower > 0.7);
        CHECK(r.jacobian_lower >= std::cos(kPi / 6) - std::sin(kPi / 6) * r.input_max_abs_eigenvalue - 1e-12);
    }
}

TEST_CASE("Lagrange interpolation is exact on low-degree polynomials") {
    const Grid g = box_grid(2, 0, 1, 11);
    std::vector<Real> v(g.size());
    auto f = [](const VectorN& x) { return 1 + x(0) - 2 * x(1) + x(0) * x(0) * x(1) + std::pow(x(1), 5); };
    for (std::size_t p = 0; p < g.size(); ++p) v[p] = f(g.coordinate(p));
    const LagrangeInterpolator li(g, v, 5);
    VectorN x(2);
    x << 0.337, 0.901;
    const InterpolatedJet j = li.eval(x);
    CHECK(j.value == doctest::Approx(f(x)).epsilon(1e-12));
    CHECK(j.grad(0) == doctest::Approx(1 + 2 * x(0) * x(1)).epsilon(1e-10));
    CHECK(j.grad(1) == doctest::Approx(-2 + x(0) * x(0) + 5 * std::pow(x(1), 4)).epsilon(1e-10));
    CHECK(j.hess(0, 1) == doctest::Approx(2 * x(0)).epsilon(1e-9));
    CHECK(j.hess(1, 1) == doctest::Approx(20 * std::pow(x(1), 3)).epsilon(1e-9));
    CHECK_THROWS_AS(LagrangeInterpolator(g, v, 11), DomainError);
}
