#include <doctest.h>

#include "hslab/builders.hpp"
#include "hslab/solver.hpp"

#include <cmath>
#include <random>

using namespace hslab;

namespace {

Real harmonic(const VectorN& x) {
    return 0.3 * std::exp(x(0)) * std::cos(x(1)) + (x(0) * x(0) * x(0) - 3 * x(0) * x(1) * x(1)) / 6;
}

std::vector<Real> sample(const Grid& g, Real (*f)(const VectorN&)) {
    std::vector<Real> v(g.size());
    for (std::size_t p = 0; p < g.size(); ++p) v[p] = f(g.coordinate(p));
    return v;
}

// Smooth perturbation vanishing on the two outer rings.
std::vector<Real> perturbed(const Grid& g, const std::vector<Real>& u, Real amplitude) {
    std::vector<Real> out = u;
    const Real a = 0.5 - g.spacing()(0);
    for (std::size_t p = 0; p < g.size(); ++p) {
        const VectorN x = g.coordinate(p);
        Real b = 1;
        for (int k = 0; k < g.dim(); ++k) b *= std::max(0.0, a * a - x(k) * x(k));
        out[p] += amplitude * b * b * std::cos(2 * x(0) - x(g.dim() - 1));
    }
    return out;
}

Real sup_error(const SolverReport& r, const std::vector<Real>& exact) {
    Real e = 0;
    for (std::size_t p = 0; p < exact.size(); ++p) e = std::max(e, std::abs(r.solution.value(p) - exact[p]));
    return e;
}

}  // namespace

TEST_CASE("transfinite guess reproduces quadratics and the harmonic cubic") {
    const Grid g = box_grid(2, -0.5, 0.5, 17);
    std::mt19937_64 rng(2);
    const MatrixN q = random_symmetric(rng, 2, 1);
    std::vector<Real> quad(g.size());
    for (std::size_t p = 0; p < g.size(); ++p) quad[p] = 0.5 * g.coordinate(p).dot(q * g.coordinate(p));
    const std::vector<Real> guess = transfinite_initial_guess(g, quad);
    for (std::size_t p = 0; p < g.size(); ++p) CHECK(guess[p] == doctest::Approx(quad[p]).epsilon(1e-13));
    const std::vector<Real> cubic = sample(g, harmonic_cubic);
    const std::vector<Real> gc = transfinite_initial_guess(g, cubic);
    for (std::size_t p = 0; p < g.size(); ++p) CHECK(std::abs(gc[p] - cubic[p]) < 1e-15);
}

TEST_CASE("quadratic boundary data converge in one outer iteration") {
    const Grid g = box_grid(2, -0.5, 0.5, 33);
    std::mt19937_64 rng(3);
    const MatrixN q = random_symmetric(rng, 2, 0.8);
    std::vector<Real> quad(g.size());
    for (std::size_t p = 0; p < g.size(); ++p) quad[p] = 0.5 * g.coordinate(p).dot(q * g.coordinate(p));
    const SolverReport r = solve_hs({g, quad, {}});
    CHECK(r.converged);
    CHECK(r.outer_iterations == 1);
    CHECK(sup_error(r, quad) < 1e-8);
}

TEST_CASE("coupled scheme converges from a perturbed start at second order") {
    std::vector<Real> errors;
    for (int cells : {32, 64}) {
        const Grid g = box_grid(2, -0.5, 0.5, cells + 1);
        const std::vector<Real> exact = sample(g, harmonic);
        const SolverReport r = solve_hs({g, exact, {}}, GradientGraphPatch(g, perturbed(g, exact, 20)));
        CHECK(r.converged);
        CHECK(r.outer_iterations <= 20);
        CHECK(r.residual_history.back() <= r.effective_tolerance);
        errors.push_back(sup_error(r, exact));
    }
    CHECK(errors[0] < 1e-5);
    CHECK(std::log2(errors[0] / errors[1]) > 1.8);
}

TEST_CASE("one-dimensional solutions are circle arcs") {
    // u' = -sqrt(r^2 - x^2) makes (x, u'(x)) an arc of radius r.
    const Real r = 2;
    auto exact = [r](Real x) { return -0.5 * (x * std::sqrt(r * r - x * x) + r * r * std::asin(x / r)); };
    std::vector<Real> errors;
    for (int cells : {32, 64}) {
        VectorN o(1), h(1);
        o << -0.5;
        h << 1.0 / cells;
        const Grid g(o, h, {cells + 1});
        std::vector<Real> u(g.size());
        for (std::size_t p = 0; p < g.size(); ++p) u[p] = exact(g.coordinate(p)(0));
        std::vector<Real> start = u;
        for (std::size_t p = 2; p + 2 < g.size(); ++p) start[p] += 1e-3 * std::sin(kPi * p / cells);
        const SolverReport rep = solve_hs({g, u, {}}, GradientGraphPatch(g, start));
        CHECK(rep.converged);
        errors.push_back(sup_error(rep, u));
    }
    CHECK(errors[1] < 1e-5);
    CHECK(std::log2(errors[0] / errors[1]) > 1.8);
}

TEST_CASE("alternating scheme records inner Newton histories") {
    const Grid g = box_grid(2, -0.5, 0.5, 17);
    std::vector<Real> quad(g.size());
    for (std::size_t p = 0; p < g.size(); ++p) quad[p] = 0.3 * g.coordinate(p)(0) * g.coordinate(p)(1);
    SolverOptions opt;
    opt.scheme = SolverScheme::Alternating;
    const SolverReport r = solve_hs({g, quad, opt});
    CHECK(r.converged);
    CHECK(r.outer_iterations == 1);
    CHECK(r.newton_histories.size() == 1);
    CHECK(r.linear_sweeps.size() == 1);
}

TEST_CASE("alternating scheme stalls where the coupled scheme converges") {
    const Grid g = box_grid(2, -0.5, 0.5, 17);
    const std::vector<Real> exact = sample(g, harmonic);
    const GradientGraphPatch start(g, perturbed(g, exact, 20));
    SolverOptions alt;
    alt.scheme = SolverScheme::Alternating;
    alt.max_outer = 10;
    SolverReport a;
    bool window_failure = false;
    try {
        a = solve_hs({g, exact, alt}, start);
    } catch (const WindowError&) {
        window_failure = true;
    }
    const SolverReport c = solve_hs({g, exact, {}}, start);
    CHECK(c.converged);
    if (!window_failure) CHECK(sup_error(a, exact) > sup_error(c, exact));
}

TEST_CASE("solver input validation") {
    const Grid g = box_grid(2, -0.5, 0.5, 9);
    std::vector<Real> u(g.size(), 0.0);
    CHECK_THROWS_AS(solve_hs({g, std::vector<Real>(5, 0.0), {}}), InvalidInput);
    SolverOptions bad;
    bad.tol_residual = -1;
    CHECK_THROWS_AS(solve_hs({g, u, bad}), InvalidInput);
    std::vector<Real> off = u;
    off[0] = 1;
    CHECK_THROWS_AS(solve_hs({g, u, {}}, GradientGraphPatch(g, off)), InvalidInput);
    CHECK_THROWS_AS(solve_hs({box_grid(4, 0, 1, 5), std::vector<Real>(625, 0.0), {}}), InvalidInput);
}
