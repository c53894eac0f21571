#include "hslab/rotation.hpp"

#include "hslab/interpolation.hpp"
#include "hslab/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace hslab {

namespace {

struct Preimage {
    VectorN x;
    InterpolatedJet jet;
    bool converged = false;
};

// Solves cos(a) x - sin(a) Du(x) = target. The map is the gradient of a
// strongly convex function on the input box, so damped Newton converges.
Preimage invert(const LagrangeInterpolator& interp, Real c, Real s, const VectorN& target, VectorN x, Real scale) {
    const int n = static_cast<int>(target.size());
    Preimage out;
    auto residual_of = [&](const VectorN& y, InterpolatedJet& jet) {
        jet = interp.eval(y);
        return VectorN(c * y - s * jet.grad - target);
    };
    InterpolatedJet jet;
    VectorN r = residual_of(x, jet);
    for (int it = 0; it < 60; ++it) {
        if (r.norm() <= 1e-14 * scale) {
            out.converged = true;
            break;
        }
        const MatrixN jac = c * MatrixN::Identity(n, n) - s * jet.hess;
        const VectorN step = jac.partialPivLu().solve(r);
        Real t = 1;
        bool accepted = false;
        for (int k = 0; k < 30; ++k) {
            const VectorN trial = x - t * step;
            InterpolatedJet tj;
            const VectorN tr = residual_of(trial, tj);
            if (tr.norm() < r.norm()) {
                x = trial;
                r = tr;
                jet = tj;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            out.converged = r.norm() <= 1e-10 * scale;
            break;
        }
    }
    out.x = x;
    out.jet = jet;
    return out;
}

}  // namespace

RotationResult lewy_yuan_rotate(const GradientGraphPatch& patch, const RotationOptions& opt) {
    const Grid& grid = patch.grid();
    const int n = grid.dim();
    const Real alpha = opt.angle;
    if (!(std::abs(alpha) < 0.5 * kPi)) throw DomainError("rotation angle must lie in (-pi/2, pi/2)");
    const Real c = std::cos(alpha), s = std::sin(alpha);

    RotationResult res;
    res.angle = alpha;

    for (std::size_t p = 0; p < grid.size(); ++p) {
        if (grid.margin(p) < 1) continue;
        const auto eig = jacobi_eigen(hessian_at(patch, p));
        res.input_max_abs_eigenvalue =
            std::max({res.input_max_abs_eigenvalue, std::abs(eig.values(0)), std::abs(eig.values(n - 1))});
    }
    const Real limit = std::tan(0.5 * kPi - std::abs(alpha));
    if (!(res.input_max_abs_eigenvalue < limit))
        throw PreconditionError("input Hessian eigenvalue " + std::to_string(res.input_max_abs_eigenvalue) +
                                " leaves the graphical range |lambda| < tan(pi/2 - alpha) = " + std::to_string(limit));

    const LagrangeInterpolator interp(grid, patch.values(), opt.interpolation_degree);

    res.jacobian_min = std::numeric_limits<Real>::infinity();
    res.jacobian_lower = std::numeric_limits<Real>::infinity();
    for (std::size_t p = 0; p < grid.size(); ++p) {
        const InterpolatedJet jet = interp.eval(grid.coordinate(p));
        const MatrixN jac = c * MatrixN::Identity(n, n) - s * jet.hess;
        const auto eig = jacobi_eigen(MatrixN(0.5 * (jac + jac.transpose())));
        Real det = 1;
        for (int i = 0; i < n; ++i) det *= eig.values(i);
        res.jacobian_min = std::min(res.jacobian_min, det);
        res.jacobian_lower = std::min(res.jacobian_lower, eig.values(0));
    }
    if (!(res.jacobian_min > 0) || !(res.jacobian_lower > 0)) throw FoldError(res.jacobian_min);

    const VectorN x0 = grid.center();
    res.input_radius = std::numeric_limits<Real>::infinity();
    for (int a = 0; a < n; ++a) res.input_radius = std::min(res.input_radius, 0.5 * grid.spacing()(a) * (grid.extent(a) - 1));
    const InterpolatedJet j0 = interp.eval(x0);
    res.center = c * x0 - s * j0.grad;
    const Real slope = std::max(std::tan(kPi / 12), res.input_max_abs_eigenvalue);
    res.guaranteed_radius = (c - std::abs(s) * slope) * res.input_radius;
    if (!(res.guaranteed_radius > 0))
        throw CoverageError(0, res.guaranteed_radius);

    const int samples = opt.samples > 0 ? opt.samples : *std::min_element(grid.shape().begin(), grid.shape().end());
    const Real half = res.guaranteed_radius / std::sqrt(static_cast<Real>(n));
    const Real h = 2 * half / (samples - 1);
    Grid out_grid(VectorN(res.center.array() - half), VectorN::Constant(n, h), std::vector<int>(n, samples));

    std::vector<Real> ubar(out_grid.size());
    std::vector<VectorN> ybar(out_grid.size());
    const Real scale = std::max<Real>(1, res.center.norm() + res.input_radius);
    VectorN guess = x0;
    Real worst_outside = 0;
    for (std::size_t q = 0; q < out_grid.size(); ++q) {
        const VectorN target = out_grid.coordinate(q);
        Preimage pre = invert(interp, c, s, target, guess, scale);
        if (!pre.converged) pre = invert(interp, c, s, target, x0, scale);
        if (!pre.converged) throw CoverageError(res.guaranteed_radius, (target - res.center).norm());
        for (int a = 0; a < n; ++a) {
            const Real t = (pre.x(a) - grid.origin()(a)) / grid.spacing()(a);
            worst_outside = std::max({worst_outside, -t, t - (grid.extent(a) - 1)});
        }
        if (worst_outside > 1e-8) throw CoverageError(res.guaranteed_radius, (target - res.center).norm());
        const VectorN& x = pre.x;
        const VectorN& du = pre.jet.grad;
        ubar[q] = pre.jet.value - s * c * (du.squaredNorm() - x.squaredNorm()) / 2 - s * s * du.dot(x);
        ybar[q] = s * x + c * du;
        guess = x;
    }

    res.rotated_patch = GradientGraphPatch(out_grid, std::move(ubar));
    res.eigen_window_min = std::numeric_limits<Real>::infinity();
    res.eigen_window_max = -std::numeric_limits<Real>::infinity();
    for (std::size_t q = 0; q < out_grid.size(); ++q) {
        if (out_grid.margin(q) < 1) continue;
        const auto eig = jacobi_eigen(hessian_at(res.rotated_patch, q));
        res.eigen_window_min = std::min(res.eigen_window_min, eig.values(0));
        res.eigen_window_max = std::max(res.eigen_window_max, eig.values(n - 1));
        res.gradient_check_error =
            std::max(res.gradient_check_error, (gradient_at(res.rotated_patch, q) - ybar[q]).lpNorm<Eigen::Infinity>());
    }
    return res;
}

EigenWindowCheck eigen_window_check(const RotationResult& result, Real tol) {
    const Real lo = std::tan(kPi / 12), hi = std::tan(kPi / 3);
    if (std::abs(result.angle - kPi / 6) > 1e-12)
        throw PreconditionError("eigen window check is stated for a rotation by pi/6");
    if (result.input_max_abs_eigenvalue > lo + tol)
        throw PreconditionError("input Hessian eigenvalue " + std::to_string(result.input_max_abs_eigenvalue) +
                                " exceeds tan(pi/12)");
    EigenWindowCheck out;
    out.lower_margin = result.eigen_window_min - lo;
    out.upper_margin = hi - result.eigen_window_max;
    out.inside = out.lower_margin > -tol && out.upper_margin > -tol;
    return out;
}

}  // namespace hslab
