#include "hslab/graph_calculus.hpp"

#include "hslab/parallel.hpp"

#include <cmath>
#include <limits>

namespace hslab {

namespace {

constexpr Real kNaN = std::numeric_limits<Real>::quiet_NaN();

}  // namespace

// Evaluated in the eigenbasis of g, where the contraction is a weighted sum
// of squares.
Real cubic_norm_squared(const std::vector<Real>& t, int n, const MatrixN& basis, const VectorN& metric_eigs) {
    auto at = [n](const std::vector<Real>& v, int i, int j, int k) -> Real { return v[(i * n + j) * n + k]; };
    std::vector<Real> s1(t.size(), 0.0), s2(t.size(), 0.0);
    for (int a = 0; a < n; ++a)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                Real acc = 0;
                for (int i = 0; i < n; ++i) acc += basis(i, a) * at(t, i, j, k);
                s1[(a * n + j) * n + k] = acc;
            }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int k = 0; k < n; ++k) {
                Real acc = 0;
                for (int j = 0; j < n; ++j) acc += basis(j, b) * at(s1, a, j, k);
                s2[(a * n + b) * n + k] = acc;
            }
    Real total = 0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                Real acc = 0;
                for (int k = 0; k < n; ++k) acc += basis(k, c) * at(s2, a, b, k);
                total += acc * acc / (metric_eigs(a) * metric_eigs(b) * metric_eigs(c));
            }
    return total;
}

GradientGraphPatch::GradientGraphPatch(Grid grid, std::vector<Real> u) : grid_(std::move(grid)), u_(std::move(u)) {
    if (u_.size() != grid_.size()) throw InvalidInput("u has " + std::to_string(u_.size()) + " samples, grid has " +
                                                      std::to_string(grid_.size()));
    for (int a = 0; a < grid_.dim(); ++a)
        if (grid_.extent(a) < 5) throw InvalidInput("gradient graph patch needs >= 5 samples per axis");
    for (std::size_t i = 0; i < u_.size(); ++i)
        if (!std::isfinite(u_[i])) throw InvalidInput("non-finite potential value at sample " + std::to_string(i));
}

GradientGraphPatch GradientGraphPatch::sample(const Grid& grid, const std::function<Real(const VectorN&)>& potential) {
    std::vector<Real> u(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) u[i] = potential(grid.coordinate(i));
    return GradientGraphPatch(grid, std::move(u));
}

std::size_t GeometryReport::interior_count() const {
    std::size_t c = 0;
    for (char m : interior_mask) c += m ? 1 : 0;
    return c;
}

Real GeometryReport::max_abs_interior(const std::vector<Real>& field) const {
    Real m = 0;
    for (std::size_t i = 0; i < field.size(); ++i)
        if (interior_mask[i]) m = std::max(m, std::abs(field[i]));
    return m;
}

MatrixN hessian_at(const GradientGraphPatch& patch, std::size_t p) {
    const Grid& g = patch.grid();
    const int n = g.dim();
    MatrixN hess(n, n);
    const auto& u = patch.values();
    for (int a = 0; a < n; ++a) {
        const Real ha = g.spacing()(a);
        const std::size_t pa = g.shifted(p, a, 1), ma = g.shifted(p, a, -1);
        hess(a, a) = (u[pa] - 2 * u[p] + u[ma]) / (ha * ha);
        for (int b = a + 1; b < n; ++b) {
            const Real hb = g.spacing()(b);
            const Real v = (u[g.shifted(pa, b, 1)] - u[g.shifted(pa, b, -1)] - u[g.shifted(ma, b, 1)] +
                            u[g.shifted(ma, b, -1)]) /
                           (4 * ha * hb);
            hess(a, b) = v;
            hess(b, a) = v;
        }
    }
    return hess;
}

VectorN gradient_at(const GradientGraphPatch& patch, std::size_t p) {
    const Grid& g = patch.grid();
    VectorN grad(g.dim());
    for (int a = 0; a < g.dim(); ++a)
        grad(a) = (patch.value(g.shifted(p, a, 1)) - patch.value(g.shifted(p, a, -1))) / (2 * g.spacing()(a));
    return grad;
}

Real laplace_beltrami_at(const Grid& grid, const LaplaceBeltramiCoefficients& c, std::size_t p,
                         const std::function<Real(std::size_t, std::size_t)>& diff,
                         const std::array<bool, kMaxDim>& periodic) {
    const int n = grid.dim();
    Real sum = 0;
    for (int a = 0; a < n; ++a) {
        const Real ha = grid.spacing()(a);
        const std::size_t pa = grid.shifted(p, a, 1, periodic[a]);
        const std::size_t ma = grid.shifted(p, a, -1, periodic[a]);
        const Real fp = 0.5 * (c.flux[p](a, a) + c.flux[pa](a, a));
        const Real fm = 0.5 * (c.flux[p](a, a) + c.flux[ma](a, a));
        sum += (fp * diff(p, pa) - fm * diff(ma, p)) / (ha * ha);
        for (int b = 0; b < n; ++b) {
            if (b == a) continue;
            const Real hb = grid.spacing()(b);
            const std::size_t pap = grid.shifted(pa, b, 1, periodic[b]);
            const std::size_t pam = grid.shifted(pa, b, -1, periodic[b]);
            const std::size_t map = grid.shifted(ma, b, 1, periodic[b]);
            const std::size_t mam = grid.shifted(ma, b, -1, periodic[b]);
            sum += (c.flux[pa](a, b) * diff(pam, pap) - c.flux[ma](a, b) * diff(mam, map)) / (4 * ha * hb);
        }
    }
    return sum / c.sqrt_det[p];
}

Real laplace_beltrami_diagonal(const Grid& grid, const LaplaceBeltramiCoefficients& c, std::size_t p,
                               const std::array<bool, kMaxDim>& periodic) {
    Real d = 0;
    for (int a = 0; a < grid.dim(); ++a) {
        const Real ha = grid.spacing()(a);
        const std::size_t pa = grid.shifted(p, a, 1, periodic[a]);
        const std::size_t ma = grid.shifted(p, a, -1, periodic[a]);
        d -= (c.flux[p](a, a) + 0.5 * (c.flux[pa](a, a) + c.flux[ma](a, a))) / (ha * ha);
    }
    return d;
}

GeometryReport analyze(const GradientGraphPatch& patch, int threads) {
    const Grid& grid = patch.grid();
    const int n = grid.dim();
    const std::size_t count = grid.size();

    GeometryReport r;
    r.grid = grid;
    r.interior_mask.assign(count, 0);
    r.metric.assign(count, MatrixN());
    r.eigenvalues.assign(count, VectorN());
    r.phase.assign(count, kNaN);
    r.phase_residual.assign(count, kNaN);
    r.mean_curv_norm.assign(count, kNaN);
    r.sff_norm.assign(count, kNaN);
    r.volume_element.assign(count, kNaN);

    std::vector<MatrixN> hess(count);
    std::vector<MatrixN> eigvecs(count);
    LaplaceBeltramiCoefficients lb;
    lb.flux.assign(count, MatrixN());
    lb.sqrt_det.assign(count, kNaN);
    std::vector<Real> metric_min_eig(count, 1.0);

    parallel_for(count, threads, [&](std::size_t p) {
        if (grid.margin(p) < 1) return;
        hess[p] = hessian_at(patch, p);
        const auto eig = jacobi_eigen(hess[p]);
        r.eigenvalues[p] = eig.values;
        eigvecs[p] = eig.vectors;
        Real theta = 0;
        for (int i = 0; i < n; ++i) theta += std::atan(eig.values(i));
        r.phase[p] = theta;
        MatrixN g = MatrixN::Identity(n, n) + hess[p] * hess[p];
        g = 0.5 * (g + g.transpose());
        r.metric[p] = g;
        const auto geig = jacobi_eigen(g);
        metric_min_eig[p] = geig.values(0);
        Real det = 1;
        for (int i = 0; i < n; ++i) det *= geig.values(i);
        lb.sqrt_det[p] = std::sqrt(std::max(det, 0.0));
        MatrixN ginv = MatrixN::Zero(n, n);
        for (int i = 0; i < n; ++i)
            ginv += geig.vectors.col(i) * geig.vectors.col(i).transpose() / std::max(geig.values(i), 1e-300);
        lb.flux[p] = lb.sqrt_det[p] * ginv;
        r.volume_element[p] = lb.sqrt_det[p];
    });

    for (std::size_t p = 0; p < count; ++p)
        if (grid.margin(p) >= 1 && !(metric_min_eig[p] >= 1.0 - 1e-9)) throw MetricDegeneracyError(p, metric_min_eig[p]);

    auto phase_diff = [&](std::size_t i, std::size_t j) { return r.phase[j] - r.phase[i]; };

    parallel_for(count, threads, [&](std::size_t p) {
        if (grid.margin(p) < 2) return;
        r.interior_mask[p] = 1;

        // Third derivatives from differences of the Hessian field, symmetrised.
        std::vector<Real> t(static_cast<std::size_t>(n * n * n), 0.0);
        std::vector<MatrixN> dk(n);
        for (int k = 0; k < n; ++k)
            dk[k] = (hess[grid.shifted(p, k, 1)] - hess[grid.shifted(p, k, -1)]) / (2 * grid.spacing()(k));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    t[(i * n + j) * n + k] = (dk[k](i, j) + dk[i](j, k) + dk[j](k, i)) / 3.0;

        VectorN metric_eigs(n);
        for (int i = 0; i < n; ++i) metric_eigs(i) = 1 + r.eigenvalues[p](i) * r.eigenvalues[p](i);
        r.sff_norm[p] = std::sqrt(std::max(0.0, cubic_norm_squared(t, n, eigvecs[p], metric_eigs)));

        VectorN dtheta(n);
        for (int a = 0; a < n; ++a)
            dtheta(a) = (r.phase[grid.shifted(p, a, 1)] - r.phase[grid.shifted(p, a, -1)]) / (2 * grid.spacing()(a));
        const MatrixN ginv = lb.flux[p] / lb.sqrt_det[p];
        r.mean_curv_norm[p] = std::sqrt(std::max(0.0, dtheta.dot(ginv * dtheta)));

        r.phase_residual[p] = laplace_beltrami_at(grid, lb, p, phase_diff);
    });

    const Real cell = grid.cell_volume();
    for (std::size_t p = 0; p < count; ++p) {
        if (!r.interior_mask[p]) continue;
        r.volume += r.volume_element[p] * cell;
        r.total_extrinsic += std::pow(r.sff_norm[p], n) * r.volume_element[p] * cell;
    }
    return r;
}

GraphicalRadius graphical_radius(Real c) {
    if (!(c > 0) || !std::isfinite(c)) throw DomainError("curvature bound must be positive");
    const Real rho0 = kPi / (12 * c);
    return {rho0 * std::cos(kPi / 12), rho0};
}

Real phase_residual_roundoff(const GradientGraphPatch& patch) {
    Real umax = 1;
    for (Real v : patch.values()) umax = std::max(umax, std::abs(v));
    const Real hmin = patch.grid().spacing().minCoeff();
    return 10 * std::numeric_limits<Real>::epsilon() * umax / std::pow(hmin, 4);
}

}  // namespace hslab
