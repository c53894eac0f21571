#include "hslab/immersion_calculus.hpp"

#include "hslab/parallel.hpp"
#include "hslab/spectral.hpp"

#include <cmath>
#include <limits>

namespace hslab {

namespace {

constexpr Real kNaN = std::numeric_limits<Real>::quiet_NaN();

using Frame = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, 0, 2 * kMaxDim, kMaxDim>;

Frame tangent_frame(const ImmersedPatch& patch, std::size_t p) {
    const Grid& g = patch.grid();
    const int n = g.dim();
    Frame f(2 * n, n);
    for (int a = 0; a < n; ++a) {
        const auto& fp = patch.points()[g.shifted(p, a, 1, patch.periodic()[a])];
        const auto& fm = patch.points()[g.shifted(p, a, -1, patch.periodic()[a])];
        f.col(a) = (fp - fm) / (2 * g.spacing()(a));
    }
    return f;
}

Vector2N second_difference(const ImmersedPatch& patch, std::size_t p, int a, int b) {
    const Grid& g = patch.grid();
    const auto& pts = patch.points();
    const auto& per = patch.periodic();
    const Real ha = g.spacing()(a);
    if (a == b)
        return (pts[g.shifted(p, a, 1, per[a])] - 2 * pts[p] + pts[g.shifted(p, a, -1, per[a])]) / (ha * ha);
    const Real hb = g.spacing()(b);
    const std::size_t pa = g.shifted(p, a, 1, per[a]), ma = g.shifted(p, a, -1, per[a]);
    return (pts[g.shifted(pa, b, 1, per[b])] - pts[g.shifted(pa, b, -1, per[b])] - pts[g.shifted(ma, b, 1, per[b])] +
            pts[g.shifted(ma, b, -1, per[b])]) /
           (4 * ha * hb);
}

}  // namespace

Real wrap_angle(Real d) {
    d = std::remainder(d, 2 * kPi);
    if (d <= -kPi) d += 2 * kPi;
    return d;
}

ImmersedPatch::ImmersedPatch(Grid grid, std::array<bool, kMaxDim> periodic, std::vector<Vector2N> points,
                             int multiplicity)
    : grid_(std::move(grid)), periodic_(periodic), points_(std::move(points)), multiplicity_(multiplicity) {
    const int n = grid_.dim();
    if (points_.size() != grid_.size()) throw InvalidInput("point count does not match parameter grid");
    if (multiplicity_ < 1) throw InvalidInput("multiplicity must be a positive integer");
    for (int a = 0; a < n; ++a) {
        const int minimum = periodic_[a] ? 3 : 5;
        if (grid_.extent(a) < minimum) throw InvalidInput("immersed patch extent too small on axis " + std::to_string(a));
    }
    for (int a = n; a < kMaxDim; ++a) periodic_[a] = false;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (points_[i].size() != 2 * n) throw InvalidInput("points must live in R^{2n}");
        if (!points_[i].allFinite()) throw InvalidInput("non-finite point at sample " + std::to_string(i));
    }
}

ImmersedPatch ImmersedPatch::sample(const Grid& grid, std::array<bool, kMaxDim> periodic,
                                    const std::function<Vector2N(const VectorN&)>& map, int multiplicity) {
    std::vector<Vector2N> pts(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) pts[i] = map(grid.coordinate(i));
    return ImmersedPatch(grid, periodic, std::move(pts), multiplicity);
}

ImmersedPatch ImmersedPatch::from_gradient_graph(const GradientGraphPatch& patch) {
    const Grid& g = patch.grid();
    const int n = g.dim();
    std::vector<int> shape(g.shape());
    for (auto& s : shape) s -= 2;
    Grid inner(g.origin() + g.spacing(), g.spacing(), shape);
    std::vector<Vector2N> pts(inner.size());
    for (std::size_t i = 0; i < inner.size(); ++i) {
        GridIndex idx = inner.unflatten(i);
        for (int a = 0; a < n; ++a) idx[a] += 1;
        const std::size_t outer = g.flatten(idx);
        Vector2N z(2 * n);
        z.head(n) = g.coordinate(outer);
        z.tail(n) = gradient_at(patch, outer);
        pts[i] = z;
    }
    return ImmersedPatch(inner, {}, std::move(pts));
}

Real immersion_phase(const Eigen::Ref<const Eigen::MatrixXd>& frame, Real tolerance) {
    const Eigen::Index n = frame.cols();
    if (n < 1 || n > kMaxDim || frame.rows() != 2 * n) throw InvalidInput("frame must be n vectors in R^{2n}");
    const Eigen::MatrixXd gram = frame.transpose() * frame;
    if (!(gram.determinant() > 1e-10 * std::pow(gram.trace() / n, n))) throw RankDeficiencyError(0, gram.determinant());
    const Real defect = lagrangian_defect(frame);
    if (!(defect < tolerance)) throw LagrangianDefectError(defect, tolerance);
    Real theta = complex_frame_phase(frame);
    if (theta < 0) theta += 2 * kPi;
    return theta;
}

std::size_t ImmersionReport::interior_count() const {
    std::size_t c = 0;
    for (char m : interior_mask) c += m ? 1 : 0;
    return c;
}

Real ImmersionReport::max_abs_interior(const std::vector<Real>& field) const {
    Real m = 0;
    for (std::size_t i = 0; i < field.size(); ++i)
        if (interior_mask[i]) m = std::max(m, std::abs(field[i]));
    return m;
}

ImmersionReport analyze_immersion(const ImmersedPatch& patch, const ImmersionOptions& opt) {
    const Grid& grid = patch.grid();
    const auto& per = patch.periodic();
    const int n = grid.dim();
    const std::size_t count = grid.size();

    ImmersionReport r;
    r.grid = grid;
    r.periodic = per;
    r.multiplicity = patch.multiplicity();
    r.interior_mask.assign(count, 0);
    r.metric.assign(count, MatrixN());
    r.lagrangian_defect.assign(count, kNaN);
    r.phase.assign(count, kNaN);
    r.phase_residual.assign(count, kNaN);
    r.mean_curv_norm.assign(count, kNaN);
    r.sff_norm.assign(count, kNaN);
    r.volume_element.assign(count, kNaN);

    std::vector<Real> raw_phase(count, kNaN);
    std::vector<Real> gram_det(count, 1.0);
    std::vector<MatrixN> metric_basis(count);
    std::vector<VectorN> metric_eigs(count);
    LaplaceBeltramiCoefficients lb;
    lb.flux.assign(count, MatrixN());
    lb.sqrt_det.assign(count, kNaN);

    parallel_for(count, opt.threads, [&](std::size_t p) {
        if (grid.margin(p, per) < 1) return;
        const Frame f = tangent_frame(patch, p);
        MatrixN g = f.transpose() * f;
        const auto eig = jacobi_eigen(g);
        Real det = 1;
        for (int i = 0; i < n; ++i) det *= eig.values(i);
        gram_det[p] = det;
        metric_basis[p] = eig.vectors;
        metric_eigs[p] = eig.values;
        r.metric[p] = g;
        r.lagrangian_defect[p] = lagrangian_defect(f);
        raw_phase[p] = complex_frame_phase(f);
        lb.sqrt_det[p] = std::sqrt(std::max(det, 0.0));
        MatrixN ginv = MatrixN::Zero(n, n);
        for (int i = 0; i < n; ++i)
            ginv += eig.vectors.col(i) * eig.vectors.col(i).transpose() / std::max(eig.values(i), 1e-300);
        lb.flux[p] = lb.sqrt_det[p] * ginv;
        r.volume_element[p] = lb.sqrt_det[p];

        // Second fundamental form against the normal frame J F_k.
        std::vector<Real> t(static_cast<std::size_t>(n * n * n));
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b) {
                const Vector2N fab = second_difference(patch, p, a, b);
                for (int k = 0; k < n; ++k) {
                    const Real v = fab.dot(complex_structure(f.col(k)));
                    t[(a * n + b) * n + k] = v;
                    t[(b * n + a) * n + k] = v;
                }
            }
        r.sff_norm[p] = std::sqrt(std::max(0.0, cubic_norm_squared(t, n, eig.vectors, eig.values)));
        VectorN h = VectorN::Zero(n);
        for (int k = 0; k < n; ++k)
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) h(k) += ginv(a, b) * t[(a * n + b) * n + k];
        r.mean_curv_norm[p] = std::sqrt(std::max(0.0, h.dot(ginv * h)));
    });

    for (std::size_t p = 0; p < count; ++p) {
        if (grid.margin(p, per) < 1) continue;
        const Real scale = std::pow(r.metric[p].trace() / n, n);
        if (!(gram_det[p] >= opt.gram_tolerance * scale)) throw RankDeficiencyError(p, gram_det[p]);
        r.max_lagrangian_defect = std::max(r.max_lagrangian_defect, r.lagrangian_defect[p]);
    }
    if (!(r.max_lagrangian_defect < opt.lagrangian_tolerance))
        throw LagrangianDefectError(r.max_lagrangian_defect, opt.lagrangian_tolerance);

    // Unwrap along grid lines: each sample refers to its predecessor on the
    // last axis whose index is above the lower edge of the valid box.
    auto lower = [&](int a) { return per[a] ? 0 : 1; };
    for (std::size_t p = 0; p < count; ++p) {
        if (grid.margin(p, per) < 1) continue;
        const GridIndex idx = grid.unflatten(p);
        int axis = -1;
        for (int a = n - 1; a >= 0; --a)
            if (idx[a] > lower(a)) {
                axis = a;
                break;
            }
        if (axis < 0) {
            r.phase[p] = raw_phase[p];
            continue;
        }
        const std::size_t ref = grid.shifted(p, axis, -1);
        r.phase[p] = r.phase[ref] + wrap_angle(raw_phase[p] - raw_phase[ref]);
    }
    for (std::size_t p = 0; p < count; ++p) {
        if (grid.margin(p, per) < 1) continue;
        const GridIndex idx = grid.unflatten(p);
        for (int a = 0; a < n; ++a) {
            const int upper = per[a] ? grid.extent(a) - 1 : grid.extent(a) - 2;
            if (idx[a] >= upper) continue;
            const std::size_t q = grid.shifted(p, a, 1);
            if (!(std::abs(r.phase[q] - r.phase[p]) < kPi))
                throw UnwrapError("phase jump >= pi between samples " + std::to_string(p) + " and " + std::to_string(q));
        }
    }

    auto diff = [&](std::size_t i, std::size_t j) { return wrap_angle(raw_phase[j] - raw_phase[i]); };
    const Real cell = grid.cell_volume() * patch.multiplicity();
    for (std::size_t p = 0; p < count; ++p) {
        if (grid.margin(p, per) < 2) continue;
        r.interior_mask[p] = 1;
        r.phase_residual[p] = laplace_beltrami_at(grid, lb, p, diff, per);
        r.volume += r.volume_element[p] * cell;
        r.total_extrinsic += std::pow(r.sff_norm[p], n) * r.volume_element[p] * cell;
    }
    return r;
}

}  // namespace hslab
