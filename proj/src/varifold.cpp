#include "hslab/varifold.hpp"

#include <algorithm>
#include <cmath>

namespace hslab {

void VarifoldSample::validate(Real tol) const {
    if (dim < 1 || dim > kMaxDim) throw InvalidInput("varifold dimension must be in 1..8");
    const std::size_t m = points.size();
    if (weights.size() != m || tangents.size() != m || mean_curv.size() != m)
        throw InvalidInput("varifold arrays have inconsistent lengths");
    for (std::size_t i = 0; i < m; ++i) {
        if (points[i].size() != 2 * dim || mean_curv[i].size() != 2 * dim) throw InvalidInput("point is not in R^{2n}");
        if (!points[i].allFinite()) throw InvalidInput("non-finite point at " + std::to_string(i));
        if (!mean_curv[i].allFinite()) throw InvalidInput("non-finite mean curvature at " + std::to_string(i));
        if (!(weights[i] > 0) || !std::isfinite(weights[i])) throw InvalidInput("weights must be positive");
        if (tangents[i].rows() != 2 * dim || tangents[i].cols() != dim) throw InvalidInput("tangent frame must be 2n x n");
        const Real defect =
            (tangents[i].transpose() * tangents[i] - Eigen::MatrixXd::Identity(dim, dim)).lpNorm<Eigen::Infinity>();
        if (!(defect <= tol))
            throw FrameError("tangent frame at sample " + std::to_string(i) + " is not orthonormal (defect " +
                             std::to_string(defect) + ")");
    }
}

Real VarifoldSample::mass() const {
    Real total = 0;
    for (Real w : weights) total += w;
    return total;
}

Real VarifoldSample::resolution_scale() const {
    Real w = 0;
    for (Real x : weights) w = std::max(w, x);
    return std::pow(w, 1.0 / dim);
}

VarifoldSample circle_varifold(Real r, int samples, int multiplicity) {
    if (!(r > 0) || samples < 3) throw DomainError("circle needs r > 0 and at least 3 samples");
    VarifoldSample s;
    s.dim = 1;
    for (int i = 0; i < samples; ++i) {
        const Real t = 2 * kPi * i / samples;
        Vector2N x(2), h(2);
        x << r * std::cos(t), r * std::sin(t);
        h = -x / (r * r);
        Eigen::MatrixXd e(2, 1);
        e << -std::sin(t), std::cos(t);
        s.points.push_back(x);
        s.mean_curv.push_back(h);
        s.tangents.push_back(e);
        s.weights.push_back(multiplicity * 2 * kPi * r / samples);
    }
    return s;
}

VarifoldSample ellipse_varifold(Real a, Real b, int samples) {
    if (!(a > 0) || !(b > 0) || samples < 3) throw DomainError("ellipse needs positive axes");
    VarifoldSample s;
    s.dim = 1;
    for (int i = 0; i < samples; ++i) {
        const Real t = 2 * kPi * i / samples;
        const Eigen::Vector2d x(a * std::cos(t), b * std::sin(t));
        const Eigen::Vector2d d1(-a * std::sin(t), b * std::cos(t));
        const Eigen::Vector2d d2 = -x;
        const Real speed = d1.norm();
        const Eigen::Vector2d tan = d1 / speed;
        const Eigen::Vector2d h = (d2 - d2.dot(tan) * tan) / (speed * speed);
        Eigen::MatrixXd e(2, 1);
        e.col(0) = tan;
        s.points.push_back(Vector2N(x));
        s.mean_curv.push_back(Vector2N(h));
        s.tangents.push_back(e);
        s.weights.push_back(speed * 2 * kPi / samples);
    }
    return s;
}

VarifoldSample torus_varifold(Real r1, Real r2, int m) {
    if (!(r1 > 0) || !(r2 > 0) || m < 3) throw DomainError("torus needs positive radii");
    VarifoldSample s;
    s.dim = 2;
    const Real w = r1 * r2 * (2 * kPi / m) * (2 * kPi / m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const Real p = 2 * kPi * i / m, q = 2 * kPi * j / m;
            Vector2N x(4), h(4);
            x << r1 * std::cos(p), r2 * std::cos(q), r1 * std::sin(p), r2 * std::sin(q);
            h << -std::cos(p) / r1, -std::cos(q) / r2, -std::sin(p) / r1, -std::sin(q) / r2;
            Eigen::MatrixXd e = Eigen::MatrixXd::Zero(4, 2);
            e(0, 0) = -std::sin(p);
            e(2, 0) = std::cos(p);
            e(1, 1) = -std::sin(q);
            e(3, 1) = std::cos(q);
            s.points.push_back(x);
            s.mean_curv.push_back(h);
            s.tangents.push_back(e);
            s.weights.push_back(w);
        }
    return s;
}

VarifoldSample plane_varifold(const Eigen::MatrixXd& frame, Real half_width, Real spacing, const Vector2N& center) {
    const int n = static_cast<int>(frame.cols());
    if (frame.rows() != 2 * n || n < 1 || n > kMaxDim) throw InvalidInput("plane frame must be 2n x n");
    if (!(half_width > 0) || !(spacing > 0)) throw DomainError("plane extent and spacing must be positive");
    if ((frame.transpose() * frame - Eigen::MatrixXd::Identity(n, n)).lpNorm<Eigen::Infinity>() > 1e-12)
        throw FrameError("plane frame is not orthonormal");
    const int per_axis = static_cast<int>(std::round(2 * half_width / spacing));
    VarifoldSample s;
    s.dim = n;
    std::size_t total = 1;
    for (int a = 0; a < n; ++a) total *= static_cast<std::size_t>(per_axis);
    s.points.reserve(total);
    const Real w = std::pow(spacing, n);
    std::vector<int> idx(n, 0);
    for (std::size_t c = 0; c < total; ++c) {
        std::size_t rem = c;
        Eigen::VectorXd local(n);
        for (int a = n - 1; a >= 0; --a) {
            idx[a] = static_cast<int>(rem % static_cast<std::size_t>(per_axis));
            rem /= static_cast<std::size_t>(per_axis);
            local(a) = -half_width + (idx[a] + 0.5) * spacing;
        }
        s.points.push_back(Vector2N(center + frame * local));
        s.mean_curv.push_back(Vector2N::Zero(2 * n));
        s.tangents.push_back(frame);
        s.weights.push_back(w);
    }
    return s;
}

VarifoldSample real_plane_varifold(int n, Real half_width, Real spacing) {
    Eigen::MatrixXd frame = Eigen::MatrixXd::Zero(2 * n, n);
    frame.topRows(n).setIdentity();
    return plane_varifold(frame, half_width, spacing, Vector2N::Zero(2 * n));
}

VarifoldSample merge(const VarifoldSample& a, const VarifoldSample& b) {
    if (a.dim != b.dim) throw InvalidInput("cannot merge varifolds of different dimension");
    VarifoldSample s = a;
    s.points.insert(s.points.end(), b.points.begin(), b.points.end());
    s.weights.insert(s.weights.end(), b.weights.begin(), b.weights.end());
    s.tangents.insert(s.tangents.end(), b.tangents.begin(), b.tangents.end());
    s.mean_curv.insert(s.mean_curv.end(), b.mean_curv.begin(), b.mean_curv.end());
    return s;
}

VarifoldSample varifold_from_immersion(const ImmersedPatch& patch, const ImmersionReport& report) {
    const Grid& g = patch.grid();
    const int n = g.dim();
    const auto& pts = patch.points();
    const auto& per = patch.periodic();
    VarifoldSample s;
    s.dim = n;
    const Real cell = g.cell_volume();
    for (std::size_t p = 0; p < g.size(); ++p) {
        if (!report.interior_mask[p]) continue;
        Eigen::MatrixXd frame(2 * n, n);
        VectorN dtheta(n);
        for (int a = 0; a < n; ++a) {
            const Real h = g.spacing()(a);
            const std::size_t pa = g.shifted(p, a, 1, per[a]), ma = g.shifted(p, a, -1, per[a]);
            frame.col(a) = (pts[pa] - pts[ma]) / (2 * h);
            dtheta(a) = wrap_angle(report.phase[pa] - report.phase[ma]) / (2 * h);
        }
        const MatrixN metric = frame.transpose() * frame;
        const VectorN coeff = metric.ldlt().solve(dtheta);
        const Vector2N grad_theta = frame * coeff;
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(frame);
        Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(2 * n, n);
        s.points.push_back(pts[p]);
        s.tangents.push_back(q);
        s.mean_curv.push_back(complex_structure(grad_theta));
        s.weights.push_back(report.volume_element[p] * cell * patch.multiplicity());
    }
    return s;
}

}  // namespace hslab
