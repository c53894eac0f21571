#pragma once

// Weighted point clouds with tangent planes and mean-curvature vectors in
// R^{2n} = C^n, the discrete stand-in for an integral varifold.

#include "hslab/common.hpp"
#include "hslab/immersion_calculus.hpp"

#include <vector>

namespace hslab {

struct VarifoldSample {
    int dim = 0;                          // n; points live in R^{2n}
    std::vector<Vector2N> points;
    std::vector<Real> weights;            // quadrature weight x multiplicity
    std::vector<Eigen::MatrixXd> tangents;  // 2n x n, orthonormal columns
    std::vector<Vector2N> mean_curv;

    std::size_t size() const { return points.size(); }
    /// Throws InvalidInput on shape or weight problems and FrameError when a
    /// tangent frame is not orthonormal to `frame_tolerance`.
    void validate(Real frame_tolerance = 1e-10) const;
    Real mass() const;
    /// Length scale below which the sample does not resolve balls:
    /// max weight^{1/n}, the side of the largest quadrature cell.
    Real resolution_scale() const;
};

/// Circle of radius r about the origin of C, H = -x / r^2.
VarifoldSample circle_varifold(Real radius, int samples, int multiplicity = 1);
/// Ellipse x = a cos t, y = b sin t with exact curvature vectors.
VarifoldSample ellipse_varifold(Real a, Real b, int samples);
/// Product torus S^1(r1) x S^1(r2) in C^2.
VarifoldSample torus_varifold(Real r1, Real r2, int samples_per_axis);
/// Flat n-plane spanned by the orthonormal columns of `frame` (2n x n)
/// through `center`, sampled on the cell centres of a cube of half-width
/// `half_width` with spacing `spacing`. H = 0.
VarifoldSample plane_varifold(const Eigen::MatrixXd& frame, Real half_width, Real spacing,
                              const Vector2N& center);
/// R^n x {0} through the origin.
VarifoldSample real_plane_varifold(int n, Real half_width, Real spacing);
/// Union of two samples of the same dimension.
VarifoldSample merge(const VarifoldSample& a, const VarifoldSample& b);
/// Sample of an analysed immersion: interior nodes, weights sqrt(det g) h^n
/// times multiplicity, Gram-Schmidt tangent frames and H = J grad(theta).
VarifoldSample varifold_from_immersion(const ImmersedPatch& patch, const ImmersionReport& report);

}  // namespace hslab
