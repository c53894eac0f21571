#pragma once

// Finite-difference geometry of Lagrangian gradient graphs {(x, Du(x))}.

#include "hslab/common.hpp"
#include "hslab/grid.hpp"
#include "hslab/spectral.hpp"

#include <functional>
#include <vector>

namespace hslab {

/// Potential u sampled on a uniform grid. Extents must be >= 5 per axis so
/// that third-derivative stencils leave a non-empty interior.
class GradientGraphPatch {
public:
    GradientGraphPatch() = default;
    GradientGraphPatch(Grid grid, std::vector<Real> u);

    int dim() const { return grid_.dim(); }
    const Grid& grid() const { return grid_; }
    const std::vector<Real>& values() const { return u_; }
    Real value(std::size_t flat) const { return u_[flat]; }

    /// Samples `potential` at the grid nodes.
    static GradientGraphPatch sample(const Grid& grid, const std::function<Real(const VectorN&)>& potential);

private:
    Grid grid_;
    std::vector<Real> u_;
};

/// Per-sample geometry. Fields are NaN where the producing stencil is not
/// fully inside the grid; `interior_mask` marks samples at least two nodes
/// away from every face, where all fields are defined. Integrals run over
/// the interior only, so the boundary ring is excluded from `volume`.
struct GeometryReport {
    Grid grid;
    std::vector<char> interior_mask;
    std::vector<MatrixN> metric;
    std::vector<VectorN> eigenvalues;
    std::vector<Real> phase;
    std::vector<Real> phase_residual;
    std::vector<Real> mean_curv_norm;
    std::vector<Real> sff_norm;
    std::vector<Real> volume_element;
    Real volume = 0;
    Real total_extrinsic = 0;

    std::size_t interior_count() const;
    Real max_abs_interior(const std::vector<Real>& field) const;
};

/// Squared norm g^{ia} g^{jb} g^{kc} T_ijk T_abc of a cubic form (row-major
/// n^3 storage) given the eigen-decomposition of g.
Real cubic_norm_squared(const std::vector<Real>& t, int n, const MatrixN& metric_basis, const VectorN& metric_eigs);

/// Central-difference Hessian at a node with margin >= 1.
MatrixN hessian_at(const GradientGraphPatch& patch, std::size_t flat);
/// Central-difference gradient at a node with margin >= 1.
VectorN gradient_at(const GradientGraphPatch& patch, std::size_t flat);

GeometryReport analyze(const GradientGraphPatch& patch, int threads = 1);

/// Size of max |Delta_g theta| produced by rounding the samples alone:
/// 10 eps max(1, max|u|) / h_min^4. Residuals below it carry no truncation
/// information.
Real phase_residual_roundoff(const GradientGraphPatch& patch);

struct GraphicalRadius {
    Real radius;      // r0 = pi/(12 C) cos(pi/12)
    Real ball_radius; // rho0 = pi/(12 C)
};

/// Radius of the tangent-plane ball over which a Lagrangian with |A| <= C is
/// a gradient graph with |D^2u| <= tan(pi/12).
GraphicalRadius graphical_radius(Real curvature_bound);

// ---------------------------------------------------------------------------
// Divergence-form Laplace-Beltrami stencil shared by the graph, immersion and
// solver code.

/// Coefficients of (1/sqrt g) d_a (sqrt g g^{ab} d_b f) at every node.
struct LaplaceBeltramiCoefficients {
    std::vector<MatrixN> flux;   // sqrt(det g) g^{-1}
    std::vector<Real> sqrt_det;  // sqrt(det g)
};

/// `difference(i, j)` returns f_j - f_i; periodic flags select wrap stencils.
/// Requires coefficients on the 1-neighbourhood of `flat` (incl. diagonals).
Real laplace_beltrami_at(const Grid& grid, const LaplaceBeltramiCoefficients& coeffs, std::size_t flat,
                         const std::function<Real(std::size_t, std::size_t)>& difference,
                         const std::array<bool, kMaxDim>& periodic = {});

/// Coefficient of f(flat) in sqrt(g)·(Laplace-Beltrami f)(flat).
Real laplace_beltrami_diagonal(const Grid& grid, const LaplaceBeltramiCoefficients& coeffs, std::size_t flat,
                               const std::array<bool, kMaxDim>& periodic = {});

}  // namespace hslab
