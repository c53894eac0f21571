#pragma once

// Geometry of sampled parametric immersions F: grid -> R^{2n} = C^n, with
// (x_1..x_n, y_1..y_n) <-> x + iy.

#include "hslab/common.hpp"
#include "hslab/graph_calculus.hpp"
#include "hslab/grid.hpp"

#include <complex>
#include <functional>
#include <vector>

namespace hslab {

class ImmersedPatch {
public:
    ImmersedPatch() = default;
    ImmersedPatch(Grid param_grid, std::array<bool, kMaxDim> periodic, std::vector<Vector2N> points,
                  int multiplicity = 1);

    int dim() const { return grid_.dim(); }
    const Grid& grid() const { return grid_; }
    const std::array<bool, kMaxDim>& periodic() const { return periodic_; }
    const std::vector<Vector2N>& points() const { return points_; }
    int multiplicity() const { return multiplicity_; }

    /// Samples `map` on a parameter grid. Periodic axes should span exactly
    /// one period with the endpoint omitted.
    static ImmersedPatch sample(const Grid& grid, std::array<bool, kMaxDim> periodic,
                                const std::function<Vector2N(const VectorN&)>& map, int multiplicity = 1);

    /// The gradient graph x -> (x, Du(x)) on the nodes where the central
    /// gradient exists.
    static ImmersedPatch from_gradient_graph(const GradientGraphPatch& patch);

private:
    Grid grid_;
    std::array<bool, kMaxDim> periodic_{};
    std::vector<Vector2N> points_;
    int multiplicity_ = 1;
};

struct ImmersionReport {
    Grid grid;
    std::array<bool, kMaxDim> periodic{};
    int multiplicity = 1;
    std::vector<char> interior_mask;
    std::vector<MatrixN> metric;
    std::vector<Real> lagrangian_defect;
    std::vector<Real> phase;  // unwrapped along grid lines from the origin
    std::vector<Real> phase_residual;
    std::vector<Real> mean_curv_norm;
    std::vector<Real> sff_norm;
    std::vector<Real> volume_element;
    Real volume = 0;
    Real total_extrinsic = 0;
    Real max_lagrangian_defect = 0;

    std::size_t interior_count() const;
    Real max_abs_interior(const std::vector<Real>& field) const;
};

struct ImmersionOptions {
    Real lagrangian_tolerance = 1e-6;  // on the normalised defect |w(F_a,F_b)|/(|F_a||F_b|)
    Real gram_tolerance = 1e-10;
    int threads = 1;
};

/// Columns are tangent vectors in R^{2n}. Returns arg det_C of the complex
/// n x n matrix with those columns, in (-pi, pi].
template <typename Derived>
Real complex_frame_phase(const Eigen::MatrixBase<Derived>& frame) {
    const Eigen::Index n = frame.cols();
    Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim> m(n, n);
    for (Eigen::Index c = 0; c < n; ++c)
        for (Eigen::Index k = 0; k < n; ++k) m(k, c) = {frame(k, c), frame(k + n, c)};
    return std::arg(m.determinant());
}

/// Normalised symplectic defect max_{a<b} |w(F_a, F_b)| / (|F_a||F_b|).
template <typename Derived>
Real lagrangian_defect(const Eigen::MatrixBase<Derived>& frame) {
    const Eigen::Index n = frame.cols();
    Real defect = 0;
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = a + 1; b < n; ++b) {
            const Real w = frame.col(a).head(n).dot(frame.col(b).tail(n)) - frame.col(a).tail(n).dot(frame.col(b).head(n));
            defect = std::max(defect, std::abs(w) / (frame.col(a).norm() * frame.col(b).norm()));
        }
    return defect;
}

/// Phase of a tangent frame, rejecting non-Lagrangian planes. For a
/// Lagrangian frame |det_C| = sqrt(det Gram) and the phase does not depend
/// on the frame up to orientation.
Real immersion_phase(const Eigen::Ref<const Eigen::MatrixXd>& frame, Real tolerance = 1e-6);

ImmersionReport analyze_immersion(const ImmersedPatch& patch, const ImmersionOptions& options = {});

/// Wraps an angle difference into (-pi, pi].
Real wrap_angle(Real delta);

}  // namespace hslab
