#pragma once

// The one-dimensional case: closed plane curves, weighted rays, covering
// multiplicity and shrinking families.

#include "hslab/common.hpp"
#include "hslab/fields.hpp"

#include <vector>

namespace hslab {

/// Closed polyline in R^2 = C. The closing edge is implicit: the last vertex
/// connects to the first, which must not be repeated.
class CurveImmersion {
public:
    CurveImmersion() = default;
    explicit CurveImmersion(std::vector<Vector2> vertices, int multiplicity = 1);

    const std::vector<Vector2>& vertices() const { return vertices_; }
    int multiplicity() const { return multiplicity_; }
    std::size_t size() const { return vertices_.size(); }
    Real length() const;

    /// Regular polygon inscribed in the circle of given radius and centre.
    static CurveImmersion circle(Real radius, int samples, Vector2 center = Vector2::Zero(), int multiplicity = 1);
    /// Ellipse sampled uniformly in the angular parameter.
    static CurveImmersion ellipse(Real a, Real b, int samples);

private:
    std::vector<Vector2> vertices_;
    int multiplicity_ = 1;
};

struct CurveResidual {
    std::vector<Real> phase;     // tangent angle + pi/2, unwrapped
    std::vector<Real> residual;  // second arc-length difference of the phase
    Real max_residual = 0;
    /// max |residual| * (L / 2 pi)^2: dimensionless, so one threshold serves
    /// every scale.
    Real scaled_residual = 0;
    Real threshold = 0;
    Real length = 0;
    bool circle_like = false;
};

/// `tau_circle` is the threshold at 256 samples; it is scaled by (256/N)^2.
CurveResidual curve_phase_residual(const CurveImmersion& curve, Real tau_circle = 1e-3);

struct Ray {
    Vector2 direction;
    int multiplicity = 1;
};

struct RayConfiguration {
    std::vector<Ray> rays;
    Real truncation_radius = 1;
    void validate() const;
};

struct RayVariation {
    Real quadrature = 0;   // -sum m_i int_0^R div_gamma(J Df) ds
    Real closed_form = 0;  // <J Df(0), sum m_i eta_i>
};

/// First variation of the truncated ray varifold along X = J Df, with the
/// sign convention delta(X) = -int div X = int <H, X> (H includes the
/// singular part at the vertex).
RayVariation ray_first_variation(const RayConfiguration& config, const ScalarField& f);

struct MultiplicityResult {
    int multiplicity = 1;
    std::vector<Vector2> reduced;  // samples on [0, 1/m)
};

/// Largest m with gamma(t + 1/m) = gamma(t) on all samples (to 1e-6 of the
/// diameter). `samples` is gamma at t_j = j/M; only divisors of M are tested.
MultiplicityResult detect_multiplicity(const std::vector<Vector2>& samples, Real relative_tolerance = 1e-6);

struct CurveComponent {
    std::vector<Vector2> points;  // entry point, interior vertices, exit point
    Real parameter_begin = 0;     // in vertex units along the polyline
    Real parameter_end = 0;
    bool closed = false;          // whole curve inside the ball
};

/// Maximal parameter intervals of the polyline whose image lies in the open
/// ball. The count is the local sheet number at the ball.
std::vector<CurveComponent> split_components(const CurveImmersion& curve, const Vector2& center, Real radius);

struct ShrinkStep {
    Real radius = 0;
    Real length = 0;
    Real exact_length = 0;
    Real hausdorff_to_limit = 0;
    Real max_residual = 0;
    bool circle_like = false;
};

struct ConcentricStep {
    int k = 0;
    Real total_length = 0;
    Real exact_total_length = 0;  // 2 pi (1 + (1 + 1/k))
    Real hausdorff_to_unit_circle = 0;
};

struct ShrinkReport {
    std::vector<ShrinkStep> steps;
    std::vector<ConcentricStep> concentric;
    bool residuals_ok = true;
    bool lengths_decreasing = true;
};

ShrinkReport shrink_sequence_scenario(const std::vector<Real>& radii, const std::vector<int>& concentric_k = {},
                                      int samples = 4096, Real tau_circle = 1e-3);

}  // namespace hslab
