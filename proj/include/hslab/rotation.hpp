#pragma once

// Lewy-Yuan rotation of a gradient graph by e^{-i alpha} in each complex
// factor: xbar = cos(a) x - sin(a) Du, ybar = sin(a) x + cos(a) Du. With this
// orientation an eigenvalue lambda of D^2u becomes tan(arctan(lambda) + a).

#include "hslab/common.hpp"
#include "hslab/graph_calculus.hpp"

namespace hslab {

struct RotationOptions {
    Real angle = kPi / 6;
    /// Samples per axis of the output grid; 0 keeps the input extents.
    int samples = 0;
    int interpolation_degree = 5;
};

struct RotationResult {
    Real angle = 0;
    GradientGraphPatch rotated_patch;
    VectorN center;                // xbar of the input patch centre
    Real jacobian_min = 0;         // min det(dxbar/dx) over input nodes
    Real jacobian_lower = 0;       // min eigenvalue of dxbar/dx over input nodes
    Real eigen_window_min = 0;     // rotated Hessian eigenvalues, output nodes with margin >= 1
    Real eigen_window_max = 0;
    Real input_max_abs_eigenvalue = 0;
    Real input_radius = 0;         // r0: inscribed radius of the input box about its centre
    Real guaranteed_radius = 0;    // (cos a - sin a * max(tan(pi/12), |D^2u|)) r0
    Real gradient_check_error = 0; // max |D ubar(xbar) - ybar| at output nodes with margin >= 1
};

/// Rotates the graph and resamples ubar on a cube inscribed in the ball of
/// radius `guaranteed_radius` about `center`. For every output node the
/// preimage x with xbar(x) = p is found by Newton's method on a Lagrange
/// interpolant of u, and ubar(p) follows in closed form.
RotationResult lewy_yuan_rotate(const GradientGraphPatch& patch, const RotationOptions& options = {});

struct EigenWindowCheck {
    bool inside = false;
    Real lower_margin = 0;  // min eigenvalue - tan(pi/12)
    Real upper_margin = 0;  // tan(pi/3) - max eigenvalue
};

/// Requires a rotation by pi/6 of an input with |D^2u| <= tan(pi/12).
EigenWindowCheck eigen_window_check(const RotationResult& result, Real tolerance = 1e-9);

}  // namespace hslab
