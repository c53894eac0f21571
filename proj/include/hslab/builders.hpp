#pragma once

// Closed-form test objects shared by the CLI scenarios and the tests.

#include "hslab/common.hpp"
#include "hslab/graph_calculus.hpp"
#include "hslab/immersion_calculus.hpp"

#include <random>
#include <string>
#include <vector>

namespace hslab {

/// Cube [lo, hi]^n with `samples` nodes per axis.
Grid box_grid(int n, Real lo, Real hi, int samples);

/// Random symmetric n x n matrix with eigenvalues uniform in [-bound, bound].
MatrixN random_symmetric(std::mt19937_64& rng, int n, Real bound);
/// Rounds every entry to a multiple of 2^-bits. On a dyadic grid the samples
/// of the resulting quadratic are then exact doubles.
MatrixN dyadic_round(const MatrixN& q, int bits = 20);

GradientGraphPatch flat_patch(int n, int samples, Real lo = -0.5, Real hi = 0.5);
/// u = x^T Q x / 2.
GradientGraphPatch quadratic_patch(const MatrixN& Q, int samples, Real lo = -0.5, Real hi = 0.5);
/// u = Re((x1 + i x2)^3) / 6 on [-1/2, 1/2]^2 with spacing h (1/h must be an integer).
GradientGraphPatch harmonic_cubic_patch(Real h);
Real harmonic_cubic(const VectorN& x);
/// u = a Re(e^{x1 + i x2}) on [-1/2, 1/2]^2: harmonic, hence theta = 0 in
/// the continuum, but not reproduced exactly by second differences.
GradientGraphPatch harmonic_exponential_patch(Real h, Real amplitude = 0.3);
/// u = delta exp(-|x|^2 / (2 w^2)) on [-1/2, 1/2]^n.
GradientGraphPatch gaussian_bump_patch(int n, int samples, Real delta, Real width);

struct NamedPatch {
    std::string name;
    GradientGraphPatch patch;
};

/// The fixed set of gradient graphs the CLI knows by name.
std::vector<NamedPatch> builtin_patches();

/// (r1 e^{i phi1}, ..., rn e^{i phi_n}) on a periodic parameter grid with
/// m samples per axis; n = radii.size().
ImmersedPatch product_torus_patch(const std::vector<Real>& radii, int m, int multiplicity = 1);

}  // namespace hslab
