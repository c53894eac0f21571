#pragma once

// Tensor-product Lagrange interpolation of grid data, with the first and
// second derivatives of the interpolant.

#include "hslab/common.hpp"
#include "hslab/grid.hpp"

#include <vector>

namespace hslab {

struct InterpolatedJet {
    Real value = 0;
    VectorN grad;
    MatrixN hess;
};

/// Piecewise tensor Lagrange interpolant of degree `degree` (stencil of
/// degree + 1 nodes per axis, centred on the containing cell and shifted
/// inwards near faces). Polynomials of degree <= `degree` per axis are
/// reproduced exactly.
class LagrangeInterpolator {
public:
    LagrangeInterpolator(const Grid& grid, const std::vector<Real>& values, int degree = 5);

    InterpolatedJet eval(const VectorN& x) const;
    /// True when x lies in the closed grid box, enlarged by `slack` spacings.
    bool contains(const VectorN& x, Real slack = 0) const;
    const Grid& grid() const { return grid_; }

private:
    Grid grid_;
    std::vector<Real> values_;
    int degree_;
};

}  // namespace hslab
