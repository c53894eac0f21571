#pragma once

// Smooth scalar test fields on R^d with closed-form gradient and Hessian,
// used as Hamiltonian generators f in first-variation checks (X = J Df).

#include "hslab/common.hpp"

#include <memory>
#include <random>

namespace hslab {

struct FieldJet {
    Real value = 0;
    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;
};

class ScalarField {
public:
    virtual ~ScalarField() = default;
    virtual FieldJet eval(const Eigen::VectorXd& x) const = 0;
    /// Radius of a closed ball containing the support, or +inf.
    virtual Real support_radius() const { return std::numeric_limits<Real>::infinity(); }
    virtual Eigen::VectorXd support_center(int dim) const { return Eigen::VectorXd::Zero(dim); }
};

using FieldPtr = std::shared_ptr<const ScalarField>;

/// amplitude * exp(-|x - c|^2 / (2 sigma^2))
FieldPtr gaussian_field(Eigen::VectorXd center, Real sigma, Real amplitude = 1);
/// <a, x> + b
FieldPtr affine_field(Eigen::VectorXd a, Real b = 0);
/// exp(1 - 1/(1 - |x-c|^2/R^2)) inside the ball, 0 outside; C^infinity with
/// compact support.
FieldPtr compact_bump(Eigen::VectorXd center, Real radius);
FieldPtr product(FieldPtr f, FieldPtr g);
FieldPtr sum(FieldPtr f, FieldPtr g);
FieldPtr scaled(FieldPtr f, Real c);

/// A Gaussian times an affine factor, cut off by a compact bump centred at
/// `support_center` with radius `support_radius`. Parameters drawn from rng.
FieldPtr random_bump_field(std::mt19937_64& rng, const Eigen::VectorXd& support_center, Real support_radius);

}  // namespace hslab
