#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hslab {

using Real = double;

constexpr int kMaxDim = 8;

// Small dense types with a compile-time capacity so per-sample work stays
// off the heap.
template <typename Scalar>
using SmallMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;
template <typename Scalar>
using SmallVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
template <typename Scalar>
using AmbientVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, 0, 2 * kMaxDim, 1>;

using MatrixN = SmallMatrix<Real>;
using VectorN = SmallVector<Real>;
using Vector2N = AmbientVector<Real>;
using Vector2 = Eigen::Vector2d;

constexpr Real kPi = std::numbers::pi_v<Real>;

// ---------------------------------------------------------------------------
// Errors. Every failure mode named by an operation contract has its own type
// so callers (and the CLI exit-code mapping) can tell them apart.

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input violates a structural precondition (shape, sizes, finiteness).
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A scalar argument is outside the operation's domain (e.g. C <= 0).
class DomainError : public Error {
public:
    using Error::Error;
};

class SymmetryError : public Error {
public:
    SymmetryError(Real asymmetry)
        : Error("matrix not symmetric (max |a_ij - a_ji| = " + std::to_string(asymmetry) + ")"),
          asymmetry_(asymmetry) {}
    Real asymmetry() const { return asymmetry_; }

private:
    Real asymmetry_;
};

class MetricDegeneracyError : public Error {
public:
    MetricDegeneracyError(std::size_t sample, Real min_eigenvalue)
        : Error("induced metric not positive definite at sample " + std::to_string(sample) +
                " (min eigenvalue " + std::to_string(min_eigenvalue) + ")"),
          sample_(sample) {}
    std::size_t sample() const { return sample_; }

private:
    std::size_t sample_;
};

class LagrangianDefectError : public Error {
public:
    LagrangianDefectError(Real defect, Real tolerance)
        : Error("frame is not Lagrangian: defect " + std::to_string(defect) + " >= tolerance " +
                std::to_string(tolerance)),
          defect_(defect) {}
    Real defect() const { return defect_; }

private:
    Real defect_;
};

class RankDeficiencyError : public Error {
public:
    RankDeficiencyError(std::size_t sample, Real gram_det)
        : Error("tangent frame rank deficient at sample " + std::to_string(sample) +
                " (Gram determinant " + std::to_string(gram_det) + ")"),
          sample_(sample) {}
    std::size_t sample() const { return sample_; }

private:
    std::size_t sample_;
};

class UnwrapError : public Error {
public:
    using Error::Error;
};

class DegenerateCurveError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

class SupportViolationError : public Error {
public:
    using Error::Error;
};

class FoldError : public Error {
public:
    explicit FoldError(Real jacobian)
        : Error("rotation folds the patch (min Jacobian determinant " + std::to_string(jacobian) + ")") {}
};

class CoverageError : public Error {
public:
    CoverageError(Real required, Real achieved)
        : Error("rotated image does not cover the guaranteed ball: required radius " +
                std::to_string(required) + ", achieved " + std::to_string(achieved)),
          achieved_(achieved) {}
    Real achieved() const { return achieved_; }

private:
    Real achieved_;
};

class WindowError : public Error {
public:
    using Error::Error;
};

class ResolutionError : public Error {
public:
    using Error::Error;
};

class FrameError : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------

/// Volume of the unit ball in R^n.
inline Real unit_ball_volume(int n) {
    return std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

/// Multiplication by i on C^n, with R^{2n} laid out as (x_1..x_n, y_1..y_n).
template <typename Derived>
AmbientVector<typename Derived::Scalar> complex_structure(const Eigen::MatrixBase<Derived>& v) {
    const Eigen::Index n = v.size() / 2;
    AmbientVector<typename Derived::Scalar> out(v.size());
    out.head(n) = -v.tail(n);
    out.tail(n) = v.head(n);
    return out;
}

}  // namespace hslab
