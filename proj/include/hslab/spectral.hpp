#pragma once

// Pointwise kernels on symmetric n x n matrices: cyclic Jacobi eigensolver,
// the gradient-graph metric and the Lagrangian phase.

#include "hslab/common.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace hslab {

template <typename Scalar>
struct SymmetricEigen {
    SmallVector<Scalar> values;   // ascending
    SmallMatrix<Scalar> vectors;  // columns
};

template <typename Derived>
typename Derived::Scalar asymmetry(const Eigen::MatrixBase<Derived>& a) {
    return (a - a.transpose()).cwiseAbs().maxCoeff();
}

template <typename Derived>
void require_symmetric(const Eigen::MatrixBase<Derived>& a, typename Derived::Scalar tol = 1e-9) {
    using std::abs;
    if (a.rows() != a.cols()) throw InvalidInput("matrix is not square");
    if (a.rows() < 1 || a.rows() > kMaxDim) throw InvalidInput("matrix dimension outside 1..8");
    const auto scale = std::max<typename Derived::Scalar>(1, a.cwiseAbs().maxCoeff());
    const auto asym = asymmetry(a);
    if (!(asym <= tol * scale)) throw SymmetryError(static_cast<Real>(asym));
}

/// Cyclic Jacobi iteration. Stops when the off-diagonal Frobenius norm drops
/// below `tol` relative to the matrix norm.
template <typename Derived>
SymmetricEigen<typename Derived::Scalar> jacobi_eigen(const Eigen::MatrixBase<Derived>& input,
                                                      typename Derived::Scalar tol = 1e-12) {
    using Scalar = typename Derived::Scalar;
    using std::abs;
    using std::sqrt;
    const Eigen::Index n = input.rows();
    SmallMatrix<Scalar> a = 0.5 * (input + input.transpose());
    SmallMatrix<Scalar> v = SmallMatrix<Scalar>::Identity(n, n);

    const Scalar scale = std::max<Scalar>(a.norm(), std::numeric_limits<Scalar>::min());
    for (int sweep = 0; sweep < 100; ++sweep) {
        Scalar off = 0;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) off += 2 * a(p, q) * a(p, q);
        if (sqrt(off) <= tol * scale) break;

        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                if (a(p, q) == Scalar(0)) continue;
                const Scalar tau = (a(q, q) - a(p, p)) / (2 * a(p, q));
                const Scalar t = (tau >= 0 ? Scalar(1) : Scalar(-1)) / (abs(tau) + sqrt(1 + tau * tau));
                const Scalar c = 1 / sqrt(1 + t * t);
                const Scalar s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const Scalar akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const Scalar apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const Scalar vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    SymmetricEigen<Scalar> out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    SmallVector<Scalar> diag = a.diagonal();
    std::array<Eigen::Index, kMaxDim> order{};
    for (Eigen::Index i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.begin() + n, [&](Eigen::Index l, Eigen::Index r) { return diag(l) < diag(r); });
    for (Eigen::Index i = 0; i < n; ++i) {
        out.values(i) = diag(order[i]);
        out.vectors.col(i) = v.col(order[i]);
    }
    return out;
}

/// Pullback of the Euclidean metric to the gradient graph: g = I + (D^2u)^2.
template <typename Derived>
SmallMatrix<typename Derived::Scalar> induced_metric(const Eigen::MatrixBase<Derived>& hessian) {
    require_symmetric(hessian);
    using Scalar = typename Derived::Scalar;
    const Eigen::Index n = hessian.rows();
    SmallMatrix<Scalar> g = SmallMatrix<Scalar>::Identity(n, n) + hessian * hessian;
    return 0.5 * (g + g.transpose());
}

/// Sum of arctan over the Hessian eigenvalues; lies in (-n pi/2, n pi/2).
template <typename Derived>
typename Derived::Scalar lagrangian_phase(const Eigen::MatrixBase<Derived>& hessian) {
    require_symmetric(hessian);
    using std::atan;
    const auto eig = jacobi_eigen(hessian);
    typename Derived::Scalar theta = 0;
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) theta += atan(eig.values(i));
    return theta;
}

/// Derivative of the phase operator F(S) = tr arctan(S): dF(S)[T] = tr(M T)
/// with M = (I + S^2)^{-1}. Exact also at repeated eigenvalues since F is a
/// trace function.
template <typename Derived>
SmallMatrix<typename Derived::Scalar> phase_operator_gradient(const Eigen::MatrixBase<Derived>& hessian) {
    using Scalar = typename Derived::Scalar;
    const auto eig = jacobi_eigen(hessian);
    const Eigen::Index n = hessian.rows();
    SmallMatrix<Scalar> m = SmallMatrix<Scalar>::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Scalar lam = eig.values(i);
        m += eig.vectors.col(i) * eig.vectors.col(i).transpose() / (1 + lam * lam);
    }
    return m;
}

}  // namespace hslab
