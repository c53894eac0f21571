#include "hslab/interpolation.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace hslab {

namespace {

constexpr int kMaxStencil = 8;

struct AxisWeights {
    int start = 0;
    std::array<Real, kMaxStencil> w0{}, w1{}, w2{};
};

// Lagrange basis on nodes 0..m-1 at local coordinate t, with derivatives.
AxisWeights axis_weights(Real t, int extent, int m) {
    AxisWeights aw;
    int start = static_cast<int>(std::floor(t)) - (m - 1) / 2;
    start = std::clamp(start, 0, extent - m);
    aw.start = start;
    const Real s = t - start;
    for (int j = 0; j < m; ++j) {
        Real denom = 1;
        for (int k = 0; k < m; ++k)
            if (k != j) denom *= j - k;
        Real p0 = 1, p1 = 0, p2 = 0;
        for (int k = 0; k < m; ++k) {
            if (k == j) continue;
            const Real f = s - k;
            p2 = p2 * f + 2 * p1;
            p1 = p1 * f + p0;
            p0 *= f;
        }
        aw.w0[j] = p0 / denom;
        aw.w1[j] = p1 / denom;
        aw.w2[j] = p2 / denom;
    }
    return aw;
}

}  // namespace

LagrangeInterpolator::LagrangeInterpolator(const Grid& grid, const std::vector<Real>& values, int degree)
    : grid_(grid), values_(values), degree_(degree) {
    if (degree < 1 || degree + 1 > kMaxStencil) throw DomainError("interpolation degree must be in 1..7");
    if (values.size() != grid.size()) throw InvalidInput("value count does not match grid");
    for (int a = 0; a < grid.dim(); ++a)
        if (grid.extent(a) < degree + 1) throw InvalidInput("grid too small for the interpolation stencil");
}

bool LagrangeInterpolator::contains(const VectorN& x, Real slack) const {
    for (int a = 0; a < grid_.dim(); ++a) {
        const Real t = (x(a) - grid_.origin()(a)) / grid_.spacing()(a);
        if (t < -slack || t > grid_.extent(a) - 1 + slack) return false;
    }
    return true;
}

InterpolatedJet LagrangeInterpolator::eval(const VectorN& x) const {
    const int n = grid_.dim();
    const int m = degree_ + 1;
    std::array<AxisWeights, kMaxDim> aw;
    for (int a = 0; a < n; ++a)
        aw[a] = axis_weights((x(a) - grid_.origin()(a)) / grid_.spacing()(a), grid_.extent(a), m);

    InterpolatedJet jet;
    jet.grad = VectorN::Zero(n);
    jet.hess = MatrixN::Zero(n, n);
    const auto& u = values_;
    GridIndex local{};
    std::size_t total = 1;
    for (int a = 0; a < n; ++a) total *= static_cast<std::size_t>(m);
    for (std::size_t c = 0; c < total; ++c) {
        std::size_t rem = c;
        GridIndex idx{};
        for (int a = n - 1; a >= 0; --a) {
            local[a] = static_cast<int>(rem % static_cast<std::size_t>(m));
            rem /= static_cast<std::size_t>(m);
            idx[a] = aw[a].start + local[a];
        }
        const Real value = u[grid_.flatten(idx)];
        Real w = 1;
        for (int a = 0; a < n; ++a) w *= aw[a].w0[local[a]];
        jet.value += w * value;
        for (int a = 0; a < n; ++a) {
            Real ga = aw[a].w1[local[a]];
            Real haa = aw[a].w2[local[a]];
            for (int b = 0; b < n; ++b) {
                if (b == a) continue;
                ga *= aw[b].w0[local[b]];
                haa *= aw[b].w0[local[b]];
            }
            jet.grad(a) += ga * value;
            jet.hess(a, a) += haa * value;
            for (int b = a + 1; b < n; ++b) {
                Real hab = aw[a].w1[local[a]] * aw[b].w1[local[b]];
                for (int d = 0; d < n; ++d)
                    if (d != a && d != b) hab *= aw[d].w0[local[d]];
                jet.hess(a, b) += hab * value;
            }
        }
    }
    for (int a = 0; a < n; ++a) {
        const Real ha = grid_.spacing()(a);
        jet.grad(a) /= ha;
        for (int b = a; b < n; ++b) {
            jet.hess(a, b) /= ha * grid_.spacing()(b);
            jet.hess(b, a) = jet.hess(a, b);
        }
    }
    return jet;
}

}  // namespace hslab
