#pragma once

#include "hslab/common.hpp"

#include <cmath>
#include <utility>
#include <vector>

namespace hslab {

/// Gauss-Legendre nodes and weights on [-1, 1].
inline std::pair<std::vector<Real>, std::vector<Real>> gauss_legendre(int order) {
    std::vector<Real> x(order), w(order);
    for (int i = 0; i < (order + 1) / 2; ++i) {
        Real z = std::cos(kPi * (i + 0.75) / (order + 0.5));
        Real dp = 0;
        for (int it = 0; it < 100; ++it) {
            Real p0 = 1, p1 = 0;
            for (int k = 1; k <= order; ++k) {
                const Real p2 = p1;
                p1 = p0;
                p0 = ((2 * k - 1) * z * p1 - (k - 1) * p2) / k;
            }
            dp = order * (z * p0 - p1) / (z * z - 1);
            const Real dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[order - 1 - i] = z;
        w[i] = w[order - 1 - i] = 2 / ((1 - z * z) * dp * dp);
    }
    return {x, w};
}

/// Composite Gauss-Legendre rule on [a, b].
template <typename F>
Real integrate(F&& f, Real a, Real b, int panels = 256, int order = 16) {
    static thread_local std::pair<std::vector<Real>, std::vector<Real>> rule;
    if (static_cast<int>(rule.first.size()) != order) rule = gauss_legendre(order);
    const Real h = (b - a) / panels;
    Real total = 0;
    for (int p = 0; p < panels; ++p) {
        const Real mid = a + (p + 0.5) * h;
        Real acc = 0;
        for (int k = 0; k < order; ++k) acc += rule.second[k] * f(mid + 0.5 * h * rule.first[k]);
        total += 0.5 * h * acc;
    }
    return total;
}

}  // namespace hslab
