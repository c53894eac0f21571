#include "hslab/grid.hpp"

#include <algorithm>

namespace hslab {

Grid::Grid(VectorN origin, VectorN spacing, std::vector<int> shape)
    : origin_(std::move(origin)), spacing_(std::move(spacing)), shape_(std::move(shape)) {
    const int n = dim();
    if (n < 1 || n > kMaxDim) throw InvalidInput("grid dimension must be in 1..8");
    if (origin_.size() != n || spacing_.size() != n) throw InvalidInput("origin/spacing size does not match shape");
    for (int a = 0; a < n; ++a) {
        if (!(spacing_(a) > 0) || !std::isfinite(spacing_(a))) throw InvalidInput("grid spacing must be positive");
        if (!std::isfinite(origin_(a))) throw InvalidInput("grid origin must be finite");
        if (shape_[a] < 1) throw InvalidInput("grid extents must be positive");
    }
    strides_.assign(n, 1);
    for (int a = n - 2; a >= 0; --a) strides_[a] = strides_[a + 1] * static_cast<std::size_t>(shape_[a + 1]);
    size_ = strides_[0] * static_cast<std::size_t>(shape_[0]);
}

GridIndex Grid::unflatten(std::size_t flat) const {
    GridIndex idx{};
    for (int a = 0; a < dim(); ++a) {
        idx[a] = static_cast<int>(flat / strides_[a]);
        flat %= strides_[a];
    }
    return idx;
}

std::size_t Grid::flatten(const GridIndex& index) const {
    std::size_t flat = 0;
    for (int a = 0; a < dim(); ++a) flat += static_cast<std::size_t>(index[a]) * strides_[a];
    return flat;
}

VectorN Grid::coordinate(const GridIndex& index) const {
    VectorN x(dim());
    for (int a = 0; a < dim(); ++a) x(a) = origin_(a) + spacing_(a) * index[a];
    return x;
}

VectorN Grid::coordinate(std::size_t flat) const { return coordinate(unflatten(flat)); }

int Grid::margin(std::size_t flat, const std::array<bool, kMaxDim>& periodic) const {
    const GridIndex idx = unflatten(flat);
    int m = std::numeric_limits<int>::max();
    for (int a = 0; a < dim(); ++a) {
        if (periodic[a]) continue;
        m = std::min({m, idx[a], shape_[a] - 1 - idx[a]});
    }
    return m;
}

std::size_t Grid::shifted(std::size_t flat, int axis, int offset, bool periodic) const {
    const int i = static_cast<int>((flat / strides_[axis]) % static_cast<std::size_t>(shape_[axis]));
    int j = i + offset;
    if (periodic) {
        j %= shape_[axis];
        if (j < 0) j += shape_[axis];
    }
    return flat + static_cast<std::ptrdiff_t>(j - i) * static_cast<std::ptrdiff_t>(strides_[axis]);
}

Real Grid::cell_volume() const { return spacing_.prod(); }

VectorN Grid::center() const {
    VectorN c(dim());
    for (int a = 0; a < dim(); ++a) c(a) = origin_(a) + 0.5 * spacing_(a) * (shape_[a] - 1);
    return c;
}

}  // namespace hslab
