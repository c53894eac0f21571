#pragma once

#include "hslab/common.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace hslab {

using GridIndex = std::array<int, kMaxDim>;

/// Uniform tensor grid over a box in R^n. Samples are stored row-major
/// (last axis fastest).
class Grid {
public:
    Grid() = default;
    Grid(VectorN origin, VectorN spacing, std::vector<int> shape);

    int dim() const { return static_cast<int>(shape_.size()); }
    const VectorN& origin() const { return origin_; }
    const VectorN& spacing() const { return spacing_; }
    const std::vector<int>& shape() const { return shape_; }
    int extent(int axis) const { return shape_[axis]; }
    std::size_t size() const { return size_; }
    std::size_t stride(int axis) const { return strides_[axis]; }

    GridIndex unflatten(std::size_t flat) const;
    std::size_t flatten(const GridIndex& index) const;
    VectorN coordinate(std::size_t flat) const;
    VectorN coordinate(const GridIndex& index) const;

    /// Distance (in samples) from the nearest non-periodic face; periodic
    /// axes never limit the margin.
    int margin(std::size_t flat, const std::array<bool, kMaxDim>& periodic = {}) const;

    /// Flat index of the sample displaced by `offset` along `axis`, wrapping
    /// when the axis is periodic. Caller guarantees the result is in range
    /// for non-periodic axes.
    std::size_t shifted(std::size_t flat, int axis, int offset, bool periodic = false) const;

    /// Product of the spacings.
    Real cell_volume() const;
    VectorN center() const;

private:
    VectorN origin_, spacing_;
    std::vector<int> shape_;
    std::vector<std::size_t> strides_;
    std::size_t size_ = 0;
};

}  // namespace hslab
