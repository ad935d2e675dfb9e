#pragma once

#include <memory>
#include <vector>

#include "nehari/geometry.hpp"

namespace nehari {

/// Real-valued function on the masked grid, zero outside the mask
/// (discrete H^1_0 Dirichlet extension).
struct Field {
    std::shared_ptr<const GridSpec> grid;
    std::vector<double> values;

    Field() = default;
    explicit Field(std::shared_ptr<const GridSpec> g)
        : grid(std::move(g)), values(grid->n_mask(), 0.0) {}
    Field(std::shared_ptr<const GridSpec> g, std::vector<double> v)
        : grid(std::move(g)), values(std::move(v)) {
        if (values.size() != grid->n_mask())
            throw Error(ErrorCode::dimension_mismatch, "field length does not match mask size");
    }

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }

    bool same_grid(const Field& other) const { return grid.get() == other.grid.get(); }
};

/// Samples a pointwise function of the coordinates onto the mask.
Field sample_field(std::shared_ptr<const GridSpec> grid,
                   const std::function<double(const Point&)>& f);

/// Multilinear interpolation of a field at an arbitrary point, with
/// zero extension outside the mask / box. In strict mode a cell with
/// any unmasked corner evaluates to zero, so the interpolant never
/// extends beyond the mask hull (at the price of clipping the last
/// boundary ring).
double interpolate(const Field& u, const Point& x, bool strict = false);

} // namespace nehari
