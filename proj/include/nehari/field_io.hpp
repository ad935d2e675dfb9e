#pragma once

#include <string>

#include "nehari/field.hpp"

namespace nehari {

/// CSV field dump. Header `nx,ny[,nz[,nw]],h,T`, then one
/// `i,j[,k[,l]],value` row per masked node in mask order. Values are
/// printed with 17 significant digits so the round trip is bit exact.
void write_field(const std::string& path, const Field& u);

/// Reads a dump back onto `grid`. Throws io_error for a malformed
/// header and dimension_mismatch when the header disagrees with the
/// grid or rows address unmasked nodes.
Field read_field(std::shared_ptr<const GridSpec> grid, const std::string& path);

} // namespace nehari
