#pragma once

#include <string>
#include <vector>

#include "nauticle/tensor.hpp"

namespace nauticle {

/// Read particle positions from a whitespace-separated ASCII file, one
/// particle per line with `dimension` columns. Ragged or non-numeric rows
/// report the line number; an empty file is an error.
std::vector<Tensor> read_points_file(const std::string& path, int dimension);

/// Axis-aligned rectilinear lattice: points at gpos + goffset + k*gip_dist,
/// floor(gsize/gip_dist)+1 points per axis.
std::vector<Tensor> generate_grid(const Tensor& gpos, const Tensor& gsize, const Tensor& goffset,
                                  const Tensor& gip_dist);

}  // namespace nauticle
