#pragma once

#include <array>
#include <string>

#include "nauticle/tensor.hpp"

namespace nauticle {

enum class BoundaryKind { Periodic, Symmetric, Cutoff };

const char* boundary_name(BoundaryKind k);
BoundaryKind boundary_from_name(const std::string& name);

/// Axis-aligned box domain. The case-file schema gives `minimum` and
/// `maximum` as integer cell counts per axis; the physical extent of axis a
/// is [min_cells * cell_size, max_cells * cell_size). Opposing faces share
/// one boundary kind per axis.
class Domain {
public:
    Domain() = default;
    Domain(int dimension, std::array<int, 3> min_cells, std::array<int, 3> max_cells,
           std::array<double, 3> cell_size, std::array<BoundaryKind, 3> boundary);

    int dimension() const { return dim_; }
    int cells(int axis) const { return max_cells_[axis] - min_cells_[axis]; }
    double cell_size(int axis) const { return cell_size_[axis]; }
    double lo(int axis) const { return min_cells_[axis] * cell_size_[axis]; }
    double hi(int axis) const { return max_cells_[axis] * cell_size_[axis]; }
    double extent(int axis) const { return hi(axis) - lo(axis); }
    BoundaryKind boundary(int axis) const { return boundary_[axis]; }

    double min_cell_size() const;
    Tensor cell_size_tensor() const;

    bool contains(const Tensor& pos) const;

    std::string describe() const;

private:
    int dim_ = 1;
    std::array<int, 3> min_cells_{0, 0, 0};
    std::array<int, 3> max_cells_{1, 1, 1};
    std::array<double, 3> cell_size_{1.0, 1.0, 1.0};
    std::array<BoundaryKind, 3> boundary_{BoundaryKind::Cutoff, BoundaryKind::Cutoff,
                                          BoundaryKind::Cutoff};
};

}  // namespace nauticle
