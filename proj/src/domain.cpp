#include "nauticle/domain.hpp"

#include <algorithm>

#include "nauticle/error.hpp"
#include "nauticle/format.hpp"

namespace nauticle {

const char* boundary_name(BoundaryKind k) {
    switch (k) {
        case BoundaryKind::Periodic: return "periodic";
        case BoundaryKind::Symmetric: return "symmetric";
        case BoundaryKind::Cutoff: return "cutoff";
    }
    return "?";
}

BoundaryKind boundary_from_name(const std::string& name) {
    if (name == "periodic") return BoundaryKind::Periodic;
    if (name == "symmetric") return BoundaryKind::Symmetric;
    if (name == "cutoff" || name == "0") return BoundaryKind::Cutoff;
    throw parse_error("unknown boundary kind '", name,
                      "'; expected periodic, symmetric or cutoff (alias 0)");
}

Domain::Domain(int dimension, std::array<int, 3> min_cells, std::array<int, 3> max_cells,
               std::array<double, 3> cell_size, std::array<BoundaryKind, 3> boundary)
    : dim_(dimension),
      min_cells_(min_cells),
      max_cells_(max_cells),
      cell_size_(cell_size),
      boundary_(boundary) {
    if (dim_ < 1 || dim_ > 3) throw assembly_error("domain dimension must be 1, 2 or 3");
    for (int a = 0; a < dim_; ++a) {
        if (max_cells_[a] <= min_cells_[a])
            throw assembly_error("domain axis ", a, ": maximum cell count (", max_cells_[a],
                                 ") must exceed minimum (", min_cells_[a], ")");
        if (!(cell_size_[a] > 0.0))
            throw assembly_error("domain axis ", a, ": cell size must be positive");
    }
    for (int a = dim_; a < 3; ++a) {
        min_cells_[a] = 0;
        max_cells_[a] = 1;
        cell_size_[a] = 1.0;
        boundary_[a] = BoundaryKind::Cutoff;
    }
}

double Domain::min_cell_size() const {
    double m = cell_size_[0];
    for (int a = 1; a < dim_; ++a) m = std::min(m, cell_size_[a]);
    return m;
}

Tensor Domain::cell_size_tensor() const {
    Tensor t = Tensor::zeros(dim_, 1);
    for (int a = 0; a < dim_; ++a) t(a) = cell_size_[a];
    return t;
}

bool Domain::contains(const Tensor& pos) const {
    for (int a = 0; a < dim_; ++a)
        if (pos(a) < lo(a) || pos(a) > hi(a)) return false;
    return true;
}

std::string Domain::describe() const {
    std::string s = "cell_size=";
    auto join = [&](auto value_of) {
        std::string out;
        for (int a = 0; a < dim_; ++a) {
            if (a > 0) out += '|';
            out += value_of(a);
        }
        return out;
    };
    s += join([&](int a) { return format_double(cell_size_[a]); });
    s += ";minimum=" + join([&](int a) { return std::to_string(min_cells_[a]); });
    s += ";maximum=" + join([&](int a) { return std::to_string(max_cells_[a]); });
    s += ";boundary=" + join([&](int a) { return std::string(boundary_name(boundary_[a])); });
    return s;
}

}  // namespace nauticle
