#pragma once

#include <string>
#include <vector>

#include "nauticle/tensor.hpp"

namespace nauticle {

/// Named per-particle storage. All fields of a workspace hold one value per
/// particle and share the particle count of the particle system.
struct Field {
    std::string name;
    std::vector<Tensor> values;

    int particle_count() const { return static_cast<int>(values.size()); }
};

struct Constant {
    std::string name;
    Tensor value;
};

struct Variable {
    std::string name;
    Tensor value;
};

}  // namespace nauticle
