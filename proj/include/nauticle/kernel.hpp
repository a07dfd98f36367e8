#pragma once

#include <string>
#include <vector>

#include "nauticle/tensor.hpp"

namespace nauticle {

enum class KernelFamily { Wendland };

/// Decoded smoothing-kernel keyword, e.g. "Wp52220": Wendland family, 5th
/// order, 2 dimensions; the trailing "220" digits are reserved by the naming
/// convention and must match the registered set.
struct KernelKeyword {
    std::string raw;
    KernelFamily family = KernelFamily::Wendland;
    int order = 5;
    int dimension = 2;
};

/// True if `raw` names a registered kernel.
bool is_kernel_keyword(const std::string& raw);

/// Decode or fail listing the registered keywords.
KernelKeyword decode_kernel_keyword(const std::string& raw);

const std::vector<std::string>& registered_kernel_keywords();

/// Quintic Wendland kernel with support radius 2h. The normalization alpha_D
/// uses the keyword's dimension, which may deliberately differ from the
/// domain dimension (surface problems embedded in 3D).
class Kernel {
public:
    Kernel(const KernelKeyword& keyword, double h);

    double h() const { return h_; }
    int dimension() const { return dim_; }

    /// W(d, h) = alpha_D (1 - q/2)^4 (2q + 1) for q = d/h <= 2, else 0.
    double value(double distance) const;

    /// dW/dq = -5 alpha_D q (1 - q/2)^3 for q <= 2, else 0.
    double dvalue_dq(double q) const;

    /// Gradient with respect to r_i for rel_pos = r_j - r_i; points along
    /// +rel_pos for the monotonically decreasing Wendland kernel. Zero-length
    /// rel_pos is an error (derivative operators skip the self pair).
    Tensor gradient(const Tensor& rel_pos) const;

private:
    double h_;
    int dim_;
    double alpha_;
};

}  // namespace nauticle
