#include "nauticle/kernel.hpp"

#include <cmath>
#include <numbers>

namespace nauticle {

namespace {
const std::vector<std::string> kKeywords = {"Wp51220", "Wp52220", "Wp53220"};
}

bool is_kernel_keyword(const std::string& raw) {
    for (const auto& k : kKeywords)
        if (k == raw) return true;
    return false;
}

const std::vector<std::string>& registered_kernel_keywords() { return kKeywords; }

KernelKeyword decode_kernel_keyword(const std::string& raw) {
    if (!is_kernel_keyword(raw)) {
        std::string known;
        for (const auto& k : kKeywords) {
            if (!known.empty()) known += ", ";
            known += k;
        }
        throw parse_error("unknown kernel keyword '", raw, "'; registered keywords: ", known);
    }
    KernelKeyword kw;
    kw.raw = raw;
    kw.family = KernelFamily::Wendland;
    kw.order = raw[2] - '0';
    kw.dimension = raw[3] - '0';
    return kw;
}

Kernel::Kernel(const KernelKeyword& keyword, double h) : h_(h), dim_(keyword.dimension) {
    if (!(h > 0.0)) throw runtime_error("kernel '", keyword.raw, "': nonpositive smoothing radius");
    const double pi = std::numbers::pi;
    switch (dim_) {
        case 1: alpha_ = 3.0 / (4.0 * h_); break;
        case 2: alpha_ = 7.0 / (4.0 * pi * h_ * h_); break;
        case 3: alpha_ = 21.0 / (16.0 * pi * h_ * h_ * h_); break;
        default: throw runtime_error("kernel '", keyword.raw, "': unsupported dimension ", dim_);
    }
}

double Kernel::value(double distance) const {
    double q = distance / h_;
    if (q >= 2.0) return 0.0;
    double t = 1.0 - 0.5 * q;
    double t2 = t * t;
    return alpha_ * t2 * t2 * (2.0 * q + 1.0);
}

double Kernel::dvalue_dq(double q) const {
    if (q >= 2.0) return 0.0;
    double t = 1.0 - 0.5 * q;
    return -5.0 * alpha_ * q * t * t * t;
}

Tensor Kernel::gradient(const Tensor& rel_pos) const {
    double d = rel_pos.mat().norm();
    if (d <= 0.0) throw runtime_error("kernel gradient undefined for zero-length pair vector");
    double q = d / h_;
    if (q >= 2.0) return Tensor::zeros(rel_pos.rows(), 1);
    double scale = -dvalue_dq(q) / (h_ * d);  // positive; gradient points along rel_pos
    return Tensor(Tensor::Storage(rel_pos.mat() * scale));
}

}  // namespace nauticle
