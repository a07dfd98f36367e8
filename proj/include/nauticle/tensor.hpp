#pragma once

#include <Eigen/Dense>
#include <initializer_list>
#include <string>

#include "nauticle/error.hpp"

namespace nauticle {

/// Unified value type: a dense double matrix of size 1..3 x 1..3.
/// A scalar is a 1x1 tensor, a d-vector is d x 1. Values are immutable by
/// convention once an operation has produced them, so they can be shared
/// freely across worker threads.
class Tensor {
public:
    using Storage = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::AutoAlign, 3, 3>;

    Tensor() : m_(Storage::Zero(1, 1)) {}
    Tensor(double v) : m_(Storage::Constant(1, 1, v)) {}

    explicit Tensor(Storage m) : m_(std::move(m)) {
        check_extent(static_cast<int>(m_.rows()), static_cast<int>(m_.cols()));
    }

    static Tensor zeros(int rows, int cols) {
        check_extent(rows, cols);
        return Tensor(Storage::Zero(rows, cols));
    }

    static Tensor column(std::initializer_list<double> values) {
        check_extent(static_cast<int>(values.size()), 1);
        Storage m(static_cast<int>(values.size()), 1);
        int r = 0;
        for (double v : values) m(r++, 0) = v;
        return Tensor(std::move(m));
    }

    int rows() const { return static_cast<int>(m_.rows()); }
    int cols() const { return static_cast<int>(m_.cols()); }
    int size() const { return rows() * cols(); }
    bool is_scalar() const { return rows() == 1 && cols() == 1; }
    bool is_column() const { return cols() == 1; }
    bool same_shape(const Tensor& o) const { return rows() == o.rows() && cols() == o.cols(); }

    double operator()(int r, int c = 0) const { return m_(r, c); }
    double& operator()(int r, int c = 0) { return m_(r, c); }

    /// Scalar value; error if the tensor is not 1x1.
    double value() const {
        if (!is_scalar())
            throw runtime_error("expected a scalar, got a ", shape_string(), " tensor");
        return m_(0, 0);
    }

    const Storage& mat() const { return m_; }
    Storage& mat() { return m_; }

    std::string shape_string() const {
        return std::to_string(rows()) + "x" + std::to_string(cols());
    }

    bool all_finite() const { return m_.allFinite(); }

private:
    static void check_extent(int rows, int cols) {
        if (rows < 1 || rows > 3 || cols < 1 || cols > 3)
            throw runtime_error("tensor extent ", rows, "x", cols, " outside the supported 1..3 range");
    }

    Storage m_;
};

// Arithmetic. Shapes are checked at evaluation time; mismatches name the
// operator and both shapes so the failing deck expression is identifiable.

Tensor operator+(const Tensor& a, const Tensor& b);
Tensor operator-(const Tensor& a, const Tensor& b);
Tensor operator-(const Tensor& a);

/// Matrix product when a.cols == b.rows, scalar broadcast when either side is 1x1.
Tensor operator*(const Tensor& a, const Tensor& b);

/// Scalar right operand or elementwise for identical shapes. Division by a
/// zero scalar follows IEEE semantics (inf/nan); the per-step audit reports it.
Tensor operator/(const Tensor& a, const Tensor& b);

/// Elementwise power; right operand scalar or identical shape.
Tensor pow(const Tensor& a, const Tensor& b);

enum class CompareOp { Less, Greater, LessEq, GreaterEq, Equal, NotEqual };

/// Scalar comparison returning a 1x1 tensor valued 0 or 1, composable with arithmetic.
Tensor compare(CompareOp op, const Tensor& a, const Tensor& b);

/// Frobenius norm as a 1x1 tensor.
Tensor norm(const Tensor& a);

Tensor exp(const Tensor& a);
Tensor log(const Tensor& a);
Tensor sin(const Tensor& a);
Tensor cos(const Tensor& a);
Tensor tan(const Tensor& a);
Tensor sqrt(const Tensor& a);
Tensor abs(const Tensor& a);
Tensor floor(const Tensor& a);
Tensor sgn(const Tensor& a);
Tensor min2(const Tensor& a, const Tensor& b);
Tensor max2(const Tensor& a, const Tensor& b);

/// Frobenius inner product of two same-shape tensors, as a 1x1 tensor.
Tensor dot(const Tensor& a, const Tensor& b);

/// Reflect a value across symmetric walls: columns are scaled by the per-axis
/// guide signs, general matrices by the outer product of the signs. Scalars
/// pass through unchanged.
Tensor mirror(const Tensor& value, const Tensor& guide);

/// Canonical text form: scalars bare, columns "a|b", matrices rows joined by
/// ';' with entries joined by ','. Round-trips bitwise via parse_tensor.
std::string to_string(const Tensor& t);
Tensor parse_tensor(std::string_view text);

}  // namespace nauticle
