#pragma once

#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "nauticle/field.hpp"
#include "nauticle/kernel.hpp"
#include "nauticle/particle_system.hpp"
#include "nauticle/sfl/random_state.hpp"
#include "nauticle/tensor.hpp"

namespace nauticle {

struct InteractionOp;  // interactions.hpp

namespace sfl {

class ExpressionNode;
using NodePtr = std::unique_ptr<ExpressionNode>;

class ReductionNode;
class InteractionNode;
class RandNode;

/// Summary of a parsed tree used by the equation solver: reduction nodes are
/// refreshed once per equation solve, interaction nodes decide when the cell
/// grid must be current.
struct TreeInfo {
    std::vector<ReductionNode*> reductions;  // post-order
    std::vector<InteractionNode*> interactions;
    std::vector<RandNode*> rands;
    bool needs_cells = false;
};

/// Node of a parsed SFL expression. Trees are immutable after assembly and
/// evaluated recursively per particle; evaluation is safe to run on many
/// particles concurrently (rand and refreshed reductions included, see their
/// notes).
class ExpressionNode {
public:
    virtual ~ExpressionNode() = default;

    /// Value at particle i. `level` selects the time level for multistep
    /// integrators; the single-step schemes here ignore it.
    virtual Tensor evaluate(int i, int level = 0) const = 0;

    /// Precedence-aware canonical form; reparsing yields an identical tree.
    virtual void print(std::ostream& os, int min_prec = 0) const = 0;

    virtual void collect(TreeInfo&) {}

    std::string to_text() const;
};

std::string to_text(const ExpressionNode& node);

// Operator precedence levels used by both the parser and the printer.
// '|' binds loosest, '^' tightest; unary minus sits between '*' and '^'.
inline constexpr int kPrecPipe = 1;
inline constexpr int kPrecCompare = 2;
inline constexpr int kPrecAdd = 3;
inline constexpr int kPrecMul = 4;
inline constexpr int kPrecUnary = 5;
inline constexpr int kPrecPow = 6;
inline constexpr int kPrecPrimary = 7;

class LiteralNode final : public ExpressionNode {
public:
    explicit LiteralNode(Tensor value) : value_(std::move(value)) {}
    Tensor evaluate(int, int) const override { return value_; }
    void print(std::ostream& os, int min_prec) const override;
    const Tensor& value() const { return value_; }

private:
    Tensor value_;
};

class ConstantRefNode final : public ExpressionNode {
public:
    explicit ConstantRefNode(const Constant* c) : constant_(c) {}
    Tensor evaluate(int, int) const override { return constant_->value; }
    void print(std::ostream& os, int) const override { os << constant_->name; }

private:
    const Constant* constant_;
};

class VariableRefNode final : public ExpressionNode {
public:
    explicit VariableRefNode(const Variable* v) : variable_(v) {}
    Tensor evaluate(int, int) const override { return variable_->value; }
    void print(std::ostream& os, int) const override { os << variable_->name; }

private:
    const Variable* variable_;
};

class FieldRefNode final : public ExpressionNode {
public:
    explicit FieldRefNode(std::shared_ptr<const Field> f) : field_(std::move(f)) {}
    Tensor evaluate(int i, int) const override { return field_->values[i]; }
    void print(std::ostream& os, int) const override { os << field_->name; }

private:
    std::shared_ptr<const Field> field_;
};

/// Kernel keyword operand of an interaction call (e.g. Wp52220). Valid only
/// in the kernel slot of an interaction; evaluating it is an error.
class KernelKeywordNode final : public ExpressionNode {
public:
    explicit KernelKeywordNode(KernelKeyword kw) : keyword_(std::move(kw)) {}
    Tensor evaluate(int, int) const override {
        throw runtime_error("kernel keyword '", keyword_.raw,
                            "' used outside an interaction operand");
    }
    void print(std::ostream& os, int) const override { os << keyword_.raw; }
    const KernelKeyword& keyword() const { return keyword_; }

private:
    KernelKeyword keyword_;
};

enum class BinaryOp { Add, Sub, Mul, Div, Pow, Less, Greater, LessEq, GreaterEq, Equal, NotEqual };

class BinaryNode final : public ExpressionNode {
public:
    BinaryNode(BinaryOp op, NodePtr lhs, NodePtr rhs);
    Tensor evaluate(int i, int level) const override;
    void print(std::ostream& os, int min_prec) const override;
    void collect(TreeInfo& info) override;
    BinaryOp op() const { return op_; }

private:
    BinaryOp op_;
    NodePtr lhs_, rhs_;
};

class UnaryMinusNode final : public ExpressionNode {
public:
    explicit UnaryMinusNode(NodePtr operand) : operand_(std::move(operand)) {}
    Tensor evaluate(int i, int level) const override { return -operand_->evaluate(i, level); }
    void print(std::ostream& os, int min_prec) const override;
    void collect(TreeInfo& info) override { operand_->collect(info); }

private:
    NodePtr operand_;
};

/// Column-vector concatenation via '|': the left operand is a growing column,
/// the right operand a scalar component.
class VectorJoinNode final : public ExpressionNode {
public:
    VectorJoinNode(NodePtr lhs, NodePtr rhs) : lhs_(std::move(lhs)), rhs_(std::move(rhs)) {}
    Tensor evaluate(int i, int level) const override;
    void print(std::ostream& os, int min_prec) const override;
    void collect(TreeInfo& info) override;

private:
    NodePtr lhs_, rhs_;
};

/// Particle-wise builtin function (exp, sin, min, dot, ...).
class BuiltinCallNode final : public ExpressionNode {
public:
    using Fn1 = Tensor (*)(const Tensor&);
    using Fn2 = Tensor (*)(const Tensor&, const Tensor&);

    BuiltinCallNode(std::string name, Fn1 fn, NodePtr a);
    BuiltinCallNode(std::string name, Fn2 fn, NodePtr a, NodePtr b);
    Tensor evaluate(int i, int level) const override;
    void print(std::ostream& os, int min_prec) const override;
    void collect(TreeInfo& info) override;

private:
    std::string name_;
    Fn1 fn1_ = nullptr;
    Fn2 fn2_ = nullptr;
    std::vector<NodePtr> args_;
};

/// First-order integrator step x + xdot*dt. Semi-implicitness comes from
/// equation ordering in the deck, not from this operator.
class EulerNode final : public ExpressionNode {
public:
    EulerNode(NodePtr x, NodePtr xdot, NodePtr dt);
    Tensor evaluate(int i, int level) const override;
    void print(std::ostream& os, int min_prec) const override;
    void collect(TreeInfo& info) override;

private:
    NodePtr x_, xdot_, dt_;
};

/// Fresh uniform sample in [a, b] per evaluation from the case-level stream.
class RandNode final : public ExpressionNode {
public:
    RandNode(NodePtr a, NodePtr b, RandomState* state);
    Tensor evaluate(int i, int level) const override;
    void print(std::ostream& os, int min_prec) const override;
    void collect(TreeInfo& info) override;

private:
    NodePtr a_, b_;
    RandomState* state_;
};

enum class ReductionKind { Max, Min, Sum, Mean };

/// Whole-field reduction (fmax/fmin/fsum/fmean). The equation solver calls
/// refresh() once per equation under a single thread; concurrent evaluate()
/// calls then return the cached value, so every particle sees the same
/// tensor regardless of evaluation order.
class ReductionNode final : public ExpressionNode {
public:
    ReductionNode(ReductionKind kind, NodePtr arg, const ParticleSystem* ps,
                  const std::uint64_t* generation);
    Tensor evaluate(int i, int level) const override;
    void print(std::ostream& os, int min_prec) const override;
    void collect(TreeInfo& info) override;

    void refresh(int level) const;

private:
    Tensor compute(int level) const;

    ReductionKind kind_;
    NodePtr arg_;
    const ParticleSystem* ps_;
    const std::uint64_t* generation_;
    mutable Tensor cache_;
    mutable std::uint64_t cached_generation_ = ~0ULL;
};

/// Precompiled interaction operator call; evaluation is dispatched to the
/// interactions module, which sums per-pair contributions over neighbors.
class InteractionNode final : public ExpressionNode {
public:
    InteractionNode(const InteractionOp* op, std::vector<NodePtr> operands,
                    std::optional<KernelKeyword> kernel, const ParticleSystem* ps);
    Tensor evaluate(int i, int level) const override;
    void print(std::ostream& os, int min_prec) const override;
    void collect(TreeInfo& info) override;

    const InteractionOp& op() const { return *op_; }
    int operand_count() const { return static_cast<int>(operands_.size()); }
    const ExpressionNode& operand(int k) const { return *operands_[k]; }
    const KernelKeyword& kernel() const { return *kernel_; }
    const ParticleSystem& particle_system() const { return *ps_; }

private:
    const InteractionOp* op_;
    std::vector<NodePtr> operands_;
    std::optional<KernelKeyword> kernel_;
    const ParticleSystem* ps_;
};

}  // namespace sfl
}  // namespace nauticle
