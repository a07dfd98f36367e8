#include "nauticle/sfl/ast.hpp"

#include <sstream>

#include "nauticle/format.hpp"
#include "nauticle/interactions.hpp"

namespace nauticle::sfl {

namespace {

struct OpInfo {
    const char* symbol;
    int prec;
    bool right_assoc;
};

OpInfo op_info(BinaryOp op) {
    switch (op) {
        case BinaryOp::Add: return {"+", kPrecAdd, false};
        case BinaryOp::Sub: return {"-", kPrecAdd, false};
        case BinaryOp::Mul: return {"*", kPrecMul, false};
        case BinaryOp::Div: return {"/", kPrecMul, false};
        case BinaryOp::Pow: return {"^", kPrecPow, true};
        case BinaryOp::Less: return {"<", kPrecCompare, false};
        case BinaryOp::Greater: return {">", kPrecCompare, false};
        case BinaryOp::LessEq: return {"<=", kPrecCompare, false};
        case BinaryOp::GreaterEq: return {">=", kPrecCompare, false};
        case BinaryOp::Equal: return {"==", kPrecCompare, false};
        case BinaryOp::NotEqual: return {"!=", kPrecCompare, false};
    }
    return {"?", kPrecPrimary, false};
}

void print_wrapped(std::ostream& os, int own_prec, int min_prec, auto&& body) {
    bool parens = own_prec < min_prec;
    if (parens) os << '(';
    body();
    if (parens) os << ')';
}

}  // namespace

std::string ExpressionNode::to_text() const {
    std::ostringstream os;
    print(os, 0);
    return os.str();
}

std::string to_text(const ExpressionNode& node) { return node.to_text(); }

void LiteralNode::print(std::ostream& os, int min_prec) const {
    if (value_.is_scalar()) {
        double v = value_(0, 0);
        print_wrapped(os, v < 0 ? kPrecUnary : kPrecPrimary, min_prec,
                      [&] { os << format_double(v); });
        return;
    }
    // Non-scalar literals only arise programmatically; emit the column form.
    print_wrapped(os, kPrecPipe, min_prec, [&] {
        for (int r = 0; r < value_.rows(); ++r) {
            if (r > 0) os << '|';
            os << format_double(value_(r));
        }
    });
}

BinaryNode::BinaryNode(BinaryOp op, NodePtr lhs, NodePtr rhs)
    : op_(op), lhs_(std::move(lhs)), rhs_(std::move(rhs)) {}

Tensor BinaryNode::evaluate(int i, int level) const {
    Tensor a = lhs_->evaluate(i, level);
    Tensor b = rhs_->evaluate(i, level);
    try {
        switch (op_) {
            case BinaryOp::Add: return a + b;
            case BinaryOp::Sub: return a - b;
            case BinaryOp::Mul: return a * b;
            case BinaryOp::Div: return a / b;
            case BinaryOp::Pow: return pow(a, b);
            case BinaryOp::Less: return compare(CompareOp::Less, a, b);
            case BinaryOp::Greater: return compare(CompareOp::Greater, a, b);
            case BinaryOp::LessEq: return compare(CompareOp::LessEq, a, b);
            case BinaryOp::GreaterEq: return compare(CompareOp::GreaterEq, a, b);
            case BinaryOp::Equal: return compare(CompareOp::Equal, a, b);
            case BinaryOp::NotEqual: return compare(CompareOp::NotEqual, a, b);
        }
    } catch (const Error& e) {
        if (std::string_view(e.what()).find(" in '") == std::string_view::npos)
            throw Error(e.kind(), std::string(e.what()) + " in '" + to_text() + "'");
        throw;
    }
    throw runtime_error("unreachable binary operator");
}

void BinaryNode::print(std::ostream& os, int min_prec) const {
    OpInfo info = op_info(op_);
    print_wrapped(os, info.prec, min_prec, [&] {
        lhs_->print(os, info.prec + (info.right_assoc ? 1 : 0));
        os << info.symbol;
        rhs_->print(os, info.prec + (info.right_assoc ? 0 : 1));
    });
}

void BinaryNode::collect(TreeInfo& info) {
    lhs_->collect(info);
    rhs_->collect(info);
}

void UnaryMinusNode::print(std::ostream& os, int min_prec) const {
    print_wrapped(os, kPrecUnary, min_prec, [&] {
        os << '-';
        operand_->print(os, kPrecUnary + 1);
    });
}

Tensor VectorJoinNode::evaluate(int i, int level) const {
    Tensor head = lhs_->evaluate(i, level);
    Tensor tail = rhs_->evaluate(i, level);
    if (!head.is_column() || !tail.is_scalar() || head.rows() >= 3)
        throw runtime_error("operator '|': cannot append a ", tail.shape_string(),
                            " component to a ", head.shape_string(), " value in '", to_text(), "'");
    Tensor out = Tensor::zeros(head.rows() + 1, 1);
    for (int r = 0; r < head.rows(); ++r) out(r) = head(r);
    out(head.rows()) = tail(0, 0);
    return out;
}

void VectorJoinNode::print(std::ostream& os, int min_prec) const {
    print_wrapped(os, kPrecPipe, min_prec, [&] {
        lhs_->print(os, kPrecPipe);
        os << '|';
        rhs_->print(os, kPrecPipe + 1);
    });
}

void VectorJoinNode::collect(TreeInfo& info) {
    lhs_->collect(info);
    rhs_->collect(info);
}

BuiltinCallNode::BuiltinCallNode(std::string name, Fn1 fn, NodePtr a)
    : name_(std::move(name)), fn1_(fn) {
    args_.push_back(std::move(a));
}

BuiltinCallNode::BuiltinCallNode(std::string name, Fn2 fn, NodePtr a, NodePtr b)
    : name_(std::move(name)), fn2_(fn) {
    args_.push_back(std::move(a));
    args_.push_back(std::move(b));
}

Tensor BuiltinCallNode::evaluate(int i, int level) const {
    try {
        if (fn1_) return fn1_(args_[0]->evaluate(i, level));
        return fn2_(args_[0]->evaluate(i, level), args_[1]->evaluate(i, level));
    } catch (const Error& e) {
        if (std::string_view(e.what()).find(" in '") == std::string_view::npos)
            throw Error(e.kind(), std::string(e.what()) + " in '" + to_text() + "'");
        throw;
    }
}

void BuiltinCallNode::print(std::ostream& os, int) const {
    os << name_ << '(';
    for (size_t k = 0; k < args_.size(); ++k) {
        if (k > 0) os << ',';
        args_[k]->print(os, 0);
    }
    os << ')';
}

void BuiltinCallNode::collect(TreeInfo& info) {
    for (auto& a : args_) a->collect(info);
}

EulerNode::EulerNode(NodePtr x, NodePtr xdot, NodePtr dt)
    : x_(std::move(x)), xdot_(std::move(xdot)), dt_(std::move(dt)) {}

Tensor EulerNode::evaluate(int i, int level) const {
    Tensor x = x_->evaluate(i, level);
    Tensor xdot = xdot_->evaluate(i, level);
    Tensor dt = dt_->evaluate(i, level);
    if (!dt.is_scalar())
        throw runtime_error("euler: time step must be a scalar, got ", dt.shape_string(), " in '",
                            to_text(), "'");
    if (!x.same_shape(xdot))
        throw runtime_error("euler: state is ", x.shape_string(), " but derivative is ",
                            xdot.shape_string(), " in '", to_text(), "'");
    return x + xdot * dt;
}

void EulerNode::print(std::ostream& os, int) const {
    os << "euler(";
    x_->print(os, 0);
    os << ',';
    xdot_->print(os, 0);
    os << ',';
    dt_->print(os, 0);
    os << ')';
}

void EulerNode::collect(TreeInfo& info) {
    x_->collect(info);
    xdot_->collect(info);
    dt_->collect(info);
}

RandNode::RandNode(NodePtr a, NodePtr b, RandomState* state)
    : a_(std::move(a)), b_(std::move(b)), state_(state) {}

Tensor RandNode::evaluate(int i, int level) const {
    double a = a_->evaluate(i, level).value();
    double b = b_->evaluate(i, level).value();
    if (a > b) throw runtime_error("rand: lower bound ", a, " exceeds upper bound ", b);
    return Tensor(state_->uniform(i, a, b));
}

void RandNode::print(std::ostream& os, int) const {
    os << "rand(";
    a_->print(os, 0);
    os << ',';
    b_->print(os, 0);
    os << ')';
}

void RandNode::collect(TreeInfo& info) {
    a_->collect(info);
    b_->collect(info);
    info.rands.push_back(this);
}

ReductionNode::ReductionNode(ReductionKind kind, NodePtr arg, const ParticleSystem* ps,
                             const std::uint64_t* generation)
    : kind_(kind), arg_(std::move(arg)), ps_(ps), generation_(generation) {}

Tensor ReductionNode::compute(int level) const {
    const int n = ps_->particle_count();
    if (ps_->active_count() == 0)
        throw runtime_error("reduction '", to_text(), "' over an empty particle system");
    bool first = true;
    Tensor acc;
    double extremum = 0.0;
    long count = 0;
    for (int i = 0; i < n; ++i) {
        if (!ps_->is_active(i)) continue;
        Tensor v = arg_->evaluate(i, level);
        ++count;
        switch (kind_) {
            case ReductionKind::Sum:
            case ReductionKind::Mean:
                if (first)
                    acc = v;
                else
                    acc = acc + v;
                break;
            case ReductionKind::Max:
            case ReductionKind::Min: {
                // Non-scalar arguments reduce on the Frobenius norm.
                double s = v.is_scalar() ? v(0, 0) : v.mat().norm();
                if (first)
                    extremum = s;
                else
                    extremum = kind_ == ReductionKind::Max ? std::max(extremum, s)
                                                           : std::min(extremum, s);
                break;
            }
        }
        first = false;
    }
    if (kind_ == ReductionKind::Sum) return acc;
    if (kind_ == ReductionKind::Mean) return acc / Tensor(static_cast<double>(count));
    return Tensor(extremum);
}

void ReductionNode::refresh(int level) const {
    cache_ = compute(level);
    cached_generation_ = generation_ ? *generation_ : 0;
}

Tensor ReductionNode::evaluate(int, int level) const {
    if (generation_ && cached_generation_ == *generation_) return cache_;
    return compute(level);
}

void ReductionNode::print(std::ostream& os, int) const {
    switch (kind_) {
        case ReductionKind::Max: os << "fmax("; break;
        case ReductionKind::Min: os << "fmin("; break;
        case ReductionKind::Sum: os << "fsum("; break;
        case ReductionKind::Mean: os << "fmean("; break;
    }
    arg_->print(os, 0);
    os << ')';
}

void ReductionNode::collect(TreeInfo& info) {
    arg_->collect(info);
    info.reductions.push_back(this);
}

InteractionNode::InteractionNode(const InteractionOp* op, std::vector<NodePtr> operands,
                                 std::optional<KernelKeyword> kernel, const ParticleSystem* ps)
    : op_(op), operands_(std::move(operands)), kernel_(std::move(kernel)), ps_(ps) {}

Tensor InteractionNode::evaluate(int i, int level) const { return op_->eval(*this, i, level); }

void InteractionNode::print(std::ostream& os, int) const {
    os << op_->name << '(';
    for (size_t k = 0; k < operands_.size(); ++k) {
        if (k > 0) os << ',';
        operands_[k]->print(os, 0);
    }
    os << ')';
}

void InteractionNode::collect(TreeInfo& info) {
    for (auto& o : operands_) o->collect(info);
    info.interactions.push_back(this);
    if (op_->finite_influence) info.needs_cells = true;
}

}  // namespace nauticle::sfl
