#include "nauticle/sfl/parser.hpp"

#include "nauticle/interactions.hpp"
#include "nauticle/kernel.hpp"
#include "nauticle/sfl/token.hpp"

namespace nauticle::sfl {

namespace {

class Parser {
public:
    Parser(const std::string& source, ParseContext& ctx)
        : tokens_(tokenize(source)), ctx_(ctx) {}

    NodePtr parse_full() {
        NodePtr node = parse_vector();
        if (peek().kind != TokenKind::End)
            throw parse_error("unexpected ", token_kind_name(peek().kind), " at column ",
                              peek().column);
        return node;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& advance() { return tokens_[pos_++]; }

    bool accept(TokenKind kind) {
        if (peek().kind != kind) return false;
        ++pos_;
        return true;
    }

    void expect(TokenKind kind, const char* context) {
        if (!accept(kind))
            throw parse_error("expected ", token_kind_name(kind), " ", context, " at column ",
                              peek().column, ", got ", token_kind_name(peek().kind));
    }

    NodePtr parse_vector() {
        NodePtr node = parse_comparison();
        while (accept(TokenKind::Pipe))
            node = std::make_unique<VectorJoinNode>(std::move(node), parse_comparison());
        return node;
    }

    NodePtr parse_comparison() {
        NodePtr node = parse_additive();
        while (true) {
            BinaryOp op;
            switch (peek().kind) {
                case TokenKind::Less: op = BinaryOp::Less; break;
                case TokenKind::Greater: op = BinaryOp::Greater; break;
                case TokenKind::LessEq: op = BinaryOp::LessEq; break;
                case TokenKind::GreaterEq: op = BinaryOp::GreaterEq; break;
                case TokenKind::EqualEq: op = BinaryOp::Equal; break;
                case TokenKind::NotEq: op = BinaryOp::NotEqual; break;
                default: return node;
            }
            advance();
            node = std::make_unique<BinaryNode>(op, std::move(node), parse_additive());
        }
    }

    NodePtr parse_additive() {
        NodePtr node = parse_multiplicative();
        while (true) {
            if (accept(TokenKind::Plus))
                node = std::make_unique<BinaryNode>(BinaryOp::Add, std::move(node),
                                                    parse_multiplicative());
            else if (accept(TokenKind::Minus))
                node = std::make_unique<BinaryNode>(BinaryOp::Sub, std::move(node),
                                                    parse_multiplicative());
            else
                return node;
        }
    }

    NodePtr parse_multiplicative() {
        NodePtr node = parse_unary();
        while (true) {
            if (accept(TokenKind::Star))
                node = std::make_unique<BinaryNode>(BinaryOp::Mul, std::move(node), parse_unary());
            else if (accept(TokenKind::Slash))
                node = std::make_unique<BinaryNode>(BinaryOp::Div, std::move(node), parse_unary());
            else
                return node;
        }
    }

    // Unary minus binds looser than '^' (-2^2 == -4), and a negated literal
    // folds into a negative literal so printing round-trips structurally.
    NodePtr parse_unary() {
        if (accept(TokenKind::Minus)) {
            NodePtr operand = parse_unary();
            if (auto* lit = dynamic_cast<LiteralNode*>(operand.get()))
                return std::make_unique<LiteralNode>(-lit->value());
            return std::make_unique<UnaryMinusNode>(std::move(operand));
        }
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr node = parse_primary();
        if (accept(TokenKind::Caret))
            return std::make_unique<BinaryNode>(BinaryOp::Pow, std::move(node), parse_unary());
        return node;
    }

    NodePtr parse_primary() {
        const Token& t = peek();
        switch (t.kind) {
            case TokenKind::Number: {
                advance();
                return std::make_unique<LiteralNode>(Tensor(t.number));
            }
            case TokenKind::LParen: {
                advance();
                NodePtr node = parse_vector();
                expect(TokenKind::RParen, "to close '('");
                return node;
            }
            case TokenKind::Ident: {
                advance();
                if (peek().kind == TokenKind::LParen) return parse_call(t);
                return resolve_symbol(t);
            }
            default:
                throw parse_error("expected a value at column ", t.column, ", got ",
                                  token_kind_name(t.kind));
        }
    }

    NodePtr resolve_symbol(const Token& t) {
        if (is_kernel_keyword(t.text))
            return std::make_unique<KernelKeywordNode>(decode_kernel_keyword(t.text));
        if (Constant* c = ctx_.workspace.find_constant(t.text))
            return std::make_unique<ConstantRefNode>(c);
        if (Variable* v = ctx_.workspace.find_variable(t.text))
            return std::make_unique<VariableRefNode>(v);
        if (auto f = ctx_.workspace.find_field(t.text))
            return std::make_unique<FieldRefNode>(f);
        throw assembly_error("unknown symbol '", t.text, "'");
    }

    std::vector<NodePtr> parse_args() {
        std::vector<NodePtr> args;
        expect(TokenKind::LParen, "after function name");
        if (!accept(TokenKind::RParen)) {
            do {
                args.push_back(parse_vector());
            } while (accept(TokenKind::Comma));
            expect(TokenKind::RParen, "to close the argument list");
        }
        return args;
    }

    void check_arity(const Token& name, const std::vector<NodePtr>& args, int lo, int hi) {
        int n = static_cast<int>(args.size());
        if (n >= lo && n <= hi) return;
        if (lo == hi)
            throw parse_error("function '", name.text, "' expects ", lo, " argument", lo == 1 ? "" : "s",
                              ", got ", n, " (column ", name.column, ")");
        throw parse_error("function '", name.text, "' expects ", lo, " to ", hi, " arguments, got ",
                          n, " (column ", name.column, ")");
    }

    NodePtr parse_call(const Token& name) {
        std::vector<NodePtr> args = parse_args();

        if (const InteractionOp* op = find_interaction(name.text)) {
            check_arity(name, args, op->arity_min, op->arity_max);
            ParticleSystem* ps = ctx_.workspace.particle_system();
            if (!ps)
                throw assembly_error("interaction '", name.text,
                                     "' used before the particle system is defined");
            std::optional<KernelKeyword> kernel;
            if (op->kernel_slot >= 0) {
                auto* kw = dynamic_cast<KernelKeywordNode*>(args[op->kernel_slot].get());
                if (!kw)
                    throw parse_error("operand ", op->kernel_slot + 1, " of '", name.text,
                                      "' must be a smoothing kernel keyword");
                kernel = kw->keyword();
            }
            return std::make_unique<InteractionNode>(op, std::move(args), std::move(kernel), ps);
        }

        if (name.text == "euler") {
            check_arity(name, args, 3, 3);
            return std::make_unique<EulerNode>(std::move(args[0]), std::move(args[1]),
                                               std::move(args[2]));
        }
        if (name.text == "rand") {
            check_arity(name, args, 2, 2);
            if (!ctx_.random_state)
                throw assembly_error("'rand' is not available in this context");
            return std::make_unique<RandNode>(std::move(args[0]), std::move(args[1]),
                                              ctx_.random_state);
        }

        auto reduction = [&](ReductionKind kind) {
            check_arity(name, args, 1, 1);
            ParticleSystem* ps = ctx_.workspace.particle_system();
            if (!ps)
                throw assembly_error("reduction '", name.text,
                                     "' used before the particle system is defined");
            return std::make_unique<ReductionNode>(kind, std::move(args[0]), ps, ctx_.generation);
        };
        if (name.text == "fmax") return reduction(ReductionKind::Max);
        if (name.text == "fmin") return reduction(ReductionKind::Min);
        if (name.text == "fsum") return reduction(ReductionKind::Sum);
        if (name.text == "fmean") return reduction(ReductionKind::Mean);

        struct Builtin1 {
            const char* name;
            BuiltinCallNode::Fn1 fn;
        };
        static constexpr Builtin1 kUnary[] = {
            {"exp", &nauticle::exp},   {"log", &nauticle::log},   {"sin", &nauticle::sin},
            {"cos", &nauticle::cos},   {"tan", &nauticle::tan},   {"sqrt", &nauticle::sqrt},
            {"abs", &nauticle::abs},   {"floor", &nauticle::floor}, {"sgn", &nauticle::sgn},
            {"norm", &nauticle::norm},
        };
        for (const auto& b : kUnary)
            if (name.text == b.name) {
                check_arity(name, args, 1, 1);
                return std::make_unique<BuiltinCallNode>(name.text, b.fn, std::move(args[0]));
            }

        struct Builtin2 {
            const char* name;
            BuiltinCallNode::Fn2 fn;
        };
        static constexpr Builtin2 kBinary[] = {
            {"min", &nauticle::min2},
            {"max", &nauticle::max2},
            {"dot", &nauticle::dot},
        };
        for (const auto& b : kBinary)
            if (name.text == b.name) {
                check_arity(name, args, 2, 2);
                return std::make_unique<BuiltinCallNode>(name.text, b.fn, std::move(args[0]),
                                                         std::move(args[1]));
            }

        throw parse_error("unknown function '", name.text, "' at column ", name.column);
    }

    std::vector<Token> tokens_;
    ParseContext& ctx_;
    size_t pos_ = 0;
};

}  // namespace

NodePtr parse_expression(const std::string& source, ParseContext& ctx) {
    return Parser(source, ctx).parse_full();
}

}  // namespace nauticle::sfl
