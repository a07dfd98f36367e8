#pragma once

#include <string>
#include <vector>

namespace nauticle::sfl {

enum class TokenKind {
    Ident,
    Number,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Assign,  // '='
    LParen,
    RParen,
    Comma,
    Pipe,  // column-vector separator, loosest operator
    Less,
    Greater,
    LessEq,
    GreaterEq,
    EqualEq,
    NotEq,
    End,
};

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;
    double number = 0.0;
    int column = 0;  // 1-based position in the source expression
};

const char* token_kind_name(TokenKind k);

/// Split one expression (or one `lhs=rhs` binding) into tokens.
/// Throws a parse error naming the column of any illegal character.
std::vector<Token> tokenize(const std::string& source);

}  // namespace nauticle::sfl
