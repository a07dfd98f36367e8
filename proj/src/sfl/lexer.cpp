#include "nauticle/sfl/token.hpp"

#include <cctype>
#include <charconv>

#include "nauticle/error.hpp"

namespace nauticle::sfl {

const char* token_kind_name(TokenKind k) {
    switch (k) {
        case TokenKind::Ident: return "identifier";
        case TokenKind::Number: return "number";
        case TokenKind::Plus: return "'+'";
        case TokenKind::Minus: return "'-'";
        case TokenKind::Star: return "'*'";
        case TokenKind::Slash: return "'/'";
        case TokenKind::Caret: return "'^'";
        case TokenKind::Assign: return "'='";
        case TokenKind::LParen: return "'('";
        case TokenKind::RParen: return "')'";
        case TokenKind::Comma: return "','";
        case TokenKind::Pipe: return "'|'";
        case TokenKind::Less: return "'<'";
        case TokenKind::Greater: return "'>'";
        case TokenKind::LessEq: return "'<='";
        case TokenKind::GreaterEq: return "'>='";
        case TokenKind::EqualEq: return "'=='";
        case TokenKind::NotEq: return "'!='";
        case TokenKind::End: return "end of expression";
    }
    return "?";
}

std::vector<Token> tokenize(const std::string& source) {
    std::vector<Token> tokens;
    const size_t n = source.size();
    size_t p = 0;

    auto push = [&](TokenKind kind, size_t start, size_t len) {
        tokens.push_back({kind, source.substr(start, len), 0.0, static_cast<int>(start) + 1});
    };

    while (p < n) {
        char ch = source[p];
        if (std::isspace(static_cast<unsigned char>(ch))) {
            ++p;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            size_t start = p;
            while (p < n && (std::isalnum(static_cast<unsigned char>(source[p])) || source[p] == '_'))
                ++p;
            push(TokenKind::Ident, start, p - start);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(ch)) ||
            (ch == '.' && p + 1 < n && std::isdigit(static_cast<unsigned char>(source[p + 1])))) {
            size_t start = p;
            while (p < n && std::isdigit(static_cast<unsigned char>(source[p]))) ++p;
            if (p < n && source[p] == '.') {
                ++p;
                while (p < n && std::isdigit(static_cast<unsigned char>(source[p]))) ++p;
            }
            if (p < n && (source[p] == 'e' || source[p] == 'E')) {
                size_t mark = p;
                ++p;
                if (p < n && (source[p] == '+' || source[p] == '-')) ++p;
                if (p < n && std::isdigit(static_cast<unsigned char>(source[p]))) {
                    while (p < n && std::isdigit(static_cast<unsigned char>(source[p]))) ++p;
                } else {
                    p = mark;  // not an exponent; leave 'e' for the next token
                }
            }
            Token t{TokenKind::Number, source.substr(start, p - start), 0.0,
                    static_cast<int>(start) + 1};
            auto res = std::from_chars(source.data() + start, source.data() + p, t.number);
            if (res.ec != std::errc())
                throw parse_error("bad numeric literal '", t.text, "' at column ", t.column);
            tokens.push_back(std::move(t));
            continue;
        }
        size_t start = p;
        switch (ch) {
            case '+': push(TokenKind::Plus, start, 1); ++p; break;
            case '-': push(TokenKind::Minus, start, 1); ++p; break;
            case '*': push(TokenKind::Star, start, 1); ++p; break;
            case '/': push(TokenKind::Slash, start, 1); ++p; break;
            case '^': push(TokenKind::Caret, start, 1); ++p; break;
            case '(': push(TokenKind::LParen, start, 1); ++p; break;
            case ')': push(TokenKind::RParen, start, 1); ++p; break;
            case ',': push(TokenKind::Comma, start, 1); ++p; break;
            case '|': push(TokenKind::Pipe, start, 1); ++p; break;
            case '=':
                if (p + 1 < n && source[p + 1] == '=') {
                    push(TokenKind::EqualEq, start, 2);
                    p += 2;
                } else {
                    push(TokenKind::Assign, start, 1);
                    ++p;
                }
                break;
            case '<':
                if (p + 1 < n && source[p + 1] == '=') {
                    push(TokenKind::LessEq, start, 2);
                    p += 2;
                } else {
                    push(TokenKind::Less, start, 1);
                    ++p;
                }
                break;
            case '>':
                if (p + 1 < n && source[p + 1] == '=') {
                    push(TokenKind::GreaterEq, start, 2);
                    p += 2;
                } else {
                    push(TokenKind::Greater, start, 1);
                    ++p;
                }
                break;
            case '!':
                if (p + 1 < n && source[p + 1] == '=') {
                    push(TokenKind::NotEq, start, 2);
                    p += 2;
                    break;
                }
                [[fallthrough]];
            default:
                throw parse_error("illegal character '", std::string(1, ch), "' at column ",
                                  static_cast<int>(p) + 1);
        }
    }
    tokens.push_back({TokenKind::End, "", 0.0, static_cast<int>(n) + 1});
    return tokens;
}

}  // namespace nauticle::sfl
