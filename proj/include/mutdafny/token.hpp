#pragma once

#include <array>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "mutdafny/source.hpp"

namespace mutdafny {

enum class TokenKind { Ident, IntLit, RealLit, StringLit, CharLit, Op, End };

/// One lexeme. `trivia_start` marks where the whitespace/comment run that
/// precedes this token begins, so that concatenating
/// text[trivia_start..span.end) over the whole stream reproduces the input.
struct Token {
    TokenKind kind = TokenKind::End;
    SourceSpan span;
    std::size_t trivia_start = 0;
};

namespace detail {

inline bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
// Dafny identifiers may contain primes (e.g. s').
inline bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}
inline bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

// Longest match first.
inline constexpr std::array<std::string_view, 19> multi_char_ops = {
    "<==>", "==>", "<==", "==", "!=", "<=", ">=", "&&", "||", "<<",
    ">>",   ":=",  ":|",  "::", "..", "=>", "->", "!in", ":-",
};

inline constexpr std::string_view single_char_ops = "+-*/%&|^!<>=()[]{},;:.?@";

}  // namespace detail

class Lexer {
  public:
    explicit Lexer(std::string_view text) : text_(text) {}

    std::vector<Token> run() {
        std::vector<Token> tokens;
        bool prev_was_dot = false;
        for (;;) {
            std::size_t trivia_start = pos_;
            skip_trivia();
            if (pos_ >= text_.size()) {
                Token end;
                end.kind = TokenKind::End;
                end.span = make_span(pos_, pos_);
                end.trivia_start = trivia_start;
                tokens.push_back(end);
                return tokens;
            }
            Token tok = next_token(prev_was_dot);
            tok.trivia_start = trivia_start;
            prev_was_dot = tok.kind == TokenKind::Op && text(tok) == ".";
            tokens.push_back(tok);
        }
    }

    std::string_view text(const Token& tok) const { return span_text(text_, tok.span); }

  private:
    SourceSpan make_span(std::size_t start, std::size_t end) const {
        SourceSpan s;
        s.start = start;
        s.end = end;
        s.line = line_;
        s.column = static_cast<int>(start - line_start_) + 1;
        return s;
    }

    void advance_line(std::size_t i) {
        line_++;
        line_start_ = i + 1;
    }

    void skip_trivia() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\n') {
                advance_line(pos_);
                pos_++;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                pos_++;
            } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
                while (pos_ < text_.size() && text_[pos_] != '\n') pos_++;
            } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '*') {
                skip_block_comment();
            } else {
                return;
            }
        }
    }

    // Dafny block comments nest.
    void skip_block_comment() {
        int start_line = line_;
        int start_col = static_cast<int>(pos_ - line_start_) + 1;
        pos_ += 2;
        int depth = 1;
        while (pos_ < text_.size() && depth > 0) {
            if (text_[pos_] == '\n') {
                advance_line(pos_);
                pos_++;
            } else if (text_[pos_] == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '*') {
                depth++;
                pos_ += 2;
            } else if (text_[pos_] == '*' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
                depth--;
                pos_ += 2;
            } else {
                pos_++;
            }
        }
        if (depth > 0) throw LexError(start_line, start_col, "unterminated block comment");
    }

    Token next_token(bool prev_was_dot) {
        char c = text_[pos_];
        if (detail::is_ident_start(c)) return lex_ident();
        if (detail::is_digit(c)) return lex_number(prev_was_dot);
        if (c == '"') return lex_string(pos_);
        if (c == '@' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '"') return lex_verbatim_string();
        if (c == '\'') return lex_char();
        return lex_op();
    }

    Token lex_ident() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && detail::is_ident_char(text_[pos_])) pos_++;
        // bv types are identifiers; the type parser gives them meaning.
        return Token{TokenKind::Ident, make_span(start, pos_)};
    }

    Token lex_number(bool prev_was_dot) {
        std::size_t start = pos_;
        if (text_[pos_] == '0' && pos_ + 1 < text_.size() &&
            (text_[pos_ + 1] == 'x' || text_[pos_ + 1] == 'X')) {
            pos_ += 2;
            while (pos_ < text_.size() &&
                   (std::isxdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                pos_++;
            return Token{TokenKind::IntLit, make_span(start, pos_)};
        }
        while (pos_ < text_.size() && (detail::is_digit(text_[pos_]) || text_[pos_] == '_')) pos_++;
        // "1.5" is a real literal, "1..n" is int plus range, "t.0.1" after a
        // dot stays an int so tuple access chains lex correctly.
        if (!prev_was_dot && pos_ + 1 < text_.size() && text_[pos_] == '.' &&
            detail::is_digit(text_[pos_ + 1])) {
            pos_++;
            while (pos_ < text_.size() && (detail::is_digit(text_[pos_]) || text_[pos_] == '_'))
                pos_++;
            return Token{TokenKind::RealLit, make_span(start, pos_)};
        }
        return Token{TokenKind::IntLit, make_span(start, pos_)};
    }

    Token lex_string(std::size_t start) {
        pos_++;  // opening quote
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\\' && pos_ + 1 < text_.size()) {
                pos_ += 2;
            } else if (c == '"') {
                pos_++;
                return Token{TokenKind::StringLit, make_span(start, pos_)};
            } else if (c == '\n') {
                break;
            } else {
                pos_++;
            }
        }
        auto [l, col] = err_pos(start);
        throw LexError(l, col, "unterminated string literal");
    }

    Token lex_verbatim_string() {
        std::size_t start = pos_;
        pos_ += 2;  // @"
        while (pos_ < text_.size()) {
            if (text_[pos_] == '"') {
                if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '"') {
                    pos_ += 2;
                    continue;
                }
                pos_++;
                return Token{TokenKind::StringLit, make_span(start, pos_)};
            }
            if (text_[pos_] == '\n') advance_line(pos_);
            pos_++;
        }
        auto [l, col] = err_pos(start);
        throw LexError(l, col, "unterminated verbatim string");
    }

    Token lex_char() {
        std::size_t start = pos_;
        pos_++;  // opening quote
        if (pos_ < text_.size() && text_[pos_] == '\\') {
            pos_++;
            if (pos_ < text_.size() && text_[pos_] == 'u') {
                pos_++;
                while (pos_ < text_.size() && std::isxdigit(static_cast<unsigned char>(text_[pos_])))
                    pos_++;
            } else {
                pos_++;
            }
        } else if (pos_ < text_.size()) {
            pos_++;
        }
        if (pos_ < text_.size() && text_[pos_] == '\'') {
            pos_++;
            return Token{TokenKind::CharLit, make_span(start, pos_)};
        }
        auto [l, col] = err_pos(start);
        throw LexError(l, col, "malformed character literal");
    }

    Token lex_op() {
        std::string_view rest = text_.substr(pos_);
        for (std::string_view op : detail::multi_char_ops) {
            if (rest.substr(0, op.size()) != op) continue;
            // "!in" only when not a prefix of a longer identifier (!index).
            if (op == "!in" && rest.size() > 3 && detail::is_ident_char(rest[3])) continue;
            std::size_t start = pos_;
            pos_ += op.size();
            return Token{TokenKind::Op, make_span(start, pos_)};
        }
        char c = text_[pos_];
        if (detail::single_char_ops.find(c) != std::string_view::npos) {
            std::size_t start = pos_;
            pos_++;
            return Token{TokenKind::Op, make_span(start, pos_)};
        }
        auto [l, col] = err_pos(pos_);
        throw LexError(l, col, std::string("unrecognized character '") + c + "'");
    }

    std::pair<int, int> err_pos(std::size_t offset) const {
        return {line_, static_cast<int>(offset - line_start_) + 1};
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    std::size_t line_start_ = 0;
};

/// Lexes the whole input. Comments and whitespace are preserved as trivia on
/// the following token; the trailing End token carries any final trivia.
inline std::vector<Token> tokenize(std::string_view text) { return Lexer(text).run(); }

}  // namespace mutdafny
