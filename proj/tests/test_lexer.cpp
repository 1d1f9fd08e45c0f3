#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "mutdafny/token.hpp"

using namespace mutdafny;

namespace {

struct Lexeme {
    TokenKind kind;
    std::string text;
};

std::vector<Lexeme> lex(const std::string& input) {
    std::vector<Lexeme> out;
    for (const Token& t : tokenize(input)) {
        if (t.kind == TokenKind::End) break;
        out.push_back({t.kind, std::string(span_text(input, t.span))});
    }
    return out;
}

}  // namespace

TEST_CASE("equivalence operator lexes as one token", "[lexer]") {
    auto toks = lex("a <==> b");
    REQUIRE(toks.size() == 3);
    CHECK(toks[0].kind == TokenKind::Ident);
    CHECK(toks[0].text == "a");
    CHECK(toks[1].kind == TokenKind::Op);
    CHECK(toks[1].text == "<==>");
    CHECK(toks[2].text == "b");
}

TEST_CASE("empty input yields an empty stream", "[lexer]") {
    auto tokens = tokenize("");
    REQUIRE(tokens.size() == 1);
    CHECK(tokens[0].kind == TokenKind::End);
}

TEST_CASE("assignment without spaces", "[lexer]") {
    auto toks = lex("x:=y");
    REQUIRE(toks.size() == 3);
    CHECK(toks[0].text == "x");
    CHECK(toks[1].text == ":=");
    CHECK(toks[2].text == "y");
}

TEST_CASE("multi-character operators lex greedily", "[lexer]") {
    auto toks = lex("==> <== <==> == != <= >= && || << >> := ..");
    std::vector<std::string> expected = {"==>", "<==", "<==>", "==", "!=", "<=", ">=",
                                         "&&",  "||",  "<<",   ">>", ":=", ".."};
    REQUIRE(toks.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) CHECK(toks[i].text == expected[i]);
}

TEST_CASE("range versus real literal", "[lexer]") {
    auto range = lex("s[1..n]");
    REQUIRE(range.size() == 6);
    CHECK(range[2].kind == TokenKind::IntLit);
    CHECK(range[3].text == "..");

    auto real = lex("3.14");
    REQUIRE(real.size() == 1);
    CHECK(real[0].kind == TokenKind::RealLit);

    auto chain = lex("t.0.1");
    REQUIRE(chain.size() == 5);
    CHECK(chain[2].kind == TokenKind::IntLit);
    CHECK(chain[4].kind == TokenKind::IntLit);
}

TEST_CASE("not-in lexes as a single operator", "[lexer]") {
    auto toks = lex("a !in res");
    REQUIRE(toks.size() == 3);
    CHECK(toks[1].text == "!in");

    auto bang = lex("!index");
    REQUIRE(bang.size() == 2);
    CHECK(bang[0].text == "!");
    CHECK(bang[1].text == "index");
}

TEST_CASE("string and char literals with escapes", "[lexer]") {
    auto toks = lex("print \"done\\n\", 'a', '\\n';");
    REQUIRE(toks.size() == 7);
    CHECK(toks[1].kind == TokenKind::StringLit);
    CHECK(toks[1].text == "\"done\\n\"");
    CHECK(toks[3].kind == TokenKind::CharLit);
    CHECK(toks[5].kind == TokenKind::CharLit);
}

TEST_CASE("comments and whitespace survive as trivia", "[lexer]") {
    std::string input = "// header\nmethod /* inner /* nested */ */ M() {}\n";
    auto tokens = tokenize(input);
    std::string rebuilt;
    for (const Token& t : tokens)
        rebuilt += input.substr(t.trivia_start, t.span.end - t.trivia_start);
    CHECK(rebuilt == input);
}

TEST_CASE("line and column positions are 1-based", "[lexer]") {
    auto tokens = tokenize("a\n  b");
    REQUIRE(tokens.size() == 3);
    CHECK(tokens[0].span.line == 1);
    CHECK(tokens[0].span.column == 1);
    CHECK(tokens[1].span.line == 2);
    CHECK(tokens[1].span.column == 3);
}

TEST_CASE("unrecognized character reports its position", "[lexer]") {
    try {
        tokenize("var x := 1;\nvar y := $;\n");
        FAIL("expected LexError");
    } catch (const LexError& e) {
        CHECK(e.line == 2);
        CHECK(e.column == 10);
    }
}

TEST_CASE("unterminated block comment is an error", "[lexer]") {
    CHECK_THROWS_AS(tokenize("/* no end"), LexError);
}
