#pragma once

#include <string>

#include "mutdafny/ast.hpp"

namespace mutdafny {

/// Re-emits the file from the token stream: each token contributes its
/// leading trivia plus its own text, the End token contributes any trailing
/// trivia. Equality with the original input is the lossless-lexing check the
/// round-trip tests rely on.
inline std::string print_program(const SyntaxTree& tree) {
    std::string out;
    out.reserve(tree.source_text.size());
    for (const Token& tok : tree.tokens) {
        out.append(tree.source_text, tok.trivia_start, tok.span.end - tok.trivia_start);
    }
    return out;
}

}  // namespace mutdafny
