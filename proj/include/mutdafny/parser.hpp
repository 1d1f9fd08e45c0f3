#pragma once

#include <algorithm>
#include <array>
#include <cstdlib>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "mutdafny/ast.hpp"
#include "mutdafny/source.hpp"
#include "mutdafny/token.hpp"
#include "mutdafny/types.hpp"

namespace mutdafny {

namespace detail {

inline const std::unordered_set<std::string_view>& clause_keywords() {
    static const std::unordered_set<std::string_view> kws = {
        "requires", "ensures", "reads", "modifies", "decreases", "invariant",
    };
    return kws;
}

inline const std::unordered_set<std::string_view>& decl_start_keywords() {
    static const std::unordered_set<std::string_view> kws = {
        "method",   "lemma",    "function", "predicate", "constructor", "class",
        "trait",    "datatype", "const",    "module",    "import",      "export",
        "ghost",    "static",   "var",      "twostate",  "least",       "greatest",
        "iterator", "newtype",  "type",     "abstract",  "opaque",
    };
    return kws;
}

// Keyword-like identifiers that cannot end an expression. Used to decide
// whether a '{' after them opens a display or a body.
inline const std::unordered_set<std::string_view>& non_ender_keywords() {
    static const std::unordered_set<std::string_view> kws = {
        "in",      "then",      "else",    "to",     "downto",  "by",      "is",
        "as",      "multiset",  "map",     "imap",   "set",     "iset",    "seq",
        "forall",  "exists",    "var",     "match",  "case",    "if",      "while",
        "new",     "print",     "old",     "fresh",  "unchanged", "allocated",
        "requires", "ensures",  "reads",   "modifies", "decreases", "invariant",
        "returns", "yield",     "assert",  "assume", "expect",  "calc",    "reveal",
    };
    return kws;
}

// Expression keywords whose interiors the parser does not model.
inline const std::unordered_set<std::string_view>& opaque_expr_keywords() {
    static const std::unordered_set<std::string_view> kws = {
        "forall", "exists", "var", "match", "set", "iset", "imap", "seq",
        "old",    "fresh",  "unchanged", "allocated", "assert", "assume", "calc",
    };
    return kws;
}

inline const std::unordered_set<std::string_view>& opaque_stmt_keywords() {
    static const std::unordered_set<std::string_view> kws = {
        "assert", "assume", "expect", "reveal", "calc",
        "forall", "modify", "label",  "yield",
    };
    return kws;
}

inline const std::unordered_set<std::string_view>& reserved_words() {
    static const std::unordered_set<std::string_view> kws = [] {
        std::unordered_set<std::string_view> all = {
            "true", "false", "null", "this", "bool", "int", "nat", "real", "char",
            "string", "array", "object", "break", "continue", "return",
        };
        for (auto kw : clause_keywords()) all.insert(kw);
        for (auto kw : decl_start_keywords()) all.insert(kw);
        for (auto kw : non_ender_keywords()) all.insert(kw);
        return all;
    }();
    return kws;
}

}  // namespace detail

/// Recursive-descent parser for the supported Dafny subset. Specification
/// clauses stay verbatim spans; constructs outside the subset degrade to
/// opaque nodes instead of failing the file.
class Parser {
  public:
    explicit Parser(std::string source)
        : source_(std::move(source)), tokens_(tokenize(source_)) {}

    SyntaxTree run() {
        SyntaxTree tree;
        tree.source_text = source_;
        tree.tokens = tokens_;
        while (!at_end()) tree.declarations.push_back(parse_decl());
        tree.spec_spans = std::move(spec_spans_);
        return tree;
    }

  private:
    struct ExprCtx {
        std::vector<std::string_view> terminators;
        bool brace_ends = false;     // '{' after an expression ender stops the scan
        bool in_cardinality = false; // '|' closes instead of acting as bitwise-or

        static ExprCtx stop_at(std::initializer_list<std::string_view> toks) {
            ExprCtx ctx;
            ctx.terminators.assign(toks);
            return ctx;
        }
        ExprCtx with(std::string_view tok) const {
            ExprCtx ctx = *this;
            ctx.terminators.push_back(tok);
            return ctx;
        }
        bool stops_at(std::string_view tok) const {
            return std::find(terminators.begin(), terminators.end(), tok) != terminators.end();
        }
    };

    // --- token helpers ------------------------------------------------------

    const Token& tok(std::size_t offset = 0) const {
        std::size_t i = idx_ + offset;
        return i < tokens_.size() ? tokens_[i] : tokens_.back();
    }
    std::string_view text(const Token& t) const { return span_text(source_, t.span); }
    std::string_view cur_text() const { return text(tok()); }
    bool at_end() const { return tok().kind == TokenKind::End; }
    bool at(std::string_view s) const { return cur_text() == s; }
    bool at_op(std::string_view s) const { return tok().kind == TokenKind::Op && cur_text() == s; }
    bool at_ident() const {
        return tok().kind == TokenKind::Ident && !detail::reserved_words().count(cur_text());
    }

    const Token& take() {
        const Token& t = tok();
        if (!at_end()) idx_++;
        return t;
    }
    bool accept(std::string_view s) {
        if (at(s)) {
            take();
            return true;
        }
        return false;
    }
    void expect(std::string_view s) {
        if (!accept(s)) fail("expected '" + std::string(s) + "'");
    }
    [[noreturn]] void fail(const std::string& msg) const {
        const Token& t = tok();
        throw ParseError(t.span.line, t.span.column,
                         msg + ", found '" + std::string(at_end() ? "<eof>" : cur_text()) + "'");
    }

    SourceSpan span_from(std::size_t start_idx) const {
        SourceSpan s = tokens_[start_idx].span;
        if (idx_ > start_idx) s.end = tokens_[idx_ - 1].span.end;
        return s;
    }

    bool is_expr_ender(const Token& t) const {
        switch (t.kind) {
            case TokenKind::IntLit:
            case TokenKind::RealLit:
            case TokenKind::StringLit:
            case TokenKind::CharLit: return true;
            case TokenKind::Ident: return !detail::non_ender_keywords().count(text(t));
            case TokenKind::Op: {
                auto s = text(t);
                // '*' covers `decreases *`; '|' closes cardinality bars.
                return s == ")" || s == "]" || s == "}" || s == "*" || s == "|";
            }
            default: return false;
        }
    }

    // --- opaque scans -------------------------------------------------------

    // Consumes a balanced token run for text the grammar does not model.
    // Stops (without consuming) at a depth-0 terminator, at an unbalanced
    // closer, or at '{' when the context says a body follows.
    SourceSpan scan_opaque(const ExprCtx& ctx) {
        std::size_t start = idx_;
        int depth = 0;
        bool prev_ender = false;
        while (!at_end()) {
            std::string_view s = cur_text();
            if (depth == 0) {
                if (ctx.stops_at(s) && idx_ > start) break;
                if (ctx.in_cardinality && s == "|") break;
                if (s == ")" || s == "]" || s == "}") break;
                if (s == "{" && ctx.brace_ends && prev_ender) break;
            }
            if (s == "(" || s == "[" || s == "{")
                depth++;
            else if (s == ")" || s == "]" || s == "}")
                depth--;
            prev_ender = is_expr_ender(tok());
            take();
        }
        if (depth > 0) fail("unclosed bracket");
        if (idx_ == start) fail("expected an expression");
        return span_from(start);
    }

    ExprPtr opaque_expr(const ExprCtx& ctx) {
        auto e = std::make_unique<Expr>();
        e->kind = ExprKind::Opaque;
        e->span = scan_opaque(ctx);
        return e;
    }

    // --- program structure --------------------------------------------------

    DeclPtr parse_decl() {
        std::size_t start = idx_;
        try {
            return parse_decl_inner();
        } catch (const ParseError&) {
            idx_ = start;
            return opaque_decl();
        }
    }

    // Swallow a broken or unsupported declaration up to the next plausible
    // declaration boundary.
    DeclPtr opaque_decl() {
        std::size_t start = idx_;
        int depth = 0;
        bool consumed_any = false;
        while (!at_end()) {
            std::string_view s = cur_text();
            if (depth == 0 && consumed_any &&
                (detail::decl_start_keywords().count(s) || s == "}"))
                break;
            if (s == "(" || s == "[" || s == "{")
                depth++;
            else if (s == ")" || s == "]" || s == "}") {
                if (depth == 0) break;
                depth--;
            }
            take();
            consumed_any = true;
        }
        if (depth > 0) fail("unclosed bracket");
        if (idx_ == start) fail("cannot recover declaration");
        auto d = std::make_unique<Decl>();
        d->kind = DeclKind::Opaque;
        d->span = span_from(start);
        return d;
    }

    DeclPtr parse_decl_inner() {
        std::size_t start = idx_;
        bool ghost = false, is_static = false;
        while (true) {
            if (at("ghost"))
                ghost = true;
            else if (at("static"))
                is_static = true;
            else
                break;
            take();
        }
        std::string_view kw = cur_text();
        if (kw == "method" || kw == "lemma" || kw == "constructor" || kw == "twostate" ||
            kw == "least" || kw == "greatest")
            return parse_callable(start, ghost, is_static);
        if (kw == "function" || kw == "predicate") return parse_callable(start, ghost, is_static);
        if (kw == "class" || kw == "trait") return parse_class(start);
        if (kw == "datatype") return parse_datatype(start);
        if (kw == "const") return parse_const(start, ghost, is_static);
        if (kw == "var") return parse_fields(start, ghost);
        if (kw == "module") return parse_module(start);
        if (kw == "import" || kw == "export") return parse_import(start);
        fail("expected a declaration");
    }

    void skip_attributes() {
        while (at_op("{") && text(tok(1)) == ":") {
            int depth = 0;
            do {
                std::string_view s = cur_text();
                if (s == "{")
                    depth++;
                else if (s == "}")
                    depth--;
                take();
            } while (depth > 0 && !at_end());
        }
    }

    void skip_type_params() {
        if (!at_op("<")) return;
        int depth = 0;
        do {
            std::string_view s = cur_text();
            if (s == "<")
                depth++;
            else if (s == ">")
                depth--;
            else if (s == ">>")
                depth -= 2;
            take();
        } while (depth > 0 && !at_end());
    }

    DeclPtr parse_callable(std::size_t start, bool ghost, bool is_static) {
        auto d = std::make_unique<Decl>();
        d->ghost = ghost;
        d->is_static = is_static;

        std::string_view kw = take_keyword();
        if (kw == "twostate" || kw == "least" || kw == "greatest") kw = take_keyword();
        if (kw == "method") {
            d->kind = DeclKind::Method;
            d->callable_kind = CallableKind::Method;
        } else if (kw == "lemma") {
            d->kind = DeclKind::Method;
            d->callable_kind = CallableKind::Lemma;
            d->ghost = true;
        } else if (kw == "constructor") {
            d->kind = DeclKind::Method;
            d->callable_kind = CallableKind::Constructor;
        } else if (kw == "function") {
            d->kind = DeclKind::Function;
            d->callable_kind = CallableKind::Function;
            accept("method");
        } else if (kw == "predicate") {
            d->kind = DeclKind::Function;
            d->callable_kind = CallableKind::Predicate;
            d->return_type = TypeRef::boolean();
            accept("method");
        } else {
            fail("expected a callable declaration");
        }
        skip_attributes();
        if (at_ident()) {
            const Token& name = take();
            d->name = std::string(text(name));
            d->name_span = name.span;
        } else if (d->callable_kind != CallableKind::Constructor) {
            fail("expected a name");
        }
        skip_type_params();
        if (at_op("(")) d->params = parse_param_list();
        if (d->kind == DeclKind::Function) {
            if (accept(":")) d->return_type = parse_result_type();
        } else if (accept("returns")) {
            expect("(");
            d->outs = parse_params_until_close();
        }
        parse_spec_clauses(d->spec);
        if (at_op("{")) {
            if (d->kind == DeclKind::Function)
                d->body = parse_function_body();
            else
                d->body = parse_block();
        }
        d->span = span_from(start);
        if (d->ghost && d->body) spec_spans_.push_back(d->body->span);
        return d;
    }

    std::string_view take_keyword() { return text(take()); }

    std::vector<Param> parse_param_list() {
        expect("(");
        return parse_params_until_close();
    }

    std::vector<Param> parse_params_until_close() {
        std::vector<Param> params;
        while (!at_op(")") && !at_end()) {
            Param p;
            if (accept("ghost")) p.ghost = true;
            if (accept("nameonly")) {}
            if (!at_ident()) fail("expected a parameter name");
            const Token& name = take();
            p.name = std::string(text(name));
            p.span = name.span;
            expect(":");
            p.type = parse_type();
            if (accept(":="))  // default value
                parse_expr_or_opaque(ExprCtx::stop_at({",", ")"}));
            params.push_back(std::move(p));
            if (!accept(",")) break;
        }
        expect(")");
        return params;
    }

    // Function results may be written ": T" or ": (r: T)".
    TypeRef parse_result_type() {
        if (at_op("(") && tok(1).kind == TokenKind::Ident && text(tok(2)) == ":") {
            take();  // (
            take();  // name
            take();  // :
            TypeRef t = parse_type();
            expect(")");
            return t;
        }
        return parse_type();
    }

    void parse_spec_clauses(std::vector<SpecClause>& out) {
        while (detail::clause_keywords().count(cur_text())) {
            std::size_t start = idx_;
            SpecClause clause;
            clause.keyword = std::string(take_keyword());
            ExprCtx ctx;
            for (auto kw : detail::clause_keywords()) ctx.terminators.push_back(kw);
            for (auto kw : detail::decl_start_keywords()) ctx.terminators.push_back(kw);
            ctx.terminators.push_back(";");
            ctx.terminators.push_back("case");
            ctx.brace_ends = true;
            scan_opaque(ctx);
            accept(";");
            clause.span = span_from(start);
            out.push_back(clause);
            spec_spans_.push_back(clause.span);
        }
    }

    StmtPtr parse_function_body() {
        std::size_t start = idx_;
        auto block = std::make_unique<Stmt>();
        block->kind = StmtKind::Block;
        const Token& open = tok();
        expect("{");
        block->open_brace = open.span;
        ExprCtx ctx = ExprCtx::stop_at({"}"});
        auto holder = std::make_unique<Stmt>();
        holder->kind = StmtKind::Return;  // value position: the function result
        holder->synthetic = true;
        std::size_t expr_start = idx_;
        holder->rhs.push_back(parse_expr_or_opaque(ctx));
        holder->span = span_from(expr_start);
        block->stmts.push_back(std::move(holder));
        expect("}");
        block->span = span_from(start);
        return block;
    }

    DeclPtr parse_class(std::size_t start) {
        auto d = std::make_unique<Decl>();
        d->kind = cur_text() == "trait" ? DeclKind::Trait : DeclKind::Class;
        take();
        skip_attributes();
        if (!at_ident()) fail("expected a class name");
        const Token& name = take();
        d->name = std::string(text(name));
        d->name_span = name.span;
        skip_type_params();
        if (accept("extends")) {
            do {
                if (!at_ident()) fail("expected a trait name");
                d->extends.push_back(std::string(text(take())));
                skip_type_params();
            } while (accept(","));
        }
        expect("{");
        while (!at_op("}") && !at_end()) d->members.push_back(parse_decl());
        expect("}");
        d->span = span_from(start);
        return d;
    }

    DeclPtr parse_datatype(std::size_t start) {
        auto d = std::make_unique<Decl>();
        d->kind = DeclKind::Datatype;
        take();  // datatype
        skip_attributes();
        if (!at_ident()) fail("expected a datatype name");
        const Token& name = take();
        d->name = std::string(text(name));
        d->name_span = name.span;
        skip_type_params();
        expect("=");
        accept("|");
        do {
            DatatypeCtor ctor;
            if (!at_ident()) fail("expected a constructor name");
            const Token& cname = take();
            ctor.name = std::string(text(cname));
            ctor.name_span = cname.span;
            skip_attributes();
            if (at_op("(")) {
                take();
                while (!at_op(")") && !at_end()) {
                    Param p;
                    if (accept("ghost")) p.ghost = true;
                    if (at_ident() && text(tok(1)) == ":") {
                        const Token& pname = take();
                        p.name = std::string(text(pname));
                        p.span = pname.span;
                        take();  // :
                    }
                    p.type = parse_type();
                    ctor.params.push_back(std::move(p));
                    if (!accept(",")) break;
                }
                expect(")");
            }
            d->ctors.push_back(std::move(ctor));
        } while (accept("|"));
        if (at_op("{")) {  // member block: outside the subset, skip balanced
            int depth = 0;
            do {
                std::string_view s = cur_text();
                if (s == "{")
                    depth++;
                else if (s == "}")
                    depth--;
                take();
            } while (depth > 0 && !at_end());
        }
        d->span = span_from(start);
        return d;
    }

    DeclPtr parse_const(std::size_t start, bool ghost, bool is_static) {
        auto d = std::make_unique<Decl>();
        d->kind = DeclKind::Const;
        d->ghost = ghost;
        d->is_static = is_static;
        take();  // const
        skip_attributes();
        if (!at_ident()) fail("expected a constant name");
        const Token& name = take();
        d->name = std::string(text(name));
        d->name_span = name.span;
        if (accept(":")) d->declared_type = parse_type();
        if (accept(":=")) d->init = parse_expr_or_opaque(ExprCtx::stop_at({";"}).with("}"));
        accept(";");
        d->span = span_from(start);
        return d;
    }

    // Class field declarations: `var a: T, b: U`
    DeclPtr parse_fields(std::size_t start, bool ghost) {
        auto d = std::make_unique<Decl>();
        d->kind = DeclKind::Field;
        d->ghost = ghost;
        take();  // var
        do {
            if (!at_ident()) fail("expected a field name");
            Param field;
            const Token& name = take();
            field.name = std::string(text(name));
            field.span = name.span;
            expect(":");
            field.type = parse_type();
            d->params.push_back(std::move(field));
        } while (accept(","));
        accept(";");
        d->span = span_from(start);
        if (d->ghost) spec_spans_.push_back(d->span);
        return d;
    }

    DeclPtr parse_module(std::size_t start) {
        auto d = std::make_unique<Decl>();
        d->kind = DeclKind::Module;
        take();  // module
        skip_attributes();
        if (at_ident()) {
            const Token& name = take();
            d->name = std::string(text(name));
            d->name_span = name.span;
            while (at_op(".") && tok(1).kind == TokenKind::Ident) {
                take();
                take();
            }
        }
        expect("{");
        while (!at_op("}") && !at_end()) d->members.push_back(parse_decl());
        expect("}");
        d->span = span_from(start);
        return d;
    }

    DeclPtr parse_import(std::size_t start) {
        auto d = std::make_unique<Decl>();
        d->kind = DeclKind::Opaque;
        take();  // import/export
        accept("opened");
        while (at_ident() || at_op(".") || at_op("=") || at("as") || at("provides") ||
               at("reveals") || at_op(",") || at_op("`"))
            take();
        accept(";");
        d->span = span_from(start);
        return d;
    }

    // --- types --------------------------------------------------------------

    TypeRef parse_type() {
        int pending = 0;
        return parse_type(pending);
    }

    TypeRef parse_type(int& pending_closes) {
        using K = TypeRef::Kind;
        if (at_op("(")) {
            take();
            TypeRef t;
            t.kind = K::Tuple;
            if (!at_op(")")) {
                int inner = 0;
                t.args.push_back(parse_type(inner));
                while (accept(",")) {
                    int inner2 = 0;
                    t.args.push_back(parse_type(inner2));
                }
            }
            expect(")");
            if (t.args.size() == 1) return t.args[0];
            return t;
        }
        if (tok().kind != TokenKind::Ident) fail("expected a type");
        std::string head(text(take()));
        if (head == "bool") return TypeRef::simple(K::Bool);
        if (head == "int") return TypeRef::simple(K::Int);
        if (head == "nat") return TypeRef::simple(K::Nat);
        if (head == "real") return TypeRef::simple(K::Real);
        if (head == "char") return TypeRef::simple(K::Char);
        if (head == "string") return TypeRef::simple(K::String);
        if (head.size() > 2 && head[0] == 'b' && head[1] == 'v' &&
            std::all_of(head.begin() + 2, head.end(),
                        [](char c) { return c >= '0' && c <= '9'; }))
            return TypeRef::bitvector(std::atoi(head.c_str() + 2));

        auto parse_args = [&](int n) {
            std::vector<TypeRef> args;
            if (accept("<")) {
                args.push_back(parse_type(pending_closes));
                while (static_cast<int>(args.size()) < n && accept(","))
                    args.push_back(parse_type(pending_closes));
                close_type_args(pending_closes);
            }
            while (static_cast<int>(args.size()) < n) args.push_back(TypeRef::unknown());
            return args;
        };
        if (head == "seq") return TypeRef::of(K::Seq, parse_args(1)[0]);
        if (head == "set" || head == "iset") return TypeRef::of(K::Set, parse_args(1)[0]);
        if (head == "multiset") return TypeRef::of(K::Multiset, parse_args(1)[0]);
        if (head == "map" || head == "imap") {
            TypeRef t;
            t.kind = K::Map;
            t.args = parse_args(2);
            return t;
        }
        if (head == "array" || (head.rfind("array", 0) == 0 &&
                                std::all_of(head.begin() + 5, head.end(), [](char c) {
                                    return c >= '0' && c <= '9';
                                }))) {
            bool nullable = accept("?");
            TypeRef t = TypeRef::of(K::Array, parse_args(1)[0]);
            t.nullable = nullable;
            return t;
        }
        // User-defined name, possibly generic and possibly nullable.
        TypeRef t = TypeRef::named(head);
        if (at_op("<")) {
            take();
            t.args.push_back(parse_type(pending_closes));
            while (accept(",")) t.args.push_back(parse_type(pending_closes));
            close_type_args(pending_closes);
        }
        if (accept("?")) t.nullable = true;
        return t;
    }

    void close_type_args(int& pending_closes) {
        if (pending_closes > 0) {
            pending_closes--;
            return;
        }
        if (at_op(">")) {
            take();
            return;
        }
        if (at_op(">>")) {
            take();
            pending_closes++;
            return;
        }
        fail("expected '>'");
    }

    // --- statements -----------------------------------------------------------

    StmtPtr parse_block() {
        std::size_t start = idx_;
        auto block = std::make_unique<Stmt>();
        block->kind = StmtKind::Block;
        const Token& open = tok();
        expect("{");
        block->open_brace = open.span;
        while (!at_op("}") && !at_end()) block->stmts.push_back(parse_stmt());
        expect("}");
        block->span = span_from(start);
        return block;
    }

    StmtPtr parse_stmt() {
        std::size_t start = idx_;
        try {
            return parse_stmt_inner();
        } catch (const ParseError&) {
            idx_ = start;
            return opaque_stmt(false);
        }
    }

    // Balanced swallow of one statement-shaped region. Ends after a depth-0
    // ';', after a balanced '{...}' group (plus any chained else), or before
    // an enclosing '}' or 'case'.
    StmtPtr opaque_stmt(bool is_spec) {
        std::size_t start = idx_;
        int depth = 0;
        while (!at_end()) {
            std::string_view s = cur_text();
            if (depth == 0 && idx_ > start && (s == "}" || s == "case")) break;
            if (s == "(" || s == "[" || s == "{")
                depth++;
            else if (s == ")" || s == "]" || s == "}") {
                if (depth == 0) break;
                depth--;
                if (depth == 0 && s == "}") {
                    take();
                    if (at("else")) continue;
                    if (at_op(";")) take();
                    break;
                }
            }
            take();
            if (depth == 0 && text(tokens_[idx_ - 1]) == ";") break;
        }
        if (depth > 0) fail("unclosed bracket");
        if (idx_ == start) fail("cannot recover statement");
        auto s = std::make_unique<Stmt>();
        s->kind = StmtKind::Opaque;
        s->span = span_from(start);
        if (is_spec) spec_spans_.push_back(s->span);
        return s;
    }

    StmtPtr parse_stmt_inner() {
        std::size_t start = idx_;
        std::string_view kw = cur_text();
        if (detail::opaque_stmt_keywords().count(kw)) {
            bool is_spec = kw == "assert" || kw == "assume";
            return opaque_stmt(is_spec);
        }
        if (kw == "ghost") {
            if (text(tok(1)) == "var") {
                take();
                auto s = parse_var_decl(start);
                s->ghost = true;
                spec_spans_.push_back(s->span);
                return s;
            }
            return opaque_stmt(true);
        }
        if (kw == "var") return parse_var_decl(start);
        if (kw == "if") return parse_if(start, false);
        if (kw == "while") return parse_while(start);
        if (kw == "for") return parse_for(start);
        if (kw == "match") return parse_match(start);
        if (kw == "break" || kw == "continue") {
            take();
            if (at_ident() || at("break")) fail("labelled jump");
            auto s = std::make_unique<Stmt>();
            s->kind = kw == "break" ? StmtKind::Break : StmtKind::Continue;
            expect(";");
            s->span = span_from(start);
            return s;
        }
        if (kw == "return") {
            take();
            auto s = std::make_unique<Stmt>();
            s->kind = StmtKind::Return;
            if (!at_op(";")) {
                ExprCtx ctx = ExprCtx::stop_at({",", ";"});
                s->rhs.push_back(parse_expr_or_opaque(ctx));
                while (accept(",")) s->rhs.push_back(parse_expr_or_opaque(ctx));
            }
            expect(";");
            s->span = span_from(start);
            return s;
        }
        if (kw == "print") {
            take();
            auto s = std::make_unique<Stmt>();
            s->kind = StmtKind::Print;
            ExprCtx ctx = ExprCtx::stop_at({",", ";"});
            s->rhs.push_back(parse_expr_or_opaque(ctx));
            while (accept(",")) s->rhs.push_back(parse_expr_or_opaque(ctx));
            expect(";");
            s->span = span_from(start);
            return s;
        }
        if (at_op("{")) return parse_block();
        return parse_update_or_call(start);
    }

    StmtPtr parse_var_decl(std::size_t start) {
        take();  // var
        auto s = std::make_unique<Stmt>();
        s->kind = StmtKind::VarDecl;
        do {
            if (!at_ident()) fail("expected a variable name");
            VarDeclName v;
            const Token& name = take();
            v.name = std::string(text(name));
            v.span = name.span;
            if (accept(":")) v.declared_type = parse_type();
            s->var_names.push_back(std::move(v));
        } while (accept(","));
        if (at_op(":|") || at_op(":-")) fail("assign-such-that is unsupported");
        if (accept(":=")) {
            ExprCtx ctx = ExprCtx::stop_at({",", ";"});
            do {
                s->rhs.push_back(parse_rhs(ctx));
            } while (accept(","));
        }
        expect(";");
        s->span = span_from(start);
        return s;
    }

    // Update right-hand sides admit `*` (havoc); treat it as opaque.
    ExprPtr parse_rhs(const ExprCtx& ctx) {
        if (at_op("*")) {
            auto e = std::make_unique<Expr>();
            e->kind = ExprKind::Opaque;
            e->span = take().span;
            return e;
        }
        return parse_expr_or_opaque(ctx);
    }

    StmtPtr parse_if(std::size_t start, bool is_else_arm) {
        take();  // if
        auto s = std::make_unique<Stmt>();
        s->kind = StmtKind::If;
        s->is_else_arm = is_else_arm;
        if (at_op("*")) {
            auto g = std::make_unique<Expr>();
            g->kind = ExprKind::Opaque;
            g->span = take().span;
            s->guard = std::move(g);
        } else {
            ExprCtx ctx;
            ctx.brace_ends = true;
            s->guard = parse_expr_or_opaque(ctx);
        }
        s->then_block = parse_block();
        if (at("else")) {
            std::size_t else_start = idx_;
            take();
            if (at("if"))
                s->else_arm = parse_if(idx_, true);
            else
                s->else_arm = parse_block();
            s->else_span = span_from(else_start);
        }
        s->span = span_from(start);
        return s;
    }

    void parse_loop_spec(std::vector<SpecClause>& out) {
        static const std::array<std::string_view, 3> loop_kws = {"invariant", "decreases",
                                                                 "modifies"};
        while (std::find(loop_kws.begin(), loop_kws.end(), cur_text()) != loop_kws.end()) {
            std::size_t start = idx_;
            SpecClause clause;
            clause.keyword = std::string(take_keyword());
            ExprCtx ctx = ExprCtx::stop_at({"invariant", "decreases", "modifies", ";"});
            ctx.brace_ends = true;
            scan_opaque(ctx);
            accept(";");
            clause.span = span_from(start);
            out.push_back(clause);
            spec_spans_.push_back(clause.span);
        }
    }

    StmtPtr parse_while(std::size_t start) {
        take();  // while
        auto s = std::make_unique<Stmt>();
        s->kind = StmtKind::While;
        if (at_op("*")) {
            auto g = std::make_unique<Expr>();
            g->kind = ExprKind::Opaque;
            g->span = take().span;
            s->guard = std::move(g);
        } else {
            ExprCtx ctx = ExprCtx::stop_at({"invariant", "decreases", "modifies"});
            ctx.brace_ends = true;
            s->guard = parse_expr_or_opaque(ctx);
        }
        parse_loop_spec(s->loop_spec);
        s->body = parse_block();
        s->span = span_from(start);
        return s;
    }

    StmtPtr parse_for(std::size_t start) {
        take();  // for
        auto s = std::make_unique<Stmt>();
        s->kind = StmtKind::For;
        if (!at_ident()) fail("expected a loop index");
        const Token& name = take();
        s->index_name = std::string(text(name));
        s->index_span = name.span;
        if (accept(":")) parse_type();
        expect(":=");
        ExprCtx ctx = ExprCtx::stop_at({"to", "downto"});
        s->lo = parse_expr_or_opaque(ctx);
        if (accept("downto"))
            s->descending = true;
        else
            expect("to");
        ExprCtx hi_ctx = ExprCtx::stop_at({"invariant", "decreases", "modifies"});
        hi_ctx.brace_ends = true;
        s->hi = parse_expr_or_opaque(hi_ctx);
        parse_loop_spec(s->loop_spec);
        s->body = parse_block();
        s->span = span_from(start);
        return s;
    }

    StmtPtr parse_match(std::size_t start) {
        take();  // match
        auto s = std::make_unique<Stmt>();
        s->kind = StmtKind::Match;
        ExprCtx ctx;
        ctx.brace_ends = true;
        s->scrutinee = parse_expr_or_opaque(ctx);
        expect("{");
        while (at("case")) {
            MatchCase mc;
            take();
            std::size_t pat_start = idx_;
            int depth = 0;
            while (!at_end() && !(depth == 0 && at_op("=>"))) {
                std::string_view t = cur_text();
                if (t == "(" || t == "[" || t == "{")
                    depth++;
                else if (t == ")" || t == "]" || t == "}")
                    depth--;
                take();
            }
            mc.pattern_span = span_from(pat_start);
            mc.is_wildcard = mc.pattern_span.length() == 1 &&
                             span_text(source_, mc.pattern_span) == "_";
            expect("=>");
            std::size_t body_start = idx_;
            if (at_op("{")) {
                mc.braced = true;
                auto block = parse_block();
                mc.body_span = block->span;
                mc.body = std::move(block->stmts);
            } else {
                while (!at("case") && !at_op("}") && !at_end()) mc.body.push_back(parse_stmt());
                mc.body_span = idx_ > body_start
                                   ? span_from(body_start)
                                   : SourceSpan{tok().span.start, tok().span.start,
                                                tok().span.line, tok().span.column};
            }
            s->cases.push_back(std::move(mc));
        }
        expect("}");
        s->span = span_from(start);
        return s;
    }

    StmtPtr parse_update_or_call(std::size_t start) {
        ExprCtx lhs_ctx = ExprCtx::stop_at({",", ":=", ";"});
        std::vector<ExprPtr> lhs;
        lhs.push_back(parse_expr(lhs_ctx));
        while (accept(",")) lhs.push_back(parse_expr(lhs_ctx));
        if (accept(":=")) {
            auto s = std::make_unique<Stmt>();
            s->kind = StmtKind::Assign;
            s->lhs = std::move(lhs);
            ExprCtx rhs_ctx = ExprCtx::stop_at({",", ";"});
            do {
                s->rhs.push_back(parse_rhs(rhs_ctx));
            } while (accept(","));
            expect(";");
            s->span = span_from(start);
            return s;
        }
        if (at_op(";") && lhs.size() == 1 && lhs[0]->kind == ExprKind::Call) {
            take();
            auto s = std::make_unique<Stmt>();
            s->kind = StmtKind::CallStmt;
            s->call = std::move(lhs[0]);
            s->span = span_from(start);
            return s;
        }
        fail("expected ':=' or a call statement");
    }

    // --- expressions ----------------------------------------------------------

    ExprPtr parse_expr_or_opaque(const ExprCtx& ctx) {
        std::size_t start = idx_;
        try {
            return parse_expr(ctx);
        } catch (const ParseError&) {
            idx_ = start;
            return opaque_expr(ctx);
        }
    }

    ExprPtr parse_expr(const ExprCtx& ctx) { return parse_equiv(ctx); }

    ExprPtr make_binary(std::size_t start, ExprPtr lhs, const Token& op, ExprPtr rhs) {
        auto e = std::make_unique<Expr>();
        e->kind = ExprKind::Binary;
        e->op = std::string(text(op));
        e->op_span = op.span;
        e->span = SourceSpan{tokens_[start].span.start, tokens_[idx_ - 1].span.end,
                             tokens_[start].span.line, tokens_[start].span.column};
        e->lhs = std::move(lhs);
        e->rhs = std::move(rhs);
        return e;
    }

    ExprPtr parse_equiv(const ExprCtx& ctx) {
        std::size_t start = idx_;
        ExprPtr lhs = parse_implies(ctx);
        while (at_op("<==>")) {
            const Token& op = take();
            lhs = make_binary(start, std::move(lhs), op, parse_implies(ctx));
        }
        return lhs;
    }

    ExprPtr parse_implies(const ExprCtx& ctx) {
        std::size_t start = idx_;
        ExprPtr lhs = parse_or(ctx);
        if (at_op("==>")) {
            const Token& op = take();
            return make_binary(start, std::move(lhs), op, parse_implies(ctx));
        }
        while (at_op("<==")) {
            const Token& op = take();
            lhs = make_binary(start, std::move(lhs), op, parse_or(ctx));
        }
        return lhs;
    }

    ExprPtr parse_or(const ExprCtx& ctx) {
        std::size_t start = idx_;
        ExprPtr lhs = parse_and(ctx);
        while (at_op("||")) {
            const Token& op = take();
            lhs = make_binary(start, std::move(lhs), op, parse_and(ctx));
        }
        return lhs;
    }

    ExprPtr parse_and(const ExprCtx& ctx) {
        std::size_t start = idx_;
        ExprPtr lhs = parse_rel(ctx);
        while (at_op("&&")) {
            const Token& op = take();
            lhs = make_binary(start, std::move(lhs), op, parse_rel(ctx));
        }
        return lhs;
    }

    bool at_rel_op() const {
        if (at_op("==") || at_op("!=") || at_op("<") || at_op("<=") || at_op(">") ||
            at_op(">=") || at_op("!in"))
            return true;
        return tok().kind == TokenKind::Ident && cur_text() == "in";
    }

    ExprPtr parse_rel(const ExprCtx& ctx) {
        std::size_t start = idx_;
        ExprPtr lhs = parse_bitwise(ctx);
        while (at_rel_op()) {
            const Token& op = take();
            lhs = make_binary(start, std::move(lhs), op, parse_bitwise(ctx));
        }
        return lhs;
    }

    ExprPtr parse_bitwise(const ExprCtx& ctx) {
        std::size_t start = idx_;
        ExprPtr lhs = parse_shift(ctx);
        while (at_op("&") || at_op("^") || (at_op("|") && !ctx.in_cardinality)) {
            const Token& op = take();
            lhs = make_binary(start, std::move(lhs), op, parse_shift(ctx));
        }
        return lhs;
    }

    ExprPtr parse_shift(const ExprCtx& ctx) {
        std::size_t start = idx_;
        ExprPtr lhs = parse_add(ctx);
        while (at_op("<<") || at_op(">>")) {
            const Token& op = take();
            lhs = make_binary(start, std::move(lhs), op, parse_add(ctx));
        }
        return lhs;
    }

    ExprPtr parse_add(const ExprCtx& ctx) {
        std::size_t start = idx_;
        ExprPtr lhs = parse_mul(ctx);
        while (at_op("+") || at_op("-")) {
            const Token& op = take();
            lhs = make_binary(start, std::move(lhs), op, parse_mul(ctx));
        }
        return lhs;
    }

    ExprPtr parse_mul(const ExprCtx& ctx) {
        std::size_t start = idx_;
        ExprPtr lhs = parse_unary(ctx);
        while (at_op("*") || at_op("/") || at_op("%")) {
            const Token& op = take();
            lhs = make_binary(start, std::move(lhs), op, parse_unary(ctx));
        }
        return lhs;
    }

    ExprPtr parse_unary(const ExprCtx& ctx) {
        if (at_op("-") || at_op("!")) {
            const Token& op = take();
            auto e = std::make_unique<Expr>();
            e->kind = ExprKind::Unary;
            e->op = std::string(text(op));
            e->op_span = op.span;
            e->operand = parse_unary(ctx);
            e->span = SourceSpan{op.span.start, tokens_[idx_ - 1].span.end, op.span.line,
                                 op.span.column};
            return e;
        }
        return parse_postfix(ctx);
    }

    ExprPtr parse_postfix(const ExprCtx& ctx) {
        ExprPtr e = parse_primary(ctx);
        for (;;) {
            if (at_op(".")) {
                take();
                if (tok().kind == TokenKind::IntLit) {
                    const Token& index = take();
                    auto access = std::make_unique<Expr>();
                    access->kind = ExprKind::TupleAccess;
                    access->tuple_index =
                        static_cast<std::size_t>(std::atoll(std::string(text(index)).c_str()));
                    access->index_span = index.span;
                    access->span = SourceSpan{e->span.start, index.span.end, e->span.line,
                                              e->span.column};
                    access->receiver = std::move(e);
                    e = std::move(access);
                    continue;
                }
                if (tok().kind != TokenKind::Ident) fail("expected a member name");
                const Token& member = take();
                if (at_op("(")) {
                    auto call = std::make_unique<Expr>();
                    call->kind = ExprKind::Call;
                    call->name = std::string(text(member));
                    call->name_span = member.span;
                    call->receiver = std::move(e);
                    parse_call_args(*call);
                    call->span = SourceSpan{call->receiver->span.start,
                                            tokens_[idx_ - 1].span.end,
                                            call->receiver->span.line,
                                            call->receiver->span.column};
                    e = std::move(call);
                    continue;
                }
                auto access = std::make_unique<Expr>();
                access->kind = ExprKind::FieldAccess;
                access->name = std::string(text(member));
                access->name_span = member.span;
                access->span = SourceSpan{e->span.start, member.span.end, e->span.line,
                                          e->span.column};
                access->receiver = std::move(e);
                e = std::move(access);
                continue;
            }
            if (at_op("(") && e->kind == ExprKind::Identifier) {
                auto call = std::make_unique<Expr>();
                call->kind = ExprKind::Call;
                call->name = e->name;
                call->name_span = e->name_span;
                call->span = e->span;
                parse_call_args(*call);
                call->span.end = tokens_[idx_ - 1].span.end;
                e = std::move(call);
                continue;
            }
            if (at_op("[")) {
                e = parse_index_suffix(std::move(e));
                continue;
            }
            break;
        }
        return e;
    }

    void parse_call_args(Expr& call) {
        expect("(");
        ExprCtx arg_ctx = ExprCtx::stop_at({",", ")"});
        while (!at_op(")") && !at_end()) {
            call.args.push_back(parse_expr_or_opaque(arg_ctx));
            if (!accept(",")) break;
        }
        expect(")");
    }

    ExprPtr parse_index_suffix(ExprPtr receiver) {
        std::size_t line = receiver->span.line;
        int column = receiver->span.column;
        std::size_t start_off = receiver->span.start;
        expect("[");
        ExprCtx ctx = ExprCtx::stop_at({",", "..", "]", ":="});
        auto finish = [&](ExprPtr node) {
            expect("]");
            node->span = SourceSpan{start_off, tokens_[idx_ - 1].span.end,
                                    static_cast<int>(line), column};
            return node;
        };
        if (accept("..")) {
            auto slice = std::make_unique<Expr>();
            slice->kind = ExprKind::Slice;
            slice->receiver = std::move(receiver);
            if (!at_op("]")) slice->hi = parse_expr_or_opaque(ctx);
            return finish(std::move(slice));
        }
        ExprPtr first = parse_expr_or_opaque(ctx);
        if (accept("..")) {
            auto slice = std::make_unique<Expr>();
            slice->kind = ExprKind::Slice;
            slice->receiver = std::move(receiver);
            slice->lo = std::move(first);
            if (!at_op("]")) slice->hi = parse_expr_or_opaque(ctx);
            return finish(std::move(slice));
        }
        if (at_op(":=")) {
            // Sequence/map update: outside the subset. Swallow to the bracket.
            take();
            ExprCtx upd = ExprCtx::stop_at({"]"});
            scan_opaque(upd);
            auto node = std::make_unique<Expr>();
            node->kind = ExprKind::Opaque;
            return finish(std::move(node));
        }
        auto index = std::make_unique<Expr>();
        index->kind = ExprKind::Index;
        index->receiver = std::move(receiver);
        index->args.push_back(std::move(first));
        while (accept(",")) index->args.push_back(parse_expr_or_opaque(ctx));
        return finish(std::move(index));
    }

    ExprPtr parse_primary(const ExprCtx& ctx) {
        const Token& t = tok();
        switch (t.kind) {
            case TokenKind::IntLit: {
                take();
                auto e = std::make_unique<Expr>();
                e->kind = ExprKind::IntLit;
                e->span = t.span;
                std::string digits(text(t));
                digits.erase(std::remove(digits.begin(), digits.end(), '_'), digits.end());
                e->int_value = std::strtoll(digits.c_str(), nullptr,
                                            digits.rfind("0x", 0) == 0 ? 16 : 10);
                return e;
            }
            case TokenKind::RealLit: {
                take();
                auto e = std::make_unique<Expr>();
                e->kind = ExprKind::RealLit;
                e->span = t.span;
                std::string digits(text(t));
                digits.erase(std::remove(digits.begin(), digits.end(), '_'), digits.end());
                e->real_value = std::strtod(digits.c_str(), nullptr);
                return e;
            }
            case TokenKind::StringLit: {
                take();
                auto e = std::make_unique<Expr>();
                e->kind = ExprKind::StringLit;
                e->span = t.span;
                return e;
            }
            case TokenKind::CharLit: {
                take();
                auto e = std::make_unique<Expr>();
                e->kind = ExprKind::CharLit;
                e->span = t.span;
                return e;
            }
            case TokenKind::Ident: return parse_ident_primary(ctx);
            case TokenKind::Op: return parse_op_primary(ctx);
            default: fail("expected an expression");
        }
    }

    ExprPtr parse_ident_primary(const ExprCtx& ctx) {
        std::string_view word = cur_text();
        const Token& t = tok();
        if (word == "true" || word == "false") {
            take();
            auto e = std::make_unique<Expr>();
            e->kind = ExprKind::BoolLit;
            e->bool_value = word == "true";
            e->span = t.span;
            return e;
        }
        if (word == "null") {
            take();
            auto e = std::make_unique<Expr>();
            e->kind = ExprKind::NullLit;
            e->span = t.span;
            return e;
        }
        if (word == "this") {
            take();
            auto e = std::make_unique<Expr>();
            e->kind = ExprKind::This;
            e->span = t.span;
            return e;
        }
        if (word == "if") return parse_if_then_else(ctx);
        if (word == "new") return parse_new();
        if (word == "multiset" && text(tok(1)) == "{") {
            std::size_t start = idx_;
            take();
            take();
            auto e = std::make_unique<Expr>();
            e->kind = ExprKind::MultisetDisplay;
            parse_display_elems(*e, "}");
            e->span = span_from(start);
            return e;
        }
        if (word == "map" && text(tok(1)) == "[") {
            std::size_t start = idx_;
            take();
            take();
            auto e = std::make_unique<Expr>();
            e->kind = ExprKind::MapDisplay;
            ExprCtx entry_ctx = ExprCtx::stop_at({",", ":=", "]"});
            while (!at_op("]") && !at_end()) {
                MapEntry entry;
                entry.key = parse_expr_or_opaque(entry_ctx);
                expect(":=");
                entry.value = parse_expr_or_opaque(entry_ctx);
                e->map_entries.push_back(std::move(entry));
                if (!accept(",")) break;
            }
            expect("]");
            e->span = span_from(start);
            return e;
        }
        if (detail::opaque_expr_keywords().count(word)) return opaque_expr(ctx);
        if (detail::reserved_words().count(word) && word != "object") fail("unexpected keyword");
        take();
        auto e = std::make_unique<Expr>();
        e->kind = ExprKind::Identifier;
        e->name = std::string(word);
        e->name_span = t.span;
        e->span = t.span;
        return e;
    }

    ExprPtr parse_if_then_else(const ExprCtx& ctx) {
        std::size_t start = idx_;
        take();  // if
        auto e = std::make_unique<Expr>();
        e->kind = ExprKind::IfThenElse;
        ExprCtx guard_ctx = ExprCtx::stop_at({"then"});
        e->guard = parse_expr_or_opaque(guard_ctx);
        expect("then");
        e->then_expr = parse_expr_or_opaque(ctx.with("else"));
        expect("else");
        e->else_expr = parse_expr_or_opaque(ctx);
        e->span = span_from(start);
        return e;
    }

    ExprPtr parse_new() {
        std::size_t start = idx_;
        take();  // new
        auto e = std::make_unique<Expr>();
        e->kind = ExprKind::New;
        if (!at_ident() && !detail::reserved_words().count(cur_text()))
            fail("expected a type after new");
        const Token& head = tok();
        TypeRef t = parse_type();
        e->name = t.name.empty() ? std::string(text(head)) : t.name;
        e->name_span = head.span;
        e->new_type = t;
        if (at_op("[")) {
            e->is_array_new = true;
            take();
            ExprCtx dim_ctx = ExprCtx::stop_at({",", "]"});
            while (!at_op("]") && !at_end()) {
                e->args.push_back(parse_expr_or_opaque(dim_ctx));
                if (!accept(",")) break;
            }
            expect("]");
            if (at_op("(") || at_op("[")) {  // initializer forms are unsupported
                int depth = 0;
                do {
                    std::string_view s = cur_text();
                    if (s == "(" || s == "[")
                        depth++;
                    else if (s == ")" || s == "]")
                        depth--;
                    take();
                } while (depth > 0 && !at_end());
                e->kind = ExprKind::Opaque;
            }
        } else {
            if (at_op(".") && tok(1).kind == TokenKind::Ident) {  // named constructor
                take();
                take();
            }
            if (at_op("(")) parse_call_args(*e);
        }
        e->span = span_from(start);
        return e;
    }

    void parse_display_elems(Expr& e, std::string_view close) {
        ExprCtx ctx = ExprCtx::stop_at({",", close});
        while (!at(close) && !at_end()) {
            e.args.push_back(parse_expr_or_opaque(ctx));
            if (!accept(",")) break;
        }
        expect(close);
    }

    ExprPtr parse_op_primary(const ExprCtx&) {
        std::string_view s = cur_text();
        if (s == "(") {
            std::size_t start = idx_;
            take();
            if (at_op(")")) fail("empty parentheses");
            ExprCtx inner = ExprCtx::stop_at({",", ")"});
            ExprPtr first = parse_expr_or_opaque(inner);
            if (at_op(",")) {
                auto tuple = std::make_unique<Expr>();
                tuple->kind = ExprKind::TupleDisplay;
                tuple->args.push_back(std::move(first));
                while (accept(",")) tuple->args.push_back(parse_expr_or_opaque(inner));
                expect(")");
                tuple->span = span_from(start);
                return tuple;
            }
            expect(")");
            // Keep the parentheses inside the span so that splicing over the
            // node never leaves a dangling bracket.
            first->has_parens = true;
            first->span = span_from(start);
            return first;
        }
        if (s == "[") {
            std::size_t start = idx_;
            take();
            auto e = std::make_unique<Expr>();
            e->kind = ExprKind::SeqDisplay;
            parse_display_elems(*e, "]");
            e->span = span_from(start);
            return e;
        }
        if (s == "{") {
            std::size_t start = idx_;
            take();
            auto e = std::make_unique<Expr>();
            e->kind = ExprKind::SetDisplay;
            parse_display_elems(*e, "}");
            e->span = span_from(start);
            return e;
        }
        if (s == "|") {
            std::size_t start = idx_;
            take();
            auto e = std::make_unique<Expr>();
            e->kind = ExprKind::Cardinality;
            ExprCtx inner;
            inner.in_cardinality = true;
            e->operand = parse_expr_or_opaque(inner);
            expect("|");
            e->span = span_from(start);
            return e;
        }
        fail("expected an expression");
    }

    std::string source_;
    std::vector<Token> tokens_;
    std::size_t idx_ = 0;
    std::vector<SourceSpan> spec_spans_;
};

/// Parses a whole source file into a lossless tree.
inline SyntaxTree parse_program(std::string text) { return Parser(std::move(text)).run(); }

}  // namespace mutdafny
