#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mutdafny/source.hpp"
#include "mutdafny/token.hpp"
#include "mutdafny/types.hpp"

namespace mutdafny {

struct Expr;
struct Stmt;
struct Decl;

using ExprPtr = std::unique_ptr<Expr>;
using StmtPtr = std::unique_ptr<Stmt>;
using DeclPtr = std::unique_ptr<Decl>;

enum class ExprKind {
    BoolLit,
    IntLit,
    RealLit,
    StringLit,
    CharLit,
    NullLit,
    Identifier,
    This,
    FieldAccess,   // receiver.name
    TupleAccess,   // receiver.<index>
    Binary,        // lhs op rhs
    Unary,         // op operand
    Cardinality,   // |operand|
    Call,          // [receiver.]name(args); covers datatype constructor
                   // applications too, the resolver tells them apart
    SeqDisplay,
    SetDisplay,
    MultisetDisplay,
    MapDisplay,
    TupleDisplay,
    New,           // new C(args) or new T[dims]
    Index,         // receiver[indices]
    Slice,         // receiver[lo..hi], either bound optional
    IfThenElse,
    Opaque,        // anything outside the supported subset; never scanned
};

struct MapEntry;

struct Expr {
    ExprKind kind = ExprKind::Opaque;
    SourceSpan span;

    // Literals
    bool bool_value = false;
    long long int_value = 0;
    double real_value = 0.0;

    // Identifier / FieldAccess field / Call callee / DatatypeValue ctor /
    // New class name.
    std::string name;
    SourceSpan name_span;

    ExprPtr receiver;              // FieldAccess, TupleAccess, Call, Index, Slice
    std::size_t tuple_index = 0;   // TupleAccess
    SourceSpan index_span;         // TupleAccess index token

    std::string op;                // Binary / Unary operator token text
    SourceSpan op_span;

    ExprPtr lhs, rhs;              // Binary
    ExprPtr operand;               // Unary, Cardinality

    std::vector<ExprPtr> args;     // Call args, display elements, tuple
                                   // elements, New ctor args or dims, indices
    std::vector<MapEntry> map_entries;

    bool is_array_new = false;     // New: true for new T[dims]
    TypeRef new_type;              // New: the allocated type as written

    ExprPtr lo, hi;                // Slice bounds
    ExprPtr guard, then_expr, else_expr;  // IfThenElse

    bool has_parens = false;       // written as (e); spans exclude the parens

    bool is_literal() const {
        switch (kind) {
            case ExprKind::BoolLit:
            case ExprKind::IntLit:
            case ExprKind::RealLit:
            case ExprKind::StringLit:
            case ExprKind::CharLit:
            case ExprKind::NullLit: return true;
            default: return false;
        }
    }
};

struct MapEntry {
    ExprPtr key;
    ExprPtr value;
};

enum class StmtKind {
    VarDecl,
    Assign,
    CallStmt,   // bare call used as a statement
    If,
    While,
    For,
    Match,
    Break,
    Continue,
    Return,
    Print,
    Block,
    Opaque,     // assert/assume and anything unsupported; never scanned
};

/// A requires/ensures/reads/modifies/decreases/invariant clause kept verbatim.
struct SpecClause {
    std::string keyword;
    SourceSpan span;  // covers the keyword through the end of the clause
};

struct VarDeclName {
    std::string name;
    SourceSpan span;
    std::optional<TypeRef> declared_type;
};

struct MatchCase {
    SourceSpan pattern_span;
    bool is_wildcard = false;
    SourceSpan body_span;          // braced: includes the braces
    bool braced = false;
    std::vector<StmtPtr> body;
};

struct Stmt {
    StmtKind kind = StmtKind::Opaque;
    SourceSpan span;               // includes the trailing ';' where one exists
    bool ghost = false;
    bool synthetic = false;        // parser-made holder (function result), not
                                   // a statement present in the source

    std::vector<VarDeclName> var_names;         // VarDecl
    std::vector<ExprPtr> lhs;                   // Assign targets
    std::vector<ExprPtr> rhs;                   // VarDecl initializers / Assign rhs / Return
                                                // operands / Print args
    ExprPtr call;                               // CallStmt

    ExprPtr guard;                              // If / While
    StmtPtr then_block;                         // If (Block)
    StmtPtr else_arm;                           // If (Block or If), optional
    bool is_else_arm = false;                   // this If is the else of another If
    SourceSpan else_span;                       // from the `else` keyword to arm end

    std::vector<SpecClause> loop_spec;          // While / For
    StmtPtr body;                               // While / For loop body (Block)

    std::string index_name;                     // For
    SourceSpan index_span;
    ExprPtr lo, hi;                             // For bounds
    bool descending = false;                    // for .. downto

    ExprPtr scrutinee;                          // Match
    std::vector<MatchCase> cases;

    std::vector<StmtPtr> stmts;                 // Block
    SourceSpan open_brace;                      // Block opening '{'
};

enum class DeclKind {
    Method,       // also lemma and constructor, see CallableKind
    Function,     // also predicate
    Class,
    Trait,
    Datatype,
    Const,
    Field,
    Module,
    Opaque,
};

enum class CallableKind { Method, Lemma, Constructor, Function, Predicate };

struct Param {
    std::string name;
    SourceSpan span;
    TypeRef type;
    bool ghost = false;
};

struct DatatypeCtor {
    std::string name;
    SourceSpan name_span;
    std::vector<Param> params;
};

struct Decl {
    DeclKind kind = DeclKind::Opaque;
    SourceSpan span;
    std::string name;
    SourceSpan name_span;
    bool ghost = false;
    bool is_static = false;

    // Callables
    CallableKind callable_kind = CallableKind::Method;
    std::vector<Param> params;
    std::vector<Param> outs;              // method out-parameters
    std::optional<TypeRef> return_type;   // functions/predicates
    std::vector<SpecClause> spec;
    StmtPtr body;                         // Block; absent for bodyless decls

    // Class / Trait / Module
    std::vector<DeclPtr> members;
    std::vector<std::string> extends;

    // Datatype
    std::vector<DatatypeCtor> ctors;

    // Const / Field
    std::optional<TypeRef> declared_type;
    ExprPtr init;

    bool is_callable() const { return kind == DeclKind::Method || kind == DeclKind::Function; }
};

/// Lossless parse of one Dafny source file. Owns the verbatim text, the
/// token stream, and the declaration tree; node spans index into the text.
struct SyntaxTree {
    std::string source_text;
    std::vector<Token> tokens;
    std::vector<DeclPtr> declarations;
    std::vector<SourceSpan> spec_spans;  // every opaque spec region (clauses,
                                         // assert/assume), for the scan guard

    std::string_view text(const SourceSpan& span) const {
        return span_text(source_text, span);
    }
};

// ---------------------------------------------------------------------------
// Tree walks. Children are visited in source order.
// ---------------------------------------------------------------------------

inline void for_each_child(const Expr& e, const std::function<void(const Expr&)>& fn) {
    auto visit = [&](const ExprPtr& p) {
        if (p) fn(*p);
    };
    visit(e.receiver);
    visit(e.lhs);
    visit(e.rhs);
    visit(e.operand);
    visit(e.guard);
    visit(e.then_expr);
    visit(e.else_expr);
    visit(e.lo);
    visit(e.hi);
    for (const auto& a : e.args) visit(a);
    for (const auto& entry : e.map_entries) {
        visit(entry.key);
        visit(entry.value);
    }
}

inline void walk_expr(const Expr& e, const std::function<void(const Expr&)>& fn) {
    fn(e);
    if (e.kind == ExprKind::Opaque) return;  // no structure inside
    for_each_child(e, [&](const Expr& child) { walk_expr(child, fn); });
}

inline void for_each_child(const Stmt& s, const std::function<void(const Stmt&)>& stmt_fn,
                           const std::function<void(const Expr&)>& expr_fn) {
    auto expr = [&](const ExprPtr& p) {
        if (p && expr_fn) expr_fn(*p);
    };
    auto stmt = [&](const StmtPtr& p) {
        if (p && stmt_fn) stmt_fn(*p);
    };
    for (const auto& e : s.lhs) expr(e);
    for (const auto& e : s.rhs) expr(e);
    expr(s.call);
    expr(s.guard);
    expr(s.lo);
    expr(s.hi);
    expr(s.scrutinee);
    stmt(s.then_block);
    stmt(s.else_arm);
    stmt(s.body);
    for (const auto& c : s.cases)
        for (const auto& cs : c.body) stmt(cs);
    for (const auto& b : s.stmts) stmt(b);
}

inline void walk_stmt(const Stmt& s, const std::function<void(const Stmt&)>& stmt_fn,
                      const std::function<void(const Expr&)>& expr_fn) {
    if (stmt_fn) stmt_fn(s);
    if (s.kind == StmtKind::Opaque) return;
    for_each_child(
        s, [&](const Stmt& child) { walk_stmt(child, stmt_fn, expr_fn); },
        [&](const Expr& e) {
            if (expr_fn) walk_expr(e, expr_fn);
        });
}

inline void walk_decl(const Decl& d, const std::function<void(const Decl&)>& decl_fn,
                      const std::function<void(const Stmt&)>& stmt_fn,
                      const std::function<void(const Expr&)>& expr_fn) {
    if (decl_fn) decl_fn(d);
    if (d.body) walk_stmt(*d.body, stmt_fn, expr_fn);
    if (d.init && expr_fn) walk_expr(*d.init, expr_fn);
    for (const auto& m : d.members) walk_decl(*m, decl_fn, stmt_fn, expr_fn);
}

inline void walk_tree(const SyntaxTree& tree, const std::function<void(const Decl&)>& decl_fn,
                      const std::function<void(const Stmt&)>& stmt_fn = nullptr,
                      const std::function<void(const Expr&)>& expr_fn = nullptr) {
    for (const auto& d : tree.declarations) walk_decl(*d, decl_fn, stmt_fn, expr_fn);
}

}  // namespace mutdafny
