#pragma once

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mutdafny/operators.hpp"
#include "mutdafny/resolver.hpp"

namespace mutdafny {

/// One textual rewrite. Multi-edit targets apply their edits right-to-left
/// so earlier offsets stay valid.
struct Edit {
    SourceSpan span;
    std::string original;
    std::string replacement;
};

/// One applicable (operator, location, rewrite) found by the scanner.
struct MutationTarget {
    OperatorId op = OperatorId::BOR;
    std::vector<Edit> edits;
    std::string description;
    std::string enclosing_callable;

    const SourceSpan& primary_span() const { return edits.front().span; }
};

namespace detail {

inline const std::set<std::string, std::less<>>& bbr_ops() {
    static const std::set<std::string, std::less<>> ops = {
        "==", "!=", "<", "<=", ">", ">=", "&&", "||", "==>", "<==", "<==>"};
    return ops;
}

// Replacement groups in canonical order; an operand may be swapped for any
// other member of its group.
inline const std::vector<std::vector<std::string>>& bor_groups() {
    static const std::vector<std::vector<std::string>> groups = {
        {"+", "-", "*"},
        {"/", "%"},
        {"==", "!=", "<", "<=", ">", ">="},
        {"&&", "||", "==>", "<==", "<==>"},
        {"&", "|", "^"},
        {"<<", ">>"},
    };
    return groups;
}

inline const std::vector<std::string>& odl_binary_tokens() {
    static const std::vector<std::string> tokens = {
        "+",  "-",  "*",   "/",   "%",    "==", "!=", "<", "<=", ">", ">=",
        "&&", "||", "==>", "<==", "<==>", "&",  "|",  "^", "<<", ">>"};
    return tokens;
}

inline bool name_has_prefix(std::string_view name, std::string_view prefix) {
    if (name.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i)
        if (std::tolower(static_cast<unsigned char>(name[i])) != prefix[i]) return false;
    return true;
}

}  // namespace detail

/// Enumerates mutation targets over a resolved program. Scanning is a pure
/// read of the program, so one scanner may serve any number of operator
/// queries, and instances may run concurrently over the same program.
class Scanner {
  public:
    explicit Scanner(const ResolvedProgram& program) : p_(program) {
        for (const auto& c : p_.callables)
            if (c.decl->body && !c.decl->ghost) build_callable(c);
    }

    std::vector<MutationTarget> scan(OperatorId op) const {
        std::vector<MutationTarget> targets;
        switch (op) {
            case OperatorId::AMR: scan_prefix_calls(targets, OperatorId::AMR, "get"); break;
            case OperatorId::BBR: scan_bbr(targets); break;
            case OperatorId::BOR: scan_bor(targets); break;
            case OperatorId::CBE: scan_cbe(targets); break;
            case OperatorId::CBR: scan_cbr(targets); break;
            case OperatorId::CIR: scan_cir(targets); break;
            case OperatorId::DCR: scan_dcr(targets); break;
            case OperatorId::EVR: scan_evr(targets); break;
            case OperatorId::FAR: scan_far(targets); break;
            case OperatorId::LBI: scan_lbi(targets); break;
            case OperatorId::LSR: scan_lsr(targets); break;
            case OperatorId::LVR: scan_lvr(targets); break;
            case OperatorId::MAP: scan_map(targets); break;
            case OperatorId::MCR: scan_mcr(targets); break;
            case OperatorId::MMR: scan_prefix_calls(targets, OperatorId::MMR, "set"); break;
            case OperatorId::MNR: scan_mnr(targets); break;
            case OperatorId::MRR: scan_mrr(targets); break;
            case OperatorId::MVR: scan_mvr(targets); break;
            case OperatorId::ODL: scan_odl(targets); break;
            case OperatorId::PRV: scan_prv(targets); break;
            case OperatorId::SAR: scan_sar(targets); break;
            case OperatorId::SDL: scan_sdl(targets); break;
            case OperatorId::SLD: scan_sld(targets); break;
            case OperatorId::SWS: scan_sws(targets); break;
            case OperatorId::SWV: scan_swv(targets); break;
            case OperatorId::TAR: scan_tar(targets); break;
            case OperatorId::THD: scan_thd(targets); break;
            case OperatorId::THI: scan_thi(targets); break;
            case OperatorId::UOD: scan_uod(targets); break;
            case OperatorId::UOI: scan_uoi(targets); break;
            case OperatorId::VDL: scan_vdl(targets); break;
            case OperatorId::VER: scan_ver(targets); break;
        }
        std::stable_sort(targets.begin(), targets.end(),
                         [](const MutationTarget& a, const MutationTarget& b) {
                             return a.primary_span().start < b.primary_span().start;
                         });
        return targets;
    }

    std::vector<MutationTarget> scan_all(const std::vector<OperatorId>& ops) const {
        std::vector<MutationTarget> all;
        for (OperatorId op : ops) {
            auto targets = scan(op);
            all.insert(all.end(), std::make_move_iterator(targets.begin()),
                       std::make_move_iterator(targets.end()));
        }
        return all;
    }

  private:
    struct ExprSite {
        const Expr* expr;
        const Expr* parent;      // enclosing expression, if any
        bool lvalue;             // whole assignment target
        bool value_pos;          // rhs/initializer/argument/return operand
    };

    struct StmtSite {
        const Stmt* stmt;
    };

    struct CallableScan {
        const CallableInfo* info;
        std::string display_name;
        std::vector<ExprSite> exprs;               // source order
        std::vector<const Stmt*> stmts;            // source order
        std::vector<const Expr*> stmt_roots;       // per-statement root expressions
        std::vector<const std::vector<StmtPtr>*> stmt_lists;
    };

    // --- context construction ------------------------------------------------

    bool ghost_call(const Expr& call) const {
        if (call.kind != ExprKind::Call) return false;
        const CallableSignature* sig = callee_sig(call);
        return sig && sig->is_ghost;
    }

    const CallableSignature* callee_sig(const Expr& call) const {
        const Binding* b = p_.binding_of(call);
        if (!b || b->kind != Binding::Kind::Callable) return nullptr;
        return b->owner.empty() ? p_.symbols.find_module_callable(call.name)
                                : p_.symbols.find_member(b->owner, call.name);
    }

    bool is_method_call(const Expr& e) const {
        if (e.kind != ExprKind::Call) return false;
        const CallableSignature* sig = callee_sig(e);
        return sig && sig->is_method;
    }

    bool ghost_var(const CallableInfo& c, const std::string& name) const {
        for (const auto& v : c.vars)
            if (v.name == name && v.ghost) return true;
        return false;
    }

    bool skip_stmt(const CallableInfo& c, const Stmt& s) const {
        if (s.kind == StmtKind::Opaque || s.ghost) return true;
        if (s.kind == StmtKind::Assign)
            for (const auto& lhs : s.lhs)
                if (lhs->kind == ExprKind::Identifier && ghost_var(c, lhs->name)) return true;
        if (s.kind == StmtKind::CallStmt && ghost_call(*s.call)) return true;
        return false;
    }

    void build_callable(const CallableInfo& info) {
        CallableScan scan;
        scan.info = &info;
        scan.display_name = info.decl->name.empty()
                                ? (info.owner_class ? info.owner_class->name : "") + ".constructor"
                                : info.decl->name;
        current_scan_ = &scan;
        add_stmt(info, *info.decl->body);
        current_scan_ = nullptr;
        callables_.push_back(std::move(scan));
    }

    void add_stmt(const CallableInfo& c, const Stmt& s) {
        if (skip_stmt(c, s)) return;
        current_scan_->stmts.push_back(&s);
        switch (s.kind) {
            case StmtKind::VarDecl:
                for (const auto& e : s.rhs) add_expr(c, *e, nullptr, false, true);
                break;
            case StmtKind::Assign:
                for (const auto& e : s.lhs) add_expr(c, *e, nullptr, true, false);
                for (const auto& e : s.rhs) add_expr(c, *e, nullptr, false, true);
                break;
            case StmtKind::CallStmt: add_expr(c, *s.call, nullptr, false, false); break;
            case StmtKind::If:
                if (s.guard) add_expr(c, *s.guard, nullptr, false, false);
                if (s.then_block) add_stmt(c, *s.then_block);
                if (s.else_arm) add_stmt(c, *s.else_arm);
                break;
            case StmtKind::While:
                if (s.guard) add_expr(c, *s.guard, nullptr, false, false);
                if (s.body) add_stmt(c, *s.body);
                break;
            case StmtKind::For:
                if (s.lo) add_expr(c, *s.lo, nullptr, false, false);
                if (s.hi) add_expr(c, *s.hi, nullptr, false, false);
                if (s.body) add_stmt(c, *s.body);
                break;
            case StmtKind::Match:
                if (s.scrutinee) add_expr(c, *s.scrutinee, nullptr, false, false);
                for (const auto& mc : s.cases) {
                    current_scan_->stmt_lists.push_back(&mc.body);
                    for (const auto& cs : mc.body) add_stmt(c, *cs);
                }
                break;
            case StmtKind::Return:
                for (const auto& e : s.rhs) add_expr(c, *e, nullptr, false, true);
                break;
            case StmtKind::Print:
                for (const auto& e : s.rhs) add_expr(c, *e, nullptr, false, false);
                break;
            case StmtKind::Block:
                current_scan_->stmt_lists.push_back(&s.stmts);
                for (const auto& child : s.stmts) add_stmt(c, *child);
                break;
            default: break;
        }
    }

    void add_expr(const CallableInfo& c, const Expr& e, const Expr* parent, bool lvalue,
                  bool value_pos) {
        if (e.kind == ExprKind::Opaque) return;
        if (ghost_call(e)) return;
        if (!parent) current_scan_->stmt_roots.push_back(&e);
        current_scan_->exprs.push_back({&e, parent, lvalue, value_pos});
        for_each_child(e, [&](const Expr& child) {
            bool arg_pos = false;
            if (e.kind == ExprKind::Call || e.kind == ExprKind::New)
                for (const auto& a : e.args)
                    if (a.get() == &child) arg_pos = true;
            add_expr(c, child, &e, false, arg_pos);
        });
    }

    // --- shared helpers -------------------------------------------------------

    std::string_view src(const SourceSpan& span) const { return p_.tree->text(span); }

    /// Parenthesizes replacements that would merge with a preceding '-' into
    /// an adjacent token run.
    std::string guard_negative(std::string repl, std::size_t at) const {
        if (!repl.empty() && repl[0] == '-' && at > 0 && p_.tree->source_text[at - 1] == '-')
            return "(" + repl + ")";
        return repl;
    }

    void add_target(std::vector<MutationTarget>& out, OperatorId opid, const CallableScan& c,
                    SourceSpan span, std::string replacement, std::string what) const {
        std::string original(src(span));
        replacement = guard_negative(std::move(replacement), span.start);
        if (original == replacement) return;  // no identity mutants
        MutationTarget t;
        t.op = opid;
        t.edits.push_back({span, std::move(original), std::move(replacement)});
        t.description = std::move(what);
        t.enclosing_callable = c.display_name;
        out.push_back(std::move(t));
    }

    bool same_or_nat_for_int(const TypeRef& candidate, const TypeRef& context) const {
        if (context.is_unknown()) return false;
        if (candidate == context) return true;
        return context.kind == TypeRef::Kind::Int && candidate.kind == TypeRef::Kind::Nat;
    }

    /// In-scope replacement variables for a context type, in declaration
    /// order. nat sources may stand in where int is expected.
    std::vector<const VarInfo*> replacement_sources(const CallableInfo& c, std::size_t offset,
                                                    const TypeRef& t,
                                                    const std::string& exclude) const {
        std::vector<const VarInfo*> out;
        if (t.is_unknown()) return out;
        for (const VarInfo& v : c.vars) {
            if (v.name == exclude || v.ghost) continue;
            if (!(v.scope_span.start <= offset && offset < v.scope_span.end)) continue;
            if (v.available_from > offset) continue;
            if (p_.innermost_binding(c, v.name, offset) != &v) continue;
            if (same_or_nat_for_int(v.type, t)) out.push_back(&v);
        }
        return out;
    }

    // --- operators over expressions -------------------------------------------

    void scan_bor(std::vector<MutationTarget>& out) const {
        for (const auto& c : callables_) {
            for (const auto& site : c.exprs) {
                if (site.expr->kind != ExprKind::Binary) continue;
                const std::string& op = site.expr->op;
                for (const auto& group : detail::bor_groups()) {
                    if (std::find(group.begin(), group.end(), op) == group.end()) continue;
                    bool relational = group[0] == "==";
                    bool eq_only = relational && !ordered_operands(*site.expr);
                    for (const auto& alt : group) {
                        if (alt == op) continue;
                        if (eq_only && !((op == "==" && alt == "!=") || (op == "!=" && alt == "==")))
                            continue;
                        add_target(out, OperatorId::BOR, c, site.expr->op_span, alt,
                                   "replace '" + op + "' with '" + alt + "'");
                    }
                    break;
                }
            }
        }
    }

    bool ordered_operands(const Expr& bin) const {
        TypeRef t = p_.type_of(*bin.lhs);
        if (t.is_unknown()) t = p_.type_of(*bin.rhs);
        switch (t.kind) {
            case TypeRef::Kind::Int:
            case TypeRef::Kind::Nat:
            case TypeRef::Kind::Real:
            case TypeRef::Kind::Char:
            case TypeRef::Kind::BitVector:
            case TypeRef::Kind::String:
            case TypeRef::Kind::Seq:
            case TypeRef::Kind::Set:
            case TypeRef::Kind::Multiset:
            case TypeRef::Kind::Unknown: return true;
            default: return false;
        }
    }

    void scan_bbr(std::vector<MutationTarget>& out) const {
        for (const auto& c : callables_) {
            for (const auto& site : c.exprs) {
                if (site.expr->kind != ExprKind::Binary) continue;
                if (!detail::bbr_ops().count(site.expr->op)) continue;
                for (const char* lit : {"true", "false"})
                    add_target(out, OperatorId::BBR, c, site.expr->span, lit,
                               "replace boolean expression with " + std::string(lit));
            }
        }
    }

    void scan_uoi(std::vector<MutationTarget>& out) const {
        for (const auto& c : callables_) {
            for (const auto& site : c.exprs) {
                if (site.lvalue || is_method_call(*site.expr)) continue;
                const char* op = nullptr;
                switch (p_.type_of(*site.expr).kind) {
                    case TypeRef::Kind::Int:
                    case TypeRef::Kind::Nat:
                    case TypeRef::Kind::Real: op = "-"; break;
                    case TypeRef::Kind::Bool:
                    case TypeRef::Kind::BitVector: op = "!"; break;
                    default: break;
                }
                if (!op) continue;
                std::string text(src(site.expr->span));
                add_target(out, OperatorId::UOI, c, site.expr->span,
                           std::string(op) + "(" + text + ")",
                           std::string("insert unary '") + op + "'");
            }
        }
    }

    void scan_uod(std::vector<MutationTarget>& out) const {
        for (const auto& c : callables_) {
            for (const auto& site : c.exprs) {
                if (site.expr->kind != ExprKind::Unary) continue;
                add_target(out, OperatorId::UOD, c, site.expr->span,
                           std::string(src(site.expr->operand->span)),
                           "delete unary '" + site.expr->op + "'");
            }
        }
    }

    void scan_lvr(std::vector<MutationTarget>& out) const {
        for (const auto& c : callables_) {
            for (const auto& site : c.exprs) {
                const Expr& e = *site.expr;
                switch (e.kind) {
                    case ExprKind::BoolLit:
                        add_target(out, OperatorId::LVR, c, e.span,
                                   e.bool_value ? "false" : "true", "flip boolean literal");
                        break;
                    case ExprKind::IntLit: {
                        std::vector<long long> candidates = {0, 1, -1, e.int_value + 1,
                                                             e.int_value - 1};
                        std::vector<long long> seen;
                        for (long long v : candidates) {
                            if (v == e.int_value) continue;
                            if (std::find(seen.begin(), seen.end(), v) != seen.end()) continue;
                            seen.push_back(v);
                            add_target(out, OperatorId::LVR, c, e.span, std::to_string(v),
                                       "replace integer literal");
                        }
                        break;
                    }
                    case ExprKind::RealLit: {
                        const std::pair<double, const char*> candidates[] = {
                            {0.0, "0.0"}, {1.0, "1.0"}, {-1.0, "-1.0"}};
                        for (const auto& [v, text] : candidates)
                            if (e.real_value != v)
                                add_target(out, OperatorId::LVR, c, e.span, text,
                                           "replace real literal");
                        break;
                    }
                    case ExprKind::StringLit: {
                        std::string_view text = src(e.span);
                        bool empty = text == "\"\"" || text == "@\"\"";
                        add_target(out, OperatorId::LVR, c, e.span, empty ? "\"A\"" : "\"\"",
                                   "replace string literal");
                        break;
                    }
                    case ExprKind::CharLit: {
                        bool is_a = src(e.span) == "'a'";
                        add_target(out, OperatorId::LVR, c, e.span, is_a ? "'b'" : "'a'",
                                   "replace character literal");
                        break;
                    }
                    default: break;
                }
            }
        }
    }

    void scan_evr(std::vector<MutationTarget>& out) const {
        for (const auto& c : callables_) {
            for (const auto& site : c.exprs) {
                if (!site.value_pos || site.expr->is_literal()) continue;
                if (is_method_call(*site.expr)) continue;
                const TypeRef& t = p_.type_of(*site.expr);
                std::vector<const char*> repls;
                if (t.kind == TypeRef::Kind::Int || t.kind == TypeRef::Kind::Nat)
                    repls = {"0", "1", "-1"};
                else if (t.kind == TypeRef::Kind::Real)
                    repls = {"0.0"};
                else if (t.kind == TypeRef::Kind::Bool) {
                    bool bbr = site.expr->kind == ExprKind::Binary &&
                               detail::bbr_ops().count(site.expr->op);
                    if (!bbr) repls = {"true", "false"};
                }
                for (const char* r : repls)
                    add_target(out, OperatorId::EVR, c, site.expr->span, r,
                               "replace expression with literal");
            }
        }
    }

    void scan_mrr(std::vector<MutationTarget>& out) const {
        for (const auto& c : callables_) {
            for (const Stmt* s : c.stmts) {
                if (s->kind != StmtKind::VarDecl && s->kind != StmtKind::Assign) continue;
                if (s->rhs.size() != 1 || !is_method_call(*s->rhs[0])) continue;
                const CallableSignature* sig = callee_sig(*s->rhs[0]);
                if (!sig || sig->return_types.empty()) continue;
                std::string defaults;
                bool ok = true;
                for (const auto& t : sig->return_types) {
                    auto lit = default_literal(t);
                    if (!lit) {
                        ok = false;
                        break;
                    }
                    if (!defaults.empty()) defaults += ", ";
                    defaults += *lit;
                }
                if (!ok) continue;
                add_target(out, OperatorId::MRR, c, s->rhs[0]->span, defaults,
                           "replace call with default return values");
            }
        }
    }

    void scan_map(std::vector<MutationTarget>& out) const {
        for (const auto& c : callables_) {
            for (const auto& site : c.exprs) {
                if (site.expr->kind != ExprKind::Call) continue;
                const CallableSignature* sig = callee_sig(*site.expr);
                if (!sig || sig->return_types.size() != 1) continue;
                const TypeRef& ret = sig->return_types[0];
                if (ret.is_unknown()) continue;
                for (const auto& arg : site.expr->args)
                    if (same_or_nat_for_int(p_.type_of(*arg), ret))
                        add_target(out, OperatorId::MAP, c, site.expr->span,
                                   std::string(src(arg->span)),
                                   "replace call with its argument");
            }
        }
    }

    void scan_cir(std::vector<MutationTarget>& out) const {
        for (const auto& c : callables_) {
            for (const auto& site : c.exprs) {
                const Expr& e = *site.expr;
                const char* empty = nullptr;
                if (e.kind == ExprKind::SeqDisplay && !e.args.empty()) empty = "[]";
                if (e.kind == ExprKind::SetDisplay && !e.args.empty()) empty = "{}";
                if (e.kind == ExprKind::MultisetDisplay && !e.args.empty()) empty = "multiset{}";
                if (e.kind == ExprKind::MapDisplay && !e.map_entries.empty()) empty = "map[]";
                if (empty)
                    add_target(out, OperatorId::CIR, c, e.span, empty,
                               "empty the collection display");
            }
            for (const Stmt* s : c.stmts) {
                if (s->kind != StmtKind::VarDecl || s->var_names.size() != 1 ||
                    s->rhs.size() != 1)
                    continue;
                if (s->rhs[0]->kind != ExprKind::New || s->rhs[0]->is_array_new) continue;
                const VarInfo* v = var_for_decl(*c.info, s->var_names[0].span);
                if (!v) continue;
                bool nullable_ref = (v->type.kind == TypeRef::Kind::Class ||
                                     v->type.kind == TypeRef::Kind::Trait) &&
                                    v->type.nullable;
                if (nullable_ref)
                    add_target(out, OperatorId::CIR, c, s->rhs[0]->span, "null",
                               "replace allocation with null");
            }
        }
    }

    const VarInfo* var_for_decl(const CallableInfo& c, const SourceSpan& name_span) const {
        for (const auto& v : c.vars)
            if (v.decl_span == name_span) return &v;
        return nullptr;
    }

    // --- operators over statements ---------------------------------------------

    void scan_lsr(std::vector<MutationTarget>& out) const {
        for (const auto& c : callables_) {
            for (const Stmt* s : c.stmts) {
                if (s->kind != StmtKind::Break && s->kind != StmtKind::Continue) continue;
                bool is_break = s->kind == StmtKind::Break;
                add_target(out, OperatorId::LSR, c, s->span, is_break ? "continue;" : "break;",
                           is_break ? "break to continue" : "continue to break");
                if (c.info->sig.is_method && c.info->sig.return_types.empty())
                    add_target(out, OperatorId::LSR, c, s->span, "return;",
                               "jump to return");
            }
        }
    }

    void scan_lbi(std::vector<MutationTarget>& out) const {
        for (const auto& c : callables_) {
            for (const Stmt* s : c.stmts) {
                if ((s->kind != StmtKind::While && s->kind != StmtKind::For) || !s->body) continue;
                const SourceSpan& brace = s->body->open_brace;
                SourceSpan at{brace.end, brace.end, brace.line, brace.column + 1};
                add_target(out, OperatorId::LBI, c, at, " break;",
                           "insert break at loop start");
            }
        }
    }

    void scan_cbr(std::vector<MutationTarget>& out) const {
        for (const auto& c : callables_) {
            for (const Stmt* s : c.stmts) {
                if (s->kind != StmtKind::Match) continue;
                const MatchCase* wildcard = nullptr;
                const MatchCase* first_other = nullptr;
                for (const auto& mc : s->cases) {
                    if (mc.is_wildcard && !wildcard) wildcard = &mc;
                    if (!mc.is_wildcard && !first_other) first_other = &mc;
                }
                if (!wildcard) continue;
                for (const auto& mc : s->cases) {
                    if (mc.is_wildcard) continue;
                    add_target(out, OperatorId::CBR, c, mc.body_span,
                               std::string(src(wildcard->body_span)),
                               "replace case body with default body");
                }
                if (first_other)
                    add_target(out, OperatorId::CBR, c, wildcard->body_span,
                               std::string(src(first_other->body_span)),
                               "replace default body with first case body");
            }
        }
    }

    void scan_sdl(std::vector<MutationTarget>& out) const {
        for (const auto& c : callables_) {
            for (const Stmt* s : c.stmts) {
                switch (s->kind) {
                    case StmtKind::VarDecl:
                    case StmtKind::Assign:
                    case StmtKind::CallStmt:
                    case StmtKind::Print:
                    case StmtKind::Break:
                    case StmtKind::Continue:
                    case StmtKind::Return:
                        if (!s->synthetic)
                            add_target(out, OperatorId::SDL, c, s->span, "",
                                       "delete statement");
                        break;
                    case StmtKind::If:
                        if (s->else_arm)
                            add_target(out, OperatorId::SDL, c, s->else_span, "",
                                       "delete else branch");
                        else if (!s->is_else_arm)
                            add_target(out, OperatorId::SDL, c, s->span, "",
                                       "delete if statement");
                        break;
                    default: break;
                }
            }
            const CallableInfo& info = *c.info;
            if (info.sig.is_method && info.sig.return_types.empty())
                add_target(out, OperatorId::SDL, c, info.decl->body->span, "{}",
                           "empty the body");
        }
    }

    void scan_mnr(std::vector<MutationTarget>& out) const {
        for (const auto& c : callables_) {
            for (const auto& site : c.exprs) {
                const Expr& e = *site.expr;
                if (e.kind != ExprKind::Call || !e.receiver) continue;
                const Binding* rb = p_.binding_of(*e.receiver);
                if (rb && rb->kind == Binding::Kind::TypeName) continue;
                const CallableSignature* sig = callee_sig(e);
                if (!sig || sig->return_types.size() != 1) continue;
                const TypeRef& rt = p_.type_of(*e.receiver);
                if (rt.is_unknown() || !(rt == sig->return_types[0])) continue;
                add_target(out, OperatorId::MNR, c, e.span, std::string(src(e.receiver->span)),
                           "drop call, keep receiver");
            }
        }
    }

    void scan_vdl(std::vector<MutationTarget>& out) const {
        for (const auto& c : callables_) {
            for (const auto& v : c.info->vars) {
                if (v.kind != Binding::Kind::Local || v.ghost) continue;
                if (!declared_by_var_stmt(c, v)) continue;
                std::vector<const ExprSite*> uses;
                bool blocked = false;
                for (const auto& site : c.exprs) {
                    if (site.expr->kind != ExprKind::Identifier || site.expr->name != v.name)
                        continue;
                    const Binding* b = p_.binding_of(*site.expr);
                    if (!b || !(b->decl_span == v.decl_span)) continue;
                    uses.push_back(&site);
                    if (!site.parent || site.parent->kind != ExprKind::Binary) blocked = true;
                }
                if (uses.empty() || blocked) continue;
                MutationTarget t;
                t.op = OperatorId::VDL;
                t.enclosing_callable = c.display_name;
                t.description = "delete all uses of '" + v.name + "'";
                bool conflict = false;
                for (const ExprSite* use : uses) {
                    const Expr* sibling = use->parent->lhs.get() == use->expr
                                              ? use->parent->rhs.get()
                                              : use->parent->lhs.get();
                    walk_expr(*sibling, [&](const Expr& sub) {
                        if (sub.kind == ExprKind::Identifier && sub.name == v.name)
                            conflict = true;
                    });
                    t.edits.push_back({use->parent->span,
                                       std::string(src(use->parent->span)),
                                       std::string(src(sibling->span))});
                }
                if (conflict || t.edits.empty()) continue;
                std::sort(t.edits.begin(), t.edits.end(),
                          [](const Edit& a, const Edit& b) { return a.span.start < b.span.start; });
                out.push_back(std::move(t));
            }
        }
    }

    bool declared_by_var_stmt(const CallableScan& c, const VarInfo& v) const {
        for (const Stmt* s : c.stmts) {
            if (s->kind != StmtKind::VarDecl) continue;
            for (const auto& name : s->var_names)
                if (name.span == v.decl_span) return true;
        }
        return false;
    }

    void scan_sld(std::vector<MutationTarget>& out) const {
        for (const auto& c : callables_) {
            for (const auto& site : c.exprs) {
                const Expr& e = *site.expr;
                if (e.kind != ExprKind::Slice) continue;
                if (e.lo)
                    add_target(out, OperatorId::SLD, c, e.lo->span, "",
                               "drop slice start");
                if (e.hi)
                    add_target(out, OperatorId::SLD, c, e.hi->span, "", "drop slice end");
            }
        }
    }

    void scan_odl(std::vector<MutationTarget>& out) const {
        for (const auto& c : callables_) {
            for (const std::string& token : detail::odl_binary_tokens()) {
                std::vector<const Expr*> maximal;
                for (const Expr* root : c.stmt_roots) collect_maximal(*root, token, maximal);
                if (maximal.empty()) continue;
                for (bool keep_left : {true, false}) {
                    MutationTarget t;
                    t.op = OperatorId::ODL;
                    t.enclosing_callable = c.display_name;
                    t.description = std::string("delete all '") + token + "' keeping " +
                                    (keep_left ? "left" : "right") + " operands";
                    for (const Expr* b : maximal)
                        t.edits.push_back({b->span, std::string(src(b->span)),
                                           odl_text(*b, token, keep_left)});
                    out.push_back(std::move(t));
                }
            }
            std::vector<std::string> unary_tokens;
            for (const auto& site : c.exprs)
                if (site.expr->kind == ExprKind::Unary &&
                    std::find(unary_tokens.begin(), unary_tokens.end(), site.expr->op) ==
                        unary_tokens.end())
                    unary_tokens.push_back(site.expr->op);
            std::sort(unary_tokens.begin(), unary_tokens.end());
            for (const std::string& token : unary_tokens) {
                MutationTarget t;
                t.op = OperatorId::ODL;
                t.enclosing_callable = c.display_name;
                t.description = "delete all unary '" + token + "'";
                for (const auto& site : c.exprs)
                    if (site.expr->kind == ExprKind::Unary && site.expr->op == token)
                        t.edits.push_back({site.expr->op_span,
                                           std::string(src(site.expr->op_span)), ""});
                std::sort(t.edits.begin(), t.edits.end(),
                          [](const Edit& a, const Edit& b) { return a.span.start < b.span.start; });
                out.push_back(std::move(t));
            }
        }
    }

    void collect_maximal(const Expr& e, const std::string& token,
                         std::vector<const Expr*>& out) const {
        if (e.kind == ExprKind::Opaque) return;
        if (e.kind == ExprKind::Binary && e.op == token) {
            out.push_back(&e);
            return;
        }
        for_each_child(e, [&](const Expr& child) { collect_maximal(child, token, out); });
    }

    /// Text of `e` after removing every `token` binary inside it, keeping the
    /// chosen operand.
    std::string odl_text(const Expr& e, const std::string& token, bool keep_left) const {
        if (e.kind == ExprKind::Binary && e.op == token)
            return odl_text(keep_left ? *e.lhs : *e.rhs, token, keep_left);
        std::vector<const Expr*> nested;
        for_each_child(e, [&](const Expr& child) { collect_maximal(child, token, nested); });
        std::string text(src(e.span));
        std::sort(nested.begin(), nested.end(),
                  [](const Expr* a, const Expr* b) { return a->span.start > b->span.start; });
        for (const Expr* b : nested) {
            SourceSpan local{b->span.start - e.span.start, b->span.end - e.span.start};
            text = splice(text, local, odl_text(*b, token, keep_left));
        }
        return text;
    }

    void scan_prv(std::vector<MutationTarget>& out) const {
        for (const auto& c : callables_) {
            for (const Stmt* s : c.stmts) {
                if (!p_.is_parent_assignment(*s)) continue;
                const TypeRef& trait = p_.type_of(*s->lhs[0]);
                const TypeRef& child = p_.type_of(*s->rhs[0]);
                std::size_t at = s->rhs[0]->span.start;
                for (const auto& v : c.info->vars) {
                    if (v.ghost || v.name == s->rhs[0]->name) continue;
                    if (!(v.scope_span.start <= at && at < v.scope_span.end)) continue;
                    if (v.available_from > at) continue;
                    if (v.type.kind != TypeRef::Kind::Class || v.type == child) continue;
                    const ClassInfo* cls = p_.symbols.find_class(v.type.name);
                    if (!cls || std::find(cls->extends.begin(), cls->extends.end(),
                                          trait.name) == cls->extends.end())
                        continue;
                    add_target(out, OperatorId::PRV, c, s->rhs[0]->span, v.name,
                               "assign a different child class instance");
                }
            }
        }
    }

    void scan_thi(std::vector<MutationTarget>& out) const {
        for (const auto& c : callables_) {
            if (!c.info->owner_class) continue;
            const ClassInfo* cls = p_.symbols.find_class(c.info->owner_class->name);
            if (!cls) continue;
            for (const auto& site : c.exprs) {
                if (site.expr->kind != ExprKind::Identifier || site.lvalue) continue;
                const Binding* b = p_.binding_of(*site.expr);
                if (!b || b->kind != Binding::Kind::Param) continue;
                bool shadows_field =
                    std::any_of(cls->fields.begin(), cls->fields.end(),
                                [&](const FieldInfo& f) { return f.name == site.expr->name; });
                if (shadows_field)
                    add_target(out, OperatorId::THI, c, site.expr->span,
                               "this." + site.expr->name, "read the field instead");
            }
        }
    }

    void scan_thd(std::vector<MutationTarget>& out) const {
        for (const auto& c : callables_) {
            for (const auto& site : c.exprs) {
                const Expr& e = *site.expr;
                if (e.kind != ExprKind::FieldAccess || site.lvalue) continue;
                if (!e.receiver || e.receiver->kind != ExprKind::This) continue;
                bool named_param =
                    std::any_of(c.info->decl->params.begin(), c.info->decl->params.end(),
                                [&](const Param& param) { return param.name == e.name; });
                if (!named_param) continue;
                SourceSpan prefix{e.span.start, e.name_span.start, e.span.line, e.span.column};
                add_target(out, OperatorId::THD, c, prefix, "",
                           "read the parameter instead");
            }
        }
    }

    void scan_prefix_calls(std::vector<MutationTarget>& out, OperatorId opid,
                           std::string_view prefix) const {
        for (const auto& c : callables_) {
            for (const auto& site : c.exprs) {
                if (site.expr->kind != ExprKind::Call) continue;
                const Binding* b = p_.binding_of(*site.expr);
                if (!b || b->kind != Binding::Kind::Callable || b->owner.empty()) continue;
                if (!detail::name_has_prefix(site.expr->name, prefix)) continue;
                const CallableSignature* self = callee_sig(*site.expr);
                const ClassInfo* cls = p_.symbols.find_class(b->owner);
                if (!self || !cls) continue;
                for (const auto& sig : cls->callables) {
                    if (sig.name == site.expr->name || sig.is_ghost) continue;
                    if (!detail::name_has_prefix(sig.name, prefix)) continue;
                    if (!signatures_match(*self, sig)) continue;
                    add_target(out, opid, c, site.expr->name_span, sig.name,
                               "call the sibling " + std::string(prefix) + "-method");
                }
            }
        }
    }

    void scan_ver(std::vector<MutationTarget>& out) const {
        for (const auto& c : callables_) {
            for (const auto& site : c.exprs) {
                if (site.expr->kind != ExprKind::Identifier) continue;
                const Binding* b = p_.binding_of(*site.expr);
                if (!b) continue;
                if (b->kind != Binding::Kind::Local && b->kind != Binding::Kind::Param &&
                    b->kind != Binding::Kind::OutParam)
                    continue;
                if (ghost_var(*c.info, site.expr->name)) continue;
                for (const VarInfo* v : replacement_sources(*c.info, site.expr->span.start,
                                                            b->type, site.expr->name))
                    add_target(out, OperatorId::VER, c, site.expr->span, v->name,
                               "replace variable with '" + v->name + "'");
            }
        }
    }

    void scan_far(std::vector<MutationTarget>& out) const {
        for (const auto& c : callables_) {
            for (const auto& site : c.exprs) {
                if (site.expr->kind != ExprKind::FieldAccess) continue;
                const Binding* b = p_.binding_of(*site.expr);
                if (!b || b->kind != Binding::Kind::Field) continue;
                const ClassInfo* cls = p_.symbols.find_class(b->owner);
                if (!cls) continue;
                for (const auto& f : cls->fields) {
                    if (f.name == site.expr->name || f.ghost || !(f.type == b->type)) continue;
                    add_target(out, OperatorId::FAR, c, site.expr->name_span, f.name,
                               "access field '" + f.name + "'");
                }
            }
        }
    }

    void scan_mcr(std::vector<MutationTarget>& out) const {
        for (const auto& c : callables_) {
            for (const auto& site : c.exprs) {
                if (site.expr->kind != ExprKind::Call) continue;
                const Binding* b = p_.binding_of(*site.expr);
                if (!b || b->kind != Binding::Kind::Callable) continue;
                const CallableSignature* self = callee_sig(*site.expr);
                if (!self) continue;
                const std::vector<CallableSignature>* pool = nullptr;
                if (b->owner.empty()) {
                    pool = &p_.symbols.module_callables;
                } else if (const ClassInfo* cls = p_.symbols.find_class(b->owner)) {
                    pool = &cls->callables;
                }
                if (!pool) continue;
                for (const auto& sig : *pool) {
                    if (sig.name == self->name || sig.is_ghost) continue;
                    if (!signatures_match(*self, sig)) continue;
                    add_target(out, OperatorId::MCR, c, site.expr->name_span, sig.name,
                               "call '" + sig.name + "' instead");
                }
            }
        }
    }

    void scan_dcr(std::vector<MutationTarget>& out) const {
        for (const auto& c : callables_) {
            for (const auto& site : c.exprs) {
                const Expr& e = *site.expr;
                if (e.kind != ExprKind::Call && e.kind != ExprKind::Identifier) continue;
                const Binding* b = p_.binding_of(e);
                if (!b || b->kind != Binding::Kind::DatatypeCtor) continue;
                SourceSpan span = e.kind == ExprKind::Call ? e.name_span : e.span;
                for (const std::string& sibling : p_.sibling_constructors(b->owner, e.name))
                    add_target(out, OperatorId::DCR, c, span, sibling,
                               "build '" + sibling + "' instead");
            }
        }
    }

    void scan_mvr(std::vector<MutationTarget>& out) const {
        for (const auto& c : callables_) {
            for (const auto& site : c.exprs) {
                if (site.expr->kind != ExprKind::Call) continue;
                const Binding* b = p_.binding_of(*site.expr);
                if (!b || b->kind != Binding::Kind::Callable) continue;
                const CallableSignature* sig = callee_sig(*site.expr);
                if (!sig || sig->return_types.size() != 1 || sig->return_types[0].is_unknown())
                    continue;
                for (const VarInfo* v : replacement_sources(*c.info, site.expr->span.start,
                                                            sig->return_types[0], ""))
                    add_target(out, OperatorId::MVR, c, site.expr->span, v->name,
                               "replace call with variable '" + v->name + "'");
            }
        }
    }

    void scan_tar(std::vector<MutationTarget>& out) const {
        for (const auto& c : callables_) {
            for (const auto& site : c.exprs) {
                const Expr& e = *site.expr;
                if (e.kind != ExprKind::TupleAccess) continue;
                const TypeRef& rt = p_.type_of(*e.receiver);
                if (rt.kind != TypeRef::Kind::Tuple || e.tuple_index >= rt.args.size()) continue;
                for (std::size_t j = 0; j < rt.args.size(); ++j) {
                    if (j == e.tuple_index || rt.args[j].is_unknown()) continue;
                    if (!(rt.args[j] == rt.args[e.tuple_index])) continue;
                    add_target(out, OperatorId::TAR, c, e.index_span, std::to_string(j),
                               "access tuple element " + std::to_string(j));
                }
            }
        }
    }

    void scan_sar(std::vector<MutationTarget>& out) const {
        for (const auto& c : callables_) {
            for (const auto& site : c.exprs) {
                const Expr& e = *site.expr;
                bool eligible = false;
                if (e.kind == ExprKind::Call) {
                    const Binding* b = p_.binding_of(e);
                    eligible = b && (b->kind == Binding::Kind::Callable ||
                                     b->kind == Binding::Kind::DatatypeCtor);
                } else if (e.kind == ExprKind::New && !e.is_array_new) {
                    eligible = true;
                }
                if (!eligible) continue;
                for (std::size_t i = 0; i < e.args.size(); ++i) {
                    for (std::size_t j = i + 1; j < e.args.size(); ++j) {
                        const TypeRef& a = p_.type_of(*e.args[i]);
                        if (a.is_unknown() || !(a == p_.type_of(*e.args[j]))) continue;
                        std::string left(src(e.args[i]->span));
                        std::string right(src(e.args[j]->span));
                        if (left == right) continue;
                        MutationTarget t;
                        t.op = OperatorId::SAR;
                        t.enclosing_callable = c.display_name;
                        t.description = "swap arguments " + std::to_string(i) + " and " +
                                        std::to_string(j);
                        t.edits.push_back({e.args[i]->span, left, right});
                        t.edits.push_back({e.args[j]->span, right, left});
                        out.push_back(std::move(t));
                    }
                }
            }
        }
    }

    void scan_sws(std::vector<MutationTarget>& out) const {
        for (const auto& c : callables_) {
            for (const auto* list : c.stmt_lists) {
                for (std::size_t i = 0; i + 1 < list->size(); ++i) {
                    const Stmt& a = *(*list)[i];
                    const Stmt& b = *(*list)[i + 1];
                    if (skip_stmt(*c.info, a) || skip_stmt(*c.info, b)) continue;
                    if (a.synthetic || b.synthetic) continue;
                    std::string first(src(a.span));
                    std::string second(src(b.span));
                    if (first == second) continue;
                    MutationTarget t;
                    t.op = OperatorId::SWS;
                    t.enclosing_callable = c.display_name;
                    t.description = "swap adjacent statements";
                    t.edits.push_back({a.span, first, second});
                    t.edits.push_back({b.span, second, first});
                    out.push_back(std::move(t));
                }
            }
        }
    }

    void scan_swv(std::vector<MutationTarget>& out) const {
        for (const auto& c : callables_) {
            for (const Stmt* block : c.stmts) {
                if (block->kind != StmtKind::Block) continue;
                std::vector<const Stmt*> decls;
                for (const auto& child : block->stmts) {
                    if (child->kind != StmtKind::VarDecl || skip_stmt(*c.info, *child)) continue;
                    if (child->var_names.size() == 1 && child->rhs.size() == 1)
                        decls.push_back(child.get());
                }
                for (std::size_t i = 0; i < decls.size(); ++i) {
                    for (std::size_t j = i + 1; j < decls.size(); ++j) {
                        const VarInfo* a = var_for_decl(*c.info, decls[i]->var_names[0].span);
                        const VarInfo* d = var_for_decl(*c.info, decls[j]->var_names[0].span);
                        if (!a || !d || a->type.is_unknown() || !(a->type == d->type)) continue;
                        std::string first(src(decls[i]->rhs[0]->span));
                        std::string second(src(decls[j]->rhs[0]->span));
                        if (first == second) continue;
                        MutationTarget t;
                        t.op = OperatorId::SWV;
                        t.enclosing_callable = c.display_name;
                        t.description =
                            "swap initializers of '" + a->name + "' and '" + d->name + "'";
                        t.edits.push_back({decls[i]->rhs[0]->span, first, second});
                        t.edits.push_back({decls[j]->rhs[0]->span, second, first});
                        out.push_back(std::move(t));
                    }
                }
            }
        }
    }

    void scan_cbe(std::vector<MutationTarget>& out) const {
        for (const auto& c : callables_) {
            for (const Stmt* s : c.stmts) {
                if (s->kind != StmtKind::If || s->is_else_arm) continue;
                add_target(out, OperatorId::CBE, c, s->span, block_interior(*s->then_block),
                           "replace if with then-branch contents");
                if (s->else_arm) {
                    std::string text = s->else_arm->kind == StmtKind::Block
                                           ? block_interior(*s->else_arm)
                                           : std::string(src(s->else_arm->span));
                    add_target(out, OperatorId::CBE, c, s->span, text,
                               "replace if with else-branch contents");
                }
            }
            for (const auto& site : c.exprs) {
                if (site.expr->kind != ExprKind::IfThenElse) continue;
                add_target(out, OperatorId::CBE, c, site.expr->span,
                           std::string(src(site.expr->then_expr->span)),
                           "keep the then expression");
                add_target(out, OperatorId::CBE, c, site.expr->span,
                           std::string(src(site.expr->else_expr->span)),
                           "keep the else expression");
            }
        }
    }

    std::string block_interior(const Stmt& block) const {
        SourceSpan inner{block.open_brace.end, block.span.end - 1, block.span.line,
                         block.span.column};
        return std::string(src(inner));
    }

    const ResolvedProgram& p_;
    std::vector<CallableScan> callables_;
    CallableScan* current_scan_ = nullptr;
};

inline std::vector<MutationTarget> scan(const ResolvedProgram& program, OperatorId op) {
    return Scanner(program).scan(op);
}

inline std::vector<MutationTarget> scan_all(const ResolvedProgram& program,
                                            const std::vector<OperatorId>& ops) {
    return Scanner(program).scan_all(ops);
}

}  // namespace mutdafny
