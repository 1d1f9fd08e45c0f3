#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "mutdafny/ast.hpp"
#include "mutdafny/parser.hpp"
#include "mutdafny/types.hpp"

namespace mutdafny {

/// What an identifier use refers to.
struct Binding {
    enum class Kind {
        None,
        Local,
        Param,
        OutParam,
        Field,
        Const,
        Callable,
        DatatypeCtor,
        TypeName,
    };
    Kind kind = Kind::None;
    TypeRef type;             // type of the referenced entity (resolved)
    std::string name;
    std::string owner;        // class for Field/Callable, datatype for ctors
    SourceSpan decl_span;     // where the entity was declared
};

struct CallableSignature {
    std::string receiver_class;  // empty for module-level callables
    std::string name;
    std::vector<TypeRef> param_types;
    std::vector<TypeRef> return_types;  // outs for methods, single result for functions
    bool is_method = false;
    bool is_ghost = false;
    bool has_body = false;

    /// Signature equality as the call-replacement operators require: same
    /// parameter and return type lists, and method-ness preserved.
    friend bool signatures_match(const CallableSignature& a, const CallableSignature& b) {
        return a.is_method == b.is_method && a.param_types == b.param_types &&
               a.return_types == b.return_types;
    }
};

struct FieldInfo {
    std::string name;
    TypeRef type;
    SourceSpan decl_span;
    bool ghost = false;
};

struct ClassInfo {
    std::string name;
    bool is_trait = false;
    std::vector<std::string> extends;
    std::vector<FieldInfo> fields;             // own plus trait-inherited
    std::vector<CallableSignature> callables;  // declaration order
    const Decl* decl = nullptr;
};

struct DatatypeCtorInfo {
    std::string name;
    std::vector<TypeRef> param_types;
};

struct DatatypeInfo {
    std::string name;
    std::vector<DatatypeCtorInfo> ctors;
};

struct SymbolTable {
    std::map<std::string, ClassInfo> classes;  // includes traits
    std::map<std::string, DatatypeInfo> datatypes;
    std::vector<CallableSignature> module_callables;  // declaration order
    std::map<std::string, TypeRef> consts;

    const ClassInfo* find_class(const std::string& name) const {
        auto it = classes.find(name);
        return it == classes.end() ? nullptr : &it->second;
    }
    const DatatypeInfo* find_datatype(const std::string& name) const {
        auto it = datatypes.find(name);
        return it == datatypes.end() ? nullptr : &it->second;
    }
    const CallableSignature* find_module_callable(const std::string& name) const {
        for (const auto& sig : module_callables)
            if (sig.name == name) return &sig;
        return nullptr;
    }
    const CallableSignature* find_member(const std::string& cls, const std::string& name) const {
        const ClassInfo* info = find_class(cls);
        if (!info) return nullptr;
        for (const auto& sig : info->callables)
            if (sig.name == name) return &sig;
        return nullptr;
    }
};

/// One variable visible somewhere inside a callable body.
struct VarInfo {
    std::string name;
    TypeRef type;
    Binding::Kind kind = Binding::Kind::Local;
    SourceSpan decl_span;       // the name token
    SourceSpan scope_span;      // region where the name is visible
    std::size_t available_from = 0;  // first offset where it may be read
    bool ghost = false;
};

struct CallableInfo {
    const Decl* decl = nullptr;
    const Decl* owner_class = nullptr;  // class or trait, when a member
    CallableSignature sig;
    std::vector<VarInfo> vars;          // params, outs, locals, loop indices
    int ensures_count = 0;
};

class ResolvedProgram {
  public:
    std::shared_ptr<const SyntaxTree> tree;
    SymbolTable symbols;
    std::vector<CallableInfo> callables;  // source order

    const TypeRef& type_of(const Expr& e) const {
        auto it = types_.find(&e);
        return it == types_.end() ? unknown_ : it->second;
    }
    const Binding* binding_of(const Expr& e) const {
        auto it = bindings_.find(&e);
        return it == bindings_.end() ? nullptr : &it->second;
    }

    const CallableInfo* callable_of(const Decl& d) const {
        for (const auto& c : callables)
            if (c.decl == &d) return &c;
        return nullptr;
    }

    /// All variables of structurally equal type visible at `offset` inside
    /// `callable`, in declaration order, honoring shadowing and excluding
    /// out-parameters before their first assignment.
    std::vector<const VarInfo*> variables_of_type(const CallableInfo& callable, std::size_t offset,
                                                  const TypeRef& t,
                                                  const std::string& exclude = "") const {
        std::vector<const VarInfo*> result;
        if (t.is_unknown()) return result;
        for (const VarInfo& v : callable.vars) {
            if (v.name == exclude || v.ghost) continue;
            if (!(v.scope_span.start <= offset && offset < v.scope_span.end)) continue;
            if (v.available_from > offset) continue;
            if (innermost_binding(callable, v.name, offset) != &v) continue;
            if (v.type == t) result.push_back(&v);
        }
        return result;
    }

    const VarInfo* innermost_binding(const CallableInfo& callable, const std::string& name,
                                     std::size_t offset) const {
        const VarInfo* best = nullptr;
        for (const VarInfo& v : callable.vars) {
            if (v.name != name) continue;
            if (!(v.scope_span.start <= offset && offset < v.scope_span.end)) continue;
            if (v.available_from > offset &&
                !(v.kind == Binding::Kind::OutParam || v.kind == Binding::Kind::Param))
                continue;
            if (!best || v.scope_span.length() <= best->scope_span.length()) best = &v;
        }
        return best;
    }

    /// Constructors of the same datatype with element-wise equal parameter
    /// types, excluding `ctor` itself.
    std::vector<std::string> sibling_constructors(const std::string& datatype,
                                                  const std::string& ctor) const {
        std::vector<std::string> result;
        const DatatypeInfo* dt = symbols.find_datatype(datatype);
        if (!dt) return result;
        const DatatypeCtorInfo* self = nullptr;
        for (const auto& c : dt->ctors)
            if (c.name == ctor) self = &c;
        if (!self) return result;
        for (const auto& c : dt->ctors)
            if (c.name != ctor && c.param_types == self->param_types) result.push_back(c.name);
        return result;
    }

    std::vector<std::string> children_of_trait(const std::string& trait) const {
        std::vector<std::string> result;
        for (const auto& [name, info] : class_order_)
            if (!info->is_trait &&
                std::find(info->extends.begin(), info->extends.end(), trait) !=
                    info->extends.end())
                result.push_back(info->name);
        return result;
    }

    /// An assignment qualifies for child-class replacement when its single
    /// left-hand side has trait type and the right-hand side is a variable of
    /// an extending class.
    bool is_parent_assignment(const Stmt& s) const {
        if (s.kind != StmtKind::Assign || s.lhs.size() != 1 || s.rhs.size() != 1) return false;
        const TypeRef& lhs_type = type_of(*s.lhs[0]);
        if (lhs_type.kind != TypeRef::Kind::Trait) return false;
        if (s.rhs[0]->kind != ExprKind::Identifier) return false;
        const TypeRef& rhs_type = type_of(*s.rhs[0]);
        if (rhs_type.kind != TypeRef::Kind::Class) return false;
        const ClassInfo* cls = symbols.find_class(rhs_type.name);
        return cls && std::find(cls->extends.begin(), cls->extends.end(), lhs_type.name) !=
                          cls->extends.end();
    }

  private:
    friend class Resolver;
    std::unordered_map<const Expr*, TypeRef> types_;
    std::unordered_map<const Expr*, Binding> bindings_;
    std::vector<std::pair<std::string, const ClassInfo*>> class_order_;
    TypeRef unknown_;
};

class Resolver {
  public:
    explicit Resolver(std::shared_ptr<const SyntaxTree> tree) { program_.tree = std::move(tree); }

    ResolvedProgram run() {
        register_names(program_.tree->declarations);
        collect_decls(program_.tree->declarations, nullptr);
        merge_trait_members();
        for (auto& [name, info] : program_.symbols.classes)
            program_.class_order_.push_back({name, &info});
        std::sort(program_.class_order_.begin(), program_.class_order_.end(),
                  [](const auto& a, const auto& b) {
                      return a.second->decl->span.start < b.second->decl->span.start;
                  });
        resolve_bodies(program_.tree->declarations, nullptr);
        std::sort(program_.callables.begin(), program_.callables.end(),
                  [](const CallableInfo& a, const CallableInfo& b) {
                      return a.decl->span.start < b.decl->span.start;
                  });
        return std::move(program_);
    }

  private:
    // --- declaration collection ---------------------------------------------

    // Names go in first so that signatures and field types can refer to
    // classes and datatypes declared later in the file.
    void register_names(const std::vector<DeclPtr>& decls) {
        for (const auto& d : decls) {
            switch (d->kind) {
                case DeclKind::Module: register_names(d->members); break;
                case DeclKind::Class:
                case DeclKind::Trait: {
                    ClassInfo shell;
                    shell.name = d->name;
                    shell.is_trait = d->kind == DeclKind::Trait;
                    shell.decl = d.get();
                    program_.symbols.classes[d->name] = std::move(shell);
                    break;
                }
                case DeclKind::Datatype:
                    program_.symbols.datatypes[d->name] = DatatypeInfo{d->name, {}};
                    break;
                default: break;
            }
        }
    }

    void collect_decls(const std::vector<DeclPtr>& decls, const Decl* owner_class) {
        for (const auto& d : decls) collect_decl(*d, owner_class);
    }

    void collect_decl(const Decl& d, const Decl* owner_class) {
        switch (d.kind) {
            case DeclKind::Module:
                collect_decls(d.members, nullptr);  // modules are flattened
                break;
            case DeclKind::Class:
            case DeclKind::Trait: {
                ClassInfo info;
                info.name = d.name;
                info.is_trait = d.kind == DeclKind::Trait;
                info.extends = d.extends;
                info.decl = &d;
                for (const auto& m : d.members) {
                    if (m->kind == DeclKind::Field) {
                        for (const auto& f : m->params)
                            info.fields.push_back(
                                {f.name, normalize(f.type), f.span, m->ghost});
                    } else if (m->kind == DeclKind::Const) {
                        TypeRef t =
                            m->declared_type ? normalize(*m->declared_type) : TypeRef::unknown();
                        info.fields.push_back({m->name, t, m->name_span, m->ghost});
                    } else if (m->is_callable()) {
                        info.callables.push_back(make_signature(*m, d.name));
                    }
                }
                program_.symbols.classes[d.name] = std::move(info);
                break;
            }
            case DeclKind::Datatype: {
                DatatypeInfo info;
                info.name = d.name;
                for (const auto& c : d.ctors) {
                    DatatypeCtorInfo ctor;
                    ctor.name = c.name;
                    for (const auto& p : c.params) ctor.param_types.push_back(normalize(p.type));
                    info.ctors.push_back(std::move(ctor));
                }
                program_.symbols.datatypes[d.name] = std::move(info);
                break;
            }
            case DeclKind::Const:
                program_.symbols.consts[d.name] =
                    d.declared_type ? normalize(*d.declared_type) : TypeRef::unknown();
                break;
            case DeclKind::Method:
            case DeclKind::Function:
                if (!owner_class)
                    program_.symbols.module_callables.push_back(make_signature(d, ""));
                break;
            default: break;
        }
    }

    CallableSignature make_signature(const Decl& d, const std::string& receiver) {
        CallableSignature sig;
        sig.receiver_class = receiver;
        sig.name = d.name;
        sig.is_method = d.kind == DeclKind::Method;
        sig.is_ghost = d.ghost;
        sig.has_body = d.body != nullptr;
        for (const auto& p : d.params) sig.param_types.push_back(normalize(p.type));
        if (d.kind == DeclKind::Method) {
            for (const auto& o : d.outs) sig.return_types.push_back(normalize(o.type));
        } else if (d.return_type) {
            sig.return_types.push_back(normalize(*d.return_type));
        }
        return sig;
    }

    // Two passes over class tables so extends lists can reach traits declared
    // later in the file.
    void merge_trait_members() {
        for (auto& [name, info] : program_.symbols.classes) {
            if (info.is_trait) continue;
            for (const std::string& trait_name : info.extends) {
                const ClassInfo* trait = program_.symbols.find_class(trait_name);
                if (!trait) continue;
                for (const auto& f : trait->fields) {
                    bool present = std::any_of(info.fields.begin(), info.fields.end(),
                                               [&](const FieldInfo& g) { return g.name == f.name; });
                    if (!present) info.fields.push_back(f);
                }
                for (const auto& sig : trait->callables) {
                    bool present =
                        std::any_of(info.callables.begin(), info.callables.end(),
                                    [&](const CallableSignature& g) { return g.name == sig.name; });
                    if (!present) {
                        CallableSignature inherited = sig;
                        inherited.receiver_class = info.name;
                        info.callables.push_back(inherited);
                    }
                }
            }
        }
    }

    TypeRef normalize(const TypeRef& t) const {
        TypeRef out = t;
        for (auto& a : out.args) a = normalize(a);
        if (t.kind != TypeRef::Kind::Named) return out;
        if (program_.symbols.classes.count(t.name)) {
            const ClassInfo& info = program_.symbols.classes.at(t.name);
            out.kind = info.is_trait ? TypeRef::Kind::Trait : TypeRef::Kind::Class;
            out.args.clear();
            return out;
        }
        if (program_.symbols.datatypes.count(t.name)) {
            out.kind = TypeRef::Kind::Datatype;
            out.args.clear();
            return out;
        }
        return TypeRef::unknown();
    }

    // --- body resolution ------------------------------------------------------

    void resolve_bodies(const std::vector<DeclPtr>& decls, const Decl* owner_class) {
        for (const auto& d : decls) {
            if (d->kind == DeclKind::Module) {
                resolve_bodies(d->members, nullptr);
            } else if (d->kind == DeclKind::Class || d->kind == DeclKind::Trait) {
                resolve_bodies(d->members, d.get());
            } else if (d->is_callable()) {
                resolve_callable(*d, owner_class);
            }
        }
    }

    void resolve_callable(const Decl& d, const Decl* owner_class) {
        CallableInfo info;
        info.decl = &d;
        info.owner_class = owner_class;
        info.sig = make_signature(d, owner_class ? owner_class->name : "");
        for (const auto& clause : d.spec) info.ensures_count += clause.keyword == "ensures";

        SourceSpan body_span = d.body ? d.body->span : d.span;
        for (const auto& p : d.params) {
            VarInfo v{p.name, normalize(p.type), Binding::Kind::Param,
                      p.span,  body_span,        body_span.start};
            v.ghost = p.ghost;
            info.vars.push_back(v);
        }
        for (const auto& o : d.outs) {
            VarInfo v{o.name, normalize(o.type), Binding::Kind::OutParam,
                      o.span,  body_span,        body_span.end};
            info.vars.push_back(v);
        }
        if (d.body) {
            record_out_assignments(*d.body, info);
            current_ = &info;
            current_class_ = owner_class;
            resolve_stmt(*d.body, body_span);
            current_ = nullptr;
        }
        program_.callables.push_back(std::move(info));
    }

    // An out-parameter becomes a replacement source only after the end of the
    // first statement that assigns it, in source order.
    void record_out_assignments(const Stmt& body, CallableInfo& info) {
        walk_stmt(
            body,
            [&](const Stmt& s) {
                if (s.kind != StmtKind::Assign && s.kind != StmtKind::VarDecl) return;
                for (const auto& lhs : s.lhs) {
                    if (lhs->kind != ExprKind::Identifier) continue;
                    for (auto& v : info.vars) {
                        if (v.kind == Binding::Kind::OutParam && v.name == lhs->name)
                            v.available_from = std::min(v.available_from, s.span.end);
                    }
                }
            },
            nullptr);
    }

    void resolve_stmt(const Stmt& s, const SourceSpan& block_span) {
        switch (s.kind) {
            case StmtKind::VarDecl: {
                for (const auto& e : s.rhs) resolve_expr(*e);
                std::vector<TypeRef> rhs_types;
                if (s.var_names.size() > 1 && s.rhs.size() == 1 &&
                    s.rhs[0]->kind == ExprKind::Call) {
                    rhs_types = callee_return_types(*s.rhs[0]);
                } else {
                    for (const auto& e : s.rhs) rhs_types.push_back(program_.type_of(*e));
                }
                for (std::size_t i = 0; i < s.var_names.size(); ++i) {
                    const VarDeclName& n = s.var_names[i];
                    TypeRef t = n.declared_type ? normalize(*n.declared_type)
                                : i < rhs_types.size() ? rhs_types[i]
                                                       : TypeRef::unknown();
                    VarInfo v{n.name, t, Binding::Kind::Local, n.span, block_span, s.span.end};
                    v.ghost = s.ghost;
                    current_->vars.push_back(v);
                }
                break;
            }
            case StmtKind::Assign:
                for (const auto& e : s.lhs) resolve_expr(*e);
                for (const auto& e : s.rhs) resolve_expr(*e);
                break;
            case StmtKind::CallStmt:
                resolve_expr(*s.call);
                break;
            case StmtKind::If:
                if (s.guard) resolve_expr(*s.guard);
                if (s.then_block) resolve_stmt(*s.then_block, block_span);
                if (s.else_arm) resolve_stmt(*s.else_arm, block_span);
                break;
            case StmtKind::While:
                if (s.guard) resolve_expr(*s.guard);
                if (s.body) resolve_stmt(*s.body, block_span);
                break;
            case StmtKind::For: {
                if (s.lo) resolve_expr(*s.lo);
                if (s.hi) resolve_expr(*s.hi);
                if (s.body) {
                    VarInfo v{s.index_name,  TypeRef::integer(),  Binding::Kind::Local,
                              s.index_span,  s.body->span,        s.body->span.start};
                    current_->vars.push_back(v);
                    resolve_stmt(*s.body, block_span);
                }
                break;
            }
            case StmtKind::Match:
                if (s.scrutinee) resolve_expr(*s.scrutinee);
                for (const auto& c : s.cases)
                    for (const auto& cs : c.body) resolve_stmt(*cs, block_span);
                break;
            case StmtKind::Return:
            case StmtKind::Print:
                for (const auto& e : s.rhs) resolve_expr(*e);
                break;
            case StmtKind::Block:
                for (const auto& child : s.stmts) resolve_stmt(*child, s.span);
                break;
            default: break;
        }
    }

    std::vector<TypeRef> callee_return_types(const Expr& call) {
        resolve_expr(call);
        const Binding* b = program_.binding_of(call);
        if (!b || b->kind != Binding::Kind::Callable) return {};
        const CallableSignature* sig = find_signature(call);
        return sig ? sig->return_types : std::vector<TypeRef>{};
    }

    const CallableSignature* find_signature(const Expr& call) {
        if (call.receiver) {
            const TypeRef& rt = program_.type_of(*call.receiver);
            if (rt.kind == TypeRef::Kind::Class || rt.kind == TypeRef::Kind::Trait)
                return program_.symbols.find_member(rt.name, call.name);
            return nullptr;
        }
        if (current_class_) {
            if (const CallableSignature* sig =
                    program_.symbols.find_member(current_class_->name, call.name))
                return sig;
        }
        return program_.symbols.find_module_callable(call.name);
    }

    void resolve_expr(const Expr& e) {
        for_each_child(e, [&](const Expr& child) { resolve_expr(child); });
        TypeRef t = TypeRef::unknown();
        switch (e.kind) {
            case ExprKind::BoolLit: t = TypeRef::boolean(); break;
            case ExprKind::IntLit: t = TypeRef::integer(); break;
            case ExprKind::RealLit: t = TypeRef::real(); break;
            case ExprKind::StringLit: t = TypeRef::simple(TypeRef::Kind::String); break;
            case ExprKind::CharLit: t = TypeRef::simple(TypeRef::Kind::Char); break;
            case ExprKind::NullLit: break;
            case ExprKind::Identifier: t = resolve_identifier(e); break;
            case ExprKind::This:
                if (current_class_) {
                    t.kind = current_class_->kind == DeclKind::Trait ? TypeRef::Kind::Trait
                                                                     : TypeRef::Kind::Class;
                    t.name = current_class_->name;
                }
                break;
            case ExprKind::FieldAccess: t = resolve_field_access(e); break;
            case ExprKind::TupleAccess: {
                const TypeRef& rt = program_.type_of(*e.receiver);
                if (rt.kind == TypeRef::Kind::Tuple && e.tuple_index < rt.args.size())
                    t = rt.args[e.tuple_index];
                break;
            }
            case ExprKind::Binary: t = binary_type(e); break;
            case ExprKind::Unary: t = unary_type(e); break;
            case ExprKind::Cardinality: t = TypeRef::integer(); break;
            case ExprKind::Call: t = resolve_call(e); break;
            case ExprKind::SeqDisplay:
                t = TypeRef::of(TypeRef::Kind::Seq, element_type(e.args));
                break;
            case ExprKind::SetDisplay:
                t = TypeRef::of(TypeRef::Kind::Set, element_type(e.args));
                break;
            case ExprKind::MultisetDisplay:
                t = TypeRef::of(TypeRef::Kind::Multiset, element_type(e.args));
                break;
            case ExprKind::MapDisplay: {
                t.kind = TypeRef::Kind::Map;
                if (!e.map_entries.empty()) {
                    t.args.push_back(program_.type_of(*e.map_entries[0].key));
                    t.args.push_back(program_.type_of(*e.map_entries[0].value));
                } else {
                    t.args = {TypeRef::unknown(), TypeRef::unknown()};
                }
                break;
            }
            case ExprKind::TupleDisplay: {
                t.kind = TypeRef::Kind::Tuple;
                for (const auto& a : e.args) t.args.push_back(program_.type_of(*a));
                break;
            }
            case ExprKind::New:
                if (e.is_array_new) {
                    t = TypeRef::of(TypeRef::Kind::Array, normalize(e.new_type));
                } else {
                    t = normalize(e.new_type);
                    t.nullable = false;
                }
                break;
            case ExprKind::Index: t = index_type(e); break;
            case ExprKind::Slice: {
                const TypeRef& rt = program_.type_of(*e.receiver);
                if (rt.kind == TypeRef::Kind::Seq || rt.kind == TypeRef::Kind::String)
                    t = rt;
                else if (rt.kind == TypeRef::Kind::Array)
                    t = TypeRef::of(TypeRef::Kind::Seq, rt.args.empty() ? TypeRef::unknown()
                                                                        : rt.args[0]);
                break;
            }
            case ExprKind::IfThenElse: {
                const TypeRef& a = program_.type_of(*e.then_expr);
                const TypeRef& b = program_.type_of(*e.else_expr);
                if (a == b) t = a;
                break;
            }
            case ExprKind::Opaque: break;
        }
        program_.types_[&e] = std::move(t);
    }

    TypeRef element_type(const std::vector<ExprPtr>& elems) const {
        if (elems.empty()) return TypeRef::unknown();
        TypeRef t = program_.type_of(*elems[0]);
        for (const auto& e : elems)
            if (!(program_.type_of(*e) == t)) return TypeRef::unknown();
        return t;
    }

    TypeRef resolve_identifier(const Expr& e) {
        Binding b;
        b.name = e.name;
        std::size_t offset = e.span.start;
        if (current_) {
            if (const VarInfo* v = program_.innermost_binding(*current_, e.name, offset)) {
                b.kind = v->kind;
                b.type = v->type;
                b.decl_span = v->decl_span;
                program_.bindings_[&e] = b;
                return v->type;
            }
        }
        if (current_class_) {
            const ClassInfo* info = program_.symbols.find_class(current_class_->name);
            if (info) {
                for (const auto& f : info->fields) {
                    if (f.name == e.name) {
                        b.kind = Binding::Kind::Field;
                        b.type = f.type;
                        b.owner = info->name;
                        b.decl_span = f.decl_span;
                        program_.bindings_[&e] = b;
                        return f.type;
                    }
                }
            }
        }
        if (auto it = program_.symbols.consts.find(e.name); it != program_.symbols.consts.end()) {
            b.kind = Binding::Kind::Const;
            b.type = it->second;
            program_.bindings_[&e] = b;
            return it->second;
        }
        // A bare constructor name is a value of its datatype when nullary.
        for (const auto& [dt_name, dt] : program_.symbols.datatypes) {
            for (const auto& c : dt.ctors) {
                if (c.name != e.name) continue;
                b.kind = Binding::Kind::DatatypeCtor;
                b.owner = dt_name;
                if (c.param_types.empty()) {
                    b.type.kind = TypeRef::Kind::Datatype;
                    b.type.name = dt_name;
                }
                program_.bindings_[&e] = b;
                return b.type;
            }
        }
        if (program_.symbols.find_module_callable(e.name) != nullptr) {
            b.kind = Binding::Kind::Callable;
            program_.bindings_[&e] = b;
            return TypeRef::unknown();
        }
        if (program_.symbols.classes.count(e.name) || program_.symbols.datatypes.count(e.name)) {
            b.kind = Binding::Kind::TypeName;
            program_.bindings_[&e] = b;
            return TypeRef::unknown();
        }
        return TypeRef::unknown();
    }

    TypeRef resolve_field_access(const Expr& e) {
        const TypeRef& rt = program_.type_of(*e.receiver);
        if (rt.kind == TypeRef::Kind::Class || rt.kind == TypeRef::Kind::Trait) {
            const ClassInfo* info = program_.symbols.find_class(rt.name);
            if (info) {
                for (const auto& f : info->fields) {
                    if (f.name == e.name) {
                        Binding b;
                        b.kind = Binding::Kind::Field;
                        b.name = e.name;
                        b.owner = info->name;
                        b.type = f.type;
                        b.decl_span = f.decl_span;
                        program_.bindings_[&e] = b;
                        return f.type;
                    }
                }
            }
            return TypeRef::unknown();
        }
        if (rt.kind == TypeRef::Kind::Array && e.name == "Length") return TypeRef::integer();
        // Qualified datatype constructor used as a value: D.Ctor
        const Binding* rb = program_.binding_of(*e.receiver);
        if (rb && rb->kind == Binding::Kind::TypeName) {
            if (const DatatypeInfo* dt = program_.symbols.find_datatype(e.receiver->name)) {
                for (const auto& c : dt->ctors) {
                    if (c.name != e.name) continue;
                    Binding b;
                    b.kind = Binding::Kind::DatatypeCtor;
                    b.name = e.name;
                    b.owner = dt->name;
                    if (c.param_types.empty()) {
                        b.type.kind = TypeRef::Kind::Datatype;
                        b.type.name = dt->name;
                    }
                    program_.bindings_[&e] = b;
                    return b.type;
                }
            }
        }
        return TypeRef::unknown();
    }

    TypeRef resolve_call(const Expr& e) {
        // Datatype constructor application?
        const std::string* dt_owner = nullptr;
        if (e.receiver) {
            const Binding* rb = program_.binding_of(*e.receiver);
            if (rb && rb->kind == Binding::Kind::TypeName &&
                program_.symbols.find_datatype(e.receiver->name))
                dt_owner = &e.receiver->name;
        } else {
            for (const auto& [dt_name, dt] : program_.symbols.datatypes)
                for (const auto& c : dt.ctors)
                    if (c.name == e.name) dt_owner = &dt_name;
        }
        if (dt_owner) {
            Binding b;
            b.kind = Binding::Kind::DatatypeCtor;
            b.name = e.name;
            b.owner = *dt_owner;
            b.type.kind = TypeRef::Kind::Datatype;
            b.type.name = *dt_owner;
            program_.bindings_[&e] = b;
            return b.type;
        }
        const CallableSignature* sig = find_signature(e);
        if (!sig) return TypeRef::unknown();
        Binding b;
        b.kind = Binding::Kind::Callable;
        b.name = e.name;
        b.owner = sig->receiver_class;
        if (sig->return_types.size() == 1) b.type = sig->return_types[0];
        program_.bindings_[&e] = b;
        return b.type;
    }

    TypeRef binary_type(const Expr& e) const {
        const std::string& op = e.op;
        const TypeRef& l = program_.type_of(*e.lhs);
        const TypeRef& r = program_.type_of(*e.rhs);
        using K = TypeRef::Kind;
        if (op == "==" || op == "!=" || op == "<" || op == "<=" || op == ">" || op == ">=" ||
            op == "in" || op == "!in" || op == "&&" || op == "||" || op == "==>" ||
            op == "<==" || op == "<==>")
            return TypeRef::boolean();
        if (op == "+" || op == "-" || op == "*" || op == "/" || op == "%") {
            if (l.kind == K::Int && r.kind == K::Int) return l;
            if (l.kind == K::Real && r.kind == K::Real) return l;
            if (l.kind == K::Nat && r.kind == K::Nat)
                return op == "-" ? TypeRef::integer() : l;
            if ((l.kind == K::Nat && r.kind == K::Int) || (l.kind == K::Int && r.kind == K::Nat))
                return TypeRef::integer();
            if (l.kind == K::BitVector && r.kind == K::BitVector && l.width == r.width) return l;
            if (l.kind == K::Seq && l == r) return l;
            if (l.kind == K::String && r.kind == K::String) return l;
            if ((l.kind == K::Set || l.kind == K::Multiset) && l == r) return l;
            if (l.kind == K::Map && (op == "+" || op == "-")) return l;
            if (l.kind == K::Char && r.kind == K::Char && (op == "+" || op == "-")) return l;
            return TypeRef::unknown();
        }
        if (op == "&" || op == "|" || op == "^") {
            if (l.kind == K::BitVector && l == r) return l;
            return TypeRef::unknown();
        }
        if (op == "<<" || op == ">>") {
            if (l.kind == K::BitVector) return l;
            return TypeRef::unknown();
        }
        return TypeRef::unknown();
    }

    TypeRef unary_type(const Expr& e) const {
        const TypeRef& t = program_.type_of(*e.operand);
        using K = TypeRef::Kind;
        if (e.op == "-") {
            if (t.kind == K::Int || t.kind == K::Real || t.kind == K::BitVector) return t;
            if (t.kind == K::Nat) return TypeRef::integer();
            return TypeRef::unknown();
        }
        if (e.op == "!") {
            if (t.kind == K::Bool || t.kind == K::BitVector) return t;
            return TypeRef::unknown();
        }
        return TypeRef::unknown();
    }

    TypeRef index_type(const Expr& e) const {
        const TypeRef& rt = program_.type_of(*e.receiver);
        using K = TypeRef::Kind;
        if ((rt.kind == K::Seq || rt.kind == K::Array) && !rt.args.empty()) return rt.args[0];
        if (rt.kind == K::Map && rt.args.size() == 2) return rt.args[1];
        if (rt.kind == K::String) return TypeRef::simple(K::Char);
        if (rt.kind == K::Multiset) return TypeRef::integer();
        return TypeRef::unknown();
    }

    ResolvedProgram program_;
    CallableInfo* current_ = nullptr;
    const Decl* current_class_ = nullptr;
};

/// Builds scopes, symbol tables, and per-expression types. Unresolvable names
/// stay Unknown; the external verifier is the final validity judge.
inline ResolvedProgram resolve(std::shared_ptr<const SyntaxTree> tree) {
    return Resolver(std::move(tree)).run();
}

inline ResolvedProgram parse_and_resolve(std::string text) {
    auto tree = std::make_shared<SyntaxTree>(parse_program(std::move(text)));
    return resolve(std::move(tree));
}

}  // namespace mutdafny
