#pragma once

#include <optional>
#include <string>
#include <vector>

namespace mutdafny {

/// Structural type used by the same-type constraints of the type-directed
/// operators. `Named` is what the parser produces for user-defined type
/// names; the resolver rewrites it to Class/Trait/Datatype once declarations
/// are known.
struct TypeRef {
    enum class Kind {
        Bool,
        Int,
        Nat,
        Real,
        Char,
        String,
        BitVector,
        Seq,
        Set,
        Multiset,
        Map,
        Array,
        Tuple,
        Class,
        Trait,
        Datatype,
        Named,
        Unknown,
    };

    Kind kind = Kind::Unknown;
    int width = 0;                // BitVector
    std::string name;             // Class/Trait/Datatype/Named
    bool nullable = false;        // Class/Named (C?)
    std::vector<TypeRef> args;    // element/key-value/tuple members

    static TypeRef simple(Kind k) {
        TypeRef t;
        t.kind = k;
        return t;
    }
    static TypeRef unknown() { return simple(Kind::Unknown); }
    static TypeRef boolean() { return simple(Kind::Bool); }
    static TypeRef integer() { return simple(Kind::Int); }
    static TypeRef real() { return simple(Kind::Real); }
    static TypeRef of(Kind k, TypeRef elem) {
        TypeRef t;
        t.kind = k;
        t.args.push_back(std::move(elem));
        return t;
    }
    static TypeRef named(std::string n, bool nullable_ = false) {
        TypeRef t;
        t.kind = Kind::Named;
        t.name = std::move(n);
        t.nullable = nullable_;
        return t;
    }
    static TypeRef bitvector(int w) {
        TypeRef t;
        t.kind = Kind::BitVector;
        t.width = w;
        return t;
    }

    bool is_unknown() const { return kind == Kind::Unknown; }
    bool is_numeric() const {
        return kind == Kind::Int || kind == Kind::Nat || kind == Kind::Real;
    }

    friend bool operator==(const TypeRef& a, const TypeRef& b) {
        return a.kind == b.kind && a.width == b.width && a.name == b.name &&
               a.nullable == b.nullable && a.args == b.args;
    }
    friend bool operator!=(const TypeRef& a, const TypeRef& b) { return !(a == b); }
};

inline std::string to_string(const TypeRef& t) {
    using K = TypeRef::Kind;
    auto with_args = [&](std::string head) {
        head += "<";
        for (std::size_t i = 0; i < t.args.size(); ++i) {
            if (i) head += ", ";
            head += to_string(t.args[i]);
        }
        head += ">";
        return head;
    };
    switch (t.kind) {
        case K::Bool: return "bool";
        case K::Int: return "int";
        case K::Nat: return "nat";
        case K::Real: return "real";
        case K::Char: return "char";
        case K::String: return "string";
        case K::BitVector: return "bv" + std::to_string(t.width);
        case K::Seq: return with_args("seq");
        case K::Set: return with_args("set");
        case K::Multiset: return with_args("multiset");
        case K::Map: return with_args("map");
        case K::Array: return with_args("array");
        case K::Tuple: {
            std::string s = "(";
            for (std::size_t i = 0; i < t.args.size(); ++i) {
                if (i) s += ", ";
                s += to_string(t.args[i]);
            }
            return s + ")";
        }
        case K::Class:
        case K::Trait:
        case K::Datatype:
        case K::Named: return t.name + (t.nullable ? "?" : "");
        case K::Unknown: return "?";
    }
    return "?";
}

/// Literal text that works as a drop-in value of the given type, when one
/// exists. Drives the call-replacement defaults.
inline std::optional<std::string> default_literal(const TypeRef& t) {
    using K = TypeRef::Kind;
    switch (t.kind) {
        case K::Int:
        case K::Nat: return "0";
        case K::Bool: return "false";
        case K::Real: return "0.0";
        case K::String: return "\"\"";
        case K::Seq: return "[]";
        case K::Set: return "{}";
        case K::Multiset: return "multiset{}";
        case K::Map: return "map[]";
        default: return std::nullopt;
    }
}

}  // namespace mutdafny
