#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mutdafny {

/// The 32 supported mutation operators.
enum class OperatorId {
    AMR,  // accessor method replacement
    BBR,  // boolean-binary expression replacement
    BOR,  // binary operator replacement
    CBE,  // conditional block extraction
    CBR,  // case block replacement
    CIR,  // collection initialization replacement
    DCR,  // datatype constructor replacement
    EVR,  // expression value replacement
    FAR,  // field access replacement
    LBI,  // loop break insertion
    LSR,  // loop statement replacement
    LVR,  // literal value replacement
    MAP,  // method argument propagation
    MCR,  // method call replacement
    MMR,  // modifier method replacement
    MNR,  // method naked receiver
    MRR,  // method return value replacement
    MVR,  // method-variable replacement
    ODL,  // operator deletion
    PRV,  // polymorphic reference replacement
    SAR,  // argument swapping
    SDL,  // statement deletion
    SLD,  // subsequence limit deletion
    SWS,  // statement swapping
    SWV,  // variable declaration swapping
    TAR,  // tuple access replacement
    THD,  // this keyword deletion
    THI,  // this keyword insertion
    UOD,  // unary operator deletion
    UOI,  // unary operator insertion
    VDL,  // variable deletion
    VER,  // variable expression replacement
};

inline constexpr int operator_count = 32;

inline constexpr std::array<std::string_view, operator_count> operator_names = {
    "AMR", "BBR", "BOR", "CBE", "CBR", "CIR", "DCR", "EVR", "FAR", "LBI", "LSR",
    "LVR", "MAP", "MCR", "MMR", "MNR", "MRR", "MVR", "ODL", "PRV", "SAR", "SDL",
    "SLD", "SWS", "SWV", "TAR", "THD", "THI", "UOD", "UOI", "VDL", "VER",
};

inline std::string_view name_of(OperatorId op) {
    return operator_names[static_cast<int>(op)];
}

inline std::optional<OperatorId> operator_from_name(std::string_view name) {
    for (int i = 0; i < operator_count; ++i)
        if (operator_names[i] == name) return static_cast<OperatorId>(i);
    return std::nullopt;
}

inline std::vector<OperatorId> all_operators() {
    std::vector<OperatorId> ops;
    ops.reserve(operator_count);
    for (int i = 0; i < operator_count; ++i) ops.push_back(static_cast<OperatorId>(i));
    return ops;
}

/// Operators that rely on multi-span structured edits; every other operator
/// produces mutants differing from the original in one contiguous range.
inline bool is_structured(OperatorId op) {
    switch (op) {
        case OperatorId::VDL:
        case OperatorId::ODL:
        case OperatorId::SWS:
        case OperatorId::SWV:
        case OperatorId::SAR: return true;
        default: return false;
    }
}

/// Operators considered but not implemented because Dafny's design makes
/// them inapplicable or equivalence-only. Kept as reference for reports.
struct ExcludedOperator {
    std::string_view name;
    std::string_view reason;
};

inline constexpr std::array<ExcludedOperator, 8> excluded_operators = {{
    {"Operator Replacement Unary",
     "Dafny's unary operators (- for numerics, ! for booleans and bit-vectors) belong to "
     "different type groups and cannot replace each other."},
    {"Initialization Replacement",
     "replacing a parameterized constructor with an empty one needs overloading; Dafny allows "
     "a single constructor per class."},
    {"Method Expression / String Methods",
     "Dafny strings are sequences, not objects with methods, and built-in type support is "
     "limited."},
    {"Argument List Mutation",
     "Dafny callables take a fixed number of arguments, so deleting one cannot produce a valid "
     "program."},
    {"Inheritance operators (overriding, hiding, super)",
     "classes extend traits only; Dafny has no overriding, field hiding, or super calls."},
    {"Child-to-parent type replacement",
     "traits cannot be instantiated, so the mutant is either invalid (child-specific members "
     "used) or equivalent."},
    {"Parent-to-child type replacement",
     "requires a prior runtime type test, which almost no program contains; mutants are almost "
     "always invalid."},
    {"Static keyword insertion/deletion",
     "only constant fields may be static in Dafny and their values never change, so such "
     "mutants are always equivalent."},
}};

}  // namespace mutdafny
