#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "mutdafny/parser.hpp"
#include "mutdafny/scanner.hpp"

namespace mutdafny {

struct StaleTarget : std::runtime_error {
    explicit StaleTarget(const std::string& what_) : std::runtime_error(what_) {}
};

/// One emitted source variant with a stable identity.
struct Mutant {
    std::string id;  // <operator>-<line>-<column>-<ordinal>
    OperatorId op = OperatorId::BOR;
    std::string original_file;
    std::vector<Edit> edits;
    std::string mutated_text;
    std::string description;
    std::string enclosing_callable;
    std::string duplicate_of;  // id of an earlier mutant with identical text, if any
};

/// Applies one target to the source it was scanned from. Multi-span edits are
/// spliced right-to-left so earlier offsets stay valid.
inline Mutant apply_target(const std::string& source_text, const MutationTarget& target,
                           int ordinal = 0) {
    Mutant m;
    m.op = target.op;
    m.edits = target.edits;
    m.description = target.description;
    m.enclosing_callable = target.enclosing_callable;

    const SourceSpan& at = target.primary_span();
    m.id = std::string(name_of(target.op)) + "-" + std::to_string(at.line) + "-" +
           std::to_string(at.column) + "-" + std::to_string(ordinal);

    auto edits = target.edits;
    std::sort(edits.begin(), edits.end(),
              [](const Edit& a, const Edit& b) { return a.span.start > b.span.start; });
    std::string text = source_text;
    for (const Edit& e : edits) {
        if (span_text(source_text, e.span) != e.original)
            throw StaleTarget("target " + m.id + " no longer matches the source at offset " +
                              std::to_string(e.span.start));
        text = splice(text, e.span, e.replacement);
    }
    m.mutated_text = std::move(text);
    return m;
}

/// All mutants for the selected operators, in (operator, source position)
/// order, with ids disambiguated per (operator, line, column).
inline std::vector<Mutant> generate_all(const ResolvedProgram& program,
                                        const std::vector<OperatorId>& ops,
                                        const std::string& original_file = "") {
    std::vector<Mutant> mutants;
    Scanner scanner(program);
    std::map<std::string, int> ordinals;
    std::map<std::string, std::string> first_with_text;
    for (OperatorId op : ops) {
        for (const MutationTarget& target : scanner.scan(op)) {
            const SourceSpan& at = target.primary_span();
            std::string key = std::string(name_of(op)) + "-" + std::to_string(at.line) + "-" +
                              std::to_string(at.column);
            Mutant m = apply_target(program.tree->source_text, target, ordinals[key]++);
            m.original_file = original_file;
            auto [it, inserted] = first_with_text.try_emplace(m.mutated_text, m.id);
            if (!inserted) m.duplicate_of = it->second;
            mutants.push_back(std::move(m));
        }
    }
    return mutants;
}

inline nlohmann::json mutant_manifest_entry(const Mutant& m) {
    nlohmann::json edits = nlohmann::json::array();
    for (const Edit& e : m.edits)
        edits.push_back({{"line", e.span.line},
                         {"col", e.span.column},
                         {"start", e.span.start},
                         {"end", e.span.end},
                         {"original", e.original},
                         {"replacement", e.replacement}});
    const Edit& primary = m.edits.front();
    nlohmann::json entry = {
        {"id", m.id},
        {"operator", std::string(name_of(m.op))},
        {"line", primary.span.line},
        {"col", primary.span.column},
        {"original", primary.original},
        {"replacement", primary.replacement},
        {"description", m.description},
        {"callable", m.enclosing_callable},
        {"edits", std::move(edits)},
    };
    if (!m.duplicate_of.empty()) entry["duplicate_of"] = m.duplicate_of;
    return entry;
}

inline nlohmann::json build_manifest(const std::string& file, const std::vector<Mutant>& mutants) {
    nlohmann::json manifest;
    manifest["schema_version"] = 1;
    manifest["file"] = file;
    manifest["mutants"] = nlohmann::json::array();
    for (const Mutant& m : mutants) manifest["mutants"].push_back(mutant_manifest_entry(m));
    return manifest;
}

/// Writes one .dfy per mutant under <out>/<operator>/ plus manifest.json.
/// Returns the written mutant file paths in mutant order.
inline std::vector<std::filesystem::path> write_mutants(const std::vector<Mutant>& mutants,
                                                        const std::string& original_file,
                                                        const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    std::vector<fs::path> paths;
    std::string basename = fs::path(original_file).stem().string();
    if (basename.empty()) basename = "input";
    for (const Mutant& m : mutants) {
        fs::path dir = out_dir / std::string(name_of(m.op));
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) throw std::runtime_error("cannot create " + dir.string() + " for mutant " + m.id);
        fs::path file = dir / (basename + "." + m.id + ".dfy");
        std::ofstream out(file, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + file.string() + " for mutant " + m.id);
        out << m.mutated_text;
        out.close();
        if (!out) throw std::runtime_error("write failed for mutant " + m.id);
        paths.push_back(file);
    }
    std::ofstream manifest_out(out_dir / "manifest.json", std::ios::binary);
    if (!manifest_out) throw std::runtime_error("cannot write manifest.json");
    manifest_out << build_manifest(original_file, mutants).dump(2) << "\n";
    return paths;
}

}  // namespace mutdafny
