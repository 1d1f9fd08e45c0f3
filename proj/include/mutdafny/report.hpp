#pragma once

#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mutdafny/score.hpp"

namespace mutdafny {

struct PhaseTimings {
    double scan_seconds = 0.0;
    double mutate_seconds = 0.0;
    double analyze_seconds = 0.0;
    double total_seconds = 0.0;
};

struct SurvivorNote {
    std::string mutant_id;
    std::string callable;
};

/// Per-file campaign results in the per-operator table shape. Percentages are
/// always recomputed from the counts when rendering.
struct CampaignReport {
    std::string file;
    std::vector<OperatorId> operators;           // selected, in id order
    std::map<OperatorId, MutationScore> rows;    // only operators with data
    MutationScore totals;
    PhaseTimings timings;
    std::vector<CampaignOutcome> outcomes;       // one per mutant, mutant order
    std::vector<SurvivorNote> survivors_with_ensures;
    std::vector<std::string> duplicate_ids;
};

inline CampaignReport build_report(const std::string& file,
                                   const std::vector<OperatorId>& selected,
                                   const std::vector<Mutant>& mutants,
                                   const std::vector<CampaignOutcome>& outcomes,
                                   const ResolvedProgram& program, PhaseTimings timings) {
    CampaignReport report;
    report.file = file;
    report.operators = selected;
    report.outcomes = outcomes;
    report.timings = timings;
    for (const auto& o : outcomes) {
        report.rows[o.op].add(o.record.verdict);
        report.totals.add(o.record.verdict);
    }
    for (const auto& m : mutants)
        if (!m.duplicate_of.empty()) report.duplicate_ids.push_back(m.id);

    // Surviving mutants inside callables that carry at least one ensures
    // clause are the triage signal for specification weaknesses.
    std::map<std::string, bool> callable_has_ensures;
    for (const auto& c : program.callables) {
        std::string display = c.decl->name.empty()
                                  ? (c.owner_class ? c.owner_class->name : "") + ".constructor"
                                  : c.decl->name;
        callable_has_ensures[display] = c.ensures_count > 0;
    }
    for (const auto& o : outcomes) {
        if (o.record.verdict != Verdict::Alive) continue;
        auto it = callable_has_ensures.find(o.enclosing_callable);
        if (it != callable_has_ensures.end() && it->second)
            report.survivors_with_ensures.push_back({o.mutant_id, o.enclosing_callable});
    }
    return report;
}

namespace detail {

inline std::string pct(int part, int whole) {
    char buf[32];
    double v = whole == 0 ? 0.0 : 100.0 * part / whole;
    std::snprintf(buf, sizeof buf, "%.2f%%", v);
    return buf;
}

inline std::string fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

}  // namespace detail

inline std::string render_text(const CampaignReport& r) {
    std::ostringstream out;
    out << "file: " << r.file << "\n\n";
    out << "Op.     #Mut   #Killed       #Survived     #Invalid      #Timeout\n";
    auto row = [&](const std::string& label, const MutationScore& s) {
        char line[160];
        std::snprintf(line, sizeof line, "%-6s %6d %8d (%s) %6d (%s) %6d (%s) %6d (%s)\n",
                      label.c_str(), s.total(), s.killed,
                      detail::pct(s.killed, s.total()).c_str(), s.survived,
                      detail::pct(s.survived, s.total()).c_str(), s.invalid,
                      detail::pct(s.invalid, s.total()).c_str(), s.timed_out,
                      detail::pct(s.timed_out, s.total()).c_str());
        out << line;
    };
    for (OperatorId op : r.operators) {
        auto it = r.rows.find(op);
        row(std::string(name_of(op)), it == r.rows.end() ? MutationScore{} : it->second);
    }
    row("Total", r.totals);
    out << "\nmutation score (killed / (killed + survived)): ";
    if (auto s = r.totals.score())
        out << detail::fixed4(*s);
    else
        out << "null";
    out << "\nkilled / total generated: " << detail::fixed4(r.totals.killed_over_total()) << "\n";
    if (!r.survivors_with_ensures.empty()) {
        out << "\nsurviving mutants in callables with ensures clauses:\n";
        for (const auto& s : r.survivors_with_ensures)
            out << "  " << s.mutant_id << " in " << s.callable << "\n";
    }
    if (!r.duplicate_ids.empty()) {
        out << "\nduplicate-text mutants: ";
        for (std::size_t i = 0; i < r.duplicate_ids.size(); ++i)
            out << (i ? ", " : "") << r.duplicate_ids[i];
        out << "\n";
    }
    char timing[160];
    std::snprintf(timing, sizeof timing,
                  "\nruntime: scan %.3fs, mutate %.3fs, analyze %.3fs, total %.3fs\n",
                  r.timings.scan_seconds, r.timings.mutate_seconds, r.timings.analyze_seconds,
                  r.timings.total_seconds);
    out << timing;
    return out.str();
}

inline std::string render_csv(const CampaignReport& r) {
    std::ostringstream out;
    out << "operator,generated,killed,survived,invalid,timedout\n";
    auto row = [&](const std::string& label, const MutationScore& s) {
        out << label << "," << s.total() << "," << s.killed << "," << s.survived << ","
            << s.invalid << "," << s.timed_out << "\n";
    };
    for (OperatorId op : r.operators) {
        auto it = r.rows.find(op);
        row(std::string(name_of(op)), it == r.rows.end() ? MutationScore{} : it->second);
    }
    row("total", r.totals);
    return out.str();
}

inline nlohmann::json report_json(const CampaignReport& r) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["file"] = r.file;
    j["operators"] = nlohmann::json::array();
    for (OperatorId op : r.operators) {
        auto it = r.rows.find(op);
        MutationScore s = it == r.rows.end() ? MutationScore{} : it->second;
        j["operators"].push_back({{"operator", std::string(name_of(op))},
                                  {"generated", s.total()},
                                  {"killed", s.killed},
                                  {"survived", s.survived},
                                  {"invalid", s.invalid},
                                  {"timedout", s.timed_out}});
    }
    j["totals"] = {{"generated", r.totals.total()},
                   {"killed", r.totals.killed},
                   {"survived", r.totals.survived},
                   {"invalid", r.totals.invalid},
                   {"timedout", r.totals.timed_out}};
    if (auto s = r.totals.score())
        j["mutation_score"] = *s;
    else
        j["mutation_score"] = nullptr;
    j["killed_over_total"] = r.totals.killed_over_total();
    j["timings"] = {{"scan_seconds", r.timings.scan_seconds},
                    {"mutate_seconds", r.timings.mutate_seconds},
                    {"analyze_seconds", r.timings.analyze_seconds},
                    {"total_seconds", r.timings.total_seconds}};
    j["mutants"] = nlohmann::json::array();
    for (const auto& o : r.outcomes)
        j["mutants"].push_back({{"id", o.mutant_id},
                                {"operator", std::string(name_of(o.op))},
                                {"verdict", std::string(to_string(o.record.verdict))},
                                {"seconds", o.record.seconds},
                                {"exit_code", o.record.exit_code},
                                {"output_digest", o.record.output_digest},
                                {"diagnostic", o.record.diagnostic},
                                {"callable", o.enclosing_callable}});
    j["survivors_in_spec_callables"] = nlohmann::json::array();
    for (const auto& s : r.survivors_with_ensures)
        j["survivors_in_spec_callables"].push_back(
            {{"id", s.mutant_id}, {"callable", s.callable}});
    j["duplicates"] = r.duplicate_ids;
    return j;
}

}  // namespace mutdafny
