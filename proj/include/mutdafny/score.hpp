#pragma once

#include <map>
#include <optional>
#include <vector>

#include "mutdafny/verifier.hpp"

namespace mutdafny {

/// Campaign tallies. The mutation score is killed over killed-plus-survived;
/// invalid and timed-out runs are inconclusive and stay out of the
/// denominator. killed_over_total divides by every generated mutant instead,
/// and both are reported.
struct MutationScore {
    int killed = 0;
    int survived = 0;
    int invalid = 0;
    int timed_out = 0;

    int total() const { return killed + survived + invalid + timed_out; }

    std::optional<double> score() const {
        int denom = killed + survived;
        if (denom == 0) return std::nullopt;
        return static_cast<double>(killed) / denom;
    }

    double killed_over_total() const {
        return total() == 0 ? 0.0 : static_cast<double>(killed) / total();
    }

    void add(Verdict v) {
        switch (v) {
            case Verdict::Killed: killed++; break;
            case Verdict::Alive: survived++; break;
            case Verdict::Invalid: invalid++; break;
            case Verdict::TimedOut: timed_out++; break;
        }
    }
};

inline MutationScore score(const std::vector<CampaignOutcome>& outcomes) {
    MutationScore s;
    for (const auto& o : outcomes) s.add(o.record.verdict);
    return s;
}

inline std::map<OperatorId, MutationScore> score_by_operator(
    const std::vector<CampaignOutcome>& outcomes) {
    std::map<OperatorId, MutationScore> per_op;
    for (const auto& o : outcomes) per_op[o.op].add(o.record.verdict);
    return per_op;
}

}  // namespace mutdafny
