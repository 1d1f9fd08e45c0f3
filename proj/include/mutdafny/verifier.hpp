#pragma once

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <map>
#include <mutex>
#include <fstream>
#include <functional>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "mutdafny/mutator.hpp"

namespace mutdafny {

enum class Verdict { Killed, Alive, Invalid, TimedOut };

inline std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Killed: return "killed";
        case Verdict::Alive: return "alive";
        case Verdict::Invalid: return "invalid";
        case Verdict::TimedOut: return "timedout";
    }
    return "invalid";
}

inline std::optional<Verdict> verdict_from_string(std::string_view s) {
    if (s == "killed") return Verdict::Killed;
    if (s == "alive" || s == "survived") return Verdict::Alive;
    if (s == "invalid") return Verdict::Invalid;
    if (s == "timedout" || s == "timeout") return Verdict::TimedOut;
    return std::nullopt;
}

/// Classification of one verification run.
struct VerdictRecord {
    Verdict verdict = Verdict::Invalid;
    int exit_code = 0;
    std::string output_digest;
    double seconds = 0.0;
    bool diagnostic = false;  // output matched no known pattern
};

struct AdapterSpawnError : std::runtime_error {
    explicit AdapterSpawnError(const std::string& what_) : std::runtime_error(what_) {}
};

namespace detail {

inline std::string fnv1a_hex(std::string_view data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct ProcessResult {
    int exit_code = -1;
    bool timed_out = false;
    bool spawn_failed = false;
    std::string output;  // stdout and stderr combined
    double seconds = 0.0;
};

/// Runs a command, captures combined output, and kills it at the deadline.
inline ProcessResult run_process(const std::vector<std::string>& argv, double timeout_seconds) {
    ProcessResult result;
    if (argv.empty()) {
        result.spawn_failed = true;
        return result;
    }
    int fds[2];
    if (pipe(fds) != 0) throw std::runtime_error("pipe() failed");

    auto start = std::chrono::steady_clock::now();
    pid_t pid = fork();
    if (pid < 0) {
        close(fds[0]);
        close(fds[1]);
        throw std::runtime_error("fork() failed");
    }
    if (pid == 0) {
        close(fds[0]);
        dup2(fds[1], STDOUT_FILENO);
        dup2(fds[1], STDERR_FILENO);
        close(fds[1]);
        std::vector<char*> args;
        args.reserve(argv.size() + 1);
        for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
        args.push_back(nullptr);
        execvp(args[0], args.data());
        const char marker[] = "mutdafny-exec-failed\n";
        ssize_t ignored = write(STDOUT_FILENO, marker, sizeof marker - 1);
        (void)ignored;
        _exit(127);
    }
    close(fds[1]);

    auto deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                std::chrono::duration<double>(timeout_seconds));
    char buf[4096];
    bool open = true;
    while (open) {
        auto now = std::chrono::steady_clock::now();
        if (now >= deadline) {
            result.timed_out = true;
            kill(pid, SIGKILL);
        }
        struct pollfd pfd{fds[0], POLLIN, 0};
        int remaining = result.timed_out
                            ? 100
                            : static_cast<int>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                                   deadline - now)
                                                   .count()) +
                                  1;
        int rc = poll(&pfd, 1, std::max(1, remaining));
        if (rc > 0) {
            ssize_t n = read(fds[0], buf, sizeof buf);
            if (n > 0)
                result.output.append(buf, static_cast<std::size_t>(n));
            else
                open = false;
        } else if (rc == 0 && result.timed_out) {
            open = false;  // killed and drained
        }
    }
    close(fds[0]);
    int status = 0;
    waitpid(pid, &status, 0);
    if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (result.output.find("mutdafny-exec-failed") != std::string::npos) result.spawn_failed = true;
    return result;
}

}  // namespace detail

/// External verifier invocation: a command template with a {file}
/// placeholder plus the output patterns that drive classification. Pattern
/// precedence is invalid over killed over verified.
struct VerifierAdapter {
    std::vector<std::string> command = {"dafny", "verify", "{file}"};
    double timeout_seconds = 20.0;
    std::string invalid_pattern = "parse errors|resolution/type errors";
    std::string killed_pattern =
        "Dafny program verifier finished with [0-9]+ verified, [1-9][0-9]* error";
    std::string verified_pattern =
        "Dafny program verifier finished with [1-9][0-9]* verified, 0 error";

    std::vector<std::string> command_for(const std::string& file) const {
        std::vector<std::string> argv;
        for (std::string arg : command) {
            std::size_t at;
            while ((at = arg.find("{file}")) != std::string::npos)
                arg.replace(at, 6, file);
            argv.push_back(std::move(arg));
        }
        return argv;
    }

    static VerifierAdapter from_json(const nlohmann::json& j) {
        VerifierAdapter a;
        if (j.contains("command")) a.command = j["command"].get<std::vector<std::string>>();
        if (j.contains("timeout_seconds")) a.timeout_seconds = j["timeout_seconds"].get<double>();
        if (j.contains("patterns")) {
            const auto& pats = j["patterns"];
            if (pats.contains("invalid")) a.invalid_pattern = pats["invalid"].get<std::string>();
            if (pats.contains("killed")) a.killed_pattern = pats["killed"].get<std::string>();
            if (pats.contains("verified"))
                a.verified_pattern = pats["verified"].get<std::string>();
        }
        return a;
    }

    static VerifierAdapter from_config_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot read verifier config " + path);
        nlohmann::json j;
        in >> j;
        return from_json(j);
    }

    /// MUTDAFNY_VERIFIER holds a space-separated command template.
    static std::optional<VerifierAdapter> from_environment() {
        const char* env = std::getenv("MUTDAFNY_VERIFIER");
        if (!env || !*env) return std::nullopt;
        VerifierAdapter a;
        a.command.clear();
        std::istringstream words(env);
        std::string word;
        while (words >> word) a.command.push_back(word);
        bool has_placeholder = false;
        for (const auto& w : a.command)
            if (w.find("{file}") != std::string::npos) has_placeholder = true;
        if (!has_placeholder) a.command.push_back("{file}");
        return a;
    }
};

/// Runs the verifier on one file and classifies the outcome. Precedence:
/// wall-clock timeout, then invalid, then killed, then verified; anything
/// else is invalid with the diagnostic flag set.
inline VerdictRecord classify(const std::string& file, const VerifierAdapter& adapter) {
    auto argv = adapter.command_for(file);
    detail::ProcessResult run = detail::run_process(argv, adapter.timeout_seconds);
    if (run.spawn_failed)
        throw AdapterSpawnError("cannot run verifier command '" + argv[0] + "'");

    VerdictRecord record;
    record.exit_code = run.exit_code;
    record.seconds = run.seconds;
    record.output_digest = detail::fnv1a_hex(run.output);

    if (run.timed_out) {
        record.verdict = Verdict::TimedOut;
        return record;
    }
    auto matches = [&](const std::string& pattern) {
        return !pattern.empty() &&
               std::regex_search(run.output, std::regex(pattern));
    };
    if (matches(adapter.invalid_pattern)) {
        record.verdict = Verdict::Invalid;
    } else if (matches(adapter.killed_pattern)) {
        record.verdict = Verdict::Killed;
    } else if (matches(adapter.verified_pattern)) {
        record.verdict = Verdict::Alive;
    } else {
        record.verdict = Verdict::Invalid;
        record.diagnostic = true;
    }
    return record;
}

/// Fixed verdicts for tests and dry runs: by mutant id, with "*" as fallback.
struct StubVerdicts {
    std::map<std::string, Verdict> by_id;
    std::optional<Verdict> fallback;

    static StubVerdicts all(Verdict v) {
        StubVerdicts s;
        s.fallback = v;
        return s;
    }

    static StubVerdicts from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot read stub verdicts " + path);
        nlohmann::json j;
        in >> j;
        StubVerdicts s;
        for (auto it = j.begin(); it != j.end(); ++it) {
            auto v = verdict_from_string(it.value().get<std::string>());
            if (!v) throw std::runtime_error("unknown verdict for " + it.key());
            if (it.key() == "*")
                s.fallback = *v;
            else
                s.by_id[it.key()] = *v;
        }
        return s;
    }

    VerdictRecord classify(const std::string& id) const {
        VerdictRecord r;
        if (auto it = by_id.find(id); it != by_id.end())
            r.verdict = it->second;
        else if (fallback)
            r.verdict = *fallback;
        else
            r.verdict = Verdict::Alive;
        r.output_digest = detail::fnv1a_hex(id);
        return r;
    }

    /// The gate on the unmutated file: explicit entry wins, otherwise pass.
    VerdictRecord classify_original() const {
        VerdictRecord r;
        if (auto it = by_id.find("original"); it != by_id.end())
            r.verdict = it->second;
        else
            r.verdict = Verdict::Alive;
        return r;
    }
};

using Classifier = std::function<VerdictRecord(const Mutant&)>;

struct CampaignOutcome {
    std::string mutant_id;
    OperatorId op = OperatorId::BOR;
    VerdictRecord record;
    std::string enclosing_callable;
};

/// Classifies every mutant exactly once on a bounded worker pool. Results
/// come back in mutant order regardless of scheduling, and one mutant's
/// failure never aborts the campaign.
inline std::vector<CampaignOutcome> run_campaign(const std::vector<Mutant>& mutants,
                                                 const Classifier& classifier, int jobs) {
    std::vector<CampaignOutcome> results(mutants.size());
    if (mutants.empty()) return results;
    jobs = std::max(1, jobs);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> aborted{false};
    std::string spawn_error;
    std::mutex spawn_mutex;

    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= mutants.size() || aborted.load()) return;
            CampaignOutcome& out = results[i];
            out.mutant_id = mutants[i].id;
            out.op = mutants[i].op;
            out.enclosing_callable = mutants[i].enclosing_callable;
            try {
                out.record = classifier(mutants[i]);
            } catch (const AdapterSpawnError& e) {
                std::lock_guard<std::mutex> lock(spawn_mutex);
                spawn_error = e.what();
                aborted.store(true);
                return;
            } catch (const std::exception& e) {
                out.record.verdict = Verdict::Invalid;
                out.record.diagnostic = true;
                out.record.output_digest = detail::fnv1a_hex(e.what());
            }
        }
    };

    std::vector<std::thread> pool;
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (!spawn_error.empty()) throw AdapterSpawnError(spawn_error);
    return results;
}

}  // namespace mutdafny
