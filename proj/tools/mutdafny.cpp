// mutdafny - mutation testing for Dafny programs.
//
// scan    list mutation targets in a file
// mutate  write one mutant source file per target plus a manifest
// run     generate mutants, verify each, and report mutation scores
//
// Exit codes: 0 ok, 2 parse error, 3 unknown operator name, 4 I/O or
// verifier-spawn error, 5 original file failed verification.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mutdafny/mutdafny.hpp"

using namespace mutdafny;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParseError = 2;
constexpr int kExitBadOperator = 3;
constexpr int kExitIoError = 4;
constexpr int kExitOriginalFailed = 5;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<OperatorId> parse_operator_list(const std::string& csv) {
    if (csv.empty()) return all_operators();
    std::vector<OperatorId> ops;
    std::istringstream stream(csv);
    std::string name;
    while (std::getline(stream, name, ',')) {
        if (name.empty()) continue;
        auto op = operator_from_name(name);
        if (!op) {
            std::cerr << "unknown operator '" << name << "'; valid names:";
            for (auto n : operator_names) std::cerr << " " << n;
            std::cerr << "\n";
            std::exit(kExitBadOperator);
        }
        ops.push_back(*op);
    }
    std::sort(ops.begin(), ops.end());
    ops.erase(std::unique(ops.begin(), ops.end()), ops.end());
    return ops;
}

ResolvedProgram load_program(const std::string& file) {
    try {
        return parse_and_resolve(read_file(file));
    } catch (const LexError& e) {
        std::cerr << file << ": " << e.what() << "\n";
        std::exit(kExitParseError);
    } catch (const ParseError& e) {
        std::cerr << file << ": " << e.what() << "\n";
        std::exit(kExitParseError);
    }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int cmd_scan(const std::string& file, const std::string& operators, const std::string& format) {
    auto ops = parse_operator_list(operators);
    ResolvedProgram program = load_program(file);
    auto mutants = generate_all(program, ops, file);
    if (format == "json") {
        std::cout << build_manifest(file, mutants).dump(2) << "\n";
        return kExitOk;
    }
    for (const auto& m : mutants) {
        const Edit& e = m.edits.front();
        std::cout << name_of(m.op) << " " << e.span.line << ":" << e.span.column << " '"
                  << e.original << "' -> '" << e.replacement << "'";
        if (m.edits.size() > 1) std::cout << " (+" << m.edits.size() - 1 << " more edits)";
        std::cout << "  [" << m.id << "]\n";
    }
    std::cerr << mutants.size() << " targets\n";
    return kExitOk;
}

int cmd_mutate(const std::string& file, const std::string& operators,
               const std::string& out_dir) {
    auto ops = parse_operator_list(operators);
    ResolvedProgram program = load_program(file);
    auto mutants = generate_all(program, ops, file);
    try {
        write_mutants(mutants, file, out_dir);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitIoError;
    }
    std::map<OperatorId, int> counts;
    for (const auto& m : mutants) counts[m.op]++;
    for (OperatorId op : ops)
        std::cout << name_of(op) << " " << (counts.count(op) ? counts[op] : 0) << "\n";
    std::cout << "total " << mutants.size() << "\n";
    return kExitOk;
}

int cmd_run(const std::string& file, const std::string& operators, const std::string& out_dir,
            int jobs, double timeout, const std::vector<std::string>& formats,
            const std::string& verifier_config, const std::string& stub_spec,
            bool timeout_given) {
    auto ops = parse_operator_list(operators);
    auto total_start = std::chrono::steady_clock::now();

    auto scan_start = std::chrono::steady_clock::now();
    ResolvedProgram program = load_program(file);
    Scanner scanner(program);
    std::size_t target_count = 0;
    for (OperatorId op : ops) target_count += scanner.scan(op).size();
    PhaseTimings timings;
    timings.scan_seconds = seconds_since(scan_start);

    auto mutate_start = std::chrono::steady_clock::now();
    auto mutants = generate_all(program, ops, file);
    std::vector<fs::path> mutant_files;
    if (!out_dir.empty()) {
        try {
            mutant_files = write_mutants(mutants, file, out_dir);
        } catch (const std::exception& e) {
            std::cerr << e.what() << "\n";
            return kExitIoError;
        }
    }
    timings.mutate_seconds = seconds_since(mutate_start);
    if (mutants.size() != target_count) {
        std::cerr << "internal error: " << target_count << " targets but " << mutants.size()
                  << " mutants\n";
        return kExitIoError;
    }

    // Classification: a stub map for dry runs, the external verifier
    // otherwise. The original file must verify before any mutant counts.
    auto analyze_start = std::chrono::steady_clock::now();
    std::vector<CampaignOutcome> outcomes;
    try {
        if (!stub_spec.empty()) {
            StubVerdicts stub;
            if (stub_spec == "all-killed")
                stub = StubVerdicts::all(Verdict::Killed);
            else if (stub_spec == "all-alive")
                stub = StubVerdicts::all(Verdict::Alive);
            else if (stub_spec == "all-invalid")
                stub = StubVerdicts::all(Verdict::Invalid);
            else if (stub_spec == "all-timedout")
                stub = StubVerdicts::all(Verdict::TimedOut);
            else
                stub = StubVerdicts::from_file(stub_spec);
            if (stub.classify_original().verdict != Verdict::Alive) {
                std::cerr << file << ": original file failed verification (stubbed)\n";
                return kExitOriginalFailed;
            }
            outcomes = run_campaign(
                mutants, [&](const Mutant& m) { return stub.classify(m.id); }, jobs);
        } else {
            VerifierAdapter adapter;
            if (auto env = VerifierAdapter::from_environment())
                adapter = *env;
            else if (!verifier_config.empty())
                adapter = VerifierAdapter::from_config_file(verifier_config);
            if (timeout_given) adapter.timeout_seconds = timeout;

            VerdictRecord original = classify(file, adapter);
            if (original.verdict != Verdict::Alive) {
                std::cerr << file << ": original file failed verification (verdict "
                          << to_string(original.verdict) << "), nothing to measure\n";
                return kExitOriginalFailed;
            }

            fs::path scratch;
            if (mutant_files.empty()) {
                scratch = fs::temp_directory_path() /
                          ("mutdafny-" + std::to_string(::getpid()));
                mutant_files = write_mutants(mutants, file, scratch);
            }
            std::map<std::string, std::string> path_of;
            for (std::size_t i = 0; i < mutants.size(); ++i)
                path_of[mutants[i].id] = mutant_files[i].string();
            outcomes = run_campaign(
                mutants,
                [&](const Mutant& m) { return classify(path_of.at(m.id), adapter); }, jobs);
            if (!scratch.empty()) {
                std::error_code ec;
                fs::remove_all(scratch, ec);
            }
        }
    } catch (const AdapterSpawnError& e) {
        std::cerr << e.what() << "\n";
        return kExitIoError;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitIoError;
    }
    timings.analyze_seconds = seconds_since(analyze_start);
    timings.total_seconds = seconds_since(total_start);

    CampaignReport report = build_report(file, ops, mutants, outcomes, program, timings);

    auto render = [&](const std::string& fmt) -> std::string {
        if (fmt == "json") return report_json(report).dump(2) + "\n";
        if (fmt == "csv") return render_csv(report);
        return render_text(report);
    };
    std::vector<std::string> wanted = formats.empty() ? std::vector<std::string>{"text"} : formats;
    if (!out_dir.empty()) {
        for (const auto& fmt : wanted) {
            std::string ext = fmt == "text" ? "txt" : fmt;
            std::ofstream out(fs::path(out_dir) / ("report." + ext), std::ios::binary);
            if (!out) {
                std::cerr << "cannot write report." << ext << "\n";
                return kExitIoError;
            }
            out << render(fmt);
        }
        std::cout << render_text(report);
    } else {
        for (const auto& fmt : wanted) std::cout << render(fmt);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mutation testing for Dafny programs"};
    app.require_subcommand(1);

    std::string file, operators, format = "text", out_dir;
    std::vector<std::string> formats;
    std::string verifier_config, stub_spec;
    int jobs = 1;
    double timeout = 20.0;

    auto* scan_cmd = app.add_subcommand("scan", "list mutation targets");
    scan_cmd->add_option("file", file, "Dafny source file")->required();
    scan_cmd->add_option("--operators", operators, "comma-separated operator names");
    scan_cmd->add_option("--format", format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));

    auto* mutate_cmd = app.add_subcommand("mutate", "write mutant files");
    mutate_cmd->add_option("file", file, "Dafny source file")->required();
    mutate_cmd->add_option("--operators", operators, "comma-separated operator names");
    mutate_cmd->add_option("--out", out_dir, "output directory")->required();

    auto* run_cmd = app.add_subcommand("run", "full mutation-testing campaign");
    run_cmd->add_option("file", file, "Dafny source file")->required();
    run_cmd->add_option("--operators", operators, "comma-separated operator names");
    run_cmd->add_option("--out", out_dir, "directory for mutants and reports");
    run_cmd->add_option("--jobs", jobs, "parallel verifier processes")
        ->check(CLI::PositiveNumber);
    auto* timeout_opt =
        run_cmd->add_option("--timeout", timeout, "per-mutant verifier timeout in seconds");
    run_cmd->add_option("--format", formats, "report formats (text, json, csv)")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    run_cmd->add_option("--verifier-config", verifier_config, "adapter config JSON");
    run_cmd->add_option("--stub-verdicts", stub_spec,
                        "verdict map JSON, or all-killed/all-alive/all-invalid/all-timedout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (scan_cmd->parsed()) return cmd_scan(file, operators, format);
        if (mutate_cmd->parsed()) return cmd_mutate(file, operators, out_dir);
        if (run_cmd->parsed())
            return cmd_run(file, operators, out_dir, jobs, timeout, formats, verifier_config,
                           stub_spec, timeout_opt->count() > 0);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitIoError;
    }
    return kExitOk;
}
