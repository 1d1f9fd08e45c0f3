#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "mutdafny/scanner.hpp"
#include "oracle.hpp"

using namespace mutdafny;
namespace fs = std::filesystem;

namespace {

std::string read_fixture(const std::string& name) {
    std::ifstream in(fs::path(MUTDAFNY_FIXTURE_DIR) / name, std::ios::binary);
    REQUIRE(in);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<fs::path> corpus_files() {
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(MUTDAFNY_FIXTURE_DIR))
        if (entry.is_regular_file() && entry.path().extension() == ".dfy")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    return files;
}

std::vector<std::string> replacements(const std::vector<MutationTarget>& targets) {
    std::vector<std::string> out;
    for (const auto& t : targets) out.push_back(t.edits.front().replacement);
    return out;
}

std::string apply_single(const std::string& text, const MutationTarget& t) {
    REQUIRE(t.edits.size() == 1);
    return splice(text, t.edits.front().span, t.edits.front().replacement);
}

std::string apply_all_edits(const std::string& text, const MutationTarget& t) {
    auto edits = t.edits;
    std::sort(edits.begin(), edits.end(),
              [](const Edit& a, const Edit& b) { return a.span.start > b.span.start; });
    std::string out = text;
    for (const auto& e : edits) out = splice(out, e.span, e.replacement);
    return out;
}

}  // namespace

TEST_CASE("implication offers the other four conditional operators", "[scanner][BOR]") {
    auto p = parse_and_resolve("method M(p: bool, q: bool) { var c := p ==> q; }");
    auto targets = scan(p, OperatorId::BOR);
    CHECK(replacements(targets) == std::vector<std::string>{"&&", "||", "<==", "<==>"});
}

TEST_CASE("plus offers minus and times", "[scanner][BOR]") {
    auto p = parse_and_resolve("method M(a: int, b: int) { var s := a + b; }");
    auto targets = scan(p, OperatorId::BOR);
    CHECK(replacements(targets) == std::vector<std::string>{"-", "*"});
}

TEST_CASE("division offers only modulo", "[scanner][BOR]") {
    auto p = parse_and_resolve(
        "method M(x: int, y: int) requires y != 0 { var d := x / y; }");
    auto targets = scan(p, OperatorId::BOR);
    CHECK(replacements(targets) == std::vector<std::string>{"%"});
}

TEST_CASE("relational replacement needs ordered operands", "[scanner][BOR]") {
    auto ints = parse_and_resolve("method M(a: int, b: int) { var c := a < b; }");
    CHECK(scan(ints, OperatorId::BOR).size() == 5);

    auto bools = parse_and_resolve("method M(a: bool, b: bool) { var c := a == b; }");
    CHECK(replacements(scan(bools, OperatorId::BOR)) == std::vector<std::string>{"!="});
}

TEST_CASE("motivating example guard yields two boolean replacements", "[scanner][BBR]") {
    auto p = parse_and_resolve(read_fixture("listing1.dfy"));
    auto targets = scan(p, OperatorId::BBR);
    REQUIRE(targets.size() == 2);
    CHECK(targets[0].edits.front().original == "InArray(b, a[i]) && a[i] !in res");
    CHECK(replacements(targets) == std::vector<std::string>{"true", "false"});
}

TEST_CASE("lone literal yields no boolean replacement", "[scanner][BBR]") {
    auto p = parse_and_resolve("method M() { var t := true; }");
    CHECK(scan(p, OperatorId::BBR).empty());
}

TEST_CASE("unary insertion covers each typed subexpression", "[scanner][UOI]") {
    auto p = parse_and_resolve("method M(a: int, b: int) { var s := a + b; }");
    auto targets = scan(p, OperatorId::UOI);
    REQUIRE(targets.size() == 3);
    std::multiset<std::string> texts;
    for (const auto& t : targets) texts.insert(t.edits.front().replacement);
    CHECK(texts == std::multiset<std::string>{"-(a)", "-(a + b)", "-(b)"});
}

TEST_CASE("boolean expression gains a negation", "[scanner][UOI]") {
    auto p = parse_and_resolve("method M(b: bool) { var c := b; }");
    auto targets = scan(p, OperatorId::UOI);
    REQUIRE(targets.size() == 1);
    CHECK(targets[0].edits.front().replacement == "!(b)");
}

TEST_CASE("unary deletion inverts insertion", "[scanner][UOD]") {
    auto p = parse_and_resolve("method M(x: int) { var y := -x; }");
    auto targets = scan(p, OperatorId::UOD);
    REQUIRE(targets.size() == 1);
    CHECK(targets[0].edits.front().original == "-x");
    CHECK(targets[0].edits.front().replacement == "x");
}

TEST_CASE("literal replacement sets", "[scanner][LVR]") {
    auto zero = parse_and_resolve("method M() { var z := 0; }");
    CHECK(replacements(scan(zero, OperatorId::LVR)) == std::vector<std::string>{"1", "-1"});

    auto ten = parse_and_resolve("method M() { var t := 10; }");
    CHECK(replacements(scan(ten, OperatorId::LVR)) ==
          std::vector<std::string>{"0", "1", "-1", "11", "9"});

    auto truthy = parse_and_resolve("method M() { var t := true; }");
    CHECK(replacements(scan(truthy, OperatorId::LVR)) == std::vector<std::string>{"false"});

    auto real = parse_and_resolve("method M() { var r := 1.0; }");
    CHECK(replacements(scan(real, OperatorId::LVR)) ==
          std::vector<std::string>{"0.0", "-1.0"});

    auto strings = parse_and_resolve("method M() { var s := \"hi\"; var e := \"\"; }");
    CHECK(replacements(scan(strings, OperatorId::LVR)) ==
          std::vector<std::string>{"\"\"", "\"A\""});

    auto chars = parse_and_resolve("method M() { var c := 'a'; var d := 'z'; }");
    CHECK(replacements(scan(chars, OperatorId::LVR)) ==
          std::vector<std::string>{"'b'", "'a'"});
}

TEST_CASE("negative literal context is parenthesized", "[scanner][LVR]") {
    std::string text = "method M(a: int) { var z := a-5; }";
    auto p = parse_and_resolve(text);
    auto targets = scan(p, OperatorId::LVR);
    bool found = false;
    for (const auto& t : targets) {
        std::string mutant = apply_single(text, t);
        CHECK_NOTHROW(parse_program(mutant));
        if (t.edits.front().replacement == "(-1)") found = true;
    }
    CHECK(found);
}

TEST_CASE("expression value replacement hits the four positions", "[scanner][EVR]") {
    auto p = parse_and_resolve(read_fixture("far_item.dfy"));
    auto targets = scan(p, OperatorId::EVR);
    REQUIRE(targets.size() == 3);
    CHECK(targets[0].edits.front().original == "item.price * item.stock");
    CHECK(replacements(targets) == std::vector<std::string>{"0", "1", "-1"});

    auto lit = parse_and_resolve("method M() { var x := 5; }");
    CHECK(scan(lit, OperatorId::EVR).empty());  // literals belong to LVR

    // Both the outer bool argument and the nested int argument sit in
    // call-argument positions.
    auto arg = parse_and_resolve("method P(b: bool) {}\n"
                                 "function F(x: int): bool { x > 0 }\n"
                                 "method M(x: int) { P(F(x)); }");
    CHECK(replacements(scan(arg, OperatorId::EVR)) ==
          std::vector<std::string>{"true", "false", "0", "1", "-1"});
}

TEST_CASE("method call replaced by return defaults", "[scanner][MRR]") {
    auto p = parse_and_resolve(read_fixture("mcr_sum.dfy"));
    auto targets = scan(p, OperatorId::MRR);
    REQUIRE(targets.size() == 1);
    CHECK(targets[0].edits.front().original == "Sum(10, 20)");
    CHECK(targets[0].edits.front().replacement == "0");

    auto multi = parse_and_resolve(read_fixture("mrr_multi.dfy"));
    auto multi_targets = scan(multi, OperatorId::MRR);
    std::vector<std::string> repls = replacements(multi_targets);
    CHECK(std::find(repls.begin(), repls.end(), "0, 0") != repls.end());
    CHECK(std::find(repls.begin(), repls.end(), "false, 0") != repls.end());
    for (const auto& t : multi_targets)  // class results have no default
        CHECK(t.edits.front().original.find("Build") == std::string::npos);
}

TEST_CASE("argument propagation needs the return type", "[scanner][MAP]") {
    auto p = parse_and_resolve(read_fixture("mcr_sum.dfy"));
    auto targets = scan(p, OperatorId::MAP);
    CHECK(replacements(targets) == std::vector<std::string>{"10", "20"});

    auto mixed = parse_and_resolve(read_fixture("map_args.dfy"));
    CHECK(replacements(scan(mixed, OperatorId::MAP)) == std::vector<std::string>{"7", "8"});
}

TEST_CASE("collection initializers empty out", "[scanner][CIR]") {
    std::string text = read_fixture("cir_collections.dfy");
    auto p = parse_and_resolve(text);
    auto targets = scan(p, OperatorId::CIR);
    auto repls = replacements(targets);
    CHECK(repls == std::vector<std::string>{"[]", "{}", "multiset{}", "map[]", "null"});
    // Only the nullable declaration accepts null.
    for (const auto& t : targets)
        if (t.edits.front().replacement == "null") {
            std::string mutant = apply_single(text, t);
            CHECK(mutant.find("var w: Widget? := null;") != std::string::npos);
        }
}

TEST_CASE("jump replacement respects out-parameters", "[scanner][LSR]") {
    auto p = parse_and_resolve(read_fixture("lsr_loops.dfy"));
    auto targets = scan(p, OperatorId::LSR);
    REQUIRE(targets.size() == 3);
    CHECK(targets[0].enclosing_callable == "VoidLoop");
    CHECK(targets[0].edits.front().replacement == "continue;");
    CHECK(targets[1].edits.front().replacement == "return;");
    CHECK(targets[2].enclosing_callable == "OutLoop");
    CHECK(targets[2].edits.front().replacement == "break;");
}

TEST_CASE("break insertion at loop start", "[scanner][LBI]") {
    auto p = parse_and_resolve(read_fixture("listing1.dfy"));
    auto targets = scan(p, OperatorId::LBI);
    REQUIRE(targets.size() == 1);

    std::string text = "method M(n: nat) { var i := 0; while i < n decreases n - i {} }";
    auto q = parse_and_resolve(text);
    auto empty_loop = scan(q, OperatorId::LBI);
    REQUIRE(empty_loop.size() == 1);
    std::string mutant = apply_single(text, empty_loop[0]);
    CHECK(mutant.find("{ break;}") != std::string::npos);
    CHECK_NOTHROW(parse_program(mutant));
}

TEST_CASE("case bodies rotate through the wildcard", "[scanner][CBR]") {
    auto p = parse_and_resolve(read_fixture("cbr_match.dfy"));
    auto targets = scan(p, OperatorId::CBR);
    REQUIRE(targets.size() == 3);  // Red and Green get the default body, _ gets Red's
    CHECK(targets[0].edits.front().original == "n := 1;");
    CHECK(targets[0].edits.front().replacement == "n := 0;");
    CHECK(targets[2].edits.front().original == "n := 0;");
    CHECK(targets[2].edits.front().replacement == "n := 1;");
}

TEST_CASE("statement deletion on the motivating example", "[scanner][SDL]") {
    std::string text = read_fixture("listing1.dfy");
    auto p = parse_and_resolve(text);
    auto targets = scan(p, OperatorId::SDL);
    REQUIRE(targets.size() == 4);

    // The whole-if deletion reproduces the famous surviving mutant.
    bool found_if = false;
    for (const auto& t : targets) {
        if (t.edits.front().original.rfind("if InArray", 0) == 0) {
            found_if = true;
            std::string mutant = apply_single(text, t);
            CHECK(mutant.find("if InArray") == std::string::npos);
            CHECK(mutant.find("res := res + [a[i]];") == std::string::npos);
            CHECK_NOTHROW(parse_program(mutant));
        }
    }
    CHECK(found_if);
}

TEST_CASE("bodies empty only without out-parameters", "[scanner][SDL]") {
    auto p = parse_and_resolve(read_fixture("sdl_bodies.dfy"));
    auto targets = scan(p, OperatorId::SDL);
    int body_deletions = 0, else_deletions = 0, whole_if = 0;
    for (const auto& t : targets) {
        if (t.edits.front().replacement == "{}") {
            body_deletions++;
            CHECK((t.enclosing_callable == "Jar.constructor" || t.enclosing_callable == "Log"));
        }
        if (t.description == "delete else branch") else_deletions++;
        if (t.description == "delete if statement") whole_if++;
    }
    CHECK(body_deletions == 2);  // the constructor and the void method
    CHECK(else_deletions == 1);
    CHECK(whole_if == 1);
}

TEST_CASE("naked receiver requires matching types", "[scanner][MNR]") {
    auto p = parse_and_resolve(read_fixture("mnr_counter.dfy"));
    auto targets = scan(p, OperatorId::MNR);
    REQUIRE(targets.size() == 1);
    CHECK(targets[0].edits.front().original == "c.Bump()");
    CHECK(targets[0].edits.front().replacement == "c");

    auto free_call = parse_and_resolve(read_fixture("mcr_sum.dfy"));
    CHECK(scan(free_call, OperatorId::MNR).empty());
}

TEST_CASE("variable deletion collapses binary uses", "[scanner][VDL]") {
    std::string text = read_fixture("vdl_vars.dfy");
    auto p = parse_and_resolve(text);
    auto targets = scan(p, OperatorId::VDL);
    REQUIRE(targets.size() == 1);
    REQUIRE(targets[0].edits.size() == 2);
    std::string mutant = apply_all_edits(text, targets[0]);
    CHECK(mutant.find("x := a;") != std::string::npos);
    CHECK(mutant.find("y := b;") != std::string::npos);
    CHECK_NOTHROW(parse_program(mutant));
}

TEST_CASE("slice limits drop one at a time", "[scanner][SLD]") {
    std::string text = "method M(s: seq<int>, n: nat) requires n <= |s| { var t := s[1..n]; }";
    auto p = parse_and_resolve(text);
    auto targets = scan(p, OperatorId::SLD);
    REQUIRE(targets.size() == 2);
    std::set<std::string> mutants;
    for (const auto& t : targets) mutants.insert(apply_single(text, t));
    CHECK(mutants.count("method M(s: seq<int>, n: nat) requires n <= |s| { var t := s[..n]; }"));
    CHECK(mutants.count("method M(s: seq<int>, n: nat) requires n <= |s| { var t := s[1..]; }"));

    auto full = parse_and_resolve(read_fixture("sld_slices.dfy"));
    CHECK(scan(full, OperatorId::SLD).size() == 4);  // 2 + 1 + 1 + 0
}

TEST_CASE("operator deletion keeps either operand everywhere", "[scanner][ODL]") {
    std::string text = read_fixture("odl_ops.dfy");
    auto p = parse_and_resolve(text);
    auto targets = scan(p, OperatorId::ODL);
    REQUIRE(targets.size() == 4);

    // TwoPlus: both '+' occurrences collapse together.
    std::set<std::string> mutants;
    for (const auto& t : targets)
        if (t.enclosing_callable == "TwoPlus") mutants.insert(apply_all_edits(text, t));
    REQUIRE(mutants.size() == 2);
    for (const auto& m : mutants) {
        CHECK(m.find("a + b + c") == std::string::npos);
        CHECK_NOTHROW(parse_program(m));
    }
    bool keep_left = false, keep_right = false;
    for (const auto& m : mutants) {
        if (m.find("r := a;") != std::string::npos) keep_left = true;
        if (m.find("r := c;") != std::string::npos) keep_right = true;
    }
    CHECK(keep_left);
    CHECK(keep_right);
}

TEST_CASE("polymorphic assignment swaps child instances", "[scanner][PRV]") {
    std::string text = read_fixture("prv_shapes.dfy");
    auto p = parse_and_resolve(text);
    auto targets = scan(p, OperatorId::PRV);
    REQUIRE(targets.size() == 1);
    std::string mutant = apply_single(text, targets[0]);
    CHECK(mutant.find("shape := triangle;") != std::string::npos);
}

TEST_CASE("this insertion and deletion respect assignment sides", "[scanner][THI][THD]") {
    std::string text = read_fixture("thi_account.dfy");
    auto p = parse_and_resolve(text);

    auto thi = scan(p, OperatorId::THI);
    REQUIRE(thi.size() == 2);
    for (const auto& t : thi) CHECK(t.edits.front().replacement == "this.balance");
    std::string ctor_mutant = apply_single(text, thi[0]);
    CHECK(ctor_mutant.find("this.balance := this.balance;") != std::string::npos);

    auto thd = scan(p, OperatorId::THD);
    REQUIRE(thd.size() == 1);
    CHECK(thd[0].enclosing_callable == "Deposit");
    std::string thd_mutant = apply_single(text, thd[0]);
    CHECK(thd_mutant.find("this.balance := balance + balance;") != std::string::npos);
}

TEST_CASE("accessor and modifier calls swap within their prefix", "[scanner][AMR][MMR]") {
    auto p = parse_and_resolve(read_fixture("amr_point.dfy"));
    auto amr = scan(p, OperatorId::AMR);
    REQUIRE(amr.size() == 2);
    CHECK(amr[0].edits.front().original == "GetX");
    CHECK(amr[0].edits.front().replacement == "GetY");
    CHECK(amr[1].edits.front().replacement == "GetX");

    auto mmr = scan(p, OperatorId::MMR);
    REQUIRE(mmr.size() == 1);
    CHECK(mmr[0].edits.front().original == "SetX");
    CHECK(mmr[0].edits.front().replacement == "SetY");
}

TEST_CASE("variable replacement respects scope and shadowing", "[scanner][VER]") {
    auto p = parse_and_resolve(read_fixture("ver_scope.dfy"));
    auto targets = scan(p, OperatorId::VER);
    for (const auto& t : targets) {
        CHECK(t.edits.front().original != t.edits.front().replacement);
    }

    // nat may replace an int use, not the other way around.
    auto compat = parse_and_resolve(
        "method M(n: nat, i: int) { var x := i + 1; var y := n + 1; }");
    std::set<std::string> repl_for_i, repl_for_n;
    for (const auto& t : scan(compat, OperatorId::VER)) {
        if (t.edits.front().original == "i") repl_for_i.insert(t.edits.front().replacement);
        if (t.edits.front().original == "n") repl_for_n.insert(t.edits.front().replacement);
    }
    CHECK(repl_for_i.count("n") == 1);
    CHECK(repl_for_n.count("i") == 0);
}

TEST_CASE("field replacement reproduces the profit mutant", "[scanner][FAR]") {
    std::string text = read_fixture("far_item.dfy");
    auto p = parse_and_resolve(text);
    auto targets = scan(p, OperatorId::FAR);
    REQUIRE(targets.size() == 2);  // price<->stock; the string field never matches
    std::set<std::string> mutants;
    for (const auto& t : targets) mutants.insert(apply_single(text, t));
    bool found = false;
    for (const auto& m : mutants)
        if (m.find("profit := item.price * item.price;") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("call replacement needs matching signatures", "[scanner][MCR]") {
    std::string text = read_fixture("mcr_sum.dfy");
    auto p = parse_and_resolve(text);
    auto targets = scan(p, OperatorId::MCR);
    REQUIRE(targets.size() == 1);
    std::string mutant = apply_single(text, targets[0]);
    CHECK(mutant.find("var n := Multiply(10, 20);") != std::string::npos);
}

TEST_CASE("datatype constructors rotate within equal shapes", "[scanner][DCR]") {
    std::string text = read_fixture("dcr_quantifier.dfy");
    auto p = parse_and_resolve(text);
    auto targets = scan(p, OperatorId::DCR);
    REQUIRE(targets.size() == 1);
    std::string mutant = apply_single(text, targets[0]);
    CHECK(mutant.find("var selection := All({1, 2, 3, 4});") != std::string::npos);
}

TEST_CASE("method to variable replacement", "[scanner][MVR]") {
    auto p = parse_and_resolve(read_fixture("mvr_calls.dfy"));
    auto targets = scan(p, OperatorId::MVR);
    REQUIRE(targets.size() == 2);
    CHECK(targets[0].edits.front().original == "Observe(seed)");
    CHECK(replacements(targets) == std::vector<std::string>{"seed", "other"});
}

TEST_CASE("tuple index moves to a same-typed slot", "[scanner][TAR]") {
    auto p = parse_and_resolve(read_fixture("tar_tuple.dfy"));
    auto targets = scan(p, OperatorId::TAR);
    REQUIRE(targets.size() == 1);
    CHECK(targets[0].edits.front().original == "0");
    CHECK(targets[0].edits.front().replacement == "1");
}

TEST_CASE("argument swapping", "[scanner][SAR]") {
    std::string text = read_fixture("mcr_sum.dfy");
    auto p = parse_and_resolve(text);
    auto targets = scan(p, OperatorId::SAR);
    REQUIRE(targets.size() == 1);
    std::string mutant = apply_all_edits(text, targets[0]);
    CHECK(mutant.find("var n := Sum(20, 10);") != std::string::npos);

    auto same = parse_and_resolve("method F(a: int, b: int) returns (r: int) { r := a; }\n"
                                  "method M(x: int) { var r := F(x, x); }");
    CHECK(scan(same, OperatorId::SAR).empty());  // identical arguments never swap
}

TEST_CASE("adjacent statements swap once per pair", "[scanner][SWS]") {
    std::string text = read_fixture("sws_swaps.dfy");
    auto p = parse_and_resolve(text);
    auto targets = scan(p, OperatorId::SWS);
    REQUIRE(targets.size() == 2);
    std::string mutant = apply_all_edits(text, targets[0]);
    CHECK(mutant.find("var y := x * 2;\n  var x := a + 1;") != std::string::npos);
    CHECK_NOTHROW(parse_program(mutant));
}

TEST_CASE("variable declarations swap initializers", "[scanner][SWV]") {
    std::string text = read_fixture("swv_circle.dfy");
    auto p = parse_and_resolve(text);
    auto targets = scan(p, OperatorId::SWV);
    REQUIRE(targets.size() == 1);
    std::string mutant = apply_all_edits(text, targets[0]);
    CHECK(mutant.find("var perimeter := radius * radius * 3.14;") != std::string::npos);
    CHECK(mutant.find("var area := 2.0 * radius * 3.14;") != std::string::npos);
}

TEST_CASE("conditional block extraction on expressions and statements", "[scanner][CBE]") {
    std::string text = read_fixture("cbe_triple.dfy");
    auto p = parse_and_resolve(text);
    auto targets = scan(p, OperatorId::CBE);
    REQUIRE(targets.size() == 2);
    std::string keep_then = apply_single(text, targets[0]);
    CHECK(keep_then.find("function Triple(a: int): seq<int>\n{\n  []\n}") != std::string::npos);
    std::string keep_else = apply_single(text, targets[1]);
    CHECK(keep_else.find("var b, c := a + a, a * a;") != std::string::npos);
    CHECK(keep_else.find("if") == std::string::npos);

    auto stmts = parse_and_resolve(read_fixture("sdl_bodies.dfy"));
    auto stmt_targets = scan(stmts, OperatorId::CBE);
    CHECK(stmt_targets.size() == 3);  // if-no-else once, if-else twice
}

TEST_CASE("ghost code yields no targets", "[scanner][ghost]") {
    auto p = parse_and_resolve(read_fixture("modules_opaque.dfy"));
    for (OperatorId op : all_operators()) {
        for (const auto& t : Scanner(p).scan(op)) {
            CHECK(t.enclosing_callable != "Spec");
            CHECK(t.enclosing_callable != "SpecGrows");
        }
    }
}

TEST_CASE("scanner counts match the brute-force oracle", "[scanner][oracle]") {
    for (const auto& file : corpus_files()) {
        std::ifstream in(file, std::ios::binary);
        std::stringstream buf;
        buf << in.rdbuf();
        auto p = parse_and_resolve(buf.str());
        Scanner scanner(p);
        for (OperatorId op : all_operators()) {
            INFO(file.filename().string() << " / " << name_of(op));
            CHECK(scanner.scan(op).size() == static_cast<std::size_t>(oracle::count(p, op)));
        }
    }
}

TEST_CASE("scanning is deterministic", "[scanner][property]") {
    std::string text = read_fixture("listing1.dfy");
    auto p1 = parse_and_resolve(text);
    auto p2 = parse_and_resolve(text);
    for (OperatorId op : all_operators()) {
        auto a = scan(p1, op);
        auto b = scan(p2, op);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].edits.front().span.start == b[i].edits.front().span.start);
            CHECK(a[i].edits.front().replacement == b[i].edits.front().replacement);
        }
    }
}

TEST_CASE("no target rewrites inside specification spans", "[scanner][property]") {
    for (const auto& file : corpus_files()) {
        std::ifstream in(file, std::ios::binary);
        std::stringstream buf;
        buf << in.rdbuf();
        auto p = parse_and_resolve(buf.str());
        Scanner scanner(p);
        for (OperatorId op : all_operators()) {
            for (const auto& t : scanner.scan(op)) {
                for (const auto& e : t.edits) {
                    for (const auto& spec : p.tree->spec_spans) {
                        INFO(file.filename().string() << " " << name_of(op) << " at "
                                                      << e.span.start);
                        // An edit may delete a whole region containing spec
                        // clauses but never cut into one.
                        CHECK((!e.span.overlaps(spec) || e.span.contains(spec)));
                    }
                }
            }
        }
    }
}

TEST_CASE("no identity mutants", "[scanner][property]") {
    for (const auto& file : corpus_files()) {
        std::ifstream in(file, std::ios::binary);
        std::stringstream buf;
        buf << in.rdbuf();
        std::string text = buf.str();
        auto p = parse_and_resolve(text);
        Scanner scanner(p);
        for (OperatorId op : all_operators()) {
            for (const auto& t : scanner.scan(op)) {
                std::string mutated = t.edits.size() == 1 ? apply_single(text, t)
                                                          : apply_all_edits(text, t);
                INFO(file.filename().string() << " " << name_of(op));
                CHECK(mutated != text);
            }
        }
    }
}

TEST_CASE("type preservation for replacement operators", "[scanner][property]") {
    auto smallest_expr_at = [](const ResolvedProgram& p, std::size_t offset) {
        const Expr* best = nullptr;
        walk_tree(*p.tree, nullptr, nullptr, [&](const Expr& e) {
            if (e.span.start <= offset && offset < e.span.end)
                if (!best || e.span.length() < best->span.length()) best = &e;
        });
        return best;
    };
    const OperatorId typed_ops[] = {OperatorId::VER, OperatorId::FAR, OperatorId::MCR,
                                    OperatorId::DCR, OperatorId::MVR, OperatorId::TAR,
                                    OperatorId::MAP, OperatorId::MNR};
    for (const char* fixture : {"far_item.dfy", "mcr_sum.dfy", "dcr_quantifier.dfy",
                                "mvr_calls.dfy", "tar_tuple.dfy", "mnr_counter.dfy"}) {
        std::string text = read_fixture(fixture);
        auto original = parse_and_resolve(text);
        for (OperatorId op : typed_ops) {
            for (const auto& t : scan(original, op)) {
                if (t.edits.size() != 1) continue;
                const Edit& e = t.edits.front();
                const Expr* before = smallest_expr_at(original, e.span.start);
                REQUIRE(before != nullptr);
                TypeRef expected = original.type_of(*before);
                if (op == OperatorId::FAR || op == OperatorId::MCR || op == OperatorId::TAR ||
                    op == OperatorId::DCR) {
                    // the edit covers a name token; the typed node encloses it
                    while (before && original.type_of(*before).is_unknown())
                        before = smallest_expr_at(original, before->span.end);
                }
                auto mutated = parse_and_resolve(splice(text, e.span, e.replacement));
                const Expr* after = smallest_expr_at(mutated, e.span.start);
                REQUIRE(after != nullptr);
                TypeRef got = mutated.type_of(*after);
                INFO(fixture << " " << name_of(op) << " '" << e.replacement << "'");
                bool same = got == original.type_of(*before);
                bool nat_for_int = original.type_of(*before).kind == TypeRef::Kind::Int &&
                                   got.kind == TypeRef::Kind::Nat;
                CHECK((same || nat_for_int));
            }
        }
    }
}
