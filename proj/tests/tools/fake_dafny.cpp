// Stand-in verifier for tests. It reads the given .dfy file, finds a
// "// fake-verdict: <word>" marker, and prints output shaped like the real
// verifier's so the classifier can be exercised without a Dafny install.
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

int main(int argc, char** argv) {
    std::string file;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg.size() > 4 && arg.substr(arg.size() - 4) == ".dfy") file = arg;
    }
    if (file.empty()) {
        std::cerr << "fake-dafny: no input file\n";
        return 2;
    }
    std::ifstream in(file);
    if (!in) {
        std::cerr << "fake-dafny: cannot open " << file << "\n";
        return 2;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();

    auto directive = [&](const std::string& word) {
        return text.find("// fake-verdict: " + word) != std::string::npos;
    };

    if (directive("hang")) {
        std::this_thread::sleep_for(std::chrono::seconds(30));
        return 0;
    }
    if (directive("parse-error")) {
        std::cout << file << "(1,1): Error: this symbol not expected\n";
        std::cout << "1 parse errors detected in " << file << "\n";
        return 1;
    }
    if (directive("resolve-error")) {
        std::cout << file << "(2,3): Error: unresolved identifier\n";
        std::cout << "2 resolution/type errors detected in " << file << "\n";
        return 1;
    }
    if (directive("errors")) {
        std::cout << file << "(5,10): Error: a postcondition could not be proved\n";
        std::cout << "\nDafny program verifier finished with 2 verified, 1 errors\n";
        return 1;
    }
    if (directive("nothing")) {
        std::cout << "\nDafny program verifier finished with 0 verified, 0 errors\n";
        return 0;
    }
    if (directive("garbage")) {
        std::cout << "unexpected crash\n";
        return 3;
    }
    std::cout << "\nDafny program verifier finished with 3 verified, 0 errors\n";
    return 0;
}
