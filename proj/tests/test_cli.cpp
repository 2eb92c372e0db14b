// End-to-end checks of the command line front end: verbs, exit codes, and
// byte-identical structured output across repeated runs.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

namespace {

int failures = 0;

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run(const std::string& cmd) {
    std::string full = cmd + " 2>&1";
    FILE* pipe = popen(full.c_str(), "r");
    if (!pipe) return {127, ""};
    std::string out;
    std::array<char, 4096> buf;
    while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
    int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

void expect(bool ok, const std::string& what) {
    if (!ok) {
        ++failures;
        std::cerr << "[FAIL] " << what << "\n";
    }
}

void expect_exit(const RunResult& r, int code, const std::string& what) {
    if (r.exit_code != code) {
        ++failures;
        std::cerr << "[FAIL] " << what << ": exit " << r.exit_code << " != " << code << "\n"
                  << r.output << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: test_cli <weilforge-binary> <data-dir>\n";
        return 2;
    }
    std::string bin = argv[1];
    std::string data = argv[2];
    std::string so3 = data + "/so3.alg";
    std::string so4 = data + "/so4.alg";

    expect_exit(run(bin + " validate " + so3), 0, "validate so3");
    expect(run(bin + " validate " + so3).output.find("so3") != std::string::npos,
           "validate prints the algebra summary");
    expect_exit(run(bin + " validate " + data + "/broken.alg"), 2, "validate broken spec");
    expect_exit(run(bin + " validate /nonexistent.alg"), 2, "validate missing file");

    expect_exit(run(bin + " gdiff-check " + so3 + " --space W --max-degree 2"), 0, "gdiff W");
    expect_exit(run(bin + " gdiff-check " + so3 + " --space NWK --max-degree 2"), 0, "gdiff NWK");
    expect_exit(run(bin + " gdiff-check " + so3 + " --space bogus"), 2, "gdiff bad space");

    {
        RunResult q = run(bin + " quantize " + so3 + " --expr th1*th2 --trunc 3");
        expect_exit(q, 0, "quantize");
        expect(q.output.find("xi1*xi2") != std::string::npos, "Q(th1 th2) = xi1 xi2");
    }
    {
        RunResult d = run(bin + " duflo " + so3 + " --expr e1^2+e2^2+e3^2");
        expect_exit(d, 0, "duflo");
        expect(d.output.find("1/4") != std::string::npos, "Duflo constant -1/4 appears");
    }
    expect_exit(run(bin + " duflo " + so3 + " --expr th1"), 2, "duflo rejects odd input");

    expect_exit(run(bin + " verify-main " + so3 + " --max-degree 3"), 0, "verify-main");
    expect_exit(run(bin + " verify-chainmap " + so3 + " --max-degree 2"), 0, "verify-chainmap");
    expect_exit(run(bin + " verify-invariants " + so3 +
                    " --expr v1^2+v2^2+v3^2 --powers 2,3"),
                0, "verify-invariants");
    expect_exit(run(bin + " verify-invariants " + so3 + " --expr v1 --powers 2"), 2,
                "verify-invariants rejects non-basic input");
    expect_exit(run(bin + " acyclicity " + so3 + " --max-degree 4 --space WK"), 0, "acyclicity");

    expect_exit(run(bin + " spin-factorize --dim 4 --seed 1 --tol 1e-8"), 0, "spin n=4");
    expect_exit(run(bin + " spin-factorize --dim 3 --seed 1"), 2, "spin odd dim without extend");
    expect_exit(run(bin + " spin-factorize --dim 3 --seed 1 --extend"), 0, "spin odd dim extend");
    expect_exit(run(bin + " spin-factorize --dim 2 --angle 0.7"), 0, "spin angle mode");

    {
        RunResult e = run(bin + " diagram eval " + data + "/w2.diag " + so3);
        expect_exit(e, 0, "diagram eval w2");
        expect(e.output.find("2*v1^2") != std::string::npos, "w2 weight system value");
    }
    expect_exit(run(bin + " diagram eval " + data + "/fork_eoo.diag " + so3), 0,
                "diagram eval labeled fork");

    expect_exit(run(bin + " wheeling " + so3 + " --max-degree 3"), 0, "wheeling");
    expect_exit(run(bin + " wheeling " + so3 + " --max-degree 3 --tilde"), 0, "wheeling tilde");
    expect_exit(run(bin + " supertrace " + so4 + " --kmax 4 --count 10"), 0, "supertrace");
    expect_exit(run(bin + " duflo-bridge " + so4 +
                    " --mu 1/5,-1/10,3/10,1/10,1/4,-1/5 --order 6 --tol 1e-6"),
                0, "duflo-bridge");
    expect_exit(run(bin + " duflo-bridge " + so4 + " --mu 1/5 --order 6"), 2,
                "duflo-bridge length mismatch");

    // determinism: identical argv produce byte-identical structured output
    {
        std::string cmd = bin + " --structured gdiff-check " + so3 + " --space W --max-degree 2";
        RunResult a = run(cmd);
        RunResult b = run(cmd);
        expect_exit(a, 0, "structured gdiff");
        expect(a.output == b.output, "structured output is deterministic");
        expect(a.output.find("\"status\":\"OK\"") != std::string::npos,
               "structured records carry a status field");
        std::string spin = bin + " --structured spin-factorize --dim 4 --seed 9";
        expect(run(spin).output == run(spin).output, "seeded spin output is deterministic");
    }

    expect_exit(run(bin), 2, "no subcommand is a usage error");

    if (failures == 0) {
        std::cout << "cli: all checks passed\n";
        return 0;
    }
    std::cerr << failures << " cli check(s) failed\n";
    return 1;
}
