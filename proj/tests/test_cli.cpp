#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

const std::string& binary() {
    static const std::string bin = [] {
        const char* env = std::getenv("HALFINT_BIN");
        REQUIRE_MESSAGE(env != nullptr, "HALFINT_BIN must point at the CLI binary");
        return std::string(env);
    }();
    return bin;
}

const fs::path& scratch() {
    static const fs::path dir = [] {
        fs::path d = fs::current_path() / "cli_scratch";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "missing file: " << p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run(const std::string& args) {
    static int counter = 0;
    const fs::path out = scratch() / ("stdout_" + std::to_string(counter) + ".txt");
    const fs::path err = scratch() / ("stderr_" + std::to_string(counter) + ".txt");
    ++counter;
    const std::string cmd = "\"" + binary() + "\" " + args + " > \"" + out.string() +
                            "\" 2> \"" + err.string() + "\"";
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

} // namespace

TEST_CASE("help and usage errors") {
    CHECK(run("--help").exit_code == 0);
    CHECK(run("").exit_code == 2);              // a subcommand is required
    CHECK(run("nonsense").exit_code == 2);
    CHECK(run("stats").exit_code == 2);         // a stats variant is required
    CHECK(run("space").exit_code == 2);         // --k is required
    CHECK(run("space --k 1").exit_code == 2);   // below the weight floor
    CHECK(run("simulate --n 0").exit_code == 2);
    CHECK(run("simulate --n 1").exit_code == 2);
    CHECK(run("series --name nosuch --prec 5").exit_code == 2);
}

TEST_CASE("space reports dimension, head coefficients, eigenvalues") {
    RunResult r = run("space --k 6");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("plus-cusp dimension: 1") != std::string::npos);
    CHECK(r.out.find("(13,0) (9,1) (5,2) (1,3)") != std::string::npos);
    CHECK(r.out.find("252") != std::string::npos);
    CHECK(r.out.find("4830") != std::string::npos);

    RunResult zero = run("space --k 3");
    CHECK(zero.exit_code == 0);
    CHECK(zero.out.find("plus-cusp dimension: 0") != std::string::npos);

    // two-dimensional space that does not split rationally: reported, not fatal
    RunResult split = run("space --k 12 --prec 260");
    CHECK(split.exit_code == 0);
    CHECK(split.out.find("plus-cusp dimension: 2") != std::string::npos);
    CHECK(split.out.find("eigenvalue table unavailable") != std::string::npos);
}

TEST_CASE("verify ledger passes clean and fails corrupted") {
    RunResult ok = run("verify --k 6 --lift-n 30");
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("FAIL") == std::string::npos);
    CHECK(ok.out.find("PASS plus-space coefficient support") != std::string::npos);
    CHECK(ok.out.find("PASS lift matches the weight-12 level-1 eigenform") !=
          std::string::npos);
    CHECK(ok.out.find("PASS lift/Hecke commutation p=7") != std::string::npos);
    CHECK(ok.out.find("all checks passed") != std::string::npos);

    RunResult bad = run("verify --k 6 --lift-n 30 --corrupt 9");
    CHECK(bad.exit_code == 1);
    CHECK(bad.out.find("FAIL") != std::string::npos);

    RunResult ok8 = run("verify --k 8 --lift-n 20");
    CHECK(ok8.exit_code == 0);
    CHECK(ok8.out.find("FAIL") == std::string::npos);
}

TEST_CASE("lift prints the eigenform coefficient table") {
    RunResult r = run("lift --k 6 --n 12");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("1\t1\n") != std::string::npos);
    CHECK(r.out.find("2\t-24\n") != std::string::npos);
    CHECK(r.out.find("11\t534612\n") != std::string::npos);

    // a different admissible normalization index lands in the same family
    RunResult r5 = run("lift --k 6 --n 10 --t 5");
    CHECK(r5.exit_code == 0);
    CHECK(r5.out.find("2\t-24\n") != std::string::npos);
    CHECK(r5.out.find("10\t-115920\n") != std::string::npos);

    CHECK(run("lift --k 6 --n 10 --t 2").exit_code == 2);   // excluded residue class
    CHECK(run("lift --k 6 --n 10 --t 4").exit_code == 2);   // not square-free
    CHECK(run("lift --k 6 --n 10 --t 9").exit_code == 2);
}

TEST_CASE("series dumps exact expansions") {
    RunResult r = run("series --name delta --prec 14");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("1\t1\n") != std::string::npos);
    CHECK(r.out.find("13\t-577738\n") != std::string::npos);
    RunResult th = run("series --name theta --prec 10");
    CHECK(th.out.find("0\t1\n") != std::string::npos);
    CHECK(th.out.find("4\t2\n") != std::string::npos);
    RunResult e16 = run("series --name eigen16 --prec 4");
    CHECK(e16.out.find("3\t-3348\n") != std::string::npos);
}

TEST_CASE("stats commands write deterministic reports") {
    const fs::path d1 = scratch() / "run1";
    const fs::path d2 = scratch() / "run2";

    RunResult a = run("stats prop1 --x 500 --out-dir \"" + d1.string() + "\"");
    CHECK(a.exit_code == 0);
    CHECK(a.out.find("wrote") != std::string::npos);
    CHECK(fs::exists(d1 / "prop1_k6_x500.csv"));
    CHECK(fs::exists(d1 / "prop1_k6_x500.json"));

    RunResult b = run("stats prop1 --x 500 --workers 3 --out-dir \"" + d2.string() + "\"");
    CHECK(b.exit_code == 0);
    CHECK(slurp(d1 / "prop1_k6_x500.csv") == slurp(d2 / "prop1_k6_x500.csv"));
    CHECK(slurp(d1 / "prop1_k6_x500.json") == slurp(d2 / "prop1_k6_x500.json"));

    RunResult t4 = run("stats thm4 --x 500 --out-dir \"" + d1.string() + "\"");
    CHECK(t4.exit_code == 0);
    CHECK(fs::exists(d1 / "thm4_k6_k8_x500.csv"));

    RunResult t5 = run("stats thm5 --x 500 --i1 0,1 --i2 -1,0 --out-dir \"" +
                       d1.string() + "\"");
    CHECK(t5.exit_code == 0);
    CHECK(fs::exists(d1 / "thm5_k6_k8_x500_i1_0_1_i2_-1_0.csv"));
    CHECK(run("stats thm5 --x 500 --i1 0,2").exit_code == 2);   // outside [-1,1]
    CHECK(run("stats thm5 --x 500 --i1 1,0").exit_code == 2);   // reversed
    CHECK(run("stats thm5 --x 500 --i1 abc,1").exit_code == 2);

    RunResult jt = run("stats joint --x 500 --out-dir \"" + d1.string() + "\"");
    CHECK(jt.exit_code == 0);
    CHECK(fs::exists(d1 / "joint_k6_k8_x500_b5.csv"));
    CHECK(fs::exists(d1 / "joint_k6_k8_x500_b5.gnuplot"));
    CHECK(fs::exists(d1 / "marginal_k6_x500_b10.csv"));
    CHECK(fs::exists(d1 / "marginal_k8_x500_b10.gnuplot"));

    RunResult dg = run("stats disagree --x 500 --out-dir \"" + d1.string() + "\"");
    CHECK(dg.exit_code == 0);
    CHECK(fs::exists(d1 / "disagree_k6_k8_x500.csv"));
    CHECK(fs::exists(d1 / "disagree_k6_k8_x500_primes.txt"));
    CHECK(dg.out.find("threshold") != std::string::npos);
}

TEST_CASE("simulate writes deterministic reports across worker counts") {
    const fs::path d1 = scratch() / "sim1";
    const fs::path d2 = scratch() / "sim2";
    RunResult a = run("simulate --n 20000 --seed 9 --shift-mode per_prime --out-dir \"" +
                      d1.string() + "\"");
    CHECK(a.exit_code == 0);
    const fs::path name = "simulate_n20000_seed9_per_prime.csv";
    CHECK(fs::exists(d1 / name));
    RunResult b = run("simulate --n 20000 --seed 9 --shift-mode per_prime --workers 4 "
                      "--out-dir \"" + d2.string() + "\"");
    CHECK(b.exit_code == 0);
    CHECK(slurp(d1 / name) == slurp(d2 / name));
    CHECK(slurp(d1 / "simulate_n20000_seed9_per_prime.json") ==
          slurp(d2 / "simulate_n20000_seed9_per_prime.json"));

    // none mode leaves out the shift-window series
    RunResult c = run("simulate --n 20000 --seed 9 --shift-mode none --format csv "
                      "--out-dir \"" + d1.string() + "\"");
    CHECK(c.exit_code == 0);
    CHECK(fs::exists(d1 / "simulate_n20000_seed9_none.csv"));
    CHECK_FALSE(fs::exists(d1 / "simulate_n20000_seed9_none.json"));
    CHECK(slurp(d1 / "simulate_n20000_seed9_none.csv").find("near-zero-window") ==
          std::string::npos);
}

TEST_CASE("output directory falls back to the environment variable") {
    const fs::path d = scratch() / "envdir";
    const std::string cmd = "HALFINT_OUTPUT_DIR=\"" + d.string() + "\" \"" + binary() +
                            "\" simulate --n 2000 --seed 3 --shift-mode none > /dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    CHECK(WIFEXITED(raw));
    CHECK(WEXITSTATUS(raw) == 0);
    CHECK(fs::exists(d / "simulate_n2000_seed3_none.csv"));
}
