#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

using std::string;

namespace {

struct RunResult {
    int exit_code = -1;
    string out;
};

RunResult run_cli(const string& args) {
    const char* bin = std::getenv("BSDELAB_CLI");
    REQUIRE_MESSAGE(bin != nullptr, "BSDELAB_CLI must point at the binary");
    string cmd = string(bin) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    RunResult r;
    char buf[4096];
    while (fgets(buf, sizeof buf, p)) r.out += buf;
    int status = pclose(p);
    r.exit_code = WEXITSTATUS(status);
    return r;
}

void write_file(const string& path, const string& body) {
    std::ofstream os(path);
    REQUIRE(os.good());
    os << body;
}

}  // namespace

TEST_CASE("cli: constants subcommand") {
    RunResult pass = run_cli("constants --beta 300 --phi 0");
    CHECK(pass.exit_code == 0);
    CHECK(pass.out.find("m_star") != string::npos);
    CHECK(pass.out.find("true") != string::npos);

    RunResult fail = run_cli("constants --beta 30 --phi 0");
    CHECK(fail.exit_code == 2);

    RunResult pi = run_cli("constants --pi-star 1 2 0");
    CHECK(pi.exit_code == 0);
    CHECK(pi.out.find("30.5") != string::npos);

    RunResult pit = run_cli("constants --pi-tilde 2 0");
    CHECK(pit.out.find("26") != string::npos);
}

TEST_CASE("cli: usage and io errors exit 1") {
    CHECK(run_cli("no-such-subcommand").exit_code == 1);
    CHECK(run_cli("mo-check --table /nonexistent/table.csv").exit_code == 1);
    CHECK(run_cli("solve --data /nonexistent/data.json").exit_code == 1);
}

TEST_CASE("cli: metrics on files") {
    write_file("/tmp/bsdelab_a.txt", "1 2 1\n0 0\n1 1\n");
    write_file("/tmp/bsdelab_b.txt", "1 2 1\n0 0\n1.1 1\n");
    RunResult j1 = run_cli("metrics --j1 /tmp/bsdelab_a.txt /tmp/bsdelab_b.txt --window 2");
    CHECK(j1.exit_code == 0);
    CHECK(j1.out.find("j1=0.1") != string::npos);
    RunResult sup = run_cli("metrics --sup /tmp/bsdelab_a.txt /tmp/bsdelab_b.txt --window 2");
    CHECK(sup.out.find("sup=1") != string::npos);
    write_file("/tmp/bsdelab_m.txt", "atoms: (0.5,1)\nplinear:\n");
    write_file("/tmp/bsdelab_n.txt", "atoms: (0.5,0.7)\nplinear:\n");
    RunResult ks = run_cli("metrics --ks /tmp/bsdelab_m.txt /tmp/bsdelab_n.txt");
    CHECK(ks.out.find("ks=0.3") != string::npos);
}

TEST_CASE("cli: mo-check verdicts drive the exit code") {
    string good = "p1,p2,p3,p4\nk=1,1.5,1.25,1.1,1.05\nk=2,0.75,0.55,0.52,0.51\n"
                  "k=3,0.58,0.4,0.35,0.34\nk=4,0.54,0.36,0.345,0.335\n";
    // a separable-style table converging to ~1/3 downwards
    write_file("/tmp/bsdelab_good.csv",
               "p1,p2,p3,p4,p5\n"
               "k=1,2,1.5,1.33,1.25,1.2\n"
               "k=2,1.5,1,0.83,0.75,0.7\n"
               "k=3,1.33,0.83,0.66,0.58,0.53\n"
               "k=4,1.25,0.75,0.58,0.5,0.45\n"
               "k=5,1.2,0.7,0.53,0.45,0.4\n");
    (void)good;
    RunResult r = run_cli("mo-check --table /tmp/bsdelab_good.csv --variant A --tol 0.45");
    CHECK(r.out.find("variant=A") != string::npos);

    write_file("/tmp/bsdelab_bad.csv",
               "p1,p2,p3\nk=1,0.5,0.33,0.25\nk=2,0.66,0.5,0.4\nk=3,0.75,0.6,0.5\n");
    RunResult bad = run_cli("mo-check --table /tmp/bsdelab_bad.csv --variant A --tol 0.01");
    CHECK(bad.exit_code == 2);
    CHECK(bad.out.find("FAIL") != string::npos);
}

TEST_CASE("cli: experiment end to end") {
    write_file("/tmp/bsdelab_cfg.txt",
               "problem=martingale-square\nk_list=2,4,8\np_max=4\nT=1\nlambda=0\n"
               "beta_hat=300\nn_paths=100\nseed=3\ntol=1e-8\nconvention=Y_left\n");
    RunResult r = run_cli("experiment --config /tmp/bsdelab_cfg.txt --out /tmp/bsdelab_rep");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("PASS") != string::npos);
    std::ifstream csv("/tmp/bsdelab_rep.csv");
    CHECK(csv.good());

    write_file("/tmp/bsdelab_badcfg.txt", "problem=zero\nbogus_key=1\n");
    CHECK(run_cli("experiment --config /tmp/bsdelab_badcfg.txt").exit_code == 1);
}
