#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string out_path = "cli_test_stdout.tmp";
    std::string cmd = std::string(BARCOORDS_CLI_PATH) + " " + args + " > " + out_path +
                      " 2> cli_test_stderr.tmp";
    int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream is(out_path);
    std::stringstream ss;
    ss << is.rdbuf();
    r.out = ss.str();
    return r;
}

void write_annulus_pgm(const std::string& path) {
    std::ofstream os(path);
    os << "P2 12 12 255\n";
    for (int r = 0; r < 12; ++r) {
        for (int c = 0; c < 12; ++c) {
            bool ring = r >= 2 && r <= 9 && c >= 2 && c <= 9 &&
                        (r == 2 || r == 9 || c == 2 || c == 9);
            os << (ring ? 255 : 0) << " ";
        }
        os << "\n";
    }
}

int count_lines(const std::string& s) {
    int n = 0;
    for (char c : s) n += c == '\n';
    return n;
}

int count_cols(const std::string& line) {
    int n = 1;
    for (char c : line) n += c == ',';
    return n;
}

std::string first_line(const std::string& s) {
    return s.substr(0, s.find('\n'));
}

}  // namespace

TEST_CASE("barcode: single sweep smoke") {
    write_annulus_pgm("cli_annulus.pgm");
    auto r = run_cli("barcode --sweep right cli_annulus.pgm");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("# sweep=right dim=0") != std::string::npos);
    CHECK(r.out.find("# sweep=right dim=1") != std::string::npos);
    // the ring has one essential component and one essential loop
    CHECK(r.out.find("inf") != std::string::npos);
    CHECK(r.out.find("sweep=left") == std::string::npos);
}

TEST_CASE("barcode: all sweeps emit 8 barcodes") {
    write_annulus_pgm("cli_annulus.pgm");
    auto r = run_cli("barcode --all-sweeps --json cli_annulus.pgm");
    REQUIRE(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    REQUIRE(j["barcodes"].size() == 8);
    int essential_loops = 0;
    for (auto& g : j["barcodes"]) {
        CHECK((g["dim"] == 0 || g["dim"] == 1));
        if (g["dim"] == 1)
            for (auto& b : g["bars"]) essential_loops += b[1] == "inf";
    }
    CHECK(essential_loops == 4);  // one loop per sweep
}

TEST_CASE("barcode: deterministic output") {
    write_annulus_pgm("cli_annulus.pgm");
    auto a = run_cli("barcode --all-sweeps cli_annulus.pgm");
    auto b = run_cli("barcode --all-sweeps cli_annulus.pgm");
    CHECK(a.out == b.out);
}

TEST_CASE("barcode: nonexistent file exits 2") {
    auto r = run_cli("barcode cli_no_such_file.pgm");
    CHECK(r.exit_code == 2);
}

TEST_CASE("features: digit CSV shape") {
    auto r = run_cli("features --synth-digits 10 --seed 3");
    REQUIRE(r.exit_code == 0);
    CHECK(count_lines(r.out) == 11);
    CHECK(count_cols(first_line(r.out)) == 34);
    CHECK(first_line(r.out).substr(0, 9) == "id,label,");
}

TEST_CASE("features: lesion CSV shape") {
    auto r = run_cli("features --synth-lesions 1 --seed 3");
    REQUIRE(r.exit_code == 0);
    CHECK(count_lines(r.out) == 4);  // header + 3 samples
    CHECK(count_cols(first_line(r.out)) == 226);
}

TEST_CASE("features: empty dataset gives a header-only CSV") {
    auto r = run_cli("features");
    CHECK(r.exit_code == 0);
    CHECK(count_lines(r.out) == 1);
}

TEST_CASE("features: missing idx file exits 2") {
    auto r = run_cli("features --idx-images cli_nope.gz --idx-labels cli_nope2.gz");
    CHECK(r.exit_code == 2);
}

TEST_CASE("classify: separable csv reaches accuracy 1.0") {
    {
        std::ofstream os("cli_sep.csv");
        os << "id,label,a,b\n";
        for (int i = 0; i < 40; ++i) {
            int cls = i % 2;
            os << i << "," << cls << "," << cls * 10.0 + 0.01 * i << ","
               << 0.02 * (i % 5) << "\n";
        }
    }
    {
        std::ofstream os("cli_sep.json");
        os << R"({"features_csv": "cli_sep.csv", "kernel": "gaussian", "gamma": 2.0,)"
           << R"( "c_grid": [100], "folds": 5, "seed": 1, "out": "cli_sep_report.json"})";
    }
    auto r = run_cli("classify cli_sep.json");
    REQUIRE(r.exit_code == 0);
    std::ifstream is("cli_sep_report.json");
    auto rep = nlohmann::json::parse(is);
    CHECK(rep["best"]["mean_accuracy"] == 1.0);
    CHECK(rep["results"].size() == 1);
}

TEST_CASE("classify: folds above sample count exits 2") {
    auto r = run_cli("classify cli_sep.json --folds 400");
    CHECK(r.exit_code == 2);
}

TEST_CASE("classify: bad kernel exits 2") {
    auto r = run_cli("classify cli_sep.json --kernel sigmoid");
    CHECK(r.exit_code == 2);
}

TEST_CASE("verify-algebra: passes and prints the coefficient table") {
    auto r = run_cli("verify-algebra --max-degree 8 --trials 50");
    CHECK(r.exit_code == 0);
    for (const char* line : {"degree 5: 24 vs 24", "degree 8: 160 vs 160",
                             "zero-bar invariance: ok", "free generation: ok (rank 6)"})
        CHECK(r.out.find(line) != std::string::npos);
}

TEST_CASE("verify-algebra: injected bug is caught") {
    auto r = run_cli("verify-algebra --max-degree 4 --trials 20 --inject-bug");
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("FAIL") != std::string::npos);
}
