#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "rwl1/bench.hpp"
#include "rwl1/instance_io.hpp"

#ifndef RWL1_CLI_PATH
#error "RWL1_CLI_PATH must name the rwl1 binary"
#endif

using namespace rwl1;
namespace fs = std::filesystem;

namespace {

struct Run {
    int status = -1;
    std::string output;
};

Run run_cli(const std::string& args) {
    const std::string cmd = std::string(RWL1_CLI_PATH) + " " + args + " 2>&1";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    while (std::size_t got = std::fread(buf, 1, sizeof(buf), pipe)) r.output.append(buf, got);
    const int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t count_lines(const std::string& s) {
    std::size_t n = 0;
    for (char c : s) n += c == '\n';
    return n;
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("rwl1_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

} // namespace

TEST_F(Cli, solve_generated_instance_succeeds) {
    const auto r = run_cli("solve --dist normal --k 3 --scheme w1 --seed 11");
    EXPECT_EQ(r.status, 0) << r.output;
    EXPECT_NE(r.output.find("success: true"), std::string::npos) << r.output;
    EXPECT_NE(r.output.find("nnz: 3"), std::string::npos) << r.output;
}

TEST_F(Cli, solve_rejects_out_of_range_p) {
    const auto r = run_cli("solve --scheme w1 --p 1.5");
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.output.find("(0,1)"), std::string::npos) << r.output;
}

TEST_F(Cli, solve_identity_instance_file) {
    ProblemInstance inst;
    inst.a = DenseMatrix::identity(2);
    inst.x_true = DenseVector{1.5, 0.0};
    inst.b = DenseVector{1.5, 0.0};
    inst.k = 1;
    save_instance(inst, path("id.json"));
    const auto r = run_cli("solve --instance " + path("id.json") + " --scheme cwb --print-x");
    EXPECT_EQ(r.status, 0) << r.output;
    EXPECT_NE(r.output.find("x: 1.5 0\n"), std::string::npos) << r.output;
    EXPECT_NE(r.output.find("residual_inf: 0.000e+00"), std::string::npos) << r.output;
}

TEST_F(Cli, solve_save_and_reload_agree) {
    ASSERT_EQ(run_cli("solve --m 20 --n 50 --k 4 --save-instance " + path("g.json")).status, 0);
    const auto inst = load_instance(path("g.json"));
    EXPECT_EQ(inst, make_instance(dist::Normal{}, 20, 50, 4, 42));
}

TEST_F(Cli, solve_malformed_instance_is_a_usage_error) {
    std::ofstream(path("bad.json")) << "{\"m\": 2,";
    EXPECT_EQ(run_cli("solve --instance " + path("bad.json")).status, 1);
}

TEST_F(Cli, bad_flags_exit_one) {
    EXPECT_EQ(run_cli("solve --bogus").status, 1);
    EXPECT_EQ(run_cli("").status, 1);
    EXPECT_EQ(run_cli("solve --dist normal --lambda 3").status, 1);
    EXPECT_EQ(run_cli("solve --dist cauchy").status, 1);
    EXPECT_EQ(run_cli("solve --clamp sometimes").status, 1);
    EXPECT_EQ(run_cli("solve --eps-rule fixed --eps0 0").status, 1);
    EXPECT_EQ(run_cli("sweep --k 0:3 --out " + path("x.csv")).status, 1);
}

TEST_F(Cli, minimal_sweep_has_one_row) {
    const auto r = run_cli("sweep --k 3 --schemes w2 --trials 1 --m 20 --n 50 --out " + path("one.csv"));
    ASSERT_EQ(r.status, 0) << r.output;
    const auto csv = slurp(path("one.csv"));
    EXPECT_EQ(count_lines(csv), 2u);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), kSweepCsvHeader);
    EXPECT_NE(csv.find("normal,w2,0.05,0.05,halving:1,3,1,"), std::string::npos) << csv;
}

TEST_F(Cli, sweep_is_reproducible_across_workers) {
    const std::string args = "sweep --k 2:4 --schemes l1,w1 --trials 3 --m 20 --n 50 --dist poisson";
    ASSERT_EQ(run_cli(args + " --workers 1 --out " + path("a.csv")).status, 0);
    ASSERT_EQ(run_cli(args + " --workers 4 --out " + path("b.csv")).status, 0);
    const auto a = slurp(path("a.csv"));
    EXPECT_EQ(a, slurp(path("b.csv")));
    EXPECT_EQ(count_lines(a), 7u);
}

TEST_F(Cli, sweep_unwritable_output) {
    EXPECT_EQ(run_cli("sweep --k 1 --trials 1 --out " + path("missing/dir/x.csv")).status, 1);
}

TEST_F(Cli, study_eps_rows_and_validation) {
    const auto r = run_cli("study-eps --eps 0.01 --k 3 --trials 2 --m 20 --n 50 --out " + path("e.csv"));
    ASSERT_EQ(r.status, 0) << r.output;
    const auto csv = slurp(path("e.csv"));
    EXPECT_EQ(count_lines(csv), 2u);
    EXPECT_NE(csv.find(",w1,0.05,,fixed:0.01,3,"), std::string::npos) << csv;
    EXPECT_EQ(run_cli("study-eps --eps 0,0.01 --out " + path("z.csv")).status, 1);
    EXPECT_FALSE(fs::exists(path("z.csv")));
}

TEST_F(Cli, study_grids) {
    auto r = run_cli("study-p --p-grid 0.1,0.5 --k 2,3 --trials 1 --m 20 --n 50 --out " + path("p.csv"));
    ASSERT_EQ(r.status, 0) << r.output;
    EXPECT_EQ(count_lines(slurp(path("p.csv"))), 5u);
    r = run_cli("study-pq --q-grid 0.04:0.08:0.3 --k 2 --trials 1 --m 20 --n 50 --out " + path("q.csv"));
    ASSERT_EQ(r.status, 0) << r.output;
    const auto csv = slurp(path("q.csv"));
    EXPECT_EQ(count_lines(csv), 5u);
    EXPECT_NE(csv.find(",w2,0.08,0.28,"), std::string::npos) << csv;
    EXPECT_EQ(run_cli("study-pq --q-grid 0.04:0.08:1 --out " + path("bad.csv")).status, 1);
}

TEST_F(Cli, plot_renders_and_is_deterministic) {
    ASSERT_EQ(run_cli("sweep --k 1:3 --trials 2 --m 20 --n 50 --out " + path("s.csv")).status, 0);
    ASSERT_EQ(run_cli("plot " + path("s.csv") + " --out " + path("a.svg")).status, 0);
    ASSERT_EQ(run_cli("plot " + path("s.csv") + " --out " + path("b.svg")).status, 0);
    const auto svg = slurp(path("a.svg"));
    EXPECT_EQ(svg, slurp(path("b.svg")));
    std::size_t lines = 0;
    for (auto pos = svg.find("<polyline class=\"series\""); pos != std::string::npos;
         pos = svg.find("<polyline class=\"series\"", pos + 1))
        ++lines;
    EXPECT_EQ(lines, 4u);
}

TEST_F(Cli, plot_rejects_bad_csv) {
    std::ofstream(path("h.csv")) << kSweepCsvHeader << '\n';
    EXPECT_EQ(run_cli("plot " + path("h.csv") + " --out " + path("h.svg")).status, 1);
    std::ofstream(path("m.csv")) << kSweepCsvHeader << "\nnormal,l1,,,halving:1,2,5,5,1,0,10,0\nnormal,l1,,,x\n";
    const auto r = run_cli("plot " + path("m.csv") + " --out " + path("m.svg"));
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.output.find("line 3"), std::string::npos) << r.output;
}
