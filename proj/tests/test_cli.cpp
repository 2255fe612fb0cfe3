#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "support.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
    int code = -1;
    std::string out;
};

Result sh(const std::string& args) {
    std::string cmd = std::string(LTAB_CLI) + " " + args + " 2>/dev/null";
    Result r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("ltab_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string file(const std::string& name, const std::string& text) {
        fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p.string();
    }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, RunLazy) {
    auto f = file("lr.pl", ltab::fixtures::kLeftRecursion);
    Result r = sh("run " + f + " --query 'p(a,Y)' --strategy lazy");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "p(a,b)\np(a,c)\n");
}

TEST_F(Cli, RunEagerShowsDuplicates) {
    auto f = file("pairs.pl", ltab::fixtures::kPairs);
    Result r = sh("run " + f + " --strategy eager --query 'p(X),p(Y)'");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 7);
    Result d = sh("run " + f + " --strategy eager --dedup --query 'p(X),p(Y)'");
    EXPECT_EQ(std::count(d.out.begin(), d.out.end(), '\n'), 4);
}

TEST_F(Cli, ExitCodes) {
    auto f = file("lr.pl", ltab::fixtures::kLeftRecursion);
    EXPECT_EQ(sh("run " + f + " --query 'p(a,Y)' --semi-naive off --early-promotion on").code, 2);
    EXPECT_EQ(sh("run " + f + " --query 'p(a,Y)' --semi-naive off").code, 0);
    EXPECT_EQ(sh("run " + f + " --query 'p(z,Y)'").code, 1);
    EXPECT_EQ(sh("run " + f + " --query 'p(z,Y)' --empty-ok").code, 0);
    EXPECT_EQ(sh("run " + f + " --query 'p(a,'").code, 2);
    EXPECT_EQ(sh("run " + file("bad.pl", "p(a) :- .\n") + " --query 'p(X)'").code, 2);
    EXPECT_EQ(sh("run " + (dir_ / "missing.pl").string() + " --query 'p(X)'").code, 2);
    auto loop = file("loop.pl", "loop(X) :- loop(X).\n");
    EXPECT_EQ(sh("run " + loop + " --query 'loop(1)' --step-budget 500").code, 3);
    EXPECT_EQ(sh("frobnicate").code, 2);
}

TEST_F(Cli, StatsAndTable) {
    auto f = file("lr.pl", ltab::fixtures::kLeftRecursion);
    Result r = sh("run " + f + " --query 'p(a,Y)' --stats --dump-table");
    EXPECT_NE(r.out.find("--- stats\nsubgoal_count=1\nmax_its=3\nave_its=3.00\n"), std::string::npos);
    EXPECT_NE(r.out.find("round_counter[p(a,_G0)]=3\n"), std::string::npos);
    EXPECT_NE(r.out.find("p(a,_G0)  state=complete answers=[p(a,b),p(a,c)]"), std::string::npos);
    Result j = sh("run " + f + " --query 'p(a,Y)' --stats --stats-format json");
    EXPECT_NE(j.out.find("\"max_its\": 3"), std::string::npos);
}

TEST_F(Cli, OracleFlag) {
    auto f = file("late.pl", ltab::fixtures::kLateAnswer);
    Result r = sh("run " + f + " --query 'p(X,Y)' --oracle");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "p(a,b)\np(b,c)\np(b,d)\n");
    auto w = file("w.pl", "p(X,X).\n");
    EXPECT_EQ(sh("run " + w + " --query 'p(a,Y)' --oracle").code, 2);
}

TEST_F(Cli, Analyze) {
    auto f = file("lr.pl", ltab::fixtures::kLeftRecursion);
    Result r = sh("analyze " + f);
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.substr(0, 24), "p/2 level=1\ne/2 level=0\n");
}

TEST_F(Cli, Gen) {
    EXPECT_EQ(sh("gen ab-string --n 4").out, "c(0,a,1).\nc(1,b,2).\nc(2,a,3).\nc(3,b,4).\n");
    EXPECT_EQ(sh("gen chain --n 3").out, "e(1,2).\ne(2,3).\n");
    Result a = sh("gen random-graph --n 10 --m 25 --seed 9");
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, sh("gen random-graph --n 10 --m 25 --seed 9").out);
    EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 25);
    EXPECT_EQ(sh("gen random-graph --n 3 --m 50").code, 2);
    EXPECT_EQ(sh("gen cycle --n 3 --relation edge").out, "edge(1,2).\nedge(2,3).\nedge(3,1).\n");
}

TEST_F(Cli, Bench) {
    std::string out = (dir_ / "report.json").string();
    Result r = sh("bench --suite tcl --sizes 20,30 --out " + out);
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("status=ok"), std::string::npos);
    EXPECT_NE(r.out.find("ratio tcl lazy/semi=on/ep=on 20->30"), std::string::npos);
    EXPECT_TRUE(fs::exists(out));
    EXPECT_EQ(sh("bench --suite worked-examples --format json").code, 0);
    EXPECT_EQ(sh("bench --suite nope").code, 2);
}
