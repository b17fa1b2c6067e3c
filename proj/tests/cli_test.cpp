#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(CONFSEQ_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, {}};
    std::string out;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        if (!line.empty()) out.push_back(line);
    return out;
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("confseq_cli_" + std::to_string(::getpid()) + "_" +
                                            ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write(const std::string& name, const std::string& content) {
        const auto p = dir_ / name;
        std::ofstream(p) << content;
        return p.string();
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    static std::string slurp(const std::string& p) {
        std::ifstream in(p);
        return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, RadiusEmitsOneBall) {
    const auto data = write("x.csv", "x1,x2\n0.1,0.2\n-0.3,0.4\n0.5,-0.5\n");
    const auto r = run("radius --data " + data + " --b 1");
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["t"], 3);
    EXPECT_EQ(j["method"], "EmpiricalBernstein");
    EXPECT_EQ(j["center"].size(), 2u);
    EXPECT_GT(j["radius"].get<double>(), 0.0);
}

TEST_F(Cli, StreamEmitsOneLinePerObservation) {
    const auto data = write("x.csv", "0.1\n-0.2\n0.25\n0.0\n");
    const auto r = run("stream --data " + data + " --b 0.25");
    ASSERT_EQ(r.code, 0);
    const auto lines = lines_of(r.out);
    ASSERT_EQ(lines.size(), 4u);
    for (std::size_t i = 0; i < lines.size(); ++i) EXPECT_EQ(nlohmann::json::parse(lines[i])["t"], i + 1);

    const auto lil = run("stream --data " + data + " --b 0.25 --lil");
    ASSERT_EQ(lil.code, 0);
    EXPECT_EQ(nlohmann::json::parse(lines_of(lil.out).back())["method"], "FiniteLIL");
    EXPECT_EQ(run("stream --data " + data + " --b 1 --lil").code, 2);
}

TEST_F(Cli, ConfigErrorsExitTwo) {
    const auto data = write("x.csv", "0.1\n");
    EXPECT_EQ(run("radius --data " + data).code, 2);  // no bound
    const auto bad = write("bad.json", R"({"bound": {"b": 1, "c1": 0.9}})");
    EXPECT_EQ(run("radius --data " + data + " --config " + bad).code, 2);
    const auto unknown = write("unknown.json", R"({"bound": {"b": 1, "colour": 3}})");
    EXPECT_EQ(run("radius --data " + data + " --config " + unknown).code, 2);
    EXPECT_EQ(run("radius --data " + data + " --b 1 --alpha 0").code, 2);
    EXPECT_EQ(run("radius --data " + data + " --config " + path("missing.json")).code, 2);
}

TEST_F(Cli, DataErrorsExitThree) {
    EXPECT_EQ(run("radius --b 1 --data " + write("a.csv", "0.1,0.2\n0.3\n")).code, 3);
    EXPECT_EQ(run("radius --b 1 --data " + write("b.csv", "0.1,zz\n")).code, 3);
    EXPECT_EQ(run("radius --b 1 --data " + write("c.csv", "")).code, 3);
    EXPECT_EQ(run("radius --b 1 --data " + write("d.csv", "2.0\n")).code, 3);  // outside the bound
    EXPECT_EQ(run("radius --b 1 --data " + path("nope.csv")).code, 3);
    const auto dim3 = write("dim3.json", R"({"space": {"dim": 3}, "bound": {"b": 1}})");
    EXPECT_EQ(run("radius --config " + dim3 + " --data " + write("e.csv", "0.1,0.2\n")).code, 3);
}

TEST_F(Cli, SimulateWritesCsvAndMetadata) {
    const auto cfg = write("exp.json", R"({"experiment": {"dist": {"kind": "uniform_cube", "dim": 5},
                                                          "n_grid": [10, 50], "reps": 3}})");
    const auto out1 = path("a.csv"), out2 = path("b.csv");
    ASSERT_EQ(run("simulate --config " + cfg + " --seed 5 --out " + out1).code, 0);
    ASSERT_EQ(run("simulate --config " + cfg + " --seed 5 --out " + out2).code, 0);
    const auto csv = slurp(out1);
    EXPECT_EQ(csv, slurp(out2));
    const auto lines = lines_of(csv);
    ASSERT_EQ(lines.size(), 7u);
    EXPECT_EQ(lines[0], "n,method,mean_radius,sd_radius");

    const auto meta = nlohmann::json::parse(slurp(out1 + ".meta.json"));
    EXPECT_EQ(meta["seed"], 5);
    EXPECT_EQ(meta["seed_source"], "given");
    EXPECT_EQ(meta["c1"], 0.5);

    const auto out3 = path("c.csv");
    ASSERT_EQ(run("simulate --config " + cfg + " --out " + out3).code, 0);
    EXPECT_EQ(nlohmann::json::parse(slurp(out3 + ".meta.json"))["seed_source"], "entropy");

    const auto width = path("w.csv");
    ASSERT_EQ(run("simulate --width --config " + cfg + " --seed 1 --out " + width).code, 0);
    EXPECT_EQ(lines_of(slurp(width))[0], "n,sqrt_n_times_radius,limit");

    EXPECT_EQ(run("simulate --seed 1").code, 2);  // no experiment section
}

TEST_F(Cli, EchoRoundTripsBitIdentically) {
    const auto data = write("x.csv", "0.1,0.30000000000000004\n1e-300,-2.5e+200\n");
    const auto once = path("once.csv"), twice = path("twice.csv");
    ASSERT_EQ(run("echo --data " + data + " --out " + once).code, 0);
    ASSERT_EQ(run("echo --data " + once + " --out " + twice).code, 0);
    EXPECT_EQ(slurp(once), slurp(twice));
    EXPECT_EQ(lines_of(slurp(once))[1], "0.10000000000000001,0.30000000000000004");
}

TEST_F(Cli, VerifyGridSuiteEmitsJsonLines) {
    const auto r = run("verify --suite grid --quick --seed 3");
    ASSERT_EQ(r.code, 0);
    const auto lines = lines_of(r.out);
    ASSERT_EQ(lines.size(), 6u);
    EXPECT_EQ(nlohmann::json::parse(lines[0])["kind"], "meta");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto j = nlohmann::json::parse(lines[i]);
        EXPECT_EQ(j["kind"], "grid");
        EXPECT_TRUE(j["passed"].get<bool>()) << lines[i];
    }
    EXPECT_NE(run("verify --suite nonsense").code, 0);
}
