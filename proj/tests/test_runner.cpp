#include "mixedfrac/errors.hpp"
#include "mixedfrac/fields.hpp"
#include "mixedfrac/runner.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace mixedfrac;
namespace fs = std::filesystem;

namespace {

class RunnerTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("mixedfrac-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    RunConfig config(std::string_view text) const {
        RunConfig c = RunConfig::parse(text);
        c.output = dir_ / "out";
        return c;
    }

    static std::string read(const fs::path& p) {
        std::ifstream in(p);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    fs::path dir_;
};

}  // namespace

TEST(RunConfig, ParsesKeysCommentsAndFractions) {
    const RunConfig c = RunConfig::parse("# comment\n domain = disk(0,0,1)\nh = 1/32  # spacing\nverify.s = 0.3, 0.5\nseed=9\n");
    EXPECT_EQ(c.domain, "disk(0,0,1)");
    EXPECT_DOUBLE_EQ(c.h, 1.0 / 32.0);
    EXPECT_EQ(c.verify_s, (std::vector<double>{0.3, 0.5}));
    EXPECT_EQ(c.seed, 9u);
    EXPECT_EQ(c.make_domain().dimension(), 2);
}

TEST(RunConfig, RejectsBadInput) {
    EXPECT_THROW(RunConfig::parse("bogus = 1"), ConfigError);
    EXPECT_THROW(RunConfig::parse("h = abc"), ConfigError);
    EXPECT_THROW(RunConfig::parse("just text"), ConfigError);
    EXPECT_THROW(RunConfig::parse("seed = -1"), ConfigError);
    EXPECT_THROW(RunConfig::parse("s = 1.2").validate(), ConfigError);
    EXPECT_THROW(RunConfig::parse("a = nosuchpreset").validate(), ConfigError);
    EXPECT_THROW(RunConfig::parse("tol.fixed_point = 0").validate(), ConfigError);
    EXPECT_THROW(RunConfig::parse("domain = square(1)").validate(), ConfigError);
    EXPECT_THROW(RunConfig::load("/nonexistent/run.cfg"), ConfigError);
    EXPECT_NO_THROW(RunConfig{}.validate());
}

TEST(RunConfig, HashTracksSettings) {
    const RunConfig a = RunConfig::parse("s = 0.5");
    const RunConfig b = RunConfig::parse("s=0.5\n");
    const RunConfig c = RunConfig::parse("s = 0.6");
    EXPECT_EQ(a.hash(), b.hash());
    EXPECT_NE(a.hash(), c.hash());
    EXPECT_EQ(RunConfig::parse(a.canonical()).canonical(), a.canonical());
}

TEST(Presets, TabulatedSamples) {
    const fs::path p = fs::temp_directory_path() / "mixedfrac-table.csv";
    {
        std::ofstream out(p);
        out << "x,value\n0,1\n0.5,3\n1,2\n";
    }
    const Domain d = Domain::interval(0.0, 1.0);
    const ScalarField f = scalar_preset("file:" + p.string(), d);
    EXPECT_DOUBLE_EQ(f(point1d(0.25)), 2.0);
    EXPECT_DOUBLE_EQ(f(point1d(0.75)), 2.5);
    EXPECT_DOUBLE_EQ(f(point1d(-1.0)), 1.0);
    fs::remove(p);
    EXPECT_THROW(scalar_preset("file:/nonexistent/table.csv", d), ConfigError);
}

TEST_F(RunnerTest, SolveConstantData) {
    std::ostringstream log;
    std::ostringstream err;
    const RunConfig c = config("h = 1/100\nq = sin\na = 1\nf = 1\ns = 0.3\n");
    ASSERT_EQ(run_command("solve", c, log, err), ExitStatus::Ok) << err.str();
    const std::string summary = read(c.output / "solve_summary.txt");
    EXPECT_NE(summary.find("max_principle_violations:   0"), std::string::npos);
    std::istringstream in(summary);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("u_minus_one_sup:", 0) == 0) {
            EXPECT_LE(std::stod(line.substr(line.find(':') + 1)), 1e-10);
        }
    }
    EXPECT_TRUE(fs::exists(c.output / "solve_trace.csv"));
}

TEST_F(RunnerTest, SolveZeroSource) {
    std::ostringstream log;
    std::ostringstream err;
    const RunConfig c = config("h = 1/100\nq = sin\na = 2\nf = 0\nmethod = direct\n");
    ASSERT_EQ(run_command("solve", c, log, err), ExitStatus::Ok) << err.str();
    const std::string summary = read(c.output / "solve_summary.txt");
    const auto pos = summary.find("u_sup:");
    ASSERT_NE(pos, std::string::npos);
    EXPECT_LE(std::stod(summary.substr(pos + 6)), 1e-10);
}

TEST_F(RunnerTest, HeadersAndDeterminism) {
    std::ostringstream log;
    std::ostringstream err;
    const RunConfig c = config("h = 1/50\nseed = 5\nmaxprinciple.trials = 6\nmaxprinciple.s = 0.3,0.7\n");
    ASSERT_EQ(run_command("maxprinciple", c, log, err), ExitStatus::Ok) << err.str();
    const std::string first = read(c.output / "maxprinciple.csv");
    ASSERT_EQ(run_command("maxprinciple", c, log, err), ExitStatus::Ok);
    EXPECT_EQ(first, read(c.output / "maxprinciple.csv"));
    for (const char* key : {"# config_hash=", "# seed=5", "# s=0.3;0.7", "# h=", "# r_trunc=8", "# tolerances:"}) {
        EXPECT_NE(first.find(key), std::string::npos) << key;
    }
    ASSERT_EQ(run_command("solve", c, log, err), ExitStatus::Ok);
    const std::string sol = read(c.output / "solve_solution.csv");
    ASSERT_EQ(run_command("solve", c, log, err), ExitStatus::Ok);
    EXPECT_EQ(sol, read(c.output / "solve_solution.csv"));
}

TEST_F(RunnerTest, VerifyConstantPresetAndDefaults) {
    std::ostringstream log;
    std::ostringstream err;
    const RunConfig c = config("verify.u = 1\nverify.h0 = 0.05\n");
    ASSERT_EQ(run_command("verify", c, log, err), ExitStatus::Ok) << err.str();
    const std::string ids = read(c.output / "verify_identities.csv");
    EXPECT_NE(ids.find("identity,pair,s,level,h,left,right"), std::string::npos);
    EXPECT_NE(log.str().find("within_tolerance:           2/2"), std::string::npos) << log.str();
    EXPECT_NE(log.str().find("non_increasing:             2/2"), std::string::npos) << log.str();
    const auto pos = log.str().find("largest_identity_value:");
    EXPECT_LE(std::stod(log.str().substr(pos + 23)), 1e-12);
}

TEST_F(RunnerTest, ExitCodes) {
    std::ostringstream log;
    std::ostringstream err;
    EXPECT_EQ(run_command("verify", config("s = 1.2"), log, err), ExitStatus::ConfigError);
    EXPECT_EQ(run_command("oracle", config("domain = disk(0,0,1)\nh = 0.25"), log, err), ExitStatus::ConfigError);
    EXPECT_EQ(run_command("nosuchcommand", config(""), log, err), ExitStatus::ConfigError);
    EXPECT_EQ(run_command("solve", config("h = 1/100\nf = cos(2)\neps.min = 0.09\neps.initial = 0.1\ntol.max_iterations = 1"), log, err),
              ExitStatus::NumericalError)
        << err.str();
}

TEST_F(RunnerTest, AtomicWrite) {
    const fs::path p = dir_ / "sub" / "file.csv";
    write_atomic(p, "a,b\n");
    write_atomic(p, "c,d\n");
    EXPECT_EQ(read(p), "c,d\n");
    EXPECT_FALSE(fs::exists(dir_ / "sub" / "file.csv.tmp"));
}
