#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include "json.hpp"

#include "fyk/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = fyk::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("fyk_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    return {std::istreambuf_iterator<char>(f), {}};
}

}  // namespace

TEST(Cli, ConstantsCsv) {
    const Result r = call({"--n", "3", "--gamma", "0.5", "constants"});
    ASSERT_EQ(r.code, fyk::cli::kOk) << r.err;
    EXPECT_NE(r.out.find("# table: constants"), std::string::npos);
    EXPECT_NE(r.out.find("0.0506605918211689"), std::string::npos);
    EXPECT_NE(r.out.find("# status: pass"), std::string::npos);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(call({}).code, fyk::cli::kUsage);
    EXPECT_EQ(call({"--bogus", "constants"}).code, fyk::cli::kUsage);
    EXPECT_EQ(call({"--n", "1", "--gamma", "0.6", "constants"}).code, fyk::cli::kUsage);
    EXPECT_EQ(call({"--n", "3", "--gamma", "0.5", "--format", "xml", "constants"}).code, fyk::cli::kUsage);
    EXPECT_EQ(call({"solve"}).code, fyk::cli::kUsage);
    const Result r = call({"--n", "3", "--gamma", "1.5", "constants"});
    EXPECT_EQ(r.code, fyk::cli::kUsage);
    EXPECT_FALSE(r.err.empty());
}

TEST(Cli, DeterministicOutput) {
    const std::vector<std::string> args{"--index", "5:0.5,6:0.3", "integrals", "--method", "bessel_moments"};
    const Result a = call(args), b = call(args);
    ASSERT_EQ(a.code, fyk::cli::kOk) << a.err;
    EXPECT_EQ(a.out, b.out);
}

TEST(Cli, JsonOutputParses) {
    const Result r = call({"--n", "5", "--gamma", "0.7", "--format", "json", "constants"});
    ASSERT_EQ(r.code, fyk::cli::kOk) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.at("command"), "constants");
    EXPECT_EQ(j.at("status"), "pass");
    ASSERT_FALSE(j.at("tables").empty());
    const auto& t = j.at("tables")[0];
    EXPECT_EQ(t.at("rows").size(), 1u);
    EXPECT_EQ(t.at("columns").size(), t.at("rows")[0].size());
}

TEST(Cli, OutDirectoryGetsOneFilePerTable) {
    const fs::path dir = scratch("out");
    const Result r = call({"--n", "4", "--gamma", "0.3", "--out", dir.string(), "constants"});
    ASSERT_EQ(r.code, fyk::cli::kOk) << r.err;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) files.push_back(e.path());
    ASSERT_EQ(files.size(), 1u);
    EXPECT_EQ(files[0].extension(), ".csv");
    EXPECT_NE(slurp(files[0]).find("# table: constants"), std::string::npos);
    fs::remove_all(dir);
}

TEST(Cli, ConfigFileAndOverride) {
    const fs::path dir = scratch("cfg");
    const fs::path cfg = dir / "run.ini";
    std::ofstream(cfg) << "n=5\ngamma=0.5\n";
    const Result a = call({"--config", cfg.string(), "constants"});
    const Result b = call({"--n", "5", "--gamma", "0.5", "constants"});
    ASSERT_EQ(a.code, fyk::cli::kOk) << a.err;
    EXPECT_EQ(a.out, b.out);
    const Result c = call({"--config", cfg.string(), "--n", "7", "constants"});
    const Result d = call({"--n", "7", "--gamma", "0.5", "constants"});
    EXPECT_EQ(c.out, d.out);
    EXPECT_NE(c.out, a.out);
    fs::remove_all(dir);
}

TEST(Cli, CoefficientScanSmallRange) {
    const Result r = call({"coeff-scan", "--n-range", "3:8", "--gamma-step", "0.01"});
    ASSERT_EQ(r.code, fyk::cli::kOk) << r.err;
    EXPECT_NE(r.out.find("PASS"), std::string::npos);
}

TEST(Cli, Lambda1Fast) {
    const Result r = call({"--n", "3", "--gamma", "0.5", "solve", "lambda1", "--radii", "1,2", "--spacing", "0.03125"});
    EXPECT_TRUE(r.code == fyk::cli::kOk || r.code == fyk::cli::kToleranceBreach) << r.err;
    EXPECT_NE(r.out.find("# table:"), std::string::npos);
}

TEST(Cli, ToleranceBreachExitCode) {
    // An impossible tolerance on the extension study trips exit code 3.
    const Result r = call({"--n", "3", "--gamma", "0.5", "--tol", "1e-15", "solve", "extension", "--nodes", "17,33"});
    EXPECT_EQ(r.code, fyk::cli::kToleranceBreach) << r.err;
    EXPECT_NE(r.out.find("# status: tolerance_breach"), std::string::npos);
}
