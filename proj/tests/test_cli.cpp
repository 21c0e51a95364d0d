#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include <json.hpp>

#include "modlab/cli.hpp"
#include "modlab/grid.hpp"

using namespace modlab;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("modlab_cli_" + std::to_string(::getpid()) + "_" +
                                            ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }
    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(path(name)) << text;
        return path(name);
    }
    std::string write(const std::string& name, const SampledFunction& f) const {
        std::ofstream o(path(name));
        write_csv(o, f);
        return path(name);
    }

    fs::path dir_;
};

}  // namespace

TEST_F(CliTest, HilbertOfZeroIsZero) {
    const auto in = write("zero.csv", SampledFunction(Grid(-4, 4, 64)));
    const auto r = invoke({"transform", "hilbert", "--in", in, "--out", path("h.csv")});
    ASSERT_EQ(r.code, cli::kSuccess) << r.err;
    std::ifstream back(path("h.csv"));
    const auto h = read_csv(back);
    EXPECT_EQ(h.size(), 64u);
    EXPECT_EQ(h.max_abs(), 0.0);
}

TEST_F(CliTest, EveryTransformRuns) {
    const auto in = write("f.csv", sample_expression("exp(-x^2)", Grid(-4, 4, 64)));
    for (const std::string op : {"hilbert", "hilbert-pv", "hstar", "sstar", "carleson", "cstar", "maximal", "sharp", "mr"}) {
        const auto r = invoke({"transform", op, "--in", in, "--out", path(op + ".csv")});
        EXPECT_EQ(r.code, cli::kSuccess) << op << ": " << r.err;
    }
    EXPECT_EQ(invoke({"transform", "sab", "--in", in, "--out", path("s.csv"), "--a", "-1", "--b", "2"}).code, cli::kSuccess);
    EXPECT_EQ(invoke({"transform", "sab", "--in", in, "--out", path("s.csv")}).code, cli::kUsageError);
    EXPECT_EQ(invoke({"transform", "carleson", "--in", in, "--out", path("c.csv"), "--alphas", "-1,0,1"}).code,
              cli::kSuccess);
}

TEST_F(CliTest, NormOfScaledIndicator) {
    // 2 chi_[-1,1) sampled with h = 1/8: sixteen cells of value 2, so ||.||_2 = 2 sqrt(2).
    const auto in = write("chi.csv", sample_expression("2 * chi(-1, 0.99)", Grid(-4, 4, 64)));
    const auto p = write("p.json", R"({"kind": "constant", "p": 2})");
    const auto r = invoke({"norm", "--in", in, "--exponent", p});
    ASSERT_EQ(r.code, cli::kSuccess) << r.err;
    EXPECT_NEAR(std::stod(r.out), 2 * std::sqrt(2.0), 1e-10);
}

TEST_F(CliTest, UsageErrors) {
    EXPECT_EQ(invoke({}).code, cli::kUsageError);
    EXPECT_EQ(invoke({"frobnicate"}).code, cli::kUsageError);
    EXPECT_EQ(invoke({"transform", "fourier", "--in", "a", "--out", "b"}).code, cli::kUsageError);
    const auto r = invoke({"transform", "hilbert", "--in", path("missing.csv"), "--out", path("o.csv")});
    EXPECT_EQ(r.code, cli::kUsageError);
    EXPECT_NE(r.err.find("missing.csv"), std::string::npos);
    EXPECT_EQ(invoke({"verify", "inequalities", "--config", write("bad.json", "{not json")}).code, cli::kUsageError);
    EXPECT_EQ(invoke({"--help"}).code, cli::kSuccess);
}

TEST_F(CliTest, SymbolCheck) {
    const auto sym = write("g.sym", "x: exp(-x^2)\n; lambda on (-inf, 0]: exp(l); on (0, inf): exp(-l)\n");
    const auto r = invoke({"symbol", "check", sym, "--compactness", "--grid", "-4,4,32"});
    ASSERT_EQ(r.code, cli::kSuccess) << r.err;
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')),
              "x: exp(-x^2); lambda on (-inf, 0]: exp(l); on (0, inf): exp(-l)");
    const auto at = r.out.find("linf_v_norm: ");
    ASSERT_NE(at, std::string::npos);
    EXPECT_NEAR(std::stod(r.out.substr(at + 13)), 3.0, 1e-6);
    EXPECT_NE(r.out.find("(c) uniform tail variation: pass"), std::string::npos);
    const auto bad = write("bad.sym", "lambda on (0, -1]: 1");
    const auto e = invoke({"symbol", "check", bad});
    EXPECT_EQ(e.code, cli::kUsageError);
    EXPECT_NE(e.err.find("error"), std::string::npos);
}

TEST_F(CliTest, PdoApplyAndSpectrum) {
    const auto sym = write("one.sym", "lambda: 1");
    const auto f = sample_expression("exp(-x^2)", Grid(-4, 4, 32));
    const auto in = write("f.csv", f);
    ASSERT_EQ(invoke({"pdo", "apply", sym, "--in", in, "--out", path("af.csv")}).code, cli::kSuccess);
    std::ifstream back(path("af.csv"));
    const auto af = read_csv(back);
    ASSERT_EQ(af.size(), f.size());
    for (std::size_t j = 0; j < f.size(); ++j) EXPECT_NEAR(std::abs(af[j] - f[j]), 0.0, 1e-12);
    const auto r = invoke({"pdo", "spectrum", sym, "--grid", "-4,4,16", "--k", "4", "--matrix-out", path("m.csv")});
    ASSERT_EQ(r.code, cli::kSuccess) << r.err;
    std::istringstream lines(r.out);
    double s;
    int count = 0;
    while (lines >> s) {
        EXPECT_NEAR(s, 1.0, 1e-10);
        ++count;
    }
    EXPECT_EQ(count, 4);
    std::ifstream m(path("m.csv"));
    std::string first;
    std::getline(m, first);
    EXPECT_EQ(first, "16");
}

TEST_F(CliTest, VerifyWritesReportAndExitCode) {
    const auto cfg = write("cfg.json", R"({
        "grid": {"x_min": -8, "x_max": 8, "n": 128},
        "family": {"trials": 2}
    })");
    const auto r = invoke({"verify", "inequalities", "--config", cfg, "--out", path("report.json")});
    ASSERT_EQ(r.code, cli::kSuccess) << r.err;
    EXPECT_NE(r.out.find("0 failed"), std::string::npos);
    std::ifstream in(path("report.json"));
    const auto j = nlohmann::json::parse(in);
    EXPECT_EQ(j["suite"], "inequalities");
    EXPECT_EQ(j["summary"]["n_fail"], 0);

    // an impossible stability tolerance is a verification failure, not a usage error
    const auto strict = write("strict.json", R"({
        "grid": {"x_min": -8, "x_max": 8, "n": 64},
        "family": {"trials": 2},
        "operator": {"operators": ["double"], "refinement_rounds": 1},
        "tolerances": {"stability": 0.5}
    })");
    EXPECT_EQ(invoke({"verify", "norm-ratio", "--config", strict, "--out", path("r2.json")}).code,
              cli::kVerificationFailure);
}
