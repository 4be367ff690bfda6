#include "cli.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace linx;

namespace {

const std::string data = LINX_TEST_DATA;

struct Outcome {
    int code;
    std::string out;
    std::string err;
    Json json() const { return Json::parse(out); }
};

Outcome run(std::vector<std::string> args)
{
    args.insert(args.begin(), "linx");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string path(const char* name) { return data + "/" + name; }

} // namespace

TEST(CliSolve, Identity)
{
    const Outcome r = run({"solve", "--operator", path("identity.mtx"), "--rhs", path("b123.json")});
    ASSERT_EQ(r.code, 0) << r.out << r.err;
    const Json j = r.json();
    EXPECT_EQ(j["solution"], Json::parse("[1.0, 2.0, 3.0]"));
    EXPECT_EQ(j["result"], "success");
    EXPECT_EQ(j["solver_selected"], "lu");
    EXPECT_EQ(j["residual_norm"], 0.0);
    EXPECT_TRUE(j.contains("wall_time_ns"));
}

TEST(CliSolve, SingularExitsTwo)
{
    const Outcome r = run({"solve", "--operator", path("singular.mtx"), "--rhs", path("b11.json"), "--solver", "lu"});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(r.json()["result"], "singular");
    EXPECT_TRUE(r.json()["solution"].is_null());
}

TEST(CliSolve, TallLeastSquares)
{
    const Outcome r = run({"solve", "--operator", path("tall.json"), "--rhs", path("b13.json"), "--mode", "none"});
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_NEAR(r.json()["solution"][0].get<double>(), 2.0, 1e-12);
    EXPECT_EQ(r.json()["solver_selected"], "qr");
}

TEST(CliSolve, TreeStructuredRhs)
{
    const Outcome r = run({"solve", "--operator", path("tridiagonal.json"), "--rhs", path("tree_rhs.json"), "--solver",
                       "tridiagonal", "--tags", "tridiagonal"});
    ASSERT_EQ(r.code, 0) << r.out;
    const Json x = r.json()["solution"];
    EXPECT_NEAR(x["u"][0].get<double>(), 1.0, 1e-14);
    EXPECT_NEAR(x["u"][1].get<double>(), 2.0, 1e-14);
    EXPECT_NEAR(x["v"].get<double>(), 3.0, 1e-14);
}

TEST(CliSolve, IterativeOptions)
{
    const Outcome r = run({"solve", "--operator", path("identity.mtx"), "--rhs", path("b123.json"), "--solver", "cg",
                       "--tags", "symmetric,positive_semidefinite", "--rtol", "1e-12", "--max-steps", "5"});
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(r.json()["iterations"], 1);
}

TEST(CliSolve, ErrorsAreJson)
{
    const Outcome parse = run({"solve", "--operator", path("malformed.mtx"), "--rhs", path("b11.json")});
    EXPECT_EQ(parse.code, 1);
    EXPECT_EQ(parse.json()["error"], "parse");
    EXPECT_EQ(parse.json()["line"], 4);

    const Outcome contract = run({"solve", "--operator", path("identity.mtx"), "--rhs", path("b123.json"), "--solver", "cg"});
    EXPECT_EQ(contract.code, 1);
    EXPECT_EQ(contract.json()["error"], "contract");

    const Outcome tags = run({"solve", "--operator", path("identity.mtx"), "--rhs", path("b123.json"), "--tags", "hermitian"});
    EXPECT_EQ(tags.json()["error"], "contract");

    const Outcome structure = run({"solve", "--operator", path("identity.mtx"), "--rhs", path("b11.json")});
    EXPECT_EQ(structure.json()["error"], "structure");

    const Outcome missing = run({"solve", "--operator", path("nope.mtx"), "--rhs", path("b11.json")});
    EXPECT_EQ(missing.code, 1);
    EXPECT_EQ(missing.json()["error"], "io");
}

TEST(CliSolve, UsageErrorsGoToStderr)
{
    const Outcome unknown = run({"solve", "--operator", path("nope.mtx"), "--rhs", path("nope.json"), "--solver", "umfpack"});
    EXPECT_EQ(unknown.code, 1);
    EXPECT_TRUE(unknown.out.empty());
    EXPECT_FALSE(unknown.err.empty());
    EXPECT_EQ(run({}).code, 1);
    EXPECT_EQ(run({"solve", "--rhs", "x"}).code, 1);
}

TEST(CliSolve, SolutionIsDeterministic)
{
    const std::vector<std::string> args{"solve", "--operator", path("random6x4.mtx"), "--rhs", path("b6.json"),
                                        "--mode", "none"};
    EXPECT_EQ(run(args).json()["solution"].dump(), run(args).json()["solution"].dump());
}

TEST(CliBench, SuiteAndEmptySuite)
{
    const Outcome r = run({"bench", "--suite", path("suite.json"), "--repeats", "1", "--jobs", "2"});
    ASSERT_EQ(r.code, 0) << r.out;
    const Json table = r.json();
    ASSERT_EQ(table.size(), 3u + 11u);
    std::int64_t thomas = 0, lu = 0;
    for (const Json& cell : table) {
        if (cell["status"] == "ok") EXPECT_EQ(cell["samples"].size(), 1u);
        if (cell["problem"] == "tri512" && cell["solver"] == "tridiagonal") thomas = cell["median_wall_time_ns"];
        if (cell["problem"] == "tri512" && cell["solver"] == "lu") lu = cell["median_wall_time_ns"];
        if (cell["problem"] == "tri512" && cell["solver"] == "cg") EXPECT_EQ(cell["status"], "incompatible");
    }
    EXPECT_GT(thomas, 0);
    EXPECT_LT(thomas, lu);

    const Outcome empty = run({"bench", "--suite", path("empty_suite.json"), "--repeats", "1"});
    EXPECT_EQ(empty.code, 0);
    EXPECT_EQ(empty.json(), Json::array());
}

TEST(CliGradcheck, Examples)
{
    for (const char* seed : {"0", "1", "12345"}) {
        const Outcome id = run({"gradcheck", "--operator", path("identity.mtx"), "--rhs", path("b123.json"), "--solver",
                            "lu", "--seed", seed, "--trials", "5"});
        ASSERT_EQ(id.code, 0) << id.out;
        EXPECT_TRUE(id.json()["pass"].get<bool>()) << id.out;
    }

    const Outcome qr = run({"gradcheck", "--operator", path("random6x4.mtx"), "--rhs", path("b6.json"), "--solver", "qr",
                        "--mode", "none", "--seed", "3", "--trials", "10"});
    ASSERT_EQ(qr.code, 0) << qr.out;
    EXPECT_EQ(qr.json()["formula"], "independent_columns");
    EXPECT_TRUE(qr.json()["pass"].get<bool>()) << qr.out;

    const std::vector<std::string> svd{"gradcheck", "--operator", path("rank2.json"), "--rhs", path("b4.json"),
                                       "--solver", "svd", "--mode", "false", "--seed", "4", "--trials", "10"};
    EXPECT_TRUE(run(svd).json()["pass"].get<bool>()) << run(svd).out;
    auto forced = svd;
    forced.insert(forced.end(), {"--force-case", "well_posed"});
    const Outcome bad = run(forced);
    EXPECT_EQ(bad.code, 0);
    EXPECT_FALSE(bad.json()["pass"].get<bool>()) << bad.out;
    EXPECT_GT(bad.json()["max_jvp_fd_error"].get<double>(), 1e-5);
}

TEST(CliGradcheck, Deterministic)
{
    const std::vector<std::string> args{"gradcheck", "--operator", path("random6x4.mtx"), "--rhs", path("b6.json"),
                                        "--solver", "qr", "--mode", "none", "--seed", "9", "--trials", "4"};
    EXPECT_EQ(run(args).out, run(args).out);
}
