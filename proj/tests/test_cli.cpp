#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "qcg/cli.hpp"

using namespace qcg;

namespace {

struct Result
{
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = cli::run_command(args, out, err);
    return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& content)
{
    const auto path = std::filesystem::temp_directory_path() / (name + std::to_string(std::random_device{}()) + ".json");
    std::ofstream(path) << content;
    return path.string();
}

} // namespace

TEST(Cli, Solve)
{
    auto r = run({"solve", "--game", "nim:5", "--ruleset", "A", "--width", "max"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "grundy=4 outcome=N\n");
    r = run({"solve", "--game", "octal06:1111", "--ruleset", "classical"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "grundy=0 outcome=P\n");
    r = run({"solve", "--game", "hackenbush:R1|Ba,R2|Bb,R3", "--ruleset", "A"});
    EXPECT_EQ(r.out, "outcome=L\n");
    r = run({"solve", "--game", "{nim:0 | nim:3}", "--ruleset", "C"});
    EXPECT_EQ(r.out, "grundy=2 outcome=N\n");
}

TEST(Cli, SolveJsonIsDeterministic)
{
    const std::vector<std::string> args = {"solve", "--game", "nim:2,2", "--ruleset", "Cp", "--format", "json"};
    const auto a = run(args);
    const auto b = run(args);
    EXPECT_EQ(a.out, b.out);
    const auto j = nlohmann::json::parse(a.out);
    EXPECT_EQ(j["outcome"], "P");
    EXPECT_EQ(j["ruleset"], "Cp");
    EXPECT_EQ(j["width"], "2");
}

TEST(Cli, Table)
{
    auto r = run({"table", "--ruleset", "D", "--width", "2", "--imax", "4", "--jmax", "4", "--format", "csv"});
    EXPECT_EQ(r.code, 0);
    std::istringstream lines(r.out);
    std::string header, row;
    std::getline(lines, header);
    EXPECT_EQ(header, "i\\j,0,1,2,3,4");
    for (int i = 0; i <= 2; ++i)
        std::getline(lines, row);
    EXPECT_EQ(row, "2,2,3,1,0,6");  // (2,3) = 0
    r = run({"table", "--ruleset", "A", "--imax", "1", "--jmax", "1", "--format", "json"});
    EXPECT_EQ(nlohmann::json::parse(r.out)["values"], nlohmann::json({{0, 0}, {0, 0}}));
}

TEST(Cli, Legal)
{
    auto r = run({"legal", "--game", "nim:1,1", "--ruleset", "D", "--width", "2"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "[1:-1]\n[2:-1]\n[1:-1 & 2:-1]\n");
    r = run({"legal", "--game", "nim:1", "--ruleset", "A"});
    EXPECT_EQ(r.out, "");
}

TEST(Cli, Examples)
{
    auto r = run({"examples"});
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 5);
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, VerifyReplaysAndAdjudicates)
{
    const auto path = write_temp("history", R"({"initial": "nim:4", "ruleset": "D", "width": 2,
        "moves": ["[1:-3 & 1:-2]", "[1:-2 & 1:-1]"], "challenge": "1:-1"})");
    auto r = run({"verify", "--history", path});
    EXPECT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["realisations"], "{nim:0 | nim:1}");
    EXPECT_EQ(j["valid_runs"], 3);
    EXPECT_EQ(j["challenge"]["upheld"], true);
    EXPECT_EQ(j["winner"], "LEFT");
    std::filesystem::remove(path);
}

TEST(Cli, VerifyReportsAnIllegalEntry)
{
    const auto path = write_temp("history", R"({"initial": "nim:2", "ruleset": "A", "moves": ["1:-1"]})");
    auto r = run({"verify", "--history", path});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(nlohmann::json::parse(r.out)["illegal_entry"]["reason"], "UNSUPERPOSED_FORBIDDEN");
    std::filesystem::remove(path);
}

TEST(Cli, ExitCodes)
{
    auto r = run({"solve", "--game", "nim:3,x"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("'x'"), std::string::npos);
    EXPECT_EQ(run({"solve", "--game", "nim:3", "--ruleset", "E"}).code, 2);
    EXPECT_EQ(run({"solve", "--game", "nim:3", "--ruleset", "A", "--width", "1"}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"verify", "--history", "/nonexistent/file.json"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}
