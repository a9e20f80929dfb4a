#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "macbounds/cli.hpp"
#include "macbounds/dm_region.hpp"

using namespace macbounds;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag)
        : path(fs::temp_directory_path() / ("macbounds-cli-" + tag)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string str() const { return path.string(); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::map<std::string, double> csv_rows(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);  // header
    std::map<std::string, double> rows;
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        rows[line.substr(0, comma)] = std::stod(line.substr(comma + 1));
    }
    return rows;
}

}  // namespace

TEST_CASE("figure command") {
    TempDir dir("figure");
    SUBCASE("unknown preset is a usage error") {
        CHECK(cli_main({"figure", "fig9", "--out", dir.str()}) == 2);
    }
    SUBCASE("fig2 writes boundaries and the plot script") {
        REQUIRE(cli_main({"figure", "fig2", "--out", dir.str()}) == 0);
        CHECK(fs::exists(dir.path / "inner.csv"));
        CHECK(fs::exists(dir.path / "outer.csv"));
        CHECK(fs::exists(dir.path / "plot.py"));

        std::ifstream in(dir.path / "outer.csv");
        std::string header, first;
        std::getline(in, header);
        std::getline(in, first);
        CHECK(header == "rc,r1");
        CHECK(first.substr(0, 9) == "0.000000,");
        const double r1_at_0 = std::stod(first.substr(9));
        CHECK(r1_at_0 == doctest::Approx(0.584963).epsilon(1e-4 / 0.58));

        // theorem containment reflected in the files
        const auto inner = csv_rows(dir.path / "inner.csv");
        const auto outer = csv_rows(dir.path / "outer.csv");
        for (const auto& [rc, r1] : inner) {
            REQUIRE(outer.count(rc) == 1);
            CHECK(outer.at(rc) >= r1 - 1e-5);
        }
    }
    SUBCASE("envelope flag accepted") {
        CHECK(cli_main({"figure", "fig3", "--out", dir.str(), "--envelope"}) == 0);
        CHECK(fs::exists(dir.path / "inner.csv"));
    }
}

TEST_CASE("sweep command") {
    TempDir dir("sweep");
    SUBCASE("invalid parameters exit 2") {
        CHECK(cli_main({"sweep", "--p1", "1", "--n0", "0", "--out", dir.str()}) == 2);
        CHECK(cli_main({"sweep", "--p1", "1", "--alpha-range", "junk", "--out", dir.str()}) == 2);
        CHECK(cli_main({"sweep", "--nonsense"}) == 2);
    }
    SUBCASE("q=0 reduction visible in the CSVs") {
        REQUIRE(cli_main({"sweep", "--p1", "1", "--p2", "1", "--q", "0", "--n0", "1", "--out",
                          dir.str()}) == 0);
        const auto inner = csv_rows(dir.path / "inner.csv");
        const auto outer = csv_rows(dir.path / "outer.csv");
        for (const auto& [rc, r1] : inner) {
            REQUIRE(outer.count(rc) == 1);
            CHECK(std::abs(outer.at(rc) - r1) <= 0.02);
        }
    }
    SUBCASE("silent uninformed encoder pins r1 to zero") {
        REQUIRE(cli_main({"sweep", "--p1", "0", "--p2", "2", "--q", "1", "--n0", "1", "--grid", "11",
                          "--out", dir.str()}) == 0);
        for (const auto& [rc, r1] : csv_rows(dir.path / "inner.csv")) CHECK(r1 == 0.0);
    }
    SUBCASE("byte-identical on repeated invocation") {
        TempDir dir2("sweep-rep");
        const std::vector<std::string> args{"sweep", "--p1", "2.5", "--p2", "2",    "--q",
                                            "1.5",   "--n0", "2",   "--grid", "11"};
        auto run = [&](const std::string& out) {
            auto a = args;
            a.push_back("--out");
            a.push_back(out);
            return cli_main(a);
        };
        REQUIRE(run(dir.str()) == 0);
        REQUIRE(run(dir2.str()) == 0);
        CHECK(slurp(dir.path / "inner.csv") == slurp(dir2.path / "inner.csv"));
        CHECK(slurp(dir.path / "outer.csv") == slurp(dir2.path / "outer.csv"));
        CHECK_FALSE(slurp(dir.path / "inner.csv").empty());
    }
}

TEST_CASE("dm sweep command") {
    TempDir dir("dm");
    const std::string chan = (dir.path / "xor.txt").string();
    save_dm_channel(xor_channel(), chan);

    SUBCASE("runs a discrete search end to end") {
        REQUIRE(cli_main({"sweep", "--dm-channel", chan, "--budget", "200", "--seed", "3", "--out",
                          dir.str()}) == 0);
        const auto inner = csv_rows(dir.path / "inner.csv");
        CHECK_FALSE(inner.empty());
    }
    SUBCASE("bad channel file is a usage error") {
        std::ofstream bad(dir.path / "bad.txt");
        bad << "1 2 2 2\n0.7 0.4\n";
        bad.close();
        CHECK(cli_main({"sweep", "--dm-channel", (dir.path / "bad.txt").string(), "--out",
                        dir.str()}) == 2);
    }
    SUBCASE("missing channel file is a runtime failure") {
        CHECK(cli_main({"sweep", "--dm-channel", (dir.path / "nope.txt").string(), "--out",
                        dir.str()}) == 1);
    }
}

TEST_CASE("verify command") {
    SUBCASE("unknown suite exits 2") { CHECK(cli_main({"verify", "nonsense"}) == 2); }
    SUBCASE("fm suite passes") { CHECK(cli_main({"verify", "fm"}) == 0); }
    SUBCASE("oracle suite with a small trial count") {
        CHECK(cli_main({"verify", "oracle", "--trials", "50", "--seed", "5", "--tol", "1e-9"}) == 0);
    }
    SUBCASE("missing subcommand exits 2") { CHECK(cli_main({}) == 2); }
}
