#include "doctest.h"

#include "ttsched/cli.hpp"
#include "ttsched/harness.hpp"
#include "ttsched/ilp_model.hpp"
#include "ttsched/topology.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ttsched;

namespace {

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
};

Outcome cli(std::vector<std::string> args) {
    args.insert(args.begin(), "ttsched");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct TempDir {
    std::filesystem::path path;
    TempDir() : path(std::filesystem::temp_directory_path() / "ttsched_cli_test") {
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

} // namespace

TEST_SUITE("cli") {

TEST_CASE("oracle on the conflict fixture") {
    const auto r = cli({"oracle", "--fixture", "conflict4"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.rfind("optimum=3\n", 0) == 0);
}

TEST_CASE("run then verify its own gate table") {
    TempDir dir;
    for (const std::string scheme : {"jrs", "wop", "srs", "iras"}) {
        const auto gate = dir / (scheme + ".csv");
        const auto r = cli({"run", "--fixture", "conflict4", "--scheme", scheme, "--gate", gate});
        REQUIRE(r.code == kExitOk);
        const std::string expected = scheme == "jrs" || scheme == "srs" ? "admitted=3" : "admitted=2";
        CHECK(r.out.find(expected) != std::string::npos);
        const auto v = cli({"verify", "--fixture", "conflict4", "--gate", gate});
        CHECK(v.code == kExitOk);
        CHECK(v.out == "ok\n");
    }
}

TEST_CASE("tampered gate table fails verification") {
    TempDir dir;
    const auto gate = dir / "gate.csv";
    REQUIRE(cli({"run", "--fixture", "conflict4", "--gate", gate}).code == kExitOk);
    auto text = slurp(gate);
    // Duplicate the first f1 row under another flow id.
    const auto at = text.find(",f1\n");
    REQUIRE(at != std::string::npos);
    const auto start = text.rfind('\n', at) + 1;
    const auto row = text.substr(start, at - start) + ",f3\n";
    text += row;
    std::ofstream(gate) << text;
    const auto v = cli({"verify", "--fixture", "conflict4", "--gate", gate});
    CHECK(v.code == kExitViolations);
    CHECK(v.out.find("EQ4") != std::string::npos);
}

TEST_CASE("generated trace runs on the ring and verifies") {
    TempDir dir;
    const auto trace = dir / "trace.csv";
    const auto results = dir / "results.csv";
    const auto gate = dir / "gate.csv";
    REQUIRE(cli({"gen-flows", "--topology", "ring:12", "--count", "40", "--seed", "3", "--out", trace}).code ==
            kExitOk);
    const auto r = cli({"run", "--topology", "ring:12", "--scheme", "jrs", "--flows", trace, "--results", results,
                        "--gate", gate});
    REQUIRE(r.code == kExitOk);
    const auto rows = parse_results(slurp(results));
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].offered == 40);
    CHECK(rows[0].scheme == "jrs");
    CHECK(cli({"verify", "--topology", "ring:12", "--flows", trace, "--gate", gate}).code == kExitOk);
}

TEST_CASE("same seed, same output") {
    const auto a = cli({"gen-flows", "--topology", "cev", "--endpoints", "es", "--count", "30", "--seed", "9"});
    const auto b = cli({"gen-flows", "--topology", "cev", "--endpoints", "es", "--count", "30", "--seed", "9"});
    CHECK(a.code == kExitOk);
    CHECK(a.out == b.out);
    const auto c = cli({"gen-flows", "--topology", "cev", "--endpoints", "es", "--count", "30", "--seed", "10"});
    CHECK(a.out != c.out);
}

TEST_CASE("compare prints one row per cell plus aggregates") {
    const auto r = cli({"compare", "--topology", "ring:6", "--count", "20", "--seeds", "3", "--schemes", "jrs,wop"});
    REQUIRE(r.code == kExitOk);
    const auto table = r.out.substr(0, r.out.find("jrs: admitted"));
    CHECK(parse_results(table).size() == 3 * 2 + 2);
    CHECK(r.out.find("wop: admitted mean=") != std::string::npos);
}

TEST_CASE("lp export and topology output") {
    const auto lp = cli({"export-lp", "--fixture", "conflict4"});
    REQUIRE(lp.code == kExitOk);
    CHECK(parse_lp(lp.out).objective.size() == 3);
    const auto topo = cli({"gen-topology", "--topology", "ring:4"});
    REQUIRE(topo.code == kExitOk);
    CHECK(parse_topology(topo.out) == build_ring(4));
}

TEST_CASE("configuration errors exit with code 2") {
    CHECK(cli({"run", "--bogus"}).code == kExitConfig);
    CHECK(cli({}).code == kExitConfig);
    CHECK(cli({"run", "--scheme", "ilp", "--count", "3"}).code == kExitConfig);
    CHECK(cli({"run", "--periods-us", "50,100", "--count", "3"}).code == kExitConfig);
    CHECK(cli({"run", "--topology", "ring:2"}).code == kExitConfig);
    CHECK(cli({"run", "--alpha", "1", "--count", "3"}).code == kExitConfig);
    CHECK(cli({"oracle", "--fixture", "nope"}).code == kExitConfig);
    CHECK(cli({"oracle", "--topology", "ring:12", "--count", "3"}).code == kExitConfig);
    CHECK(cli({"verify", "--fixture", "conflict4"}).code == kExitConfig);
    const auto bad = cli({"run", "--bogus"});
    CHECK(bad.err.find("--bogus") != std::string::npos);
}

} // TEST_SUITE
