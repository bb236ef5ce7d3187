#include "doctest.h"

#include "ttsched/errors.hpp"
#include "ttsched/fixtures.hpp"
#include "ttsched/harness.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ttsched;

namespace {

Tseg small_ring() {
    const std::vector<std::int64_t> us{60, 120, 240, 480};
    return Tseg(build_ring(6), SlotConfig::from_micros(us, 12));
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST_SUITE("harness") {

TEST_CASE("scheme names") {
    for (const auto s : {Scheme::Jrs, Scheme::Wop, Scheme::Srs, Scheme::Iras}) {
        CHECK(parse_scheme(to_string(s)) == s);
    }
    CHECK_THROWS_AS(parse_scheme("ilp"), ConfigError);
}

TEST_CASE("empty trace") {
    auto t = small_ring();
    const auto run = run_online(t, {}, Scheme::Jrs);
    CHECK(run.result.offered == 0);
    CHECK(run.result.admitted == 0);
    CHECK(run.result.runtime_ms_total == 0.0);
    CHECK(run.decisions.empty());
}

TEST_CASE("conflict4 admissions per scheme") {
    const auto fx = conflict4();
    auto a = fx.make_tseg();
    const auto jrs = run_online(a, fx.trace, Scheme::Jrs);
    CHECK(jrs.result.admitted == 3);
    CHECK(jrs.result.admitted_by_class == std::vector<int>{2, 1});
    auto b = fx.make_tseg();
    const auto wop = run_online(b, fx.trace, Scheme::Wop);
    CHECK(wop.result.admitted == 2);
    CHECK(wop.decisions.size() == 3);
    CHECK_FALSE(wop.decisions[2].admitted());
}

TEST_CASE("online run keeps invariants") {
    auto t = small_ring();
    TrafficProfile prof;
    prof.flow_count = 40;
    const auto trace = generate_flows(prof, t.config(), t.topology());
    const auto run = run_online(t, trace, Scheme::Jrs);
    CHECK(run.result.offered == 40);
    CHECK(run.result.admitted <= run.result.offered);
    int by_class = 0;
    for (const int c : run.result.admitted_by_class) {
        by_class += c;
    }
    CHECK(by_class == run.result.admitted);
    CHECK(static_cast<int>(t.assignments().size()) == run.result.admitted);
    CHECK(run.result.runtime_us_per_flow_p95 >= 0.0);
    CHECK(run.stats.searches > 0);
}

TEST_CASE("compare shape, determinism and aggregates") {
    const auto base = small_ring();
    TrafficProfile prof;
    prof.flow_count = 30;
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t s = 1; s <= 10; ++s) {
        seeds.push_back(s);
    }
    const std::vector<Scheme> schemes{Scheme::Jrs, Scheme::Wop};
    const auto par = compare(base, prof, schemes, seeds);
    CHECK(par.runs.size() == 20);
    CHECK(par.table.size() == 22);
    CHECK(par.summary.size() == 2);
    const auto ser = compare(base, prof, schemes, seeds, {}, false);
    for (std::size_t k = 0; k < par.runs.size(); ++k) {
        CHECK(par.runs[k].admitted == ser.runs[k].admitted);
        CHECK(par.runs[k].seed == ser.runs[k].seed);
        CHECK(par.runs[k].scheme == ser.runs[k].scheme);
    }
    for (std::size_t s = 0; s < 2; ++s) {
        double sum = 0;
        for (std::size_t k = 0; k < 10; ++k) {
            sum += par.runs[s * 10 + k].admitted;
        }
        const double mean = sum / 10;
        double ss = 0;
        for (std::size_t k = 0; k < 10; ++k) {
            ss += std::pow(par.runs[s * 10 + k].admitted - mean, 2);
        }
        CHECK(par.summary[s].admitted_mean == doctest::Approx(mean));
        CHECK(par.summary[s].admitted_stddev == doctest::Approx(std::sqrt(ss / 9)));
        const auto& agg = par.table[20 + s];
        CHECK(agg.seed == "mean");
        CHECK(agg.admitted == doctest::Approx(mean));
    }
    CHECK_THROWS_AS(compare(base, prof, schemes, {}), ConfigError);
}

TEST_CASE("each seed feeds every scheme the same trace") {
    const auto base = small_ring();
    TrafficProfile prof;
    prof.flow_count = 30;
    prof.seed = 4;
    const std::vector<std::uint64_t> seeds{4};
    const std::vector<Scheme> schemes{Scheme::Jrs, Scheme::Iras};
    const auto cmp = compare(base, prof, schemes, seeds);
    const auto trace = generate_flows(prof, base.config(), base.topology());
    for (std::size_t s = 0; s < schemes.size(); ++s) {
        Tseg t = base;
        CHECK(run_online(t, trace, schemes[s]).result.admitted == cmp.runs[s].admitted);
    }
}

TEST_CASE("results file") {
    const auto dir = std::filesystem::temp_directory_path() / "ttsched_harness_test";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "results.csv").string();

    write_results({}, path);
    CHECK(slurp(path) == std::string(kResultsHeader) + "\n");

    const auto base = small_ring();
    TrafficProfile prof;
    prof.flow_count = 20;
    const std::vector<std::uint64_t> seeds{1, 2};
    const std::vector<Scheme> schemes{Scheme::Jrs, Scheme::Srs};
    const auto cmp = compare(base, prof, schemes, seeds);
    write_results(cmp.table, path);
    const auto text = slurp(path);
    CHECK(parse_results(text) == cmp.table);
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        CHECK(std::count(line.begin(), line.end(), ',') == 9);
    }
    CHECK_THROWS_AS(write_results(cmp.table, (dir / "missing" / "x.csv").string()), ConfigError);
    CHECK_THROWS_AS(parse_results("scheme,seed\n"), ParseError);
    std::filesystem::remove_all(dir);
}

} // TEST_SUITE
