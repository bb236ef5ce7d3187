#include "doctest.h"

#include "support/brute_force.hpp"
#include "ttsched/errors.hpp"
#include "ttsched/fixtures.hpp"
#include "ttsched/tseg.hpp"
#include "ttsched/weighting.hpp"

#include <algorithm>

using namespace ttsched;

namespace {

struct Conflict4 {
    Fixture fx = conflict4();
    Tseg tseg = fx.make_tseg();
    NodeId s = fx.topo.at("s");
    NodeId a = fx.topo.at("a");
    NodeId b = fx.topo.at("b");
    NodeId d = fx.topo.at("d");
    LinkId sb = *fx.topo.link_between(s, b);
    LinkId bd = *fx.topo.link_between(b, d);
    LinkId sa = *fx.topo.link_between(s, a);
    LinkId ad = *fx.topo.link_between(a, d);

    // f1: s@1 -tx-> b@1 -c-> b@2 -tx-> d@2
    Assignment f1() const {
        return make_assignment(fx.trace[0], 1,
                               {PathEdge{EdgeKind::Transmission, s, b, 1, sb},
                                PathEdge{EdgeKind::Caching, b, b, 1, {}},
                                PathEdge{EdgeKind::Transmission, b, d, 2, bd}},
                               fx.topo, fx.cfg);
    }
};

std::vector<Copy> copies(LinkId l, std::initializer_list<Slot> slots) {
    std::vector<Copy> out;
    for (const auto q : slots) {
        out.push_back(Copy{l, q});
    }
    return out;
}

} // namespace

TEST_SUITE("tseg") {

TEST_CASE("construction counts on a four-link graph") {
    const auto fx = conflict4();
    const Tseg fresh(fx.topo, fx.cfg);
    CHECK(fresh.vertex_count() == 16);
    CHECK(fresh.free_copy_count() == 16);
    CHECK(fresh.caching_edge_count() == 12);
    CHECK(fresh.inter_hyper_edge_count() == 4);
    for (std::size_t l = 0; l < 4; ++l) {
        for (Slot q = 1; q <= 4; ++q) {
            const Copy c{static_cast<LinkId>(l), q};
            CHECK(fresh.support_periods(c) == std::vector<int>{2, 4});
            CHECK(fresh.weight(c) == 6);
        }
    }
}

TEST_CASE("construction counts on ring-12 with N = 40") {
    const std::vector<std::int64_t> us{60, 120, 240, 480};
    const Tseg t(build_ring(12), SlotConfig::from_micros(us, 12));
    CHECK(t.vertex_count() == 480);
    CHECK(t.free_copy_count() == 960);
}

TEST_CASE("replica slots") {
    CHECK(replica_slots(3, 4, 8) == std::vector<Slot>{3, 7});
    CHECK(replica_slots(1, 1, 4) == std::vector<Slot>{1, 2, 3, 4});
    CHECK(replica_slots(2, 40, 40) == std::vector<Slot>{2});
    CHECK(replica_slots(7, 5, 40) == std::vector<Slot>{2, 7, 12, 17, 22, 27, 32, 37});
}

TEST_CASE("assignment shape checks") {
    Conflict4 c;
    const auto a = c.f1();
    CHECK(a.replicas.size() == 4);
    CHECK(a.delay() == 2);
    // Two transmissions back to back.
    CHECK_THROWS_AS(make_assignment(c.fx.trace[0], 1,
                                    {PathEdge{EdgeKind::Transmission, c.s, c.b, 1, c.sb},
                                     PathEdge{EdgeKind::Transmission, c.b, c.d, 1, c.bd}},
                                    c.fx.topo, c.fx.cfg),
                    ConfigError);
    // Start slot outside [1, p].
    CHECK_THROWS_AS(make_assignment(c.fx.trace[0], 3,
                                    {PathEdge{EdgeKind::Transmission, c.s, c.b, 3, c.sb}}, c.fx.topo,
                                    c.fx.cfg),
                    ConfigError);
}

TEST_CASE("occupy removes every periodic replica") {
    Conflict4 c;
    const auto report = c.tseg.occupy(c.f1());
    auto removed = report.removed;
    std::sort(removed.begin(), removed.end());
    auto expected = copies(c.sb, {1, 3});
    const auto more = copies(c.bd, {2, 4});
    expected.insert(expected.end(), more.begin(), more.end());
    std::sort(expected.begin(), expected.end());
    CHECK(removed == expected);
    for (const auto& x : expected) {
        CHECK_FALSE(c.tseg.is_free(x));
        CHECK(c.tseg.occupant(x) == std::optional<std::string_view>("f1"));
    }
    CHECK(c.tseg.admitted("f1"));
}

TEST_CASE("occupying a taken copy is an atomic conflict") {
    Conflict4 c;
    c.tseg.occupy(c.f1());
    const Tseg before = c.tseg;
    auto other = c.f1();
    other.flow.id = "g";
    CHECK_THROWS_AS(c.tseg.occupy(other), ConflictError);
    CHECK(c.tseg.same_state(before));
    CHECK_THROWS_AS(c.tseg.occupy(c.f1()), ConflictError); // same id again
    CHECK(c.tseg.same_state(before));
}

TEST_CASE("release restores support sets and weights") {
    Conflict4 c;
    const Tseg before = c.tseg;
    c.tseg.occupy(c.f1());
    c.tseg.release("f1");
    CHECK(c.tseg.same_state(before));
    for (const Slot q : {1, 3}) {
        CHECK(c.tseg.support_periods(Copy{c.sb, q}) == std::vector<int>{2, 4});
    }
    CHECK_THROWS_AS(c.tseg.release("f1"), UnknownFlowError);
    Tseg fresh(c.fx.topo, c.fx.cfg);
    CHECK_THROWS_AS(fresh.release("nope"), UnknownFlowError);
}

TEST_CASE("release of one flow equals building the other alone") {
    Conflict4 c;
    c.tseg.occupy(c.f1());
    // f2 on (s,a)@2 then (a,d)@4 via two waits.
    const auto f2 = make_assignment(c.fx.trace[1], 2,
                                    {PathEdge{EdgeKind::Transmission, c.s, c.a, 2, c.sa},
                                     PathEdge{EdgeKind::Caching, c.a, c.a, 2, {}},
                                     PathEdge{EdgeKind::Caching, c.a, c.a, 3, {}},
                                     PathEdge{EdgeKind::Transmission, c.a, c.d, 4, c.ad}},
                                    c.fx.topo, c.fx.cfg);
    c.tseg.occupy(f2);
    c.tseg.release("f1");
    Tseg only_f2 = c.fx.make_tseg();
    only_f2.occupy(f2);
    CHECK(c.tseg.same_state(only_f2));
}

TEST_CASE("gate table export") {
    const auto fx = conflict4();
    const Tseg fresh(fx.topo, fx.cfg);
    CHECK(export_gate_table(fresh) == "link_src,link_dst,slot,flow_id\n");

    Conflict4 c;
    const auto base_rows = gate_rows(c.tseg).size();
    CHECK(base_rows == 6);
    c.tseg.occupy(c.f1());
    const auto rows = gate_rows(c.tseg);
    CHECK(rows.size() == base_rows + 4);
    CHECK(std::count_if(rows.begin(), rows.end(), [](const GateRow& r) { return r.flow_id == "f1"; }) == 4);
    CHECK(std::is_sorted(rows.begin(), rows.end()));
    CHECK(parse_gate_table(export_gate_table(c.tseg)) == rows);
    CHECK_THROWS_AS(parse_gate_table("a,b,c\n"), ParseError);
}

TEST_CASE("gate row count equals the sum of replica counts") {
    std::mt19937_64 rng(11);
    const std::vector<int> periods{2, 4, 8};
    Tseg t(bf::random_topology(5, rng), SlotConfig::from_slots(periods));
    std::size_t expected = 0;
    for (int k = 0; k < 40; ++k) {
        const auto a = bf::random_assignment(t, "r" + std::to_string(k), rng);
        if (!a) {
            continue;
        }
        expected += static_cast<std::size_t>(t.hyper_period() / a->flow.period_slots) *
                    static_cast<std::size_t>(transmission_count(a->path));
        t.occupy(*a);
    }
    CHECK(gate_rows(t).size() == expected);
    CHECK(t.occupancy().busy_count() == expected);
}

} // TEST_SUITE
