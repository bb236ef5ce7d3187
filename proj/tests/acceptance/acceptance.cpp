// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any selected criterion fails. Usage: acceptance [N ...]

#include "support/brute_force.hpp"
#include "ttsched/fixtures.hpp"
#include "ttsched/harness.hpp"
#include "ttsched/ilp_model.hpp"
#include "ttsched/oracle.hpp"
#include "ttsched/verifier.hpp"
#include "ttsched/weighting.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

using namespace ttsched;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x, int digits = 2) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(digits);
    s << x;
    return s.str();
}

std::vector<std::uint64_t> seeds(int count) {
    std::vector<std::uint64_t> out;
    for (int k = 1; k <= count; ++k) {
        out.push_back(static_cast<std::uint64_t>(k));
    }
    return out;
}

Tseg ring12() {
    const std::vector<std::int64_t> us{60, 120, 240, 480};
    return Tseg(build_ring(12), SlotConfig::from_micros(us, 12));
}

double mean_of(const Comparison& c, Scheme s) {
    for (const auto& row : c.summary) {
        if (row.scheme == to_string(s)) {
            return row.admitted_mean;
        }
    }
    return 0.0;
}

Verdict conflict_fixture() {
    const auto t0 = Clock::now();
    const auto fx = conflict4();
    auto a = fx.make_tseg();
    const int jrs = run_online(a, fx.trace, Scheme::Jrs).result.admitted;
    auto b = fx.make_tseg();
    const int wop = run_online(b, fx.trace, Scheme::Wop).result.admitted;
    const int opt = oracle_solve(fx.make_tseg(), fx.trace).optimum;
    auto c = fx.make_tseg();
    const bool repeat = run_online(c, fx.trace, Scheme::Jrs).result.admitted == jrs && c.same_state(a);
    const double secs = seconds_since(t0);
    return {jrs == 3 && wop == 2 && opt == 3 && repeat && secs < 1.0,
            "jrs=" + std::to_string(jrs) + "/3 wop=" + std::to_string(wop) + "/3 optimum=" + std::to_string(opt) +
                " deterministic=" + (repeat ? "yes" : "no") + " time=" + fmt(secs, 3) + "s"};
}

Verdict optimality_gap() {
    const auto t0 = Clock::now();
    const std::vector<int> periods{2, 4, 8};
    const Tseg base(build_ring(6), SlotConfig::from_slots(periods));
    double jrs = 0;
    double opt = 0;
    const int runs = 20;
    for (const auto seed : seeds(runs)) {
        TrafficProfile prof;
        prof.class_ratios = {0.4, 0.3, 0.3};
        prof.flow_count = 8;
        prof.seed = seed;
        const auto trace = generate_flows(prof, base.config(), base.topology());
        Tseg t = base;
        jrs += run_online(t, trace, Scheme::Jrs).result.admitted;
        opt += oracle_solve(base, trace, OracleLimits::ring_scale()).optimum;
    }
    const double secs = seconds_since(t0);
    jrs /= runs;
    opt /= runs;
    return {jrs >= 0.90 * opt && secs < 60.0,
            "mean jrs=" + fmt(jrs) + " mean optimum=" + fmt(opt) + " ratio=" + fmt(jrs / opt, 3) +
                " (need >= 0.900) time=" + fmt(secs) + "s"};
}

struct Ordering {
    double jrs = 0, wop = 0, srs = 0, iras = 0, secs = 0;
    double gap() const { return (jrs - wop) / wop; }
    std::string text() const {
        return "mean jrs=" + fmt(jrs) + " srs=" + fmt(srs) + " wop=" + fmt(wop) + " iras=" + fmt(iras) +
               " jrs/wop=" + fmt(jrs / wop, 3) + " jrs/iras=" + fmt(jrs / iras, 3) + " time=" + fmt(secs) + "s";
    }
};

Ordering ordering(std::vector<double> ratios) {
    const auto t0 = Clock::now();
    TrafficProfile prof;
    prof.class_ratios = std::move(ratios);
    prof.flow_count = 140;
    const std::vector<Scheme> schemes{Scheme::Jrs, Scheme::Wop, Scheme::Srs, Scheme::Iras};
    const auto s = seeds(20);
    const auto cmp = compare(ring12(), prof, schemes, s);
    Ordering o;
    o.jrs = mean_of(cmp, Scheme::Jrs);
    o.wop = mean_of(cmp, Scheme::Wop);
    o.srs = mean_of(cmp, Scheme::Srs);
    o.iras = mean_of(cmp, Scheme::Iras);
    o.secs = seconds_since(t0);
    return o;
}

Verdict scheme_ordering() {
    const auto o = ordering({0.2, 0.2, 0.3, 0.3});
    const bool pass = o.jrs >= o.srs && o.jrs >= 1.10 * o.wop && o.jrs >= 1.10 * o.iras && o.secs < 300.0;
    return {pass, o.text()};
}

Verdict ratio_shift() {
    const auto base = ordering({0.2, 0.2, 0.3, 0.3});
    const auto shifted = ordering({0.3, 0.3, 0.2, 0.2});
    return {shifted.gap() > base.gap(),
            "jrs-over-wop gap " + fmt(100 * base.gap(), 1) + "% -> " + fmt(100 * shifted.gap(), 1) +
                "% (need strictly larger); shifted " + shifted.text()};
}

Verdict latency_budget() {
    double total_us = 0;
    int flows = 0;
    for (const auto seed : seeds(5)) {
        auto t = ring12();
        TrafficProfile prof;
        prof.flow_count = 140;
        prof.seed = seed;
        const auto trace = generate_flows(prof, t.config(), t.topology());
        const auto r = run_online(t, trace, Scheme::Jrs).result;
        total_us += r.runtime_us_per_flow_mean * r.offered;
        flows += r.offered;
    }
    const double mean_ms = total_us / flows / 1000.0;
    return {mean_ms <= 10.0, "mean " + fmt(mean_ms, 3) + " ms per flow over " + std::to_string(flows) +
                                 " flows (budget 10 ms)"};
}

bool scratch_equal(const Tseg& t) {
    for (std::size_t l = 0; l < t.topology().link_count(); ++l) {
        for (Slot q = 1; q <= t.hyper_period(); ++q) {
            const Copy c{static_cast<LinkId>(l), q};
            if (t.support_periods(c) != bf::support(t, c) || t.weight(c) != bf::weight(t, c)) {
                return false;
            }
        }
    }
    return true;
}

Verdict invariants() {
    std::mt19937_64 rng(6006);
    const std::vector<std::vector<int>> period_sets{{2, 4}, {2, 4, 8}, {2, 3}, {1, 2, 4}};
    int ops = 0;
    bool a = true, b = true, c = true, d = true;
    for (int graph = 0; graph < 10; ++graph) {
        const int nodes = std::uniform_int_distribution<int>(3, 6)(rng);
        const auto& periods = period_sets[static_cast<std::size_t>(graph) % period_sets.size()];
        Tseg t(bf::random_topology(nodes, rng), SlotConfig::from_slots(periods));
        std::vector<std::string> live;
        for (int step = 0; step < 100; ++step, ++ops) {
            if (!live.empty() && std::uniform_int_distribution<int>(0, 3)(rng) == 0) {
                const auto k = std::uniform_int_distribution<std::size_t>(0, live.size() - 1)(rng);
                t.release(live[k]);
                live.erase(live.begin() + static_cast<std::ptrdiff_t>(k));
            } else {
                // Alternate between random placements and scheduler admissions.
                const auto id = "g" + std::to_string(graph) + "_" + std::to_string(step);
                const Tseg before = t;
                const auto w0 = total_weight(t);
                bool added = false;
                if (step % 2 == 0) {
                    if (const auto x = bf::random_assignment(t, id, rng)) {
                        t.occupy(*x);
                        added = true;
                    }
                } else {
                    const auto src = static_cast<NodeId>(std::uniform_int_distribution<int>(0, nodes - 1)(rng));
                    const auto dst = static_cast<NodeId>((index(src) + 1 + static_cast<std::size_t>(step) % static_cast<std::size_t>(nodes - 1)) % static_cast<std::size_t>(nodes));
                    const int p = periods[static_cast<std::size_t>(step) % periods.size()];
                    const FlowRequest f{id, step, t.topology().node(src).name, t.topology().node(dst).name, p, 4 * p};
                    added = schedule(t, f).admitted();
                }
                if (added) {
                    b = b && total_weight(t) < w0;
                    Tseg undo = t;
                    undo.release(id);
                    d = d && undo.same_state(before);
                    live.push_back(id);
                }
            }
            a = a && scratch_equal(t);
        }
        std::vector<Assignment> all;
        for (const auto& [id, x] : t.assignments()) {
            all.push_back(x);
        }
        c = c && verify_schedule(t.topology(), t.config(), all).empty();
    }
    const auto yn = [](bool x) { return x ? "ok" : "broken"; };
    return {a && b && c && d && ops == 1000,
            std::to_string(ops) + " ops: scratch-equal " + yn(a) + ", weight decrease " + yn(b) + ", verifier " +
                yn(c) + ", occupy/release identity " + yn(d)};
}

Verdict search_exactness() {
    std::mt19937_64 rng(7007);
    const std::vector<std::vector<int>> period_sets{{2, 4}, {2, 4, 8}, {2, 3}, {4, 8}, {2, 6}};
    int checks = 0;
    int mismatches = 0;
    int rejections = 0;
    for (int round = 0; round < 80; ++round) {
        const int nodes = std::uniform_int_distribution<int>(3, 6)(rng);
        const auto& periods = period_sets[static_cast<std::size_t>(round) % period_sets.size()];
        Tseg t(bf::random_topology(nodes, rng), SlotConfig::from_slots(periods));
        const int background = std::uniform_int_distribution<int>(0, 30)(rng);
        for (int k = 0; k < background; ++k) {
            if (const auto x = bf::random_assignment(t, "bg" + std::to_string(k), rng)) {
                t.occupy(*x);
            }
        }
        for (int k = 0; k < 8; ++k) {
            const auto src = static_cast<NodeId>(std::uniform_int_distribution<int>(0, nodes - 1)(rng));
            const auto dst = static_cast<NodeId>((index(src) + 1 + static_cast<std::size_t>(k) % static_cast<std::size_t>(nodes - 1)) % static_cast<std::size_t>(nodes));
            const int p = periods[std::uniform_int_distribution<std::size_t>(0, periods.size() - 1)(rng)];
            const int m = std::uniform_int_distribution<int>(1, 4 * p)(rng);
            const FlowRequest f{"q", 1, t.topology().node(src).name, t.topology().node(dst).name, p, m};
            bf::MinWeight brute(t, src, dst, p, m);
            const auto cands = candidate_paths(t, f);
            for (Slot i = 1; i <= p; ++i) {
                const auto want = brute.from_start(i);
                const auto& got = cands[static_cast<std::size_t>(i - 1)];
                const bool same = want == bf::kInf ? !got.has_value() : (got && got->weight == want);
                mismatches += same ? 0 : 1;
                rejections += want == bf::kInf ? 1 : 0;
                ++checks;
            }
        }
    }
    return {mismatches == 0 && rejections > 0,
            std::to_string(checks) + " (instance, start slot) pairs, " + std::to_string(rejections) +
                " infeasible, " + std::to_string(mismatches) + " mismatches"};
}

Verdict lp_fidelity() {
    const auto fx = conflict4();
    const auto t = fx.make_tseg();
    const auto model = build_model(t, fx.trace);
    const bool round_trip = parse_lp(export_lp(model)) == model;

    // Counts from the formulation: free copies |E'_tx|, nodes |V|, N, flows |F|.
    std::size_t free_copies = 0;
    for (std::size_t l = 0; l < fx.topo.link_count(); ++l) {
        for (Slot q = 1; q <= fx.cfg.hyper_period(); ++q) {
            free_copies += t.is_free(Copy{static_cast<LinkId>(l), q}) ? 1 : 0;
        }
    }
    const std::size_t nodes = fx.topo.node_count();
    const auto n = static_cast<std::size_t>(fx.cfg.hyper_period());
    const std::size_t flows = fx.trace.size();
    std::size_t short_period = 0;
    for (const auto& f : fx.trace) {
        short_period += static_cast<std::size_t>(f.period_slots) < n ? 1 : 0;
    }
    const std::size_t want_vars = flows * (free_copies + nodes * n) + flows;
    const std::size_t want_rows = flows * (nodes - 2) * n * 3 + flows * 3 + free_copies + short_period * free_copies;
    const bool counts = model.vars.size() == want_vars && model.rows.size() == want_rows;
    return {round_trip && counts, std::string("round trip ") + (round_trip ? "equal" : "differs") + ", vars " +
                                      std::to_string(model.vars.size()) + "/" + std::to_string(want_vars) + ", rows " +
                                      std::to_string(model.rows.size()) + "/" + std::to_string(want_rows)};
}

struct Criterion {
    int id;
    const char* name;
    std::function<Verdict()> run;
};

} // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all{
        {1, "conflict fixture exactness", conflict_fixture},
        {2, "optimality gap on ring-6", optimality_gap},
        {3, "scheme ordering on ring-12", scheme_ordering},
        {4, "ratio-shift sensitivity", ratio_shift},
        {5, "per-flow latency budget", latency_budget},
        {6, "invariant suites", invariants},
        {7, "search exactness", search_exactness},
        {8, "lp export fidelity", lp_fidelity},
    };
    std::vector<int> wanted;
    for (int k = 1; k < argc; ++k) {
        wanted.push_back(std::atoi(argv[k]));
    }
    bool ok = true;
    for (const auto& c : all) {
        if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) {
            continue;
        }
        const auto v = c.run();
        ok = ok && v.pass;
        std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << v.detail
                  << std::endl;
    }
    return ok ? 0 : 1;
}
