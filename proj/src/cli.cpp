#include "ttsched/cli.hpp"

#include "text_util.hpp"
#include "ttsched/errors.hpp"
#include "ttsched/fixtures.hpp"
#include "ttsched/harness.hpp"
#include "ttsched/ilp_model.hpp"
#include "ttsched/oracle.hpp"
#include "ttsched/verifier.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace ttsched {

namespace {

struct Options {
    std::string topology = "ring:12";
    std::string fixture;
    int slot_us = 12;
    std::vector<std::int64_t> periods_us{60, 120, 240, 480};
    std::uint64_t alpha = 2;
    std::uint64_t seed = 1;
    int count = 100;
    std::vector<double> ratios{0.2, 0.2, 0.3, 0.3};
    std::string endpoints = "any";
    std::string scheme = "jrs";
    std::vector<std::string> schemes{"jrs", "wop", "srs", "iras"};
    int seeds = 10;
    std::string mode = "two-label";
    std::string flows_path;
    std::string gate_path;
    std::string out_path;
    std::string results_path;
    std::string limits = "small";
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path);
    if (!f) {
        throw ConfigError("cannot write '" + path + "'");
    }
    f << text;
}

Topology load_topology(const std::string& spec) {
    if (spec == "cev") {
        return build_cev();
    }
    if (spec.rfind("ring:", 0) == 0) {
        return build_ring(text::to_int<int>(std::string_view(spec).substr(5), "ring size"));
    }
    return parse_topology(read_file(spec));
}

// Everything a subcommand works on: network, slots, weights, background
// occupancy and, when known, a trace.
struct Instance {
    Topology topo;
    SlotConfig cfg;
    WeightConfig weights;
    std::vector<Assignment> background;
    std::vector<FlowRequest> trace;
    bool from_fixture = false;

    Tseg make_tseg() const {
        Tseg t(topo, cfg, weights);
        for (const auto& a : background) {
            t.occupy(a);
        }
        return t;
    }
};

TrafficProfile profile_of(const Options& o) {
    TrafficProfile p;
    p.class_ratios = o.ratios;
    p.flow_count = o.count;
    p.seed = o.seed;
    if (o.endpoints == "any") {
        p.endpoints = EndpointPolicy::AnyNode;
    } else if (o.endpoints == "es") {
        p.endpoints = EndpointPolicy::EndSystemsOnly;
    } else {
        throw ConfigError("--endpoints must be 'any' or 'es'");
    }
    return p;
}

Instance load_instance(const Options& o, bool generate_trace) {
    if (!o.fixture.empty()) {
        auto fx = fixture_by_name(o.fixture);
        Instance in{fx.topo, fx.cfg, fx.weights, fx.background, fx.trace, true};
        if (!o.flows_path.empty()) {
            in.trace = parse_trace_csv(read_file(o.flows_path));
        }
        return in;
    }
    Instance in{load_topology(o.topology), SlotConfig::from_micros(o.periods_us, o.slot_us),
                WeightConfig{o.alpha}, {}, {}, false};
    if (!o.flows_path.empty()) {
        in.trace = parse_trace_csv(read_file(o.flows_path));
    } else if (generate_trace) {
        in.trace = generate_flows(profile_of(o), in.cfg, in.topo);
    }
    for (const auto& f : in.trace) {
        validate(f, in.cfg, in.topo);
    }
    return in;
}

void add_network(CLI::App* cmd, Options& o) {
    cmd->add_option("--topology", o.topology, "ring:<n>, cev, or a topology file");
    cmd->add_option("--fixture", o.fixture, "named regression instance (conflict4)");
    cmd->add_option("--slot-us", o.slot_us, "slot length in microseconds");
    cmd->add_option("--periods-us", o.periods_us, "period set in microseconds")->delimiter(',');
    cmd->add_option("--alpha", o.alpha, "edge weight base (>= 2)");
}

void add_traffic(CLI::App* cmd, Options& o) {
    cmd->add_option("--seed", o.seed, "random seed");
    cmd->add_option("--count", o.count, "number of generated flows");
    cmd->add_option("--ratios", o.ratios, "class ratios, ascending period order")->delimiter(',');
    cmd->add_option("--endpoints", o.endpoints, "any | es");
}

int cmd_gen_topology(const Options& o, std::ostream& out) {
    const auto topo = o.fixture.empty() ? load_topology(o.topology) : fixture_by_name(o.fixture).topo;
    write_text(o.out_path, format_topology(topo), out);
    return kExitOk;
}

int cmd_gen_flows(const Options& o, std::ostream& out) {
    const auto in = load_instance(o, true);
    write_text(o.out_path, format_trace_csv(in.trace), out);
    return kExitOk;
}

int cmd_run(const Options& o, std::ostream& out, std::ostream& err) {
    const auto in = load_instance(o, true);
    RunOptions ro;
    if (o.mode == "single-label") {
        ro.mode = LabelMode::SingleLabel;
    } else if (o.mode != "two-label") {
        throw ConfigError("--mode must be 'two-label' or 'single-label'");
    }
    auto tseg = in.make_tseg();
    auto run = run_online(tseg, in.trace, parse_scheme(o.scheme), ro);
    run.result.seed = o.seed;
    for (const auto& w : run.warnings) {
        err << "warning: " << w << '\n';
    }
    const std::vector<ResultRow> rows{to_row(run.result)};
    if (!o.results_path.empty()) {
        write_results(rows, o.results_path);
    }
    if (!o.gate_path.empty()) {
        write_text(o.gate_path, export_gate_table(tseg), out);
    }
    out << "scheme=" << run.result.scheme << " offered=" << run.result.offered
        << " admitted=" << run.result.admitted << '\n';
    return kExitOk;
}

int cmd_compare(const Options& o, std::ostream& out) {
    if (o.seeds < 1) {
        throw ConfigError("--seeds must be at least 1");
    }
    const auto in = load_instance(o, false);
    std::vector<Scheme> schemes;
    for (const auto& s : o.schemes) {
        schemes.push_back(parse_scheme(s));
    }
    std::vector<std::uint64_t> seeds;
    for (int k = 0; k < o.seeds; ++k) {
        seeds.push_back(o.seed + static_cast<std::uint64_t>(k));
    }
    const auto cmp = compare(in.make_tseg(), profile_of(o), schemes, seeds);
    if (!o.results_path.empty()) {
        write_results(cmp.table, o.results_path);
    } else {
        out << format_results(cmp.table);
    }
    for (const auto& s : cmp.summary) {
        out << s.scheme << ": admitted mean=" << text::format_double(s.admitted_mean)
            << " stddev=" << text::format_double(s.admitted_stddev) << '\n';
    }
    return kExitOk;
}

int cmd_export_lp(const Options& o, std::ostream& out) {
    const auto in = load_instance(o, true);
    write_text(o.out_path, export_lp(build_model(in.make_tseg(), in.trace)), out);
    return kExitOk;
}

int cmd_oracle(const Options& o, std::ostream& out) {
    const auto in = load_instance(o, true);
    OracleLimits limits;
    if (o.limits == "ring") {
        limits = OracleLimits::ring_scale();
    } else if (o.limits != "small") {
        throw ConfigError("--limits must be 'small' or 'ring'");
    }
    const auto r = oracle_solve(in.make_tseg(), in.trace, limits);
    out << "optimum=" << r.optimum << '\n';
    for (const auto& a : r.witness) {
        out << a.flow.id << ": start=" << a.start_slot << ' ' << describe_path(a.path, in.topo) << '\n';
    }
    return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
    if (o.gate_path.empty()) {
        throw ConfigError("verify needs --gate");
    }
    const auto in = load_instance(o, false);
    auto flows = in.trace;
    if (in.from_fixture) {
        flows.clear();
        for (const auto& a : in.background) {
            flows.push_back(a.flow);
        }
        flows.insert(flows.end(), in.trace.begin(), in.trace.end());
    }
    const auto rows = parse_gate_table(read_file(o.gate_path));
    const auto violations = verify_gate_table(in.topo, in.cfg, rows, flows);
    for (const auto& v : violations) {
        out << render(v) << '\n';
    }
    if (violations.empty()) {
        out << "ok\n";
        return kExitOk;
    }
    return kExitViolations;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Online joint routing and scheduling for time-triggered Ethernet", "ttsched"};
    app.require_subcommand(1);

    auto* gen_topo = app.add_subcommand("gen-topology", "print a topology in text form");
    add_network(gen_topo, o);
    gen_topo->add_option("--out", o.out_path, "output file (default stdout)");

    auto* gen_flows = app.add_subcommand("gen-flows", "generate a random flow trace");
    add_network(gen_flows, o);
    add_traffic(gen_flows, o);
    gen_flows->add_option("--out", o.out_path, "output file (default stdout)");

    auto* run = app.add_subcommand("run", "schedule a trace online with one scheme");
    add_network(run, o);
    add_traffic(run, o);
    run->add_option("--scheme", o.scheme, "jrs | wop | srs | iras");
    run->add_option("--flows", o.flows_path, "trace CSV (default: generated)");
    run->add_option("--mode", o.mode, "two-label | single-label");
    run->add_option("--results", o.results_path, "results CSV output");
    run->add_option("--gate", o.gate_path, "gate table CSV output");

    auto* cmp = app.add_subcommand("compare", "run several schemes over several seeds");
    add_network(cmp, o);
    add_traffic(cmp, o);
    cmp->add_option("--schemes", o.schemes, "schemes to compare")->delimiter(',');
    cmp->add_option("--seeds", o.seeds, "number of seeds, starting at --seed");
    cmp->add_option("--results", o.results_path, "results CSV output (default stdout)");

    auto* lp = app.add_subcommand("export-lp", "write the integer program as LP text");
    add_network(lp, o);
    add_traffic(lp, o);
    lp->add_option("--flows", o.flows_path, "trace CSV (default: generated)");
    lp->add_option("--out", o.out_path, "output file (default stdout)");

    auto* orc = app.add_subcommand("oracle", "exact maximum number of admissible flows");
    add_network(orc, o);
    add_traffic(orc, o);
    orc->add_option("--flows", o.flows_path, "trace CSV (default: generated)");
    orc->add_option("--limits", o.limits, "small | ring");

    auto* ver = app.add_subcommand("verify", "check a gate table against all constraints");
    add_network(ver, o);
    ver->add_option("--flows", o.flows_path, "trace CSV");
    ver->add_option("--gate", o.gate_path, "gate table CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitConfig;
    }

    try {
        if (*gen_topo) {
            return cmd_gen_topology(o, out);
        }
        if (*gen_flows) {
            return cmd_gen_flows(o, out);
        }
        if (*run) {
            return cmd_run(o, out, err);
        }
        if (*cmp) {
            return cmd_compare(o, out);
        }
        if (*lp) {
            return cmd_export_lp(o, out);
        }
        if (*orc) {
            return cmd_oracle(o, out);
        }
        return cmd_verify(o, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
    } catch (const LimitError& e) {
        err << "limit exceeded: " << e.what() << '\n';
    }
    return kExitConfig;
}

} // namespace ttsched
