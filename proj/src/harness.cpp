#include "ttsched/harness.hpp"

#include "text_util.hpp"
#include "ttsched/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <sstream>

namespace ttsched {

std::string_view to_string(Scheme s) {
    switch (s) {
    case Scheme::Jrs:
        return "jrs";
    case Scheme::Wop:
        return "wop";
    case Scheme::Srs:
        return "srs";
    case Scheme::Iras:
        return "iras";
    }
    return "?";
}

Scheme parse_scheme(std::string_view token) {
    for (const auto s : {Scheme::Jrs, Scheme::Wop, Scheme::Srs, Scheme::Iras}) {
        if (token == to_string(s)) {
            return s;
        }
    }
    throw ConfigError("unknown scheme '" + std::string(token) + "' (expected jrs, wop, srs or iras)");
}

Decision schedule_with(Scheme scheme, Tseg& tseg, const FlowRequest& flow, const RunOptions& options,
                       SearchStats* stats) {
    switch (scheme) {
    case Scheme::Jrs: {
        SearchOptions opt;
        opt.mode = options.mode;
        return schedule(tseg, flow, opt, stats);
    }
    case Scheme::Wop:
        return schedule_wop(tseg, flow, stats);
    case Scheme::Srs:
        return schedule_srs(tseg, flow, options.baseline, stats);
    case Scheme::Iras:
        return schedule_iras(tseg, flow, options.baseline, stats);
    }
    throw ConfigError("unknown scheme");
}

OnlineRun run_online(Tseg& tseg, std::span<const FlowRequest> trace, Scheme scheme,
                     const RunOptions& options) {
    using Clock = std::chrono::steady_clock;
    const auto& cfg = tseg.config();
    OnlineRun run;
    run.result.scheme = std::string(to_string(scheme));
    run.result.offered = static_cast<int>(trace.size());
    run.result.admitted_by_class.assign(cfg.periods().size(), 0);

    std::vector<double> per_flow_us;
    per_flow_us.reserve(trace.size());
    for (const auto& f : trace) {
        const auto t0 = Clock::now();
        auto d = schedule_with(scheme, tseg, f, options, &run.stats);
        const auto t1 = Clock::now();
        per_flow_us.push_back(std::chrono::duration<double, std::micro>(t1 - t0).count());
        if (d.admitted()) {
            ++run.result.admitted;
            ++run.result.admitted_by_class[*cfg.period_index(f.period_slots)];
        }
        if (!d.warning.empty()) {
            run.warnings.push_back(f.id + ": " + d.warning);
        }
        run.decisions.push_back(std::move(d));
    }

    double total = 0;
    for (const double us : per_flow_us) {
        total += us;
    }
    run.result.runtime_ms_total = total / 1000.0;
    if (!per_flow_us.empty()) {
        run.result.runtime_us_per_flow_mean = total / static_cast<double>(per_flow_us.size());
        std::sort(per_flow_us.begin(), per_flow_us.end());
        const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(per_flow_us.size())));
        run.result.runtime_us_per_flow_p95 = per_flow_us[std::max<std::size_t>(rank, 1) - 1];
    }
    return run;
}

ResultRow to_row(const RunResult& r) {
    ResultRow row;
    row.scheme = r.scheme;
    row.seed = std::to_string(r.seed);
    row.offered = r.offered;
    row.admitted = r.admitted;
    for (std::size_t c = 0; c < 4 && c < r.admitted_by_class.size(); ++c) {
        row.admit_class[c] = r.admitted_by_class[c];
    }
    row.runtime_ms_total = r.runtime_ms_total;
    row.runtime_us_per_flow_mean = r.runtime_us_per_flow_mean;
    return row;
}

Comparison compare(const Tseg& base, const TrafficProfile& profile, std::span<const Scheme> schemes,
                   std::span<const std::uint64_t> seeds, const RunOptions& options, bool parallel) {
    if (seeds.empty()) {
        throw ConfigError("compare needs at least one seed");
    }
    std::vector<std::vector<FlowRequest>> traces;
    for (const auto seed : seeds) {
        auto p = profile;
        p.seed = seed;
        traces.push_back(generate_flows(p, base.config(), base.topology()));
    }

    auto cell = [&](std::size_t s, std::size_t k) {
        Tseg tseg = base;
        auto r = run_online(tseg, traces[k], schemes[s], options).result;
        r.seed = seeds[k];
        return r;
    };
    Comparison out;
    if (parallel) {
        std::vector<std::future<RunResult>> jobs;
        for (std::size_t s = 0; s < schemes.size(); ++s) {
            for (std::size_t k = 0; k < seeds.size(); ++k) {
                jobs.push_back(std::async(std::launch::async, cell, s, k));
            }
        }
        for (auto& j : jobs) {
            out.runs.push_back(j.get());
        }
    } else {
        for (std::size_t s = 0; s < schemes.size(); ++s) {
            for (std::size_t k = 0; k < seeds.size(); ++k) {
                out.runs.push_back(cell(s, k));
            }
        }
    }

    for (const auto& r : out.runs) {
        out.table.push_back(to_row(r));
    }
    const auto count = static_cast<double>(seeds.size());
    for (std::size_t s = 0; s < schemes.size(); ++s) {
        const auto first = out.runs.begin() + static_cast<std::ptrdiff_t>(s * seeds.size());
        const auto last = first + static_cast<std::ptrdiff_t>(seeds.size());
        SchemeSummary sum;
        sum.scheme = std::string(to_string(schemes[s]));
        ResultRow mean;
        mean.scheme = sum.scheme;
        mean.seed = "mean";
        for (auto it = first; it != last; ++it) {
            const auto row = to_row(*it);
            mean.offered += row.offered / count;
            mean.admitted += row.admitted / count;
            for (int c = 0; c < 4; ++c) {
                mean.admit_class[c] += row.admit_class[c] / count;
            }
            mean.runtime_ms_total += row.runtime_ms_total / count;
            mean.runtime_us_per_flow_mean += row.runtime_us_per_flow_mean / count;
        }
        double ss = 0;
        for (auto it = first; it != last; ++it) {
            ss += (it->admitted - mean.admitted) * (it->admitted - mean.admitted);
        }
        sum.admitted_mean = mean.admitted;
        sum.admitted_stddev = seeds.size() > 1 ? std::sqrt(ss / (count - 1)) : 0.0;
        sum.runtime_us_per_flow_mean = mean.runtime_us_per_flow_mean;
        out.summary.push_back(sum);
        out.table.push_back(mean);
    }
    return out;
}

std::string format_results(std::span<const ResultRow> rows) {
    std::ostringstream out;
    out << kResultsHeader << '\n';
    for (const auto& r : rows) {
        out << r.scheme << ',' << r.seed << ',' << text::format_double(r.offered) << ','
            << text::format_double(r.admitted);
        for (const double c : r.admit_class) {
            out << ',' << text::format_double(c);
        }
        out << ',' << text::format_double(r.runtime_ms_total) << ','
            << text::format_double(r.runtime_us_per_flow_mean) << '\n';
    }
    return out.str();
}

std::vector<ResultRow> parse_results(std::string_view csv) {
    const auto lines = text::lines(csv);
    if (lines.empty() || text::trim(lines[0]) != kResultsHeader) {
        throw ParseError("results file must start with header '" + std::string(kResultsHeader) + "'");
    }
    std::vector<ResultRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (text::trim(lines[i]).empty()) {
            continue;
        }
        const auto f = text::split(text::trim(lines[i]), ',');
        if (f.size() != 10) {
            throw ParseError("results line " + std::to_string(i + 1) + ": expected 10 fields");
        }
        ResultRow r;
        r.scheme = std::string(f[0]);
        r.seed = std::string(f[1]);
        r.offered = text::to_double(f[2], "offered");
        r.admitted = text::to_double(f[3], "admitted");
        for (int c = 0; c < 4; ++c) {
            r.admit_class[c] = text::to_double(f[4 + static_cast<std::size_t>(c)], "class count");
        }
        r.runtime_ms_total = text::to_double(f[8], "runtime");
        r.runtime_us_per_flow_mean = text::to_double(f[9], "runtime");
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_results(std::span<const ResultRow> rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot write results to '" + path + "'");
    }
    out << format_results(rows);
    if (!out) {
        throw ConfigError("failed writing results to '" + path + "'");
    }
}

} // namespace ttsched
