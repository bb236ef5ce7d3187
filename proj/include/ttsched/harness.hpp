#pragma once

#include "ttsched/baselines.hpp"
#include "ttsched/scheduler.hpp"
#include "ttsched/traffic.hpp"
#include "ttsched/tseg.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ttsched {

enum class Scheme { Jrs, Wop, Srs, Iras };

std::string_view to_string(Scheme s);
Scheme parse_scheme(std::string_view token); // jrs | wop | srs | iras

struct RunOptions {
    LabelMode mode = LabelMode::TwoLabel; // for jrs
    BaselineOptions baseline;
};

/// Schedules one flow with the given scheme.
Decision schedule_with(Scheme scheme, Tseg& tseg, const FlowRequest& flow,
                       const RunOptions& options = {}, SearchStats* stats = nullptr);

struct RunResult {
    std::string scheme;
    std::uint64_t seed = 0;
    int offered = 0;
    int admitted = 0;
    std::vector<int> admitted_by_class; // ascending period order
    double runtime_ms_total = 0.0;
    double runtime_us_per_flow_mean = 0.0;
    double runtime_us_per_flow_p95 = 0.0;
};

struct OnlineRun {
    RunResult result;
    std::vector<Decision> decisions; // one per trace entry
    std::vector<std::string> warnings;
    SearchStats stats;
};

/// Feeds the trace in arrival order to one persistent expanded graph.
/// Rejected flows are not retried. Only the scheduling call is timed.
OnlineRun run_online(Tseg& tseg, std::span<const FlowRequest> trace, Scheme scheme,
                     const RunOptions& options = {});

/// One CSV line of the results file; aggregate lines carry seed "mean".
struct ResultRow {
    std::string scheme;
    std::string seed;
    double offered = 0;
    double admitted = 0;
    double admit_class[4] = {0, 0, 0, 0};
    double runtime_ms_total = 0;
    double runtime_us_per_flow_mean = 0;

    bool operator==(const ResultRow&) const = default;
};

struct SchemeSummary {
    std::string scheme;
    double admitted_mean = 0;
    double admitted_stddev = 0; // sample standard deviation
    double runtime_us_per_flow_mean = 0;
};

struct Comparison {
    std::vector<RunResult> runs;         // scheme-major, then seed order
    std::vector<SchemeSummary> summary;  // one per scheme
    std::vector<ResultRow> table;        // per-run rows then one mean row per scheme
};

/// Runs every (scheme, seed) cell on a private copy of `base`; for each seed
/// all schemes consume the same generated trace. Cells run concurrently when
/// `parallel` is set.
Comparison compare(const Tseg& base, const TrafficProfile& profile, std::span<const Scheme> schemes,
                   std::span<const std::uint64_t> seeds, const RunOptions& options = {},
                   bool parallel = true);

ResultRow to_row(const RunResult& r);

inline constexpr std::string_view kResultsHeader =
    "scheme,seed,offered,admitted,admit_p5,admit_p10,admit_p20,admit_p40,runtime_ms_total,"
    "runtime_us_per_flow_mean";

std::string format_results(std::span<const ResultRow> rows);
std::vector<ResultRow> parse_results(std::string_view text);
/// Throws ConfigError when the file cannot be written.
void write_results(std::span<const ResultRow> rows, const std::string& path);

} // namespace ttsched
