#pragma once

#include "topk/core.hpp"
#include "topk/monitor.hpp"
#include "topk/streams.hpp"
#include "topk/transport.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace topk::harness {

struct SimOptions {
	bool verify = true;         // cross-check every answer against the offline oracle
	bool collect_steps = false; // keep per-step reports (init included as the first row)
	bool silent_rounds = false;
};

struct OracleMismatch {
	std::uint64_t t = 0;
	std::vector<NodeId> expected; // ascending
	std::vector<NodeId> actual;   // ascending
};

struct SimulationResult {
	MessageTally tally;      // end-of-run totals
	MessageTally init_tally; // cost of initialization (the t=1 reset)
	std::vector<StepReport> steps;
	bool verified = false; // whether the oracle cross-check ran at all
	bool correctness_ok = true;
	std::optional<OracleMismatch> mismatch;
	std::optional<std::uint64_t> validity_failure_t;
	std::uint64_t handler_invocations = 0;
	std::uint64_t reset_invocations = 0; // initialization included
	// Handler invocations per window between consecutive resets; the handler
	// call that triggers a reset counts toward the window it closes.
	std::vector<std::uint64_t> handler_counts_per_segment;
	std::string event_log;

	std::uint64_t messages_after_init() const { return tally.total() - init_tally.total(); }
};

// Drives the monitor over the whole trace. A mismatch (verify mode) stops the
// run at the offending step and is recorded in the result.
SimulationResult run_simulation(const Trace& trace, std::uint64_t seed, const SimOptions& opts);

/// Echo of everything needed to reproduce a run.
struct RunConfig {
	std::string source;     // generator family name or "csv"
	std::string trace_path; // when loaded from a file
	std::uint32_t n = 0;
	std::uint32_t k = 0;
	std::uint64_t steps = 0;
	std::uint64_t seed = 0;
	bool silent_rounds = false;
	std::optional<streams::GeneratorSpec> generator; // family parameters, when synthetic
};

inline constexpr double kEnvelopeSlack = 8.0;

// One JSON document per run, stable snake_case keys.
nlohmann::json build_report(const RunConfig& config, const Trace& trace,
                            const SimulationResult& result);

void write_per_step_csv(const SimulationResult& result, std::ostream& out);

/// Everything `topkmon simulate` does, callable in-process.
struct SimulateCommand {
	std::optional<std::string> trace_path;             // CSV input, or
	std::optional<streams::GeneratorSpec> generator;   // synthetic input
	std::uint32_t k = 1;
	std::uint64_t seed = 0;
	std::string report_path;    // empty: stdout
	std::string per_step_path;  // empty: skip
	std::string event_log_path; // empty: skip
	bool silent_rounds = false;
	bool verify = true;
};

// Returns the process exit code: 0 on success, 1 when a correctness or
// invariant check failed (a mismatch also writes `<report>.repro.csv`).
int run_simulate_command(const SimulateCommand& cmd, std::ostream& diag);

struct BenchCommand {
	std::uint64_t upper_bound = 16; // N; participants == N
	std::uint64_t trials = 1000;
	bool minimum_mode = false;
	std::uint64_t seed = 0;
};

nlohmann::json run_protocol_bench(const BenchCommand& cmd);

nlohmann::json run_oracle_report(const RunConfig& config, const Trace& trace);

} // namespace topk::harness
