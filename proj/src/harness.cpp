#include "topk/harness.hpp"

#include "topk/oracle.hpp"
#include "topk/protocols.hpp"
#include "topk/random.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace topk::harness {

namespace {

std::vector<NodeId> oracle_answer(const Trace& trace, std::uint64_t t) {
	auto ids = oracle::brute_force_top_k(trace, t);
	std::sort(ids.begin(), ids.end());
	return ids;
}

std::string join_ids(const std::vector<NodeId>& ids) {
	std::string out;
	for (std::size_t i = 0; i < ids.size(); ++i) {
		if (i)
			out += ";";
		out += std::to_string(ids[i]);
	}
	return out;
}

void write_text_file(const std::string& path, const std::string& text) {
	std::ofstream out(path, std::ios::binary);
	if (!out)
		throw std::runtime_error("cannot open for writing: " + path);
	out << text;
}

nlohmann::json tally_json(const MessageTally& tally) {
	nlohmann::json j;
	j["protocol_upload"] = tally.count(MessageKind::ProtocolUpload);
	j["protocol_round_broadcast"] = tally.count(MessageKind::ProtocolRoundBroadcast);
	j["filter_broadcast"] = tally.count(MessageKind::FilterBroadcast);
	j["initiation_broadcast"] = tally.count(MessageKind::InitiationBroadcast);
	j["direct_down"] = tally.count(MessageKind::DirectDown);
	j["total"] = tally.total();
	return j;
}

nlohmann::json config_json(const RunConfig& config) {
	nlohmann::json j;
	j["source"] = config.source;
	j["trace_path"] = config.trace_path;
	j["n"] = config.n;
	j["k"] = config.k;
	j["steps"] = config.steps;
	j["seed"] = config.seed;
	j["silent_rounds"] = config.silent_rounds;
	if (config.generator) {
		const auto& g = *config.generator;
		j["generator"] = {{"seed", g.seed},         {"value_lo", g.value_lo},
		                  {"value_hi", g.value_hi}, {"step_size", g.step_size},
		                  {"amplitude", g.amplitude}, {"period", g.period},
		                  {"distinct", g.distinct}};
	}
	return j;
}

} // namespace

SimulationResult run_simulation(const Trace& trace, std::uint64_t seed, const SimOptions& opts) {
	trace.validate();

	SimulationResult result;
	result.verified = opts.verify;
	RandomSource rng(seed);
	Fabric fabric;
	MonitorContext ctx{&rng, &fabric, opts.silent_rounds, 0};

	auto check_step = [&](std::uint64_t t, const std::vector<NodeId>& answer,
	                      const CoordinatorState& state) {
		if (!opts.verify)
			return true;
		const auto expected = oracle_answer(trace, t);
		if (answer != expected) {
			result.correctness_ok = false;
			result.mismatch = OracleMismatch{t, expected, answer};
			return false;
		}
		const auto& row = trace.row(t);
		if (!validate_filter_set(state.filters, row.values, trace.k).valid()) {
			result.correctness_ok = false;
			result.validity_failure_t = t;
			return false;
		}
		return true;
	};

	auto state = monitor_initialize(trace.row(1), trace.k, ctx);
	result.init_tally = fabric.tally_snapshot();
	result.reset_invocations = 1;
	std::uint64_t open_segment = 0;

	if (opts.collect_steps) {
		StepReport init_report;
		init_report.t = trace.row(1).t;
		init_report.reset_invoked = true;
		init_report.tally_delta = result.init_tally;
		init_report.answer = state.answer();
		result.steps.push_back(std::move(init_report));
	}

	bool ok = check_step(1, state.answer(), state);
	if (ok) {
		for (std::uint64_t t = 2; t <= trace.steps; ++t) {
			StepReport report;
			state = monitor_step(state, trace.row(t), ctx, report);
			if (report.handler_invoked) {
				result.handler_invocations++;
				open_segment++;
			}
			if (report.reset_invoked) {
				result.reset_invocations++;
				result.handler_counts_per_segment.push_back(open_segment);
				open_segment = 0;
			}
			if (opts.collect_steps)
				result.steps.push_back(report);
			if (!check_step(t, report.answer, state))
				break;
		}
	}
	result.handler_counts_per_segment.push_back(open_segment);

	result.tally = fabric.tally_snapshot();
	result.event_log = fabric.export_event_log_text();
	return result;
}

nlohmann::json build_report(const RunConfig& config, const Trace& trace,
                            const SimulationResult& result) {
	const Value delta = oracle::compute_delta(trace);
	const auto partition = oracle::opt_lower_bound(trace);
	const double envelope =
	    oracle::competitive_envelope(delta, trace.k, trace.n, partition.lower_bound);
	const auto total = result.tally.total();

	nlohmann::json j;
	j["config"] = config_json(config);
	j["tally"] = tally_json(result.tally);
	j["init_messages"] = result.init_tally.total();
	j["messages_after_init"] = result.messages_after_init();
	j["delta"] = delta;
	j["opt_lower_bound"] = partition.lower_bound;
	j["empirical_ratio"] =
	    static_cast<double>(total) / static_cast<double>(partition.lower_bound);
	j["envelope"] = envelope;
	j["envelope_slack"] = kEnvelopeSlack;
	j["within_envelope"] = static_cast<double>(total) <= envelope * kEnvelopeSlack;
	j["handler_invocations"] = result.handler_invocations;
	j["reset_invocations"] = result.reset_invocations;
	j["max_handler_count_between_resets"] =
	    result.handler_counts_per_segment.empty()
	        ? 0
	        : *std::max_element(result.handler_counts_per_segment.begin(),
	                            result.handler_counts_per_segment.end());
	j["correctness_checked"] = result.verified && result.correctness_ok;
	return j;
}

void write_per_step_csv(const SimulationResult& result, std::ostream& out) {
	out << "t,violations,handler,reset,messages,answer\n";
	for (const auto& s : result.steps) {
		out << s.t << "," << join_ids(s.violations) << "," << (s.handler_invoked ? 1 : 0) << ","
		    << (s.reset_invoked ? 1 : 0) << "," << s.tally_delta.total() << ","
		    << join_ids(s.answer) << "\n";
	}
}

int run_simulate_command(const SimulateCommand& cmd, std::ostream& diag) {
	Trace trace;
	RunConfig config;
	config.k = cmd.k;
	config.seed = cmd.seed;
	config.silent_rounds = cmd.silent_rounds;

	if (cmd.trace_path) {
		trace = streams::load_csv(*cmd.trace_path, cmd.k);
		config.source = "csv";
		config.trace_path = *cmd.trace_path;
	} else if (cmd.generator) {
		auto spec = *cmd.generator;
		spec.k = cmd.k;
		trace = streams::generate(spec);
		config.source = streams::family_name(spec.family);
		config.generator = spec;
	} else {
		throw std::invalid_argument("simulate: need a trace file or a generator family");
	}
	config.n = trace.n;
	config.steps = trace.steps;

	SimOptions opts;
	opts.verify = cmd.verify;
	opts.collect_steps = !cmd.per_step_path.empty();
	opts.silent_rounds = cmd.silent_rounds;

	const auto result = run_simulation(trace, cmd.seed, opts);
	const auto report = build_report(config, trace, result);

	const std::string report_text = report.dump(2) + "\n";
	if (cmd.report_path.empty())
		diag << report_text;
	else
		write_text_file(cmd.report_path, report_text);

	if (!cmd.per_step_path.empty()) {
		std::ostringstream os;
		write_per_step_csv(result, os);
		write_text_file(cmd.per_step_path, os.str());
	}
	if (!cmd.event_log_path.empty())
		write_text_file(cmd.event_log_path, result.event_log);

	if (result.mismatch) {
		// minimal reproduction: the trace slice around the failure, renumbered to 1..len
		const auto& mm = *result.mismatch;
		const std::uint64_t from = mm.t > 2 ? mm.t - 2 : 1;
		Trace slice{trace.n, trace.k, mm.t - from + 1, {}};
		for (std::uint64_t t = from; t <= mm.t; ++t) {
			Snapshot snap = trace.row(t);
			snap.t = t - from + 1;
			slice.rows.push_back(std::move(snap));
		}
		const std::string repro_path =
		    (cmd.report_path.empty() ? std::string("mismatch") : cmd.report_path) + ".repro.csv";
		streams::save_csv(slice, repro_path);
		diag << "answer mismatch at t=" << mm.t << " (expected {" << join_ids(mm.expected)
		     << "}, got {" << join_ids(mm.actual) << "}); seed=" << cmd.seed
		     << "; trace slice from t=" << from << " written to " << repro_path << "\n";
		return 1;
	}
	if (result.validity_failure_t) {
		diag << "filter-set validity failed at t=" << *result.validity_failure_t
		     << "; seed=" << cmd.seed << "\n";
		return 1;
	}
	return 0;
}

nlohmann::json run_protocol_bench(const BenchCommand& cmd) {
	if (cmd.trials < 1)
		throw std::invalid_argument("protocol-bench: need at least one trial");
	const std::uint64_t n = cmd.upper_bound;
	const RandomSource rng(cmd.seed);

	double sum = 0.0, sum_sq = 0.0;
	std::uint64_t max_uploads = 0;
	double broadcast_sum = 0.0, broadcast_sum_sq = 0.0;
	std::uint64_t max_broadcasts = 0;
	std::vector<std::uint64_t> rank_sent(n + 1, 0);

	for (std::uint64_t trial = 0; trial < cmd.trials; ++trial) {
		// values are the permuted ranks: value v has rank n + 1 - v
		std::vector<Value> values(n);
		for (std::uint64_t i = 0; i < n; ++i)
			values[i] = i + 1;
		deterministic_shuffle(values, rng, trial);

		ProtocolConfig config;
		config.mode = cmd.minimum_mode ? ExtremumMode::Min : ExtremumMode::Max;
		config.upper_bound = n;
		config.participants.reserve(n);
		for (NodeId id = 1; id <= n; ++id)
			config.participants.push_back({id, values[id - 1]});

		Fabric fabric;
		fabric.set_time(trial);
		const auto outcome = run_extremum(config, rng, fabric, trial);

		const auto uploads = outcome.uploads;
		sum += static_cast<double>(uploads);
		sum_sq += static_cast<double>(uploads) * static_cast<double>(uploads);
		max_uploads = std::max(max_uploads, uploads);
		broadcast_sum += static_cast<double>(outcome.round_broadcasts);
		broadcast_sum_sq +=
		    static_cast<double>(outcome.round_broadcasts) * static_cast<double>(outcome.round_broadcasts);
		max_broadcasts = std::max(max_broadcasts, outcome.round_broadcasts);
		for (NodeId sender : outcome.senders) {
			const std::uint64_t rank =
			    cmd.minimum_mode ? values[sender - 1] : n + 1 - values[sender - 1];
			rank_sent[rank]++;
		}
	}

	const double trials = static_cast<double>(cmd.trials);
	const double mean = sum / trials;
	const double variance = std::max(0.0, sum_sq / trials - mean * mean);
	const double stddev = std::sqrt(variance);
	const double mean_bound = 2.0 * std::log2(static_cast<double>(n)) + 1.0;
	const double three_se = 3.0 * stddev / std::sqrt(trials);

	nlohmann::json j;
	j["config"] = {{"upper_bound", n},
	               {"trials", cmd.trials},
	               {"mode", cmd.minimum_mode ? "min" : "max"},
	               {"seed", cmd.seed}};
	j["uploads"] = {{"mean", mean},
	                {"stddev", stddev},
	                {"max", max_uploads},
	                {"bound", mean_bound},
	                {"within_bound_3se", mean <= mean_bound + three_se}};
	const double bmean = broadcast_sum / trials;
	j["round_broadcasts"] = {
	    {"mean", bmean},
	    {"stddev", std::sqrt(std::max(0.0, broadcast_sum_sq / trials - bmean * bmean))},
	    {"max", max_broadcasts}};

	nlohmann::json ranks = nlohmann::json::array();
	for (std::uint64_t rank = 1; rank <= n; rank <<= 1) {
		const double freq = static_cast<double>(rank_sent[rank]) / trials;
		ranks.push_back({{"rank", rank},
		                 {"frequency", freq},
		                 {"lemma3_bound", lemma3_bound(rank, n)}});
	}
	if ((n & (n - 1)) != 0) {
		const double freq = static_cast<double>(rank_sent[n]) / trials;
		ranks.push_back({{"rank", n}, {"frequency", freq}, {"lemma3_bound", lemma3_bound(n, n)}});
	}
	j["per_rank"] = ranks;
	return j;
}

nlohmann::json run_oracle_report(const RunConfig& config, const Trace& trace) {
	const auto partition = oracle::opt_lower_bound(trace);
	const Value delta = oracle::compute_delta(trace);

	nlohmann::json intervals = nlohmann::json::array();
	for (const auto& iv : partition.intervals)
		intervals.push_back({iv.start, iv.end});

	nlohmann::json j;
	j["config"] = config_json(config);
	j["delta"] = delta;
	j["opt_lower_bound"] = partition.lower_bound;
	j["intervals"] = intervals;
	return j;
}

} // namespace topk::harness
