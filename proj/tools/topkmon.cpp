// topkmon: simulate filter-based top-k position monitoring, benchmark the
// randomized extremum protocol, and compute offline lower bounds.

#include "topk/harness.hpp"
#include "topk/oracle.hpp"
#include "topk/streams.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct GeneratorFlags {
	std::string family;
	std::uint32_t n = 8;
	std::uint64_t steps = 100;
	std::uint64_t value_lo = 0;
	std::uint64_t value_hi = 1u << 20;
	std::uint64_t step_size = 64;
	std::uint64_t amplitude = 8;
	std::uint64_t period = 1;
	bool allow_ties = false;
};

void add_generator_flags(CLI::App* app, GeneratorFlags& flags, bool require_family) {
	auto* family = app->add_option("--family", flags.family,
	                               "generator family: random-walk|uniform|adversarial|constant");
	if (require_family)
		family->required();
	app->add_option("--n", flags.n, "number of nodes");
	app->add_option("--t", flags.steps, "number of time steps");
	app->add_option("--lo", flags.value_lo, "smallest generated value");
	app->add_option("--hi", flags.value_hi, "largest generated value");
	app->add_option("--step-size", flags.step_size, "random-walk step bound");
	app->add_option("--amplitude", flags.amplitude, "adversarial crossing distance");
	app->add_option("--period", flags.period, "steps between adversarial crossings");
	app->add_flag("--allow-ties", flags.allow_ties, "do not force distinct values");
}

topk::streams::GeneratorSpec to_spec(const GeneratorFlags& flags, std::uint32_t k,
                                     std::uint64_t seed) {
	topk::streams::GeneratorSpec spec;
	spec.family = topk::streams::parse_family(flags.family);
	spec.n = flags.n;
	spec.k = k;
	spec.steps = flags.steps;
	spec.seed = seed;
	spec.value_lo = flags.value_lo;
	spec.value_hi = flags.value_hi;
	spec.step_size = flags.step_size;
	spec.amplitude = flags.amplitude;
	spec.period = flags.period;
	spec.distinct = !flags.allow_ties;
	return spec;
}

} // namespace

int main(int argc, char** argv) {
	CLI::App app{"filter-based top-k position monitoring simulator"};
	app.require_subcommand(1);

	// --- simulate ---
	auto* sim = app.add_subcommand("simulate", "run the monitor over a trace and report messages");
	std::string sim_trace;
	GeneratorFlags sim_gen;
	std::uint32_t sim_k = 1;
	std::uint64_t sim_seed = 0;
	std::string sim_report, sim_per_step, sim_event_log;
	bool sim_silent_rounds = false, sim_no_verify = false;
	sim->add_option("--trace", sim_trace, "input trace CSV (t,node,value)");
	add_generator_flags(sim, sim_gen, false);
	sim->add_option("--k", sim_k, "size of the monitored top set")->required();
	sim->add_option("--seed", sim_seed, "master seed");
	sim->add_option("--report", sim_report, "write the JSON report here (default: stdout)");
	sim->add_option("--per-step", sim_per_step, "write a per-step CSV sidecar");
	sim->add_option("--event-log", sim_event_log, "write the message event log");
	sim->add_flag("--silent-rounds", sim_silent_rounds,
	              "suppress protocol round broadcasts that repeat the last value");
	sim->add_flag("--no-verify", sim_no_verify, "skip the per-step oracle cross-check");

	// --- protocol-bench ---
	auto* bench = app.add_subcommand("protocol-bench", "repeated extremum protocol statistics");
	topk::harness::BenchCommand bench_cmd;
	std::string bench_mode = "max";
	std::string bench_report;
	bench->add_option("--n", bench_cmd.upper_bound, "participant count and upper bound N")
	    ->required();
	bench->add_option("--trials", bench_cmd.trials, "number of seeded protocol runs");
	bench->add_option("--mode", bench_mode, "max|min");
	bench->add_option("--seed", bench_cmd.seed, "master seed");
	bench->add_option("--report", bench_report, "write the JSON record here (default: stdout)");

	// --- oracle ---
	auto* orc = app.add_subcommand("oracle", "offline optimal lower bound and delta for a trace");
	std::string orc_trace;
	GeneratorFlags orc_gen;
	std::uint32_t orc_k = 1;
	std::uint64_t orc_seed = 0;
	std::string orc_report;
	orc->add_option("--trace", orc_trace, "input trace CSV");
	add_generator_flags(orc, orc_gen, false);
	orc->add_option("--k", orc_k, "size of the monitored top set")->required();
	orc->add_option("--seed", orc_seed, "generator seed");
	orc->add_option("--report", orc_report, "write the JSON record here (default: stdout)");

	// --- gen ---
	auto* gen = app.add_subcommand("gen", "generate a synthetic trace CSV");
	GeneratorFlags gen_flags;
	std::uint32_t gen_k = 1;
	std::uint64_t gen_seed = 0;
	std::string gen_out;
	add_generator_flags(gen, gen_flags, true);
	gen->add_option("--k", gen_k, "size of the monitored top set");
	gen->add_option("--seed", gen_seed, "generator seed");
	gen->add_option("--out", gen_out, "output CSV path")->required();

	CLI11_PARSE(app, argc, argv);

	try {
		if (sim->parsed()) {
			topk::harness::SimulateCommand cmd;
			if (!sim_trace.empty())
				cmd.trace_path = sim_trace;
			else if (!sim_gen.family.empty())
				cmd.generator = to_spec(sim_gen, sim_k, sim_seed);
			else {
				std::cerr << "simulate: pass --trace or --family\n";
				return 2;
			}
			cmd.k = sim_k;
			cmd.seed = sim_seed;
			cmd.report_path = sim_report;
			cmd.per_step_path = sim_per_step;
			cmd.event_log_path = sim_event_log;
			cmd.silent_rounds = sim_silent_rounds;
			cmd.verify = !sim_no_verify;
			return topk::harness::run_simulate_command(cmd, std::cout);
		}
		if (bench->parsed()) {
			if (bench_mode != "max" && bench_mode != "min") {
				std::cerr << "protocol-bench: --mode must be max or min\n";
				return 2;
			}
			bench_cmd.minimum_mode = bench_mode == "min";
			const auto record = topk::harness::run_protocol_bench(bench_cmd);
			const std::string text = record.dump(2) + "\n";
			if (bench_report.empty())
				std::cout << text;
			else {
				std::ofstream out(bench_report, std::ios::binary);
				if (!out)
					throw std::runtime_error("cannot open for writing: " + bench_report);
				out << text;
			}
			return 0;
		}
		if (orc->parsed()) {
			topk::Trace trace;
			topk::harness::RunConfig config;
			if (!orc_trace.empty()) {
				trace = topk::streams::load_csv(orc_trace, orc_k);
				config.source = "csv";
				config.trace_path = orc_trace;
			} else if (!orc_gen.family.empty()) {
				const auto spec = to_spec(orc_gen, orc_k, orc_seed);
				trace = topk::streams::generate(spec);
				config.source = orc_gen.family;
				config.generator = spec;
			} else {
				std::cerr << "oracle: pass --trace or --family\n";
				return 2;
			}
			config.n = trace.n;
			config.k = trace.k;
			config.steps = trace.steps;
			config.seed = orc_seed;
			const auto record = topk::harness::run_oracle_report(config, trace);
			const std::string text = record.dump(2) + "\n";
			if (orc_report.empty())
				std::cout << text;
			else {
				std::ofstream out(orc_report, std::ios::binary);
				if (!out)
					throw std::runtime_error("cannot open for writing: " + orc_report);
				out << text;
			}
			return 0;
		}
		if (gen->parsed()) {
			const auto trace = topk::streams::generate(to_spec(gen_flags, gen_k, gen_seed));
			topk::streams::save_csv(trace, gen_out);
			std::cout << "wrote " << gen_out << " (n=" << trace.n << " t=" << trace.steps << ")\n";
			return 0;
		}
	} catch (const std::exception& e) {
		std::cerr << "error: " << e.what() << "\n";
		return 2;
	}
	return 2;
}
