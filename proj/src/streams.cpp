#include "topk/streams.hpp"

#include "topk/random.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

namespace topk::streams {

namespace {

constexpr std::uint64_t kInitKey = 0x696E6974;   // distinct draw streams per purpose
constexpr std::uint64_t kWalkKey = 0x77616C6B;
constexpr std::uint64_t kUniformKey = 0x756E6966;

// Nearest free value at or above candidate, wrapping at hi back to lo.
// The caller guarantees the range holds at least n values.
Value resolve_distinct(Value candidate, const std::unordered_set<Value>& used, Value lo, Value hi) {
	Value v = candidate;
	while (used.count(v)) {
		v = v == hi ? lo : v + 1;
	}
	return v;
}

void check_dimensions(const GeneratorSpec& spec) {
	if (spec.n < 2)
		throw std::invalid_argument("generate: need n >= 2");
	if (spec.k < 1 || spec.k >= spec.n)
		throw std::invalid_argument("generate: need 1 <= k < n");
	if (spec.steps < 1)
		throw std::invalid_argument("generate: need at least one step");
	if (spec.value_lo > spec.value_hi)
		throw std::invalid_argument("generate: empty value range");
	if (spec.distinct && spec.value_hi - spec.value_lo + 1 < spec.n)
		throw std::invalid_argument("generate: value range too small for distinct values");
}

std::vector<Value> distinct_uniform_row(const RandomSource& rng, std::uint64_t stream,
                                        std::uint64_t t, const GeneratorSpec& spec) {
	std::vector<Value> row(spec.n);
	std::unordered_set<Value> used;
	const Value span = spec.value_hi - spec.value_lo + 1;
	for (NodeId id = 1; id <= spec.n; ++id) {
		Value v = spec.value_lo + rng.uniform_below(span, stream, id, t);
		if (spec.distinct) {
			v = resolve_distinct(v, used, spec.value_lo, spec.value_hi);
			used.insert(v);
		}
		row[id - 1] = v;
	}
	return row;
}

Trace generate_random_walk(const GeneratorSpec& spec) {
	const RandomSource rng(spec.seed);
	Trace trace{spec.n, spec.k, spec.steps, {}};
	std::vector<Value> current = distinct_uniform_row(rng, kInitKey, 0, spec);
	trace.rows.push_back({1, current});
	for (std::uint64_t t = 2; t <= spec.steps; ++t) {
		std::unordered_set<Value> used;
		std::vector<Value> row(spec.n);
		for (NodeId id = 1; id <= spec.n; ++id) {
			const Value prev = current[id - 1];
			// symmetric step in [-step_size, +step_size], clamped to the range
			const Value width = 2 * spec.step_size + 1;
			const std::uint64_t u = rng.uniform_below(width, kWalkKey, id, t);
			Value v = prev;
			if (u >= spec.step_size)
				v = std::min(spec.value_hi, prev + (u - spec.step_size));
			else {
				const Value down = spec.step_size - u;
				v = prev >= spec.value_lo + down ? prev - down : spec.value_lo;
			}
			if (spec.distinct) {
				v = resolve_distinct(v, used, spec.value_lo, spec.value_hi);
				used.insert(v);
			}
			row[id - 1] = v;
		}
		current = row;
		trace.rows.push_back({t, std::move(row)});
	}
	return trace;
}

Trace generate_uniform(const GeneratorSpec& spec) {
	const RandomSource rng(spec.seed);
	Trace trace{spec.n, spec.k, spec.steps, {}};
	for (std::uint64_t t = 1; t <= spec.steps; ++t)
		trace.rows.push_back({t, distinct_uniform_row(rng, kUniformKey, t, spec)});
	return trace;
}

Trace generate_adversarial(const GeneratorSpec& spec) {
	if (spec.period < 1)
		throw std::invalid_argument("generate: adversarial period must be at least 1");
	const Value center = spec.value_lo + (spec.value_hi - spec.value_lo) / 2;

	// Static incumbents just above the crossing zone, static fillers near the
	// bottom, and one challenger (id k+1) hopping over the weakest incumbent.
	const Value weakest = center + spec.amplitude + 2;
	const Value strongest = weakest + 2 * (spec.k - 1);
	if (strongest > spec.value_hi || center < spec.value_lo + spec.amplitude)
		throw std::invalid_argument("generate: adversarial value range too small");
	const std::uint32_t fillers = spec.n - spec.k - 1;
	if (fillers > 0 && spec.value_lo + 2 * (fillers - 1) >= center - spec.amplitude)
		throw std::invalid_argument("generate: adversarial value range too small for fillers");

	const Value challenger_high = weakest + 1; // displaces exactly the weakest incumbent
	const Value challenger_low = center - spec.amplitude;

	Trace trace{spec.n, spec.k, spec.steps, {}};
	for (std::uint64_t t = 1; t <= spec.steps; ++t) {
		std::vector<Value> row(spec.n);
		for (std::uint32_t i = 1; i <= spec.k; ++i)
			row[i - 1] = weakest + 2 * (spec.k - i);
		const bool high_phase = ((t - 1) / spec.period) % 2 == 1;
		row[spec.k] = high_phase ? challenger_high : challenger_low;
		for (std::uint32_t j = 0; j < fillers; ++j)
			row[spec.k + 1 + j] = spec.value_lo + 2 * j;
		trace.rows.push_back({t, std::move(row)});
	}
	return trace;
}

Trace generate_constant(const GeneratorSpec& spec) {
	const RandomSource rng(spec.seed);
	Trace trace{spec.n, spec.k, spec.steps, {}};
	const std::vector<Value> frozen = distinct_uniform_row(rng, kInitKey, 0, spec);
	for (std::uint64_t t = 1; t <= spec.steps; ++t)
		trace.rows.push_back({t, frozen});
	return trace;
}

std::uint64_t parse_field(const std::string& line, std::size_t from, std::size_t to,
                          std::size_t line_no) {
	std::uint64_t out = 0;
	const auto* first = line.data() + from;
	const auto* last = line.data() + to;
	const auto res = std::from_chars(first, last, out);
	if (res.ec != std::errc{} || res.ptr != last)
		throw std::runtime_error("csv: malformed row at line " + std::to_string(line_no));
	return out;
}

} // namespace

const char* family_name(Family family) {
	switch (family) {
	case Family::RandomWalk: return "random-walk";
	case Family::Uniform: return "uniform";
	case Family::AdversarialCrossing: return "adversarial";
	case Family::Constant: return "constant";
	}
	return "unknown";
}

Family parse_family(const std::string& name) {
	if (name == "random-walk")
		return Family::RandomWalk;
	if (name == "uniform")
		return Family::Uniform;
	if (name == "adversarial")
		return Family::AdversarialCrossing;
	if (name == "constant")
		return Family::Constant;
	throw std::invalid_argument("unknown generator family: " + name);
}

Trace generate(const GeneratorSpec& spec) {
	check_dimensions(spec);
	Trace trace;
	switch (spec.family) {
	case Family::RandomWalk: trace = generate_random_walk(spec); break;
	case Family::Uniform: trace = generate_uniform(spec); break;
	case Family::AdversarialCrossing: trace = generate_adversarial(spec); break;
	case Family::Constant: trace = generate_constant(spec); break;
	}
	trace.validate();
	return trace;
}

void save_csv(const Trace& trace, std::ostream& out) {
	out << "t,node,value\n";
	for (const auto& row : trace.rows)
		for (NodeId id = 1; id <= row.values.size(); ++id)
			out << row.t << "," << id << "," << row.value(id) << "\n";
}

void save_csv(const Trace& trace, const std::string& path) {
	std::ofstream out(path, std::ios::binary);
	if (!out)
		throw std::runtime_error("csv: cannot open for writing: " + path);
	save_csv(trace, out);
}

Trace load_csv(std::istream& in, std::uint32_t k) {
	std::string line;
	if (!std::getline(in, line) || (line != "t,node,value" && line != "t,node,value\r"))
		throw std::runtime_error("csv: missing `t,node,value` header");

	std::map<std::uint64_t, std::map<NodeId, Value>> cells;
	std::size_t line_no = 1;
	while (std::getline(in, line)) {
		++line_no;
		if (!line.empty() && line.back() == '\r')
			line.pop_back();
		if (line.empty())
			continue;
		const auto c1 = line.find(',');
		const auto c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
		if (c2 == std::string::npos)
			throw std::runtime_error("csv: malformed row at line " + std::to_string(line_no));
		const std::uint64_t t = parse_field(line, 0, c1, line_no);
		const std::uint64_t node = parse_field(line, c1 + 1, c2, line_no);
		const std::uint64_t value = parse_field(line, c2 + 1, line.size(), line_no);
		if (t < 1 || node < 1)
			throw std::runtime_error("csv: time and node are 1-based, line " + std::to_string(line_no));
		auto& row = cells[t];
		if (!row.emplace(static_cast<NodeId>(node), value).second)
			throw std::runtime_error("csv: duplicate (t,node) at line " + std::to_string(line_no));
	}
	if (cells.empty())
		throw std::runtime_error("csv: no observations");

	const std::uint64_t t_max = cells.rbegin()->first;
	const std::size_t n = cells.begin()->second.size();
	Trace trace{static_cast<std::uint32_t>(n), k, t_max, {}};
	for (std::uint64_t t = 1; t <= t_max; ++t) {
		const auto it = cells.find(t);
		if (it == cells.end())
			throw std::runtime_error("csv: non-contiguous time, missing t=" + std::to_string(t));
		const auto& row = it->second;
		if (row.size() != n || row.rbegin()->first != n)
			throw std::runtime_error("csv: t=" + std::to_string(t) +
			                         " does not cover nodes 1.." + std::to_string(n));
		Snapshot snap{t, {}};
		snap.values.reserve(n);
		for (const auto& [node, value] : row)
			snap.values.push_back(value);
		trace.rows.push_back(std::move(snap));
	}
	return trace;
}

Trace load_csv(const std::string& path, std::uint32_t k) {
	std::ifstream in(path, std::ios::binary);
	if (!in)
		throw std::runtime_error("csv: cannot open: " + path);
	return load_csv(in, k);
}

} // namespace topk::streams
