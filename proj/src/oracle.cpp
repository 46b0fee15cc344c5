#include "topk/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace topk::oracle {

namespace {

struct ValueId {
	Value value;
	NodeId node;
};

// value descending, id ascending on ties
std::vector<ValueId> sorted_descending(const Snapshot& row) {
	std::vector<ValueId> order;
	order.reserve(row.values.size());
	for (NodeId id = 1; id <= row.values.size(); ++id)
		order.push_back({row.value(id), id});
	std::sort(order.begin(), order.end(), [](const ValueId& a, const ValueId& b) {
		if (a.value != b.value)
			return a.value > b.value;
		return a.node < b.node;
	});
	return order;
}

std::set<NodeId> top_set(const Snapshot& row, std::uint32_t k) {
	const auto order = sorted_descending(row);
	std::set<NodeId> s;
	for (std::uint32_t i = 0; i < k; ++i)
		s.insert(order[i].node);
	return s;
}

void check_range(const Trace& trace, std::uint64_t t1, std::uint64_t t2) {
	if (t1 < 1 || t1 > t2 || t2 > trace.steps)
		throw std::out_of_range("oracle: time range outside [1, T]");
}

} // namespace

std::vector<NodeId> brute_force_top_k(const Trace& trace, std::uint64_t t) {
	check_range(trace, t, t);
	const auto order = sorted_descending(trace.row(t));
	std::vector<NodeId> top;
	top.reserve(trace.k);
	for (std::uint32_t i = 0; i < trace.k; ++i)
		top.push_back(order[i].node);
	return top;
}

Value compute_delta(const Trace& trace) {
	Value delta = 0;
	for (const auto& row : trace.rows) {
		const auto order = sorted_descending(row);
		const Value gap = order[trace.k - 1].value - order[trace.k].value;
		delta = std::max(delta, gap);
	}
	return delta;
}

bool static_filter_feasible(const Trace& trace, std::uint64_t t1, std::uint64_t t2) {
	check_range(trace, t1, t2);
	const auto members = top_set(trace.row(t1), trace.k);
	bool have_in = false, have_out = false;
	Value insider_min = 0;
	Value outsider_max = 0;
	for (std::uint64_t t = t1; t <= t2; ++t) {
		const auto& row = trace.row(t);
		if (top_set(row, trace.k) != members)
			return false;
		for (NodeId id = 1; id <= trace.n; ++id) {
			const Value v = row.value(id);
			if (members.count(id)) {
				insider_min = have_in ? std::min(insider_min, v) : v;
				have_in = true;
			} else {
				outsider_max = have_out ? std::max(outsider_max, v) : v;
				have_out = true;
			}
		}
	}
	return insider_min >= outsider_max;
}

OptPartition opt_lower_bound(const Trace& trace) {
	trace.validate();
	OptPartition part;

	std::set<NodeId> members;
	Value insider_min = 0;
	Value outsider_max = 0;
	std::uint64_t start = 0;

	auto open_interval = [&](std::uint64_t t) {
		const auto& row = trace.row(t);
		members = top_set(row, trace.k);
		start = t;
		bool first_in = true, first_out = true;
		for (NodeId id = 1; id <= trace.n; ++id) {
			const Value v = row.value(id);
			if (members.count(id)) {
				insider_min = first_in || v < insider_min ? v : insider_min;
				first_in = false;
			} else {
				outsider_max = first_out || v > outsider_max ? v : outsider_max;
				first_out = false;
			}
		}
	};

	open_interval(1);
	for (std::uint64_t t = 2; t <= trace.steps; ++t) {
		const auto& row = trace.row(t);
		// tentatively extend the window by one step
		bool extendable = top_set(row, trace.k) == members;
		if (extendable) {
			Value new_in = insider_min;
			Value new_out = outsider_max;
			for (NodeId id = 1; id <= trace.n; ++id) {
				const Value v = row.value(id);
				if (members.count(id))
					new_in = std::min(new_in, v);
				else
					new_out = std::max(new_out, v);
			}
			if (new_in >= new_out) {
				insider_min = new_in;
				outsider_max = new_out;
			} else {
				extendable = false;
			}
		}
		if (!extendable) {
			part.intervals.push_back({start, t - 1});
			open_interval(t);
		}
	}
	part.intervals.push_back({start, trace.steps});
	part.lower_bound = part.intervals.size();
	return part;
}

double competitive_envelope(Value delta, std::uint32_t k, std::uint32_t n,
                            std::uint64_t opt_lb) {
	const double d = static_cast<double>(std::max<Value>(delta, 1));
	return static_cast<double>(opt_lb + 1) * (std::log2(d) + 1.0 + static_cast<double>(k)) *
	       (2.0 * std::log2(static_cast<double>(n)) + 1.0);
}

} // namespace topk::oracle
