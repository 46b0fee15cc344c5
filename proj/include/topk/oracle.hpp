#pragma once

#include "topk/core.hpp"

#include <cstdint>
#include <vector>

namespace topk::oracle {

/**
	Offline ground truth against the full trace: an independent top-k
	implementation, the maximum k-th/(k+1)-st gap, and a certified lower
	bound on the messages of an optimal offline filter-setting algorithm.
 */

// Full sort, take k. Deliberately a separate code path from core's
// compute_top_k so the two can cross-check each other.
std::vector<NodeId> brute_force_top_k(const Trace& trace, std::uint64_t t);

// max over t of (k-th largest value - (k+1)-st largest value)
Value compute_delta(const Trace& trace);

// True iff one static filter set could cover every step in [t1, t2]: the top-k
// membership is the same set at every step, and the window minimum over
// insider values is at or above the window maximum over outsider values.
bool static_filter_feasible(const Trace& trace, std::uint64_t t1, std::uint64_t t2);

struct OptPartition {
	struct Interval {
		std::uint64_t start = 0;
		std::uint64_t end = 0; // inclusive
		bool operator==(const Interval&) const = default;
	};
	std::vector<Interval> intervals; // partition [1, T], each maximal under feasibility
	std::uint64_t lower_bound = 0;   // = intervals.size(): certified minimum filter assignments
};

// Greedy left-to-right maximal partition under static_filter_feasible. Each
// interval forces at least one filter-assignment event on any offline
// algorithm, so the interval count lower-bounds its message count.
OptPartition opt_lower_bound(const Trace& trace);

// Reference budget (optLB + 1) * (log2(delta) + 1 + k) * (2 * log2(n) + 1);
// the factors mirror the competitive bound, the constants are artifact slack.
// A delta of 0 (possible only with tied values) is treated as 1.
double competitive_envelope(Value delta, std::uint32_t k, std::uint32_t n,
                            std::uint64_t opt_lb);

} // namespace topk::oracle
