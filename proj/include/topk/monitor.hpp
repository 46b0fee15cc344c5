#pragma once

#include "topk/core.hpp"
#include "topk/protocols.hpp"
#include "topk/random.hpp"
#include "topk/transport.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace topk {

/**
	Everything the coordinator knows between steps: the current top-k (rank
	order as of the last protocol contact), the filter assignments it last
	broadcast, and the window extremes since the last reset.
 */
struct CoordinatorState {
	std::uint32_t n = 0;
	std::uint32_t k = 0;
	std::vector<NodeId> top_k;          // |top_k| == k
	std::vector<FilterInterval> filters; // index = id - 1
	WindowExtremes extremes;
	Value current_midpoint = 0;
	std::uint64_t last_time = 0;

	bool is_top_k(NodeId id) const;
	// Member ids sorted ascending; the monitored answer is a set.
	std::vector<NodeId> answer() const;
};

/// A node's view of itself at the start of a step, derived from the last broadcast.
struct NodeView {
	NodeId id = 0;
	Value value = 0;
	FilterInterval filter;
	bool was_top_k = false;
};

NodeView node_view(const CoordinatorState& state, const Snapshot& snapshot, NodeId id);

struct StepReport {
	std::uint64_t t = 0;
	std::vector<NodeId> violations; // ascending
	bool handler_invoked = false;
	bool reset_invoked = false;
	MessageTally tally_delta;
	std::vector<NodeId> answer; // ascending member ids
};

/// Shared per-run context: randomness, fabric, and the protocol nonce counter.
struct MonitorContext {
	const RandomSource* rng = nullptr;
	Fabric* fabric = nullptr;
	bool silent_rounds = false;
	std::uint64_t protocol_nonce = 0; // advanced once per protocol invocation
};

// Initialization at the first observed snapshot: a full filter reset.
// Throws unless 1 <= k <= n-1 and the snapshot covers at least two nodes.
CoordinatorState monitor_initialize(const Snapshot& snapshot, std::uint32_t k,
                                    MonitorContext& ctx);

// Exactly the nodes whose current value lies outside their own filter, ascending.
std::vector<NodeId> detect_violations(const CoordinatorState& state, const Snapshot& snapshot);

// One synchronous time step: violating former members run the minimum protocol
// with bound k, violating former outsiders the maximum protocol with bound n-k,
// and any communicated value triggers the violation handler.
// Requires snapshot.t == state.last_time + 1.
CoordinatorState monitor_step(const CoordinatorState& state, const Snapshot& snapshot,
                              MonitorContext& ctx, StepReport& report);

// The coordinator's reaction once at least one value arrived: fill in the
// missing side by probing all current outsiders (or refresh the minimum over
// all current members), fold both into the window extremes, then either reset
// or broadcast a new midpoint for everyone to re-anchor on.
// Throws when called with neither value present.
CoordinatorState filter_violation_handler(const CoordinatorState& state,
                                          std::optional<Value> min_opt,
                                          std::optional<Value> max_opt,
                                          const Snapshot& snapshot, MonitorContext& ctx,
                                          bool* reset_invoked = nullptr);

// Rebuilds the top-k from scratch: k+1 maximum-protocol runs over shrinking
// participant sets, then one broadcast anchoring all filters at the midpoint
// of the k-th and (k+1)-st largest value.
CoordinatorState filter_reset(const CoordinatorState& state, const Snapshot& snapshot,
                              MonitorContext& ctx);

} // namespace topk
