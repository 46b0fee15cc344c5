#include "topk/monitor.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace topk {

namespace {

std::string ids_to_string(const std::vector<NodeId>& ids) {
	std::string out;
	for (std::size_t i = 0; i < ids.size(); ++i) {
		if (i)
			out += ",";
		out += std::to_string(ids[i]);
	}
	return out;
}

ProtocolOutcome run_protocol(ExtremumMode mode, std::uint64_t upper_bound,
                             std::vector<ProtocolParticipant> participants,
                             MonitorContext& ctx) {
	ProtocolConfig config;
	config.mode = mode;
	config.upper_bound = upper_bound;
	config.participants = std::move(participants);
	config.silent_rounds = ctx.silent_rounds;
	return run_extremum(config, *ctx.rng, *ctx.fabric, ctx.protocol_nonce++);
}

// Coordinator-side announcement that a protocol starts and who participates.
void announce(MonitorContext& ctx, const std::string& what) {
	ctx.fabric->record_broadcast(MessageKind::InitiationBroadcast, what);
}

// Anchor every filter at the shared boundary: members [M, inf], others [-inf, M].
void anchor_filters(CoordinatorState& state, Value boundary) {
	state.current_midpoint = boundary;
	state.filters.assign(state.n, FilterInterval{});
	for (NodeId id = 1; id <= state.n; ++id) {
		if (state.is_top_k(id))
			state.filters[id - 1] = {ExtendedValue::finite(boundary), ExtendedValue::pos_inf()};
		else
			state.filters[id - 1] = {ExtendedValue::neg_inf(), ExtendedValue::finite(boundary)};
	}
}

std::vector<ProtocolParticipant> gather(const Snapshot& snapshot,
                                        const std::vector<NodeId>& ids) {
	std::vector<ProtocolParticipant> parts;
	parts.reserve(ids.size());
	for (NodeId id : ids)
		parts.push_back({id, snapshot.value(id)});
	return parts;
}

} // namespace

bool CoordinatorState::is_top_k(NodeId id) const {
	return std::find(top_k.begin(), top_k.end(), id) != top_k.end();
}

std::vector<NodeId> CoordinatorState::answer() const {
	std::vector<NodeId> ids = top_k;
	std::sort(ids.begin(), ids.end());
	return ids;
}

NodeView node_view(const CoordinatorState& state, const Snapshot& snapshot, NodeId id) {
	return {id, snapshot.value(id), state.filters[id - 1], state.is_top_k(id)};
}

CoordinatorState monitor_initialize(const Snapshot& snapshot, std::uint32_t k,
                                    MonitorContext& ctx) {
	const auto n = snapshot.node_count();
	if (n < 2)
		throw std::invalid_argument("monitor: need at least 2 nodes");
	if (k < 1 || k >= n)
		throw std::invalid_argument("monitor: k must satisfy 1 <= k <= n-1");

	CoordinatorState state;
	state.n = static_cast<std::uint32_t>(n);
	state.k = k;
	state.last_time = snapshot.t;
	ctx.fabric->set_time(snapshot.t);
	return filter_reset(state, snapshot, ctx);
}

std::vector<NodeId> detect_violations(const CoordinatorState& state, const Snapshot& snapshot) {
	std::vector<NodeId> out;
	for (NodeId id = 1; id <= state.n; ++id) {
		const auto view = node_view(state, snapshot, id);
		if (!view.filter.contains(view.value))
			out.push_back(id);
	}
	return out;
}

CoordinatorState monitor_step(const CoordinatorState& state, const Snapshot& snapshot,
                              MonitorContext& ctx, StepReport& report) {
	if (snapshot.t != state.last_time + 1)
		throw std::invalid_argument("monitor_step: snapshot time must advance by exactly 1");
	if (snapshot.node_count() != state.n)
		throw std::invalid_argument("monitor_step: snapshot node count changed");

	ctx.fabric->set_time(snapshot.t);
	const MessageTally before = ctx.fabric->tally_snapshot();

	report = StepReport{};
	report.t = snapshot.t;
	report.violations = detect_violations(state, snapshot);

	CoordinatorState next = state;
	next.last_time = snapshot.t;

	if (!report.violations.empty()) {
		// each violator reacts according to its own membership at t-1
		std::vector<NodeId> member_violators;
		std::vector<NodeId> outsider_violators;
		for (NodeId id : report.violations) {
			if (node_view(state, snapshot, id).was_top_k)
				member_violators.push_back(id);
			else
				outsider_violators.push_back(id);
		}

		// Violators start their group protocol on their own; no initiation cost.
		std::optional<Value> min_opt;
		std::optional<Value> max_opt;
		if (!member_violators.empty()) {
			const auto outcome = run_protocol(ExtremumMode::Min, state.k,
			                                  gather(snapshot, member_violators), ctx);
			min_opt = outcome.winner_value;
		}
		if (!outsider_violators.empty()) {
			const auto outcome = run_protocol(ExtremumMode::Max, state.n - state.k,
			                                  gather(snapshot, outsider_violators), ctx);
			max_opt = outcome.winner_value;
		}

		report.handler_invoked = true;
		next = filter_violation_handler(next, min_opt, max_opt, snapshot, ctx,
		                                &report.reset_invoked);
	}

	report.tally_delta = ctx.fabric->tally_snapshot() - before;
	report.answer = next.answer();
	return next;
}

CoordinatorState filter_violation_handler(const CoordinatorState& state,
                                          std::optional<Value> min_opt,
                                          std::optional<Value> max_opt,
                                          const Snapshot& snapshot, MonitorContext& ctx,
                                          bool* reset_invoked) {
	if (!min_opt && !max_opt)
		throw std::invalid_argument("filter_violation_handler: no value was communicated");
	if (reset_invoked)
		*reset_invoked = false;

	CoordinatorState next = state;

	if (!max_opt) {
		// no outsider spoke up: probe all of them for the current maximum
		std::vector<NodeId> outsiders;
		for (NodeId id = 1; id <= state.n; ++id)
			if (!state.is_top_k(id))
				outsiders.push_back(id);
		announce(ctx, "probe=max participants=outsiders");
		max_opt = run_protocol(ExtremumMode::Max, state.n - state.k, gather(snapshot, outsiders), ctx)
		              .winner_value;
	} else {
		// an outsider moved: refresh the minimum over all current members
		announce(ctx, "probe=min participants=top-k");
		min_opt = run_protocol(ExtremumMode::Min, state.k, gather(snapshot, state.top_k), ctx)
		              .winner_value;
	}

	next.extremes = extremes_update(next.extremes, min_opt, max_opt);

	if (next.extremes.t_plus < next.extremes.t_minus) {
		if (reset_invoked)
			*reset_invoked = true;
		return filter_reset(next, snapshot, ctx);
	}

	const Value m = midpoint(next.extremes.t_minus.finite_value(),
	                         next.extremes.t_plus.finite_value());
	anchor_filters(next, m);
	ctx.fabric->record_broadcast(MessageKind::FilterBroadcast, "M=" + std::to_string(m));
	return next;
}

CoordinatorState filter_reset(const CoordinatorState& state, const Snapshot& snapshot,
                              MonitorContext& ctx) {
	CoordinatorState next = state;

	// k+1 maximum runs, each excluding the winners found so far,
	// enumerate the k+1 largest values in rank order.
	std::vector<NodeId> winners;
	std::vector<Value> winner_values;
	std::vector<bool> found(state.n + 1, false);
	for (std::uint32_t round = 0; round < state.k + 1; ++round) {
		std::vector<NodeId> remaining;
		for (NodeId id = 1; id <= state.n; ++id)
			if (!found[id])
				remaining.push_back(id);
		announce(ctx, "probe=max rank=" + std::to_string(round + 1));
		const auto outcome =
		    run_protocol(ExtremumMode::Max, state.n, gather(snapshot, remaining), ctx);
		winners.push_back(*outcome.winner);
		winner_values.push_back(outcome.winner_value);
		found[*outcome.winner] = true;
	}

	next.top_k.assign(winners.begin(), winners.begin() + state.k);
	const Value kth = winner_values[state.k - 1];
	const Value kplus1 = winner_values[state.k];
	const Value m = midpoint(kplus1, kth);

	next.extremes = {ExtendedValue::finite(kth), ExtendedValue::finite(kplus1), snapshot.t};
	anchor_filters(next, m);
	ctx.fabric->record_broadcast(MessageKind::FilterBroadcast,
	                             "M=" + std::to_string(m) + " top=" + ids_to_string(next.top_k));
	return next;
}

} // namespace topk
