#include "topk/protocols.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace topk {

namespace {

// Does an already-broadcast extremum make a node's value redundant?
inline bool beats(ExtremumMode mode, Value broadcast, Value own) {
	return mode == ExtremumMode::Max ? broadcast > own : broadcast < own;
}

// Is candidate a strictly better protocol result than incumbent?
// Ties on value go to the smaller id in both modes.
inline bool better(ExtremumMode mode, ProtocolParticipant candidate, ProtocolParticipant incumbent) {
	if (candidate.value != incumbent.value)
		return mode == ExtremumMode::Max ? candidate.value > incumbent.value
		                                 : candidate.value < incumbent.value;
	return candidate.node < incumbent.node;
}

} // namespace

bool ProtocolOutcome::sent(NodeId node) const {
	return std::find(senders.begin(), senders.end(), node) != senders.end();
}

std::uint32_t protocol_rounds(std::uint64_t upper_bound) {
	// ceil(log2 N) + 1; bit_width(N - 1) == ceil(log2 N) for N >= 1
	return static_cast<std::uint32_t>(std::bit_width(upper_bound - 1)) + 1;
}

ProtocolOutcome run_extremum(const ProtocolConfig& config, const RandomSource& rng,
                             Fabric& fabric, std::uint64_t nonce) {
	ProtocolOutcome outcome;
	if (config.participants.empty())
		return outcome;
	if (config.upper_bound == 0)
		throw std::invalid_argument("run_extremum: upper bound must be at least 1");
	if (config.participants.size() > config.upper_bound)
		throw std::invalid_argument("run_extremum: more participants than the upper bound N");

	const std::uint64_t n_bound = config.upper_bound;
	const std::uint32_t rounds = protocol_rounds(n_bound);
	outcome.rounds = rounds;

	std::vector<bool> active(config.participants.size(), true);
	std::optional<ProtocolParticipant> best;          // coordinator's view
	std::optional<Value> heard;                       // last value the nodes actually heard

	for (std::uint32_t r = 0; r < rounds; ++r) {
		const double p = std::min(std::ldexp(1.0, static_cast<int>(r)) / static_cast<double>(n_bound), 1.0);
		for (std::size_t i = 0; i < config.participants.size(); ++i) {
			if (!active[i])
				continue;
			const auto part = config.participants[i];
			if (heard && beats(config.mode, *heard, part.value)) {
				// already outclassed: stop competing, keep listening
				active[i] = false;
				continue;
			}
			if (rng.bernoulli(p, nonce, part.node, r)) {
				fabric.record_upload(part.node, "v=" + std::to_string(part.value) +
				                                    " round=" + std::to_string(r));
				active[i] = false;
				outcome.senders.push_back(part.node);
				if (!best || better(config.mode, part, *best))
					best = part;
			}
		}
		const bool changed = best && (!heard || *heard != best->value);
		if (!config.silent_rounds || changed) {
			fabric.record_broadcast(MessageKind::ProtocolRoundBroadcast,
			                        "round=" + std::to_string(r) +
			                            (best ? " best=" + std::to_string(best->value) : " best=none"));
			outcome.round_broadcasts++;
			if (best)
				heard = best->value;
		}
	}

	// Final round runs with probability 1, so the extremum holder always sent.
	outcome.winner = best->node;
	outcome.winner_value = best->value;
	outcome.uploads = outcome.senders.size();
	return outcome;
}

double lemma3_bound(std::uint64_t rank, std::uint64_t upper_bound) {
	if (rank < 1 || upper_bound < 1)
		throw std::invalid_argument("lemma3_bound: rank and N must be at least 1");
	const double n_bound = static_cast<double>(upper_bound);
	double sum = 1.0 / n_bound;
	const std::uint32_t last_round = protocol_rounds(upper_bound) - 1; // ceil(log2 N)
	for (std::uint32_t r = 1; r <= last_round; ++r) {
		const double p = std::ldexp(1.0, static_cast<int>(r)) / n_bound;
		const double survive = 1.0 - std::ldexp(1.0, static_cast<int>(r) - 1) / n_bound;
		sum += p * std::pow(survive, static_cast<double>(rank));
	}
	return std::clamp(sum, 0.0, 1.0);
}

} // namespace topk
