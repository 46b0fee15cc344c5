#pragma once

#include "topk/core.hpp"
#include "topk/random.hpp"
#include "topk/transport.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace topk {

enum class ExtremumMode : std::uint8_t { Max, Min };

struct ProtocolParticipant {
	NodeId node = 0;
	Value value = 0;
};

struct ProtocolConfig {
	ExtremumMode mode = ExtremumMode::Max;
	std::uint64_t upper_bound = 1; // N >= |participants|, N >= 1
	std::vector<ProtocolParticipant> participants;
	bool silent_rounds = false; // suppress per-round broadcasts that repeat the last value
};

/**
	Result of one extremum protocol run. The protocol is Las Vegas: when the
	participant set is nonempty, winner_value is always the exact extremum and
	at least one upload happened. An empty participant set yields the
	distinguished empty outcome (no winner, all counters zero).
 */
struct ProtocolOutcome {
	std::optional<NodeId> winner;
	Value winner_value = 0;
	std::uint32_t rounds = 0;
	std::uint64_t uploads = 0;
	std::uint64_t round_broadcasts = 0;
	std::vector<NodeId> senders; // participant order; each participant sends at most once

	bool empty() const { return !winner.has_value(); }
	bool sent(NodeId node) const;
};

// Number of rounds for upper bound N: r = 0 .. ceil(log2 N), so ceil(log2 N) + 1.
std::uint32_t protocol_rounds(std::uint64_t upper_bound);

/**
	Doubling-probability extremum sampling. In round r every still-active node
	first drops out if the previously broadcast extremum already beats its value,
	otherwise uploads (id, value) with probability min(2^r / N, 1) and
	deactivates on success; the coordinator then broadcasts the best value seen.
	The final round has probability 1, so the extremum holder always reports.

	Bernoulli draws are keyed by (nonce, node, round); callers must pass a fresh
	nonce per invocation to keep runs independent.
 */
ProtocolOutcome run_extremum(const ProtocolConfig& config, const RandomSource& rng,
                             Fabric& fabric, std::uint64_t nonce);

// Analytic upper bound on the probability that the participant holding the
// rank-th largest value uploads during one run:
//   1/N + sum_{r=1}^{ceil(log2 N)} (2^r / N) * (1 - 2^(r-1) / N)^rank
// clamped to [0, 1]. Non-increasing in rank for fixed N.
double lemma3_bound(std::uint64_t rank, std::uint64_t upper_bound);

} // namespace topk
