#pragma once

#include "topk/core.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace topk {

enum class MessageKind : std::uint8_t {
	ProtocolUpload = 0,      // node -> coordinator inside an extremum protocol
	ProtocolRoundBroadcast,  // coordinator per-round extremum broadcast
	FilterBroadcast,         // coordinator broadcasting a new midpoint / membership
	InitiationBroadcast,     // coordinator announcing a protocol start
	DirectDown,              // coordinator -> single node
};
inline constexpr std::size_t kMessageKindCount = 5;

const char* message_kind_name(MessageKind kind);
bool is_broadcast(MessageKind kind);

/// Per-category message counters. Every message costs exactly 1, broadcasts included.
struct MessageTally {
	std::array<std::uint64_t, kMessageKindCount> by_kind{};

	std::uint64_t count(MessageKind kind) const { return by_kind[static_cast<std::size_t>(kind)]; }
	std::uint64_t total() const;

	MessageTally operator-(const MessageTally& rhs) const;
	bool operator==(const MessageTally&) const = default;
};

struct EventLogEntry {
	std::uint64_t t = 0;
	MessageKind kind{};
	std::optional<NodeId> sender; // empty: the coordinator
	std::string info;

	bool operator==(const EventLogEntry&) const = default;
};

/**
	Simulated message fabric: counts every transmission by category and keeps a
	replayable event log. Delivery is instantaneous and lossless; one fabric
	belongs to one sequential simulation run.
 */
class Fabric {
public:
	void set_time(std::uint64_t t) { now_ = t; }
	std::uint64_t now() const { return now_; }

	void record_upload(NodeId node, std::string info);

	// Throws std::invalid_argument when kind is not a broadcast kind.
	void record_broadcast(MessageKind kind, std::string info);

	void record_direct_down(NodeId to, std::string info);

	MessageTally tally_snapshot() const { return tally_; }
	const std::vector<EventLogEntry>& event_log() const { return log_; }

	// Line-delimited records: `t=<int> kind=<name> from=<id|C> info=<string>`
	void export_event_log(std::ostream& out) const;
	std::string export_event_log_text() const;

private:
	std::uint64_t now_ = 0;
	MessageTally tally_;
	std::vector<EventLogEntry> log_;
};

} // namespace topk
