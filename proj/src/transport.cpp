#include "topk/transport.hpp"

#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace topk {

const char* message_kind_name(MessageKind kind) {
	switch (kind) {
	case MessageKind::ProtocolUpload: return "protocol_upload";
	case MessageKind::ProtocolRoundBroadcast: return "protocol_round_broadcast";
	case MessageKind::FilterBroadcast: return "filter_broadcast";
	case MessageKind::InitiationBroadcast: return "initiation_broadcast";
	case MessageKind::DirectDown: return "direct_down";
	}
	return "unknown";
}

bool is_broadcast(MessageKind kind) {
	return kind == MessageKind::ProtocolRoundBroadcast || kind == MessageKind::FilterBroadcast ||
	       kind == MessageKind::InitiationBroadcast;
}

std::uint64_t MessageTally::total() const {
	return std::accumulate(by_kind.begin(), by_kind.end(), std::uint64_t{0});
}

MessageTally MessageTally::operator-(const MessageTally& rhs) const {
	MessageTally out;
	for (std::size_t i = 0; i < by_kind.size(); ++i)
		out.by_kind[i] = by_kind[i] - rhs.by_kind[i];
	return out;
}

void Fabric::record_upload(NodeId node, std::string info) {
	tally_.by_kind[static_cast<std::size_t>(MessageKind::ProtocolUpload)]++;
	log_.push_back({now_, MessageKind::ProtocolUpload, node, std::move(info)});
}

void Fabric::record_broadcast(MessageKind kind, std::string info) {
	if (!is_broadcast(kind))
		throw std::invalid_argument(std::string("record_broadcast: not a broadcast kind: ") +
		                            message_kind_name(kind));
	tally_.by_kind[static_cast<std::size_t>(kind)]++;
	log_.push_back({now_, kind, std::nullopt, std::move(info)});
}

void Fabric::record_direct_down(NodeId to, std::string info) {
	tally_.by_kind[static_cast<std::size_t>(MessageKind::DirectDown)]++;
	log_.push_back({now_, MessageKind::DirectDown, std::nullopt,
	                "to=" + std::to_string(to) + " " + std::move(info)});
}

void Fabric::export_event_log(std::ostream& out) const {
	for (const auto& e : log_) {
		out << "t=" << e.t << " kind=" << message_kind_name(e.kind) << " from=";
		if (e.sender)
			out << *e.sender;
		else
			out << "C";
		out << " info=" << e.info << "\n";
	}
}

std::string Fabric::export_event_log_text() const {
	std::ostringstream os;
	export_event_log(os);
	return os.str();
}

} // namespace topk
