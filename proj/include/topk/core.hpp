#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace topk {

// Node identifiers are 1-based; id 0 is never a valid node.
using NodeId = std::uint32_t;

// Observed stream values are naturals.
using Value = std::uint64_t;

/**
	A value extended with -inf / +inf, used for filter interval endpoints
	and window extremes. NegInf < Finite(v) < PosInf for every v.
 */
class ExtendedValue {
public:
	constexpr ExtendedValue() : tag_(Tag::NegInf), v_(0) {}

	static constexpr ExtendedValue neg_inf() { return ExtendedValue(Tag::NegInf, 0); }
	static constexpr ExtendedValue pos_inf() { return ExtendedValue(Tag::PosInf, 0); }
	static constexpr ExtendedValue finite(Value v) { return ExtendedValue(Tag::Finite, v); }

	constexpr bool is_finite() const { return tag_ == Tag::Finite; }
	constexpr bool is_neg_inf() const { return tag_ == Tag::NegInf; }
	constexpr bool is_pos_inf() const { return tag_ == Tag::PosInf; }

	// Only meaningful when is_finite().
	constexpr Value finite_value() const { return v_; }

	friend constexpr std::strong_ordering operator<=>(ExtendedValue a, ExtendedValue b) {
		if (a.tag_ != b.tag_)
			return static_cast<int>(a.tag_) <=> static_cast<int>(b.tag_);
		return a.v_ <=> b.v_;
	}
	friend constexpr bool operator==(ExtendedValue a, ExtendedValue b) = default;

	std::string str() const;

private:
	enum class Tag : std::uint8_t { NegInf = 0, Finite = 1, PosInf = 2 };
	constexpr ExtendedValue(Tag tag, Value v) : tag_(tag), v_(v) {}

	Tag tag_;
	Value v_; // 0 unless Finite, so defaulted comparisons stay total
};

/// Closed interval [lower, upper]; membership is inclusive on both endpoints.
struct FilterInterval {
	ExtendedValue lower = ExtendedValue::neg_inf();
	ExtendedValue upper = ExtendedValue::pos_inf();

	bool contains(Value v) const {
		const auto ev = ExtendedValue::finite(v);
		return lower <= ev && ev <= upper;
	}
	bool operator==(const FilterInterval&) const = default;

	std::string str() const;
};

/// One time step of observations, one value per node (index = id - 1).
struct Snapshot {
	std::uint64_t t = 0;
	std::vector<Value> values;

	std::size_t node_count() const { return values.size(); }
	Value value(NodeId id) const { return values[id - 1]; }
};

/// A full input: T snapshots over n nodes plus the monitored k.
struct Trace {
	std::uint32_t n = 0;
	std::uint32_t k = 0;
	std::uint64_t steps = 0;
	std::vector<Snapshot> rows; // rows[i].t == i + 1

	const Snapshot& row(std::uint64_t t) const { return rows[t - 1]; }

	// Throws std::invalid_argument on dimension/contiguity problems.
	void validate() const;

	bool same_values(const Trace& other) const;
};

/// Ranking key: larger value ranks higher; equal values break toward the smaller id.
struct RankKey {
	Value value = 0;
	NodeId node = 0;
};

// Ordering by rank: greater means `a` ranks higher than `b`.
std::strong_ordering rank_compare(RankKey a, RankKey b);

inline bool ranks_higher(RankKey a, RankKey b) { return rank_compare(a, b) > 0; }

// The k highest nodes under rank_compare, descending. Throws if k is not in [1, n].
std::vector<NodeId> compute_top_k(std::span<const Value> values, std::uint32_t k);

/// One failed filter-set condition.
struct FilterSetViolation {
	enum class Kind : std::uint8_t {
		ValueOutsideFilter, // node's value not in its own interval
		BoundaryOverlap,    // insider lower bound below an outsider upper bound
	};
	Kind kind;
	NodeId node;        // the offending node (insider for BoundaryOverlap)
	NodeId other = 0;   // the outsider for BoundaryOverlap, unused otherwise

	std::string str() const;
};

struct FilterSetCheck {
	std::vector<FilterSetViolation> violations;
	bool valid() const { return violations.empty(); }
};

// Checks the two filter-set conditions: every value inside its own interval, and
// every top-k lower bound at or above every non-top-k upper bound.
FilterSetCheck validate_filter_set(std::span<const FilterInterval> filters,
                                   std::span<const Value> values,
                                   std::uint32_t k);

// floor((lo + hi) / 2), overflow-safe. Throws if lo > hi.
Value midpoint(Value lo, Value hi);

/**
	Window extremes since the last filter reset: t_plus tracks the running
	minimum over insider values, t_minus the running maximum over outsider
	values. t_plus never increases and t_minus never decreases between resets.
 */
struct WindowExtremes {
	ExtendedValue t_plus = ExtendedValue::pos_inf();
	ExtendedValue t_minus = ExtendedValue::neg_inf();
	std::uint64_t t0 = 0; // time of the reset that opened this window

	bool operator==(const WindowExtremes&) const = default;
};

WindowExtremes extremes_update(WindowExtremes w,
                               std::optional<Value> new_min,
                               std::optional<Value> new_max);

} // namespace topk
