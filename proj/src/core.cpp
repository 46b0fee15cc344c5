#include "topk/core.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace topk {

std::string ExtendedValue::str() const {
	switch (tag_) {
	case Tag::NegInf: return "-inf";
	case Tag::PosInf: return "+inf";
	default: return std::to_string(v_);
	}
}

std::string FilterInterval::str() const {
	return "[" + lower.str() + ", " + upper.str() + "]";
}

void Trace::validate() const {
	if (n < 2)
		throw std::invalid_argument("trace: need at least 2 nodes, got " + std::to_string(n));
	if (k < 1 || k >= n)
		throw std::invalid_argument("trace: k must satisfy 1 <= k < n");
	if (steps < 1 || rows.size() != steps)
		throw std::invalid_argument("trace: row count does not match declared steps");
	for (std::size_t i = 0; i < rows.size(); ++i) {
		if (rows[i].t != i + 1)
			throw std::invalid_argument("trace: non-contiguous time at row " + std::to_string(i));
		if (rows[i].values.size() != n)
			throw std::invalid_argument("trace: row " + std::to_string(i + 1) + " is not total over all nodes");
	}
}

bool Trace::same_values(const Trace& other) const {
	if (n != other.n || steps != other.steps || rows.size() != other.rows.size())
		return false;
	for (std::size_t i = 0; i < rows.size(); ++i)
		if (rows[i].t != other.rows[i].t || rows[i].values != other.rows[i].values)
			return false;
	return true;
}

std::strong_ordering rank_compare(RankKey a, RankKey b) {
	if (a.value != b.value)
		return a.value <=> b.value;
	// equal values: the smaller id ranks higher
	return b.node <=> a.node;
}

std::vector<NodeId> compute_top_k(std::span<const Value> values, std::uint32_t k) {
	const auto n = values.size();
	if (k < 1 || k > n)
		throw std::invalid_argument("compute_top_k: k out of range");
	std::vector<NodeId> ids(n);
	std::iota(ids.begin(), ids.end(), NodeId{1});
	std::partial_sort(ids.begin(), ids.begin() + k, ids.end(), [&](NodeId a, NodeId b) {
		return ranks_higher({values[a - 1], a}, {values[b - 1], b});
	});
	ids.resize(k);
	return ids;
}

FilterSetCheck validate_filter_set(std::span<const FilterInterval> filters,
                                   std::span<const Value> values,
                                   std::uint32_t k) {
	FilterSetCheck check;
	const auto n = values.size();
	if (filters.size() != n)
		throw std::invalid_argument("validate_filter_set: filters and values must cover the same nodes");
	for (NodeId id = 1; id <= n; ++id) {
		if (!filters[id - 1].contains(values[id - 1]))
			check.violations.push_back({FilterSetViolation::Kind::ValueOutsideFilter, id});
	}
	const auto top = compute_top_k(values, k);
	std::vector<bool> is_top(n + 1, false);
	for (NodeId id : top)
		is_top[id] = true;
	for (NodeId i : top) {
		for (NodeId j = 1; j <= n; ++j) {
			if (is_top[j])
				continue;
			if (filters[i - 1].lower < filters[j - 1].upper)
				check.violations.push_back({FilterSetViolation::Kind::BoundaryOverlap, i, j});
		}
	}
	return check;
}

std::string FilterSetViolation::str() const {
	if (kind == Kind::ValueOutsideFilter)
		return "node " + std::to_string(node) + " outside own filter";
	return "top-k node " + std::to_string(node) + " lower bound below upper bound of node " +
	       std::to_string(other);
}

Value midpoint(Value lo, Value hi) {
	if (lo > hi)
		throw std::invalid_argument("midpoint: lo > hi");
	return lo + (hi - lo) / 2;
}

WindowExtremes extremes_update(WindowExtremes w,
                               std::optional<Value> new_min,
                               std::optional<Value> new_max) {
	if (new_min) {
		const auto ev = ExtendedValue::finite(*new_min);
		if (ev < w.t_plus)
			w.t_plus = ev;
	}
	if (new_max) {
		const auto ev = ExtendedValue::finite(*new_max);
		if (ev > w.t_minus)
			w.t_minus = ev;
	}
	return w;
}

} // namespace topk
