#include "topk/core.hpp"
#include "topk/random.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

using namespace topk;

namespace {

// Test-only reference: full sort of (value, id) pairs, take the k first.
std::vector<NodeId> full_sort_top_k(const std::vector<Value>& values, std::uint32_t k) {
	std::vector<std::pair<Value, NodeId>> order;
	for (NodeId id = 1; id <= values.size(); ++id)
		order.emplace_back(values[id - 1], id);
	std::sort(order.begin(), order.end(), [](auto a, auto b) {
		if (a.first != b.first)
			return a.first > b.first;
		return a.second < b.second;
	});
	std::vector<NodeId> top;
	for (std::uint32_t i = 0; i < k; ++i)
		top.push_back(order[i].second);
	return top;
}

std::vector<Value> random_values(const RandomSource& rng, std::uint64_t key, std::size_t n,
                                 Value hi) {
	std::vector<Value> values(n);
	for (std::size_t i = 0; i < n; ++i)
		values[i] = rng.uniform_below(hi, key, i);
	return values;
}

} // namespace

TEST_CASE("extended value ordering") {
	const auto neg = ExtendedValue::neg_inf();
	const auto pos = ExtendedValue::pos_inf();
	CHECK(neg < ExtendedValue::finite(0));
	CHECK(ExtendedValue::finite(0) < ExtendedValue::finite(1));
	CHECK(ExtendedValue::finite(~0ull) < pos);
	CHECK(neg < pos);
	CHECK(ExtendedValue::finite(7) == ExtendedValue::finite(7));
}

TEST_CASE("rank compare") {
	CHECK(rank_compare({5, 3}, {7, 1}) == std::strong_ordering::less);
	CHECK(rank_compare({5, 3}, {5, 1}) == std::strong_ordering::less); // smaller id wins the tie
	CHECK(rank_compare({5, 3}, {5, 3}) == std::strong_ordering::equal);
	CHECK(ranks_higher({7, 1}, {5, 3}));

	// antisymmetry and transitivity on a small exhaustive grid
	std::vector<RankKey> keys;
	for (Value v = 0; v < 3; ++v)
		for (NodeId id = 1; id <= 3; ++id)
			keys.push_back({v, id});
	for (const auto& a : keys)
		for (const auto& b : keys) {
			CHECK((rank_compare(a, b) > 0) == (rank_compare(b, a) < 0));
			CHECK((rank_compare(a, b) == 0) == (rank_compare(b, a) == 0));
			for (const auto& c : keys)
				if (rank_compare(a, b) > 0 && rank_compare(b, c) > 0)
					CHECK(rank_compare(a, c) > 0);
		}
}

TEST_CASE("compute_top_k basics") {
	CHECK(compute_top_k(std::vector<Value>{9, 7, 5, 3, 1}, 2) == std::vector<NodeId>{1, 2});
	CHECK(compute_top_k(std::vector<Value>{3, 9, 9}, 2) == std::vector<NodeId>{2, 3});
	CHECK_THROWS_AS(compute_top_k(std::vector<Value>{1, 2}, 0), std::invalid_argument);
	CHECK_THROWS_AS(compute_top_k(std::vector<Value>{1, 2}, 3), std::invalid_argument);
}

TEST_CASE("compute_top_k matches the full-sort reference") {
	const RandomSource rng(17);
	for (std::uint64_t instance = 0; instance < 300; ++instance) {
		const std::size_t n = 2 + rng.uniform_below(63, 1, instance);
		const std::uint32_t k = 1 + rng.uniform_below(n, 2, instance);
		const auto values = random_values(rng, 1000 + instance, n, 50); // ties likely
		CHECK(compute_top_k(values, k) == full_sort_top_k(values, k));
	}
}

TEST_CASE("validate_filter_set conditions") {
	const auto fin = [](Value v) { return ExtendedValue::finite(v); };
	const FilterInterval top_half{fin(5), ExtendedValue::pos_inf()};
	const FilterInterval bottom_half{ExtendedValue::neg_inf(), fin(5)};

	SUBCASE("valid at a shared boundary") {
		std::vector<FilterInterval> filters{top_half, bottom_half};
		std::vector<Value> values{8, 3};
		CHECK(validate_filter_set(filters, values, 1).valid());
	}
	SUBCASE("insider lower bound below outsider upper bound") {
		std::vector<FilterInterval> filters{top_half, {ExtendedValue::neg_inf(), fin(6)}};
		std::vector<Value> values{8, 3};
		const auto check = validate_filter_set(filters, values, 1);
		REQUIRE(check.violations.size() == 1);
		CHECK(check.violations[0].kind == FilterSetViolation::Kind::BoundaryOverlap);
		CHECK(check.violations[0].node == 1);
		CHECK(check.violations[0].other == 2);
	}
	SUBCASE("value outside its own filter") {
		std::vector<FilterInterval> filters{{fin(9), ExtendedValue::pos_inf()}, bottom_half};
		std::vector<Value> values{8, 3};
		const auto check = validate_filter_set(filters, values, 1);
		REQUIRE_FALSE(check.valid());
		CHECK(check.violations[0].kind == FilterSetViolation::Kind::ValueOutsideFilter);
		CHECK(check.violations[0].node == 1);
	}
	SUBCASE("membership is inclusive at both endpoints") {
		std::vector<FilterInterval> filters{top_half, bottom_half};
		std::vector<Value> values{5, 5}; // both sit exactly on the boundary
		CHECK(filters[0].contains(5));
		CHECK(filters[1].contains(5));
		const auto check = validate_filter_set(filters, values, 1);
		for (const auto& v : check.violations)
			CHECK(v.kind != FilterSetViolation::Kind::ValueOutsideFilter);
	}
}

TEST_CASE("valid filters pin the top-k set under in-filter perturbation") {
	// Definition-style property: build an anchored filter set, perturb every
	// node inside its interval (values kept pairwise distinct), and the top-k
	// membership must never change.
	const RandomSource rng(23);
	for (std::uint64_t instance = 0; instance < 200; ++instance) {
		const std::size_t n = 3 + rng.uniform_below(13, 3, instance);
		const std::uint32_t k = 1 + rng.uniform_below(n - 1, 4, instance);

		// distinct base values spaced out so a midpoint anchor exists
		std::vector<Value> values(n);
		for (std::size_t i = 0; i < n; ++i)
			values[i] = 10 * (1 + rng.uniform_below(1000, 5, instance, i)) + i;
		const auto base_top = full_sort_top_k(values, k);

		const Value kth = values[base_top[k - 1] - 1];
		Value next_below = 0;
		std::set<NodeId> members(base_top.begin(), base_top.end());
		for (NodeId id = 1; id <= n; ++id)
			if (!members.count(id))
				next_below = std::max(next_below, values[id - 1]);
		const Value anchor = midpoint(next_below, kth);

		std::vector<FilterInterval> filters(n);
		for (NodeId id = 1; id <= n; ++id)
			filters[id - 1] = members.count(id)
			                      ? FilterInterval{ExtendedValue::finite(anchor),
			                                       ExtendedValue::pos_inf()}
			                      : FilterInterval{ExtendedValue::neg_inf(),
			                                       ExtendedValue::finite(anchor)};
		REQUIRE(validate_filter_set(filters, values, k).valid());

		for (std::uint64_t round = 0; round < 20; ++round) {
			std::vector<Value> perturbed(n);
			std::set<Value> used;
			for (NodeId id = 1; id <= n; ++id) {
				const bool in = members.count(id) > 0;
				Value v = in ? anchor + rng.uniform_below(500, 6, instance * 100 + round, id)
				             : (anchor >= 500 ? anchor - rng.uniform_below(500, 7,
				                                                           instance * 100 + round, id)
				                              : rng.uniform_below(anchor + 1, 7,
				                                                  instance * 100 + round, id));
				while (used.count(v))
					++v; // keep the snapshot pairwise distinct
				used.insert(v);
				perturbed[id - 1] = v;
			}
			if (!validate_filter_set(filters, perturbed, k).valid())
				continue; // the distinctness nudge may have escaped a filter; skip
			const auto new_top = full_sort_top_k(perturbed, k);
			CHECK(std::set<NodeId>(new_top.begin(), new_top.end()) == members);
		}
	}
}

TEST_CASE("midpoint") {
	CHECK(midpoint(4, 10) == 7);
	CHECK(midpoint(4, 5) == 4);
	CHECK(midpoint(6, 6) == 6);
	CHECK_THROWS_AS(midpoint(7, 6), std::invalid_argument);

	// stays inside [lo, hi], no overflow near the top of the range
	const RandomSource rng(5);
	for (std::uint64_t i = 0; i < 500; ++i) {
		const Value lo = rng.draw(1, i);
		const Value hi = lo + rng.uniform_below(1u << 20, 2, i);
		const Value m = midpoint(lo, hi);
		CHECK(lo <= m);
		CHECK(m <= hi);
	}
	CHECK(midpoint(~0ull - 1, ~0ull) == ~0ull - 1);
}

TEST_CASE("extremes_update") {
	const WindowExtremes w{ExtendedValue::finite(10), ExtendedValue::finite(4), 3};

	auto u = extremes_update(w, 7, std::nullopt);
	CHECK(u.t_plus == ExtendedValue::finite(7));
	CHECK(u.t_minus == ExtendedValue::finite(4));
	CHECK(u.t0 == 3);

	u = extremes_update(w, std::nullopt, 9);
	CHECK(u.t_plus == ExtendedValue::finite(10));
	CHECK(u.t_minus == ExtendedValue::finite(9));

	u = extremes_update(w, 12, std::nullopt); // larger min is a no-op
	CHECK(u.t_plus == ExtendedValue::finite(10));
	CHECK(u.t_minus == ExtendedValue::finite(4));

	// monotone over any update sequence
	const RandomSource rng(9);
	WindowExtremes current{ExtendedValue::pos_inf(), ExtendedValue::neg_inf(), 0};
	for (std::uint64_t i = 0; i < 300; ++i) {
		const auto prev = current;
		std::optional<Value> new_min, new_max;
		if (rng.bernoulli(0.7, 1, i))
			new_min = rng.uniform_below(1000, 2, i);
		if (rng.bernoulli(0.7, 3, i))
			new_max = rng.uniform_below(1000, 4, i);
		current = extremes_update(current, new_min, new_max);
		CHECK(current.t_plus <= prev.t_plus);
		CHECK(current.t_minus >= prev.t_minus);
	}
}

TEST_CASE("trace validation") {
	Trace trace{2, 1, 2, {{1, {5, 3}}, {2, {6, 2}}}};
	CHECK_NOTHROW(trace.validate());

	Trace bad_time = trace;
	bad_time.rows[1].t = 3;
	CHECK_THROWS_AS(bad_time.validate(), std::invalid_argument);

	Trace bad_row = trace;
	bad_row.rows[0].values.pop_back();
	CHECK_THROWS_AS(bad_row.validate(), std::invalid_argument);

	Trace bad_k = trace;
	bad_k.k = 2;
	CHECK_THROWS_AS(bad_k.validate(), std::invalid_argument);
}
