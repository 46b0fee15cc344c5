#pragma once

#include "topk/core.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>

namespace topk::streams {

enum class Family : std::uint8_t { RandomWalk, Uniform, AdversarialCrossing, Constant };

const char* family_name(Family family);
Family parse_family(const std::string& name); // throws on unknown name

/**
	Synthetic workload description. Each family exercises one regime:
	  random-walk   independent bounded integer walks (occasional violations)
	  uniform       fresh uniform values every step (heavy churn)
	  adversarial   a challenger crossing the top-k boundary every `period` steps
	  constant      frozen values (no communication after initialization)
 */
struct GeneratorSpec {
	Family family = Family::RandomWalk;
	std::uint32_t n = 2;
	std::uint32_t k = 1;
	std::uint64_t steps = 1;
	std::uint64_t seed = 0;
	Value value_lo = 0;
	Value value_hi = 1u << 20;
	Value step_size = 64;     // random walk increment bound
	Value amplitude = 8;      // adversarial crossing distance
	std::uint64_t period = 1; // steps between adversarial crossings
	bool distinct = true;     // force pairwise-distinct values per snapshot
};

// Deterministic for a fixed spec. Throws std::invalid_argument on bad dimensions.
Trace generate(const GeneratorSpec& spec);

// CSV long format: header `t,node,value`, one observation per row, times 1..T
// contiguous, nodes 1..n total per step. k is not part of the file and is
// supplied by the caller on load.
void save_csv(const Trace& trace, std::ostream& out);
void save_csv(const Trace& trace, const std::string& path);

Trace load_csv(std::istream& in, std::uint32_t k);
Trace load_csv(const std::string& path, std::uint32_t k);

} // namespace topk::streams
