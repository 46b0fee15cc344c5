#pragma once

#include <cstdint>
#include <vector>

namespace topk {

/**
	Seeded counter-based randomness: every draw is a pure function of the master
	seed and a (a, b, c) substream key, so results do not depend on iteration
	order and identical seeds replay identical runs on any platform. The mixer
	is splitmix64-style finalization over the keyed words.
 */
class RandomSource {
public:
	explicit RandomSource(std::uint64_t seed) : seed_(seed) {}

	std::uint64_t seed() const { return seed_; }

	std::uint64_t draw(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) const;

	// Uniform in [0, 1), 53-bit resolution.
	double uniform01(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) const;

	// True with probability p (clamped to [0, 1]).
	bool bernoulli(double p, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) const;

	// Uniform integer in [0, m). m must be positive.
	std::uint64_t uniform_below(std::uint64_t m, std::uint64_t a, std::uint64_t b = 0,
	                            std::uint64_t c = 0) const;

private:
	std::uint64_t seed_;
};

// In-place Fisher–Yates keyed off (rng, key): deterministic across platforms,
// unlike std::shuffle. Element i swaps with a draw keyed by (key, i).
template <typename T>
void deterministic_shuffle(std::vector<T>& items, const RandomSource& rng, std::uint64_t key) {
	for (std::size_t i = items.size(); i > 1; --i) {
		const auto j = rng.uniform_below(i, key, 0x73687566u, i);
		std::swap(items[i - 1], items[j]);
	}
}

} // namespace topk
