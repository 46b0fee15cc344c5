#include "topk/random.hpp"

namespace topk {

namespace {

inline std::uint64_t mix64(std::uint64_t x) {
	x += 0x9E3779B97F4A7C15ull;
	x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
	x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
	return x ^ (x >> 31);
}

} // namespace

std::uint64_t RandomSource::draw(std::uint64_t a, std::uint64_t b, std::uint64_t c) const {
	std::uint64_t h = mix64(seed_ ^ 0xA0761D6478BD642Full);
	h = mix64(h ^ a);
	h = mix64(h ^ b);
	h = mix64(h ^ c);
	return h;
}

double RandomSource::uniform01(std::uint64_t a, std::uint64_t b, std::uint64_t c) const {
	return static_cast<double>(draw(a, b, c) >> 11) * (1.0 / 9007199254740992.0);
}

bool RandomSource::bernoulli(double p, std::uint64_t a, std::uint64_t b, std::uint64_t c) const {
	if (p >= 1.0)
		return true;
	if (p <= 0.0)
		return false;
	return uniform01(a, b, c) < p;
}

std::uint64_t RandomSource::uniform_below(std::uint64_t m, std::uint64_t a, std::uint64_t b,
                                          std::uint64_t c) const {
	return draw(a, b, c) % m;
}

} // namespace topk
