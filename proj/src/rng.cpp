#include "hrvkit/rng.hpp"

#include <algorithm>
#include <cmath>

namespace hrvkit::simulate {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

Stream::Stream(std::uint64_t seed, std::uint64_t stream_id)
    : engine_(splitmix64(splitmix64(seed) ^ splitmix64(~stream_id))) {}

double Stream::uniform() {
    // 53 random bits shifted up by one ulp: never 0, exactly 1 possible.
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
}

std::size_t Stream::index(std::size_t count) {
    // u * count lies in (0, count], so its ceiling is 1..count.
    const double c = std::ceil(uniform() * static_cast<double>(count));
    return std::min(count, static_cast<std::size_t>(c)) - 1;
}

} // namespace hrvkit::simulate
