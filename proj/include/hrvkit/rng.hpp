#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace hrvkit::simulate {

/// Seeded uniform stream. mt19937_64 output is fixed by the C++ standard;
/// the seed is expanded through SplitMix64 so that (seed, stream) pairs give
/// decorrelated engines, and doubles are formed from the top 53 bits, so
/// draws are identical on every conforming platform.
class Stream {
public:
    static constexpr std::string_view algorithm = "mt19937_64+splitmix64";

    Stream(std::uint64_t seed, std::uint64_t stream_id);

    /// Uniform on (0, 1].
    double uniform();

    /// Index in [0, count).
    std::size_t index(std::size_t count);

    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

} // namespace hrvkit::simulate
