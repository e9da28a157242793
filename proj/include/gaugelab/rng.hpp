#pragma once

#include <cstdint>

namespace gaugelab::num {

// Counter-based splittable random stream: (seed, stream_index, counter)
// fully determines every output, independent of platform and thread count.
// Streams for distinct indices are statistically independent, so parallel
// work items can each own a stream and produce results identical to a
// serial run.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_index);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_index() const { return stream_; }
    std::uint64_t counter() const { return counter_; }

    std::uint64_t next_u64();

    // Uniform on [0, 1): 53 random bits.
    double uniform();
    // Uniform on (0, 1]: safe to feed into log().
    double uniform_pos();
    double uniform(double a, double b);

    // Standard normal (Box-Muller; the partner value is cached).
    double normal();
    // Exponential with mean 1.
    double exponential();

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

} // namespace gaugelab::num
