#include "gaugelab/rng.hpp"

#include <cmath>
#include <numbers>

namespace gaugelab::num {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// splitmix64 finalizer: full-avalanche bijective mix.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_index)
    : seed_(seed), stream_(stream_index) {
    // Two mixing rounds keep distinct (seed, stream) pairs decorrelated even
    // for small consecutive values.
    key_ = mix64(mix64(seed + kGolden) ^ mix64(stream_index * 0xda942042e4dd58b5ULL + 1));
}

std::uint64_t RngStream::next_u64() {
    const std::uint64_t c = counter_++;
    return mix64(key_ + c * kGolden);
}

double RngStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double RngStream::uniform(double a, double b) {
    return a + (b - a) * uniform();
}

double RngStream::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_normal_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    cached_normal_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
}

double RngStream::exponential() {
    return -std::log(uniform_pos());
}

} // namespace gaugelab::num
