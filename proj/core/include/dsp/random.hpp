#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace dsp {

using Rng = std::mt19937_64;

// Counter-based seed derivation. A stream is identified by the master seed
// plus a path of integer keys (trial, goal, generation, ...), so the random
// numbers an evaluation sees never depend on scheduling order.
class StreamSeed {
public:
    constexpr explicit StreamSeed(std::uint64_t value) noexcept : value_(value) {}

    [[nodiscard]] constexpr StreamSeed derive(std::uint64_t key) const noexcept {
        return StreamSeed(mix(value_ ^ mix(key + 0x632be59bd9b4e019ULL)));
    }

    [[nodiscard]] constexpr StreamSeed derive(std::initializer_list<std::uint64_t> keys) const noexcept {
        StreamSeed s = *this;
        for (auto k : keys) s = s.derive(k);
        return s;
    }

    [[nodiscard]] Rng rng() const {
        std::seed_seq seq{static_cast<std::uint32_t>(value_), static_cast<std::uint32_t>(value_ >> 32)};
        return Rng(seq);
    }

    [[nodiscard]] constexpr std::uint64_t value() const noexcept { return value_; }

    friend constexpr bool operator==(StreamSeed, StreamSeed) noexcept = default;

private:
    // splitmix64 finalizer
    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t value_;
};

// Stream domains, used as the first derivation key so that e.g. the GA
// operator stream never collides with an evaluation stream.
enum class Domain : std::uint64_t {
    Evaluation = 1,
    GaOperators = 2,
    GaInit = 3,
    Replay = 4,
    ReplayHc = 5,
    Baseline = 6,
};

[[nodiscard]] constexpr StreamSeed stream(std::uint64_t master, Domain d) noexcept {
    return StreamSeed(master).derive(static_cast<std::uint64_t>(d));
}

} // namespace dsp
