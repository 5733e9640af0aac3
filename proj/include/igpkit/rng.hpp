#pragma once

#include <cstdint>
#include <vector>

namespace igp {

// Counter-based deterministic generator. A stream is identified by a seed
// plus a chain of derivation tags, so (seed, cell, trial) always yields the
// same draws no matter how many worker threads are running or in what order
// trials complete. xoshiro256** core, stream keys mixed with splitmix64.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    // Child stream: independent of the parent's position, depends only on
    // the (seed, tag...) chain.
    Rng derive(std::uint64_t tag) const;

    std::uint64_t next_u64();

    // uniform on [0, 1)
    double uniform01();

    // standard normal, Box-Muller with a cached spare
    double normal();

    // k distinct values from {0, ..., p-1}, ascending order
    std::vector<int> sample_without_replacement(int p, int k);

private:
    explicit Rng() = default;
    void seed_state(std::uint64_t key);
    std::uint64_t key_;
    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Domain tags keep the streams used by different subsystems disjoint even
// under a shared base seed.
inline constexpr std::uint64_t kStreamProblems = 0x01;
inline constexpr std::uint64_t kStreamTraining = 0x02;
inline constexpr std::uint64_t kStreamBench = 0x03;
inline constexpr std::uint64_t kStreamVerify = 0x04;

}  // namespace igp
