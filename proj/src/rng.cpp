#include "igpkit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "igpkit/errors.hpp"

namespace igp {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) {
    key_ = seed;
    seed_state(key_);
}

Rng Rng::derive(std::uint64_t tag) const {
    Rng child;
    std::uint64_t mix = key_ ^ (tag + 0x632BE59BD9B4E019ull + (key_ << 6) + (key_ >> 2));
    std::uint64_t st = mix;
    child.key_ = splitmix64(st);
    child.seed_state(child.key_);
    return child;
}

void Rng::seed_state(std::uint64_t key) {
    std::uint64_t st = key;
    for (auto& w : s_) w = splitmix64(st);
    has_spare_ = false;
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // u1 in (0,1] so the log is finite
    double u1 = 1.0 - uniform01();
    double u2 = uniform01();
    double rad = std::sqrt(-2.0 * std::log(u1));
    double ang = 2.0 * std::numbers::pi * u2;
    spare_ = rad * std::sin(ang);
    has_spare_ = true;
    return rad * std::cos(ang);
}

std::vector<int> Rng::sample_without_replacement(int p, int k) {
    if (k < 0 || k > p) throw ArgumentError("sample_without_replacement: k out of range");
    // partial Fisher-Yates on an index pool
    std::vector<int> pool(p);
    for (int i = 0; i < p; ++i) pool[i] = i;
    for (int i = 0; i < k; ++i) {
        int j = i + static_cast<int>(next_u64() % static_cast<std::uint64_t>(p - i));
        std::swap(pool[i], pool[j]);
    }
    std::vector<int> out(pool.begin(), pool.begin() + k);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace igp
