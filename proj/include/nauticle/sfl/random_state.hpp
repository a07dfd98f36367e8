#pragma once

#include <cstdint>
#include <vector>

namespace nauticle {

/// Case-level random stream for the SFL `rand` builtin. Every draw is a pure
/// function of (seed, particle index, per-particle draw counter), so the
/// sequence reproduces across runs and across thread counts; a particle is
/// only ever touched by one thread, so the counters need no locking.
class RandomState {
public:
    explicit RandomState(std::uint64_t seed = 0) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    void resize(int particles) {
        if (static_cast<int>(counters_.size()) < particles) counters_.resize(particles, 0);
    }

    double uniform(int i, double a, double b) {
        int slot = (i >= 0 && i < static_cast<int>(counters_.size())) ? i : 0;
        if (counters_.empty()) counters_.resize(1, 0);
        std::uint64_t n = counters_[slot]++;
        std::uint64_t x = mix(mix(seed_ ^ 0x6e61757469636c65ULL) ^
                              mix(static_cast<std::uint64_t>(slot) + 0x9e3779b9ULL) ^ n);
        double u = static_cast<double>(x >> 11) * 0x1.0p-53;  // [0, 1)
        return a + u * (b - a);
    }

    std::vector<std::uint64_t>& counters() { return counters_; }
    const std::vector<std::uint64_t>& counters() const { return counters_; }

private:
    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::uint64_t seed_;
    std::vector<std::uint64_t> counters_;
};

}  // namespace nauticle
