#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace hitpred {

// 64-bit FNV-1a. Stable across platforms; used for seed derivation and
// dataset fingerprints.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t state = 0xcbf29ce484222325ULL);

std::uint64_t splitmix64(std::uint64_t x);

// Named sub-seed of a run seed, e.g. derive_seed(run, "smote").
std::uint64_t derive_seed(std::uint64_t base, std::string_view name);

// Portable random stream: the engine is std::mt19937_64 (sequence fixed by
// the standard) and all distributions are implemented here rather than
// taken from <random>, whose distribution algorithms vary across libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n). n must be > 0.
    std::size_t index(std::size_t n);

    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = index(i);
            using std::swap;
            swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace hitpred
