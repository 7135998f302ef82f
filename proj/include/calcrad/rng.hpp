#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace calcrad {

/// SplitMix64 finalizer; used to derive independent child seeds.
[[nodiscard]] std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Child seed for a named stream under a parent seed.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream) noexcept;

/// Seeded generator with platform-independent sampling helpers.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    [[nodiscard]] std::uint64_t next() { return engine_(); }
    /// Uniform in [0, 1) with 53 random bits.
    [[nodiscard]] double uniform();
    [[nodiscard]] double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [0, n). n must be > 0.
    [[nodiscard]] std::uint64_t below(std::uint64_t n);
    /// Standard normal via Box-Muller.
    [[nodiscard]] double normal();
    [[nodiscard]] bool bernoulli(double p) { return uniform() < p; }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace calcrad
