#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace pipeopt {

// Seeded random source with explicit bounded sampling. std::mt19937_64 output
// is fully specified by the standard; the std::uniform_* distributions are
// not, so we roll our own to keep seeded runs bit-identical across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform value in [0, n). n must be > 0.
    std::uint64_t bounded(std::uint64_t n) {
        // rejection sampling on the top range to avoid modulo bias
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v = engine_();
        while (v >= limit) v = engine_();
        return v % n;
    }

    // Uniform value in [lo, hi], inclusive.
    std::uint64_t in_range(std::uint64_t lo, std::uint64_t hi) {
        return lo + bounded(hi - lo + 1);
    }

    // [0, 1)
    double unit_double() {
        return static_cast<double>(engine_() >> 11) * (1.0 / 9007199254740992.0);
    }

    // Uniform sample of k distinct elements, in draw order.
    template <typename T>
    std::vector<T> sample(std::vector<T> pool, std::size_t k) {
        std::vector<T> out;
        out.reserve(k);
        for (std::size_t i = 0; i < k && !pool.empty(); ++i) {
            std::size_t j = static_cast<std::size_t>(bounded(pool.size()));
            out.push_back(pool[j]);
            pool[j] = pool.back();
            pool.pop_back();
        }
        return out;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace pipeopt
