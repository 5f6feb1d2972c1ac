#pragma once

#include <cstdint>
#include <random>

namespace wfr {

/// Seeded generator with platform-independent draws (std::mt19937_64 is
/// fully specified; the standard distributions are not).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n)
    {
        if (n <= 1)
            return 0;
        std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % n);
        for (;;) {
            std::uint64_t x = engine_();
            if (x < limit)
                return x % n;
        }
    }

    int uniform(int lo, int hi) { return lo + static_cast<int>(below(std::uint64_t(hi - lo + 1))); }

    bool chance(int percent) { return static_cast<int>(below(100)) < percent; }

private:
    std::mt19937_64 engine_;
};

} // namespace wfr
