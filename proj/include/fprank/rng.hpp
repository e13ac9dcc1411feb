#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace fprank {

// Seeded, splittable random stream.  fork(label) derives an independent child
// stream from (parent seed, label) only — it neither consumes nor depends on
// draws made from the parent, so the layout of substreams is stable no matter
// in which order a pipeline draws from them.  Distinct labels give distinct
// streams; reusing a label reproduces the same stream.
class SplitRng {
public:
    explicit SplitRng(uint64_t seed);

    uint64_t seed() const { return seed_; }
    uint64_t next_u64() { return engine_(); }

    // Unbiased uniform draw from [0, n); n must be positive.  Rejection below
    // the largest multiple of n keeps the distribution exact.
    uint64_t below(uint64_t n) {
        uint64_t threshold = (0 - n) % n;
        for (;;) {
            uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    SplitRng fork(std::string_view label) const;

private:
    uint64_t seed_;
    std::mt19937_64 engine_;
};

} // namespace fprank
