#include "fprank/rng.hpp"

namespace fprank {
namespace {

uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace

SplitRng::SplitRng(uint64_t seed)
    : seed_(seed), engine_(splitmix64(seed ^ 0xA02BDBF7BB3C0A7Full)) {}

SplitRng SplitRng::fork(std::string_view label) const {
    return SplitRng(splitmix64(seed_ ^ fnv1a64(label)));
}

} // namespace fprank
