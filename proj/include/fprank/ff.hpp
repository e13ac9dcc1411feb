#pragma once

#include <cstdint>
#include <stdexcept>

#include "fprank/rng.hpp"

namespace fprank {

// A residue mod p.  Only PrimeField knows how to combine them; keeping the
// value opaque prevents accidental mixing of raw integers and residues.
struct Fp {
    uint64_t v = 0;
    friend bool operator==(Fp a, Fp b) { return a.v == b.v; }
    friend bool operator!=(Fp a, Fp b) { return a.v != b.v; }
};

// Arithmetic in F_p for a word-size prime p.  The default prime 2^61 - 1 is
// large enough that the randomized rank machinery has negligible failure
// probability at the supported matrix sizes (p >= n^4 for n up to 2^15), and
// its Mersenne form gives a fast reduction path.
class PrimeField {
public:
    static constexpr uint64_t kDefaultPrime = (uint64_t(1) << 61) - 1;

    explicit PrimeField(uint64_t p = kDefaultPrime);

    uint64_t prime() const { return p_; }

    Fp zero() const { return Fp{0}; }
    Fp one() const { return Fp{1}; }

    // Reduce a signed/unsigned integer into [0, p).
    Fp from_int(long long x) const;
    Fp from_uint(uint64_t x) const;

    Fp add(Fp a, Fp b) const {
        uint64_t s = a.v + b.v;
        if (s >= p_) s -= p_;
        return Fp{s};
    }
    Fp sub(Fp a, Fp b) const {
        return Fp{a.v >= b.v ? a.v - b.v : a.v + p_ - b.v};
    }
    Fp neg(Fp a) const { return Fp{a.v == 0 ? 0 : p_ - a.v}; }

    Fp mul(Fp a, Fp b) const {
        unsigned __int128 t = (unsigned __int128)a.v * b.v;
        if (mersenne_) {
            // x = hi*2^61 + lo == hi + lo (mod 2^61 - 1); two folds suffice.
            uint64_t lo = (uint64_t)t & p_;
            uint64_t hi = (uint64_t)(t >> 61);
            uint64_t s = lo + hi;
            s = (s & p_) + (s >> 61);
            if (s >= p_) s -= p_;
            return Fp{s};
        }
        return Fp{(uint64_t)(t % p_)};
    }

    Fp pow(Fp base, uint64_t e) const;

    // Multiplicative inverse; throws std::domain_error on zero input.
    Fp inv(Fp a) const;

    // Uniform draw from [0, p) by rejection on the top bits of a 64-bit draw.
    Fp sample(SplitRng& rng) const;
    Fp sample_nonzero(SplitRng& rng) const;

    // Deterministic Miller-Rabin, valid for all 64-bit inputs.
    static bool is_prime(uint64_t n);

private:
    uint64_t p_;
    bool mersenne_;
    int bits_;
};

} // namespace fprank
