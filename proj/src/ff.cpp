#include "fprank/ff.hpp"

#include <bit>

namespace fprank {
namespace {

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return (uint64_t)(((unsigned __int128)a * b) % m);
}

uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t r = 1 % m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

} // namespace

bool PrimeField::is_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // This witness set is deterministic for all 64-bit integers.
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = powmod_u64(a % n, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

PrimeField::PrimeField(uint64_t p) : p_(p) {
    if (!is_prime(p)) throw std::invalid_argument("PrimeField: modulus must be prime");
    mersenne_ = (p == kDefaultPrime);
    bits_ = std::bit_width(p_);
}

Fp PrimeField::from_int(long long x) const {
    long long r = x % (long long)p_;
    if (r < 0) r += (long long)p_;
    return Fp{(uint64_t)r};
}

Fp PrimeField::from_uint(uint64_t x) const { return Fp{x % p_}; }

Fp PrimeField::pow(Fp base, uint64_t e) const {
    Fp r = one();
    Fp b = base;
    while (e) {
        if (e & 1) r = mul(r, b);
        b = mul(b, b);
        e >>= 1;
    }
    return r;
}

Fp PrimeField::inv(Fp a) const {
    if (a.v == 0) throw std::domain_error("PrimeField::inv: zero has no inverse");
    return pow(a, p_ - 2);
}

Fp PrimeField::sample(SplitRng& rng) const {
    for (;;) {
        uint64_t x = rng.next_u64() >> (64 - bits_);
        if (x < p_) return Fp{x};
    }
}

Fp PrimeField::sample_nonzero(SplitRng& rng) const {
    for (;;) {
        Fp x = sample(rng);
        if (x.v != 0) return x;
    }
}

} // namespace fprank
