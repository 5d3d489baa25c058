#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace polaris {

// Arithmetic in the prime field GF(p). Values are kept reduced in [0, p).
// p stays small (2, 3, 5, ...) so 32-bit storage with 64-bit intermediates
// is always safe.

inline bool is_prime(uint32_t p) {
    if (p < 2) return false;
    for (uint32_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

inline void require_prime(uint32_t p) {
    if (!is_prime(p))
        throw std::invalid_argument("modulus " + std::to_string(p) + " is not prime");
}

inline uint32_t gf_add(uint32_t a, uint32_t b, uint32_t p) {
    uint32_t s = a + b;
    return s >= p ? s - p : s;
}

inline uint32_t gf_sub(uint32_t a, uint32_t b, uint32_t p) {
    return a >= b ? a - b : a + p - b;
}

inline uint32_t gf_neg(uint32_t a, uint32_t p) { return a ? p - a : 0; }

inline uint32_t gf_mul(uint32_t a, uint32_t b, uint32_t p) {
    return static_cast<uint32_t>((uint64_t(a) * b) % p);
}

inline uint32_t gf_pow(uint32_t a, uint64_t e, uint32_t p) {
    uint32_t r = 1 % p;
    while (e) {
        if (e & 1) r = gf_mul(r, a, p);
        a = gf_mul(a, a, p);
        e >>= 1;
    }
    return r;
}

// Inverse via Fermat: a^(p-2). Requires a != 0.
inline uint32_t gf_inv(uint32_t a, uint32_t p) {
    if (a == 0) throw std::domain_error("inverse of zero in GF(p)");
    return gf_pow(a % p, p - 2, p);
}

inline uint32_t gf_reduce(long long v, uint32_t p) {
    long long r = v % static_cast<long long>(p);
    if (r < 0) r += p;
    return static_cast<uint32_t>(r);
}

/// A single field element carrying its modulus; mostly for API boundaries,
/// the hot paths work on raw uint32_t with an ambient modulus.
struct Scalar {
    uint32_t value = 0;
    uint32_t p = 2;

    Scalar() = default;
    Scalar(long long v, uint32_t modulus) : p(modulus) {
        require_prime(modulus);
        value = gf_reduce(v, modulus);
    }

    friend Scalar operator+(Scalar a, Scalar b) { a.check(b); return raw(gf_add(a.value, b.value, a.p), a.p); }
    friend Scalar operator-(Scalar a, Scalar b) { a.check(b); return raw(gf_sub(a.value, b.value, a.p), a.p); }
    friend Scalar operator*(Scalar a, Scalar b) { a.check(b); return raw(gf_mul(a.value, b.value, a.p), a.p); }
    friend Scalar operator/(Scalar a, Scalar b) { a.check(b); return raw(gf_mul(a.value, gf_inv(b.value, a.p), a.p), a.p); }
    friend bool operator==(const Scalar& a, const Scalar& b) = default;

    Scalar inv() const { return raw(gf_inv(value, p), p); }

private:
    static Scalar raw(uint32_t v, uint32_t p) {
        Scalar s;
        s.value = v;
        s.p = p;
        return s;
    }
    void check(const Scalar& o) const {
        if (p != o.p) throw std::invalid_argument("GF(p) modulus mismatch");
    }
};

} // namespace polaris
