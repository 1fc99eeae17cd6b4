#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace zpmact {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

// Bad input data or an unsatisfiable precondition.
class error : public std::runtime_error {
  public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// An enumeration guard refused an instance predicted to be too large.
class guard_error : public error {
  public:
    explicit guard_error(const std::string& what) : error(what) {}
};

// Moduli stay below 2^15 so products of residues fit in 32 bits.
inline constexpr u32 max_modulus = 1u << 15;

inline bool is_prime(u32 n) {
    if (n < 2)
        return false;
    for (u32 d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

inline void check_prime(u32 p) {
    if (p < 2 || p >= max_modulus)
        throw error("modulus " + std::to_string(p) +
                    " out of range [2, 2^15)");
    if (!is_prime(p))
        throw error("modulus " + std::to_string(p) + " is not prime");
}

// Residue arithmetic; operands must already lie in [0, p).
inline u32 add_mod(u32 a, u32 b, u32 p) {
    u32 s = a + b;
    return s >= p ? s - p : s;
}

inline u32 sub_mod(u32 a, u32 b, u32 p) { return a >= b ? a - b : a + p - b; }

inline u32 neg_mod(u32 a, u32 p) { return a == 0 ? 0 : p - a; }

inline u32 mul_mod(u32 a, u32 b, u32 p) { return a * b % p; }

inline u32 reduce_mod(i64 v, u32 p) {
    i64 r = v % static_cast<i64>(p);
    return static_cast<u32>(r < 0 ? r + p : r);
}

// Extended Euclid; p prime, so every nonzero residue is a unit.
inline u32 inv_mod(u32 a, u32 p) {
    a %= p;
    if (a == 0)
        throw error("0 has no inverse mod " + std::to_string(p));
    i64 t = 0, new_t = 1;
    i64 r = p, new_r = a;
    while (new_r != 0) {
        i64 q = r / new_r;
        i64 tmp = t - q * new_t;
        t = new_t;
        new_t = tmp;
        tmp = r - q * new_r;
        r = new_r;
        new_r = tmp;
    }
    return reduce_mod(t, p);
}

inline u32 pow_mod(u32 a, u64 e, u32 p) {
    u32 acc = 1 % p;
    u32 base = a % p;
    while (e) {
        if (e & 1)
            acc = mul_mod(acc, base, p);
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    return acc;
}

// One residue tagged with its prime; mixed-modulus arithmetic is an error.
struct FpScalar {
    u32 p;
    u32 value;

    FpScalar(u32 prime, i64 v) : p(prime), value(0) {
        check_prime(prime);
        value = reduce_mod(v, prime);
    }

    friend bool operator==(const FpScalar&, const FpScalar&) = default;

    FpScalar operator+(const FpScalar& o) const {
        require_same(o);
        return with(add_mod(value, o.value, p));
    }
    FpScalar operator-(const FpScalar& o) const {
        require_same(o);
        return with(sub_mod(value, o.value, p));
    }
    FpScalar operator*(const FpScalar& o) const {
        require_same(o);
        return with(mul_mod(value, o.value, p));
    }
    FpScalar operator-() const { return with(neg_mod(value, p)); }

    FpScalar inverse() const { return with(inv_mod(value, p)); }

    FpScalar operator/(const FpScalar& o) const {
        require_same(o);
        return with(mul_mod(value, inv_mod(o.value, p), p));
    }

  private:
    FpScalar with(u32 v) const {
        FpScalar s = *this;
        s.value = v;
        return s;
    }
    void require_same(const FpScalar& o) const {
        if (p != o.p)
            throw error("mixed moduli: " + std::to_string(p) + " vs " +
                        std::to_string(o.p));
    }
};

} // namespace zpmact
