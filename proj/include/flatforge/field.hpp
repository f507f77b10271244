#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace flatforge {

inline constexpr int kMaxPrime = 13;
inline constexpr int kMaxDim = 16;

using Residue = std::uint8_t;

constexpr bool is_supported_prime(int p) {
    switch (p) {
    case 2: case 3: case 5: case 7: case 11: case 13: return true;
    default: return false;
    }
}

// Arithmetic tables for GF(p), p <= 13.
class FieldPrime {
public:
    explicit FieldPrime(int p) : p_(p) {
        if (!is_supported_prime(p)) {
            throw std::invalid_argument("unsupported prime " + std::to_string(p) + " (expected 2,3,5,7,11,13)");
        }
        for (int a = 0; a < p; ++a) {
            for (int b = 0; b < p; ++b) {
                add_[a][b] = static_cast<Residue>((a + b) % p);
                mul_[a][b] = static_cast<Residue>((a * b) % p);
            }
            neg_[a] = static_cast<Residue>((p - a) % p);
            for (int b = 1; b < p; ++b) {
                if ((a * b) % p == 1) inv_[a] = static_cast<Residue>(b);
            }
        }
    }

    int p() const { return p_; }
    Residue add(Residue a, Residue b) const { return add_[a][b]; }
    Residue sub(Residue a, Residue b) const { return add_[a][neg_[b]]; }
    Residue mul(Residue a, Residue b) const { return mul_[a][b]; }
    Residue neg(Residue a) const { return neg_[a]; }
    Residue inv(Residue a) const {
        if (a == 0) throw std::domain_error("inverse of zero");
        return inv_[a];
    }
    Residue reduce(long long v) const {
        long long r = v % p_;
        return static_cast<Residue>(r < 0 ? r + p_ : r);
    }

    bool operator==(const FieldPrime& o) const { return p_ == o.p_; }

private:
    int p_;
    std::array<std::array<Residue, kMaxPrime>, kMaxPrime> add_{};
    std::array<std::array<Residue, kMaxPrime>, kMaxPrime> mul_{};
    std::array<Residue, kMaxPrime> neg_{};
    std::array<Residue, kMaxPrime> inv_{};
};

// Shared immutable table for p; safe to call concurrently.
inline const FieldPrime& field(int p) {
    static const std::array<FieldPrime, 6> tables{FieldPrime(2), FieldPrime(3), FieldPrime(5),
                                                  FieldPrime(7), FieldPrime(11), FieldPrime(13)};
    for (const auto& f : tables) {
        if (f.p() == p) return f;
    }
    throw std::invalid_argument("unsupported prime " + std::to_string(p) + " (expected 2,3,5,7,11,13)");
}

struct VecGF {
    int p = 2;
    std::vector<Residue> coords;

    VecGF() = default;
    VecGF(int prime, std::vector<Residue> c) : p(prime), coords(std::move(c)) {
        const auto& f = field(p);
        for (auto& x : coords) x = f.reduce(x);
    }

    std::size_t dim() const { return coords.size(); }
    bool is_zero() const {
        for (auto x : coords) if (x != 0) return false;
        return true;
    }
    Residue operator[](std::size_t i) const { return coords[i]; }
    Residue& operator[](std::size_t i) { return coords[i]; }

    bool operator==(const VecGF&) const = default;
    auto operator<=>(const VecGF&) const = default;
};

inline VecGF scale(const VecGF& v, Residue c) {
    const auto& f = field(v.p);
    VecGF out = v;
    for (auto& x : out.coords) x = f.mul(x, c);
    return out;
}

inline VecGF add(const VecGF& a, const VecGF& b) {
    if (a.p != b.p || a.dim() != b.dim()) throw std::invalid_argument("vector shape mismatch");
    const auto& f = field(a.p);
    VecGF out = a;
    for (std::size_t i = 0; i < out.dim(); ++i) out[i] = f.add(a[i], b[i]);
    return out;
}

inline Residue dot(const VecGF& a, const VecGF& b) {
    if (a.p != b.p || a.dim() != b.dim()) throw std::invalid_argument("vector shape mismatch");
    const auto& f = field(a.p);
    Residue s = 0;
    for (std::size_t i = 0; i < a.dim(); ++i) s = f.add(s, f.mul(a[i], b[i]));
    return s;
}

}  // namespace flatforge
