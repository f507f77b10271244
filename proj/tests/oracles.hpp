#pragma once

// Brute-force reference implementations used only by the test suites. They
// go through MatGF elimination and subset enumeration, never through Span.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "flatforge/linalg.hpp"
#include "flatforge/matroid.hpp"

namespace oracle {

using flatforge::Matroid;
using flatforge::MatGF;
using flatforge::VecGF;

inline std::size_t rank_of_columns(const Matroid& m, std::uint32_t mask) {
    std::vector<VecGF> cols;
    for (std::size_t i = 0; i < m.size(); ++i)
        if ((mask >> i) & 1U) cols.push_back(m.vector(i));
    if (cols.empty() || m.dim() == 0) return 0;
    return flatforge::rank(MatGF::from_columns(m.p(), static_cast<std::size_t>(m.dim()), cols));
}

// rank of every subset (bitmask) of a ground set with n <= 16, as the size of
// a largest independent subset.
inline std::vector<int> rank_table(const Matroid& m) {
    const std::size_t n = m.size();
    const std::uint32_t total = 1U << n;
    std::vector<char> indep(total, 0);
    std::vector<int> rk(total, 0);
    for (std::uint32_t s = 0; s < total; ++s) {
        const int c = std::popcount(s);
        if (c <= m.dim()) indep[s] = rank_of_columns(m, s) == static_cast<std::size_t>(c);
        if (indep[s]) {
            rk[s] = c;
        } else {
            int best = 0;
            for (std::uint32_t t = s; t; t &= t - 1) {
                const std::uint32_t bit = t & (~t + 1);
                best = std::max(best, rk[s & ~bit]);
            }
            rk[s] = best;
        }
    }
    return rk;
}

inline std::uint32_t closure_from_table(const std::vector<int>& rk, std::size_t n, std::uint32_t s) {
    std::uint32_t cl = s;
    for (std::size_t x = 0; x < n; ++x)
        if (rk[s | (1U << x)] == rk[s]) cl |= 1U << x;
    return cl;
}

inline std::vector<std::uint32_t> circuits(const std::vector<int>& rk, std::size_t n) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t s = 1; s < (1U << n); ++s) {
        const int c = std::popcount(s);
        if (rk[s] == c) continue;
        bool minimal = true;
        for (std::uint32_t t = s; t; t &= t - 1) {
            const std::uint32_t bit = t & (~t + 1);
            if (rk[s & ~bit] != c - 1) {
                minimal = false;
                break;
            }
        }
        if (minimal) out.push_back(s);
    }
    return out;
}

// Components of non-loop elements: two elements are together iff a circuit contains both.
inline std::vector<std::vector<std::size_t>> components(const Matroid& m) {
    const std::size_t n = m.size();
    const auto rk = rank_table(m);
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x];
        return x;
    };
    for (auto c : circuits(rk, n)) {
        if (std::popcount(c) < 2) continue;
        const auto first = static_cast<std::size_t>(std::countr_zero(c));
        for (std::size_t x = first + 1; x < n; ++x) {
            if ((c >> x) & 1U) {
                auto a = find(first), b = find(x);
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }
        }
    }
    std::vector<std::vector<std::size_t>> out;
    std::vector<long> slot(n, -1);
    for (std::size_t e = 0; e < n; ++e) {
        if (rk[1U << e] == 0) continue;
        const auto r = find(e);
        if (slot[r] < 0) {
            slot[r] = static_cast<long>(out.size());
            out.emplace_back();
        }
        out[static_cast<std::size_t>(slot[r])].push_back(e);
    }
    return out;
}

// All flats of rank k as bitmasks, by closing every subset.
inline std::vector<std::uint32_t> flats_of_rank(const Matroid& m, int k) {
    const auto rk = rank_table(m);
    std::vector<std::uint32_t> out;
    for (std::uint32_t s = 0; s < (1U << m.size()); ++s)
        if (rk[s] == k && closure_from_table(rk, m.size(), s) == s) out.push_back(s);
    return out;
}

}  // namespace oracle
