#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "catalog.hpp"
#include "errors.hpp"
#include "flats.hpp"
#include "lemmas/unavoidable.hpp"
#include "matroid.hpp"

namespace flatforge {

inline constexpr int kMaxExhaustiveBinaryRank = 4;
inline constexpr int kMaxSampledBinaryRank = 5;

// Columns of a binary matroid as bitmasks, bit i = coordinate i.
using BinaryColumns = std::vector<std::uint32_t>;

namespace detail {

inline std::vector<std::uint32_t> binary_points(int r) {
    std::vector<std::uint32_t> out;
    for (const auto& v : ProjectivePoints(r, 2)) out.push_back(pack_bits(v));
    return out;
}

inline int binary_rank(const std::vector<std::uint32_t>& pts, std::uint64_t mask) {
    std::uint32_t basis[32] = {};
    int rank = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!((mask >> i) & 1U)) continue;
        std::uint32_t v = pts[i];
        for (int b = 31; b >= 0 && v; --b) {
            if (!((v >> b) & 1U)) continue;
            if (!basis[b]) {
                basis[b] = v;
                ++rank;
                v = 0;
            } else {
                v ^= basis[b];
            }
        }
    }
    return rank;
}

inline Matroid binary_matroid(int r, const BinaryColumns& cols) {
    std::vector<VecGF> vecs;
    for (auto c : cols) {
        VecGF v(2, std::vector<Residue>(static_cast<std::size_t>(r), 0));
        for (int i = 0; i < r; ++i) v[static_cast<std::size_t>(i)] = static_cast<Residue>((c >> i) & 1U);
        vecs.push_back(std::move(v));
    }
    return Matroid(2, r, std::move(vecs));
}

inline BinaryColumns columns_of(const std::vector<std::uint32_t>& pts, std::uint64_t mask) {
    BinaryColumns out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if ((mask >> i) & 1U) out.push_back(pts[i]);
    }
    return out;
}

// Coordinates of v in the ordered basis b (which must span v), or nullopt.
inline std::optional<std::uint32_t> solve_binary(const std::vector<std::uint32_t>& b, std::uint32_t v) {
    const std::size_t r = b.size();
    // Gaussian elimination with tracking of which basis vectors were combined.
    std::vector<std::uint32_t> rows(b.begin(), b.end());
    std::vector<std::uint32_t> track(r);
    for (std::size_t i = 0; i < r; ++i) track[i] = 1U << i;
    std::vector<int> pivot(r, -1);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (pivot[j] >= 0 && ((rows[i] >> pivot[j]) & 1U)) {
                rows[i] ^= rows[j];
                track[i] ^= track[j];
            }
        }
        if (!rows[i]) return std::nullopt;
        int pb = 31;
        while (!((rows[i] >> pb) & 1U)) --pb;
        pivot[i] = pb;
        for (std::size_t j = 0; j < i; ++j) {
            if ((rows[j] >> pb) & 1U) {
                rows[j] ^= rows[i];
                track[j] ^= track[i];
            }
        }
    }
    std::uint32_t coords = 0;
    for (std::size_t i = 0; i < r; ++i) {
        if ((v >> pivot[i]) & 1U) {
            v ^= rows[i];
            coords ^= track[i];
        }
    }
    if (v) return std::nullopt;
    return coords;
}

}  // namespace detail

// Lexicographically least sorted column list over all ordered bases taken as
// the identity. cols must span GF(2)^r.
inline BinaryColumns canonical_form(int r, const BinaryColumns& cols) {
    if (r < 1 || r > kMaxSampledBinaryRank) throw ScaleRefusal("canonical form supports ranks 1.." + std::to_string(kMaxSampledBinaryRank));
    std::optional<BinaryColumns> best;
    std::vector<std::uint32_t> basis;
    std::vector<std::size_t> idx;
    auto rec = [&](auto&& self) -> void {
        if (static_cast<int>(basis.size()) == r) {
            BinaryColumns img;
            img.reserve(cols.size());
            for (auto c : cols) {
                auto x = detail::solve_binary(basis, c);
                if (!x) throw std::logic_error("basis does not span");
                img.push_back(*x);
            }
            std::sort(img.begin(), img.end());
            if (!best || img < *best) best = std::move(img);
            return;
        }
        for (std::size_t i = 0; i < cols.size(); ++i) {
            basis.push_back(cols[i]);
            if (detail::binary_rank(basis, (std::uint64_t{1} << basis.size()) - 1) == static_cast<int>(basis.size())) {
                self(self);
            }
            basis.pop_back();
        }
    };
    rec(rec);
    if (!best) throw std::invalid_argument("columns do not span rank " + std::to_string(r));
    return *best;
}

struct EnumerationOptions {
    bool dedup = false;
    std::size_t samples = 0;  // rank 5 only
    std::uint64_t seed = 1;
};

// Every simple rank-r binary matroid as a spanning subset of PG(r-1,2), in
// increasing subset-mask order; fn(mask, columns) returns false to stop. With
// dedup only the first member of each canonical class is passed on. Rank 5
// draws options.samples seeded random subsets instead.
template <class Fn>
void enumerate_simple_binary(int r, Fn&& fn, const EnumerationOptions& opt = {}) {
    if (r < 1) throw std::invalid_argument("rank must be at least 1");
    if (r > kMaxSampledBinaryRank) throw ScaleRefusal("rank " + std::to_string(r) + " is beyond enumeration");
    const auto pts = detail::binary_points(r);
    std::vector<BinaryColumns> seen;
    auto emit = [&](std::uint64_t mask) {
        auto cols = detail::columns_of(pts, mask);
        if (opt.dedup) {
            auto canon = canonical_form(r, cols);
            if (std::find(seen.begin(), seen.end(), canon) != seen.end()) return true;
            seen.push_back(std::move(canon));
        }
        return static_cast<bool>(fn(mask, cols));
    };
    if (r > kMaxExhaustiveBinaryRank) {
        if (opt.samples == 0) throw ScaleRefusal("rank 5 supports sampling only");
        std::mt19937_64 rng(opt.seed);
        std::size_t drawn = 0;
        while (drawn < opt.samples) {
            const std::uint64_t mask = rng() & ((std::uint64_t{1} << pts.size()) - 1);
            if (detail::binary_rank(pts, mask) != r) continue;
            ++drawn;
            if (!emit(mask)) return;
        }
        return;
    }
    const std::uint64_t limit = std::uint64_t{1} << pts.size();
    for (std::uint64_t mask = 1; mask < limit; ++mask) {
        if (detail::binary_rank(pts, mask) != r) continue;
        if (!emit(mask)) return;
    }
}

struct CensusOptions {
    unsigned threads = 1;
    bool keep_positives = false;
    std::size_t samples = 0;
    std::uint64_t seed = 1;
};

struct CensusPositive {
    std::uint64_t mask = 0;
    Flat flat;
};

struct EnumerationReport {
    int r = 0;
    int p = 2;
    int k = 0;
    bool exhaustive = true;
    std::size_t total = 0;
    std::map<std::string, std::size_t> by_class;  // tag names joined by '+', or "none"
    std::size_t counterexample_count = 0;
    std::vector<BinaryColumns> counterexamples;  // distinct canonical forms, sorted
    std::vector<std::uint64_t> counterexample_masks;
    std::vector<CensusPositive> positives;
};

inline EnumerationReport theorem_census(int r, int k, const CensusOptions& opt = {}) {
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    EnumerationReport rep;
    rep.r = r;
    rep.k = k;
    rep.exhaustive = r <= kMaxExhaustiveBinaryRank;
    std::vector<std::uint64_t> masks;
    EnumerationOptions eo;
    eo.samples = opt.samples;
    eo.seed = opt.seed;
    enumerate_simple_binary(r, [&](std::uint64_t mask, const BinaryColumns&) {
        masks.push_back(mask);
        return true;
    }, eo);
    const auto pts = detail::binary_points(r);

    struct Part {
        std::map<std::string, std::size_t> by_class;
        std::vector<std::uint64_t> bad;
        std::vector<CensusPositive> good;
    };
    unsigned threads = opt.threads ? opt.threads : std::max(1U, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(masks.size(), 1)));
    std::vector<Part> parts(threads);
    auto work = [&](unsigned w) {
        const std::size_t lo = masks.size() * w / threads, hi = masks.size() * (w + 1) / threads;
        for (std::size_t i = lo; i < hi; ++i) {
            const auto m = detail::binary_matroid(r, detail::columns_of(pts, masks[i]));
            auto res = unavoidable_search(m, k, Strategy::Direct);
            if (!res.flat) {
                ++parts[w].by_class["none"];
                parts[w].bad.push_back(masks[i]);
                continue;
            }
            ++parts[w].by_class[res.flat->tags.to_string()];
            if (opt.keep_positives) parts[w].good.push_back({masks[i], std::move(*res.flat)});
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    for (auto& part : parts) {
        for (const auto& [key, n] : part.by_class) rep.by_class[key] += n;
        rep.counterexample_masks.insert(rep.counterexample_masks.end(), part.bad.begin(), part.bad.end());
        for (auto& g : part.good) rep.positives.push_back(std::move(g));
    }
    rep.total = masks.size();
    rep.counterexample_count = rep.counterexample_masks.size();
    for (auto mask : rep.counterexample_masks) {
        auto canon = canonical_form(r, detail::columns_of(pts, mask));
        if (std::find(rep.counterexamples.begin(), rep.counterexamples.end(), canon) == rep.counterexamples.end()) {
            rep.counterexamples.push_back(std::move(canon));
        }
    }
    std::sort(rep.counterexamples.begin(), rep.counterexamples.end());
    return rep;
}

// Binary matroid of rank r from a canonical column list.
inline Matroid binary_matroid(int r, const BinaryColumns& cols) { return detail::binary_matroid(r, cols); }

// Spanning simple subsets of PG(r-1,2) by size: how many there are and how
// many have a two-point line.
struct TwoPointCensus {
    std::map<std::size_t, std::size_t> total;
    std::map<std::size_t, std::size_t> with_two_point_line;
};

inline TwoPointCensus two_point_line_census(int r) {
    TwoPointCensus out;
    enumerate_simple_binary(r, [&](std::uint64_t, const BinaryColumns& cols) {
        const auto m = binary_matroid(r, cols);
        ++out.total[cols.size()];
        if (find_two_point_line(m).line) ++out.with_two_point_line[cols.size()];
        return true;
    });
    return out;
}

}  // namespace flatforge
