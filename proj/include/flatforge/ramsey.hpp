#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "catalog.hpp"
#include "errors.hpp"
#include "flats.hpp"
#include "matroid.hpp"

namespace flatforge {

struct Coloring {
    int palette = 2;
    std::vector<int> color;
    bool operator==(const Coloring&) const = default;
};

// Elements: a flat is monochromatic when its elements share a colour.
// Points: the colouring must also be constant on parallel classes.
enum class ColorLevel { Elements, Points };

inline void check_coloring(const Matroid& m, const Coloring& c, ColorLevel level = ColorLevel::Elements) {
    if (c.palette < 1) throw std::invalid_argument("palette needs at least one colour");
    if (c.color.size() != m.size()) {
        throw std::invalid_argument("colouring has " + std::to_string(c.color.size()) + " entries for " +
                                    std::to_string(m.size()) + " elements");
    }
    for (std::size_t i = 0; i < c.color.size(); ++i) {
        if (c.color[i] < 0 || c.color[i] >= c.palette) {
            throw std::invalid_argument("element " + m.label(i) + " has colour " + std::to_string(c.color[i]) +
                                        " outside the palette");
        }
    }
    if (level == ColorLevel::Points) {
        for (const auto& cls : m.point_classes()) {
            for (auto e : cls) {
                if (c.color[e] != c.color[cls.front()]) {
                    throw std::invalid_argument("parallel elements " + m.label(cls.front()) + " and " + m.label(e) +
                                                " have different colours");
                }
            }
        }
    }
}

// First rank-k flat (in enumeration order) inside one colour class.
inline std::optional<Flat> mono_flat_search(const Matroid& m, const Coloring& col, int k,
                                            ColorLevel level = ColorLevel::Elements) {
    check_coloring(m, col, level);
    std::vector<Subset> classes(static_cast<std::size_t>(col.palette), Subset(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i) classes[static_cast<std::size_t>(col.color[i])].set(i);
    std::optional<Flat> out;
    for_each_flat(m, k, [&](const Subset& f) {
        if (!f.empty() && !f.is_subset_of(classes[static_cast<std::size_t>(col.color[f.first()])])) return true;
        out = classify_flat(m, f);
        return false;
    });
    return out;
}

inline constexpr std::size_t kMaxMaskElements = 64;
inline constexpr std::size_t kMaxExhaustivePoints = 40;
inline constexpr std::uint64_t kMaxRawColorings = std::uint64_t{1} << 22;

// Rank-k flats as 64-bit masks, indexed for incremental checks.
struct FlatHypergraph {
    std::size_t n = 0;
    std::vector<std::uint64_t> flats;
    std::vector<std::vector<std::uint64_t>> containing;
    std::vector<std::vector<std::uint64_t>> closing;  // flats whose largest element is i
};

inline FlatHypergraph flat_hypergraph(const Matroid& m, int k) {
    if (m.size() > kMaxMaskElements) {
        throw ScaleRefusal("flat hypergraph needs at most " + std::to_string(kMaxMaskElements) + " elements, got " +
                           std::to_string(m.size()));
    }
    FlatHypergraph h;
    h.n = m.size();
    h.containing.resize(h.n);
    h.closing.resize(h.n);
    for_each_flat(m, k, [&](const Subset& f) {
        const std::uint64_t mask = f.mask();
        h.flats.push_back(mask);
        for (std::uint64_t b = mask; b; b &= b - 1) h.containing[static_cast<std::size_t>(std::countr_zero(b))].push_back(mask);
        if (mask) h.closing[static_cast<std::size_t>(63 - std::countl_zero(mask))].push_back(mask);
        return true;
    });
    return h;
}

inline bool contains_flat(const FlatHypergraph& h, std::uint64_t set) {
    for (auto f : h.flats) {
        if ((f & ~set) == 0) return true;
    }
    return false;
}

struct FlatFreeResult {
    std::size_t size = 0;
    Subset set;
    std::uint64_t nodes = 0;
};

namespace detail {

class CapSearch {
public:
    CapSearch(const FlatHypergraph& h, std::vector<std::size_t> order) : h_(h), order_(std::move(order)) {}

    bool addable(std::uint64_t chosen, std::size_t x) const {
        const std::uint64_t with = chosen | (std::uint64_t{1} << x);
        for (auto f : h_.containing[x]) {
            if ((f & ~with) == 0) return false;
        }
        return true;
    }
    std::size_t room(std::uint64_t chosen, std::size_t pos) const {
        std::size_t c = 0;
        for (std::size_t i = pos; i < order_.size(); ++i) c += addable(chosen, order_[i]);
        return c;
    }

    void maximise(std::uint64_t chosen, std::size_t size, std::size_t pos) {
        ++nodes;
        if (size > best || !have_best) {
            best = size;
            best_mask = chosen;
            have_best = true;
        }
        if (pos == order_.size() || size + room(chosen, pos) <= best) return;
        const auto x = order_[pos];
        if (addable(chosen, x)) maximise(chosen | (std::uint64_t{1} << x), size + 1, pos + 1);
        maximise(chosen, size, pos + 1);
    }

    // Include-first in the given order, so the first hit is the lexicographically least set.
    bool first_of_size(std::uint64_t chosen, std::size_t size, std::size_t pos, std::size_t target) {
        ++nodes;
        if (size == target) {
            best_mask = chosen;
            return true;
        }
        if (pos == order_.size() || size + room(chosen, pos) < target) return false;
        const auto x = order_[pos];
        if (addable(chosen, x) && first_of_size(chosen | (std::uint64_t{1} << x), size + 1, pos + 1, target)) return true;
        return first_of_size(chosen, size, pos + 1, target);
    }

    std::uint64_t nodes = 0;
    std::size_t best = 0;
    std::uint64_t best_mask = 0;
    bool have_best = false;

private:
    const FlatHypergraph& h_;
    std::vector<std::size_t> order_;
};

}  // namespace detail

// Largest set containing no rank-k flat; the witness is the lexicographically
// least set of that size.
inline FlatFreeResult max_flatfree_set(const Matroid& m, int k) {
    if (k < 1) throw std::invalid_argument("max_flatfree_set: k must be at least 1");
    const auto h = flat_hypergraph(m, k);
    std::vector<std::size_t> by_degree(h.n);
    for (std::size_t i = 0; i < h.n; ++i) by_degree[i] = i;
    std::stable_sort(by_degree.begin(), by_degree.end(),
                     [&](std::size_t a, std::size_t b) { return h.containing[a].size() > h.containing[b].size(); });
    detail::CapSearch size_search(h, by_degree);
    size_search.maximise(0, 0, 0);

    std::vector<std::size_t> by_index(h.n);
    for (std::size_t i = 0; i < h.n; ++i) by_index[i] = i;
    detail::CapSearch lex_search(h, by_index);
    if (!lex_search.first_of_size(0, 0, 0, size_search.best)) throw std::logic_error("cap search lost its optimum");

    FlatFreeResult out;
    out.size = size_search.best;
    out.set = Subset::from_mask(h.n, lex_search.best_mask);
    out.nodes = size_search.nodes + lex_search.nodes;
    return out;
}

enum class MonoMode { Auto, Backtrack, Raw, Cap };

inline std::string to_string(MonoMode mode) {
    switch (mode) {
        case MonoMode::Auto: return "auto";
        case MonoMode::Backtrack: return "backtrack";
        case MonoMode::Raw: return "raw";
        case MonoMode::Cap: return "cap";
    }
    return "?";
}

struct MonoVerdict {
    bool holds = false;
    MonoMode method = MonoMode::Auto;
    std::optional<Coloring> witness;   // a colouring without monochromatic rank-k flat
    std::optional<FlatFreeResult> cap; // filled by cap mode
    std::uint64_t work = 0;
};

namespace detail {

inline std::uint64_t checked_power(std::uint64_t base, std::size_t e, std::uint64_t cap) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < e; ++i) {
        if (r > cap / std::max<std::uint64_t>(base, 1)) return cap + 1;
        r *= base;
    }
    return r;
}

// Colours points in index order; point 0 gets colour 0 and new colours are
// opened in order, which only removes palette relabellings.
inline bool colour_backtrack(const FlatHypergraph& h, int palette, std::size_t i, int used, std::vector<int>& c,
                             std::vector<std::uint64_t>& cls, std::uint64_t& work) {
    ++work;
    if (i == h.n) return true;
    const int top = std::min(used, palette - 1);
    for (int col = 0; col <= top; ++col) {
        const auto ucol = static_cast<std::size_t>(col);
        cls[ucol] |= std::uint64_t{1} << i;
        bool ok = true;
        for (auto f : h.closing[i]) {
            if ((f & ~cls[ucol]) == 0) {
                ok = false;
                break;
            }
        }
        c[i] = col;
        if (ok && colour_backtrack(h, palette, i + 1, std::max(used, col + 1), c, cls, work)) return true;
        cls[ucol] &= ~(std::uint64_t{1} << i);
    }
    return false;
}

// Two classes A (holding point 0) and B, each flat-free and of size at most cap.
inline bool cover_search(const FlatHypergraph& h, std::size_t cap, std::size_t i, std::uint64_t a, std::uint64_t b,
                         std::uint64_t& work, std::uint64_t& found_b) {
    ++work;
    if (i == h.n) {
        found_b = b;
        return true;
    }
    const std::uint64_t bit = std::uint64_t{1} << i;
    auto closes = [&](std::uint64_t cls) {
        for (auto f : h.closing[i]) {
            if ((f & ~cls) == 0) return true;
        }
        return false;
    };
    if (static_cast<std::size_t>(std::popcount(a)) < cap && !closes(a | bit) &&
        cover_search(h, cap, i + 1, a | bit, b, work, found_b)) {
        return true;
    }
    if (i > 0 && static_cast<std::size_t>(std::popcount(b)) < cap && !closes(b | bit) &&
        cover_search(h, cap, i + 1, a, b | bit, work, found_b)) {
        return true;
    }
    return false;
}

}  // namespace detail

// Decides on the simple matroid s whether every palette-colouring of its points
// has a monochromatic rank-k flat.
inline MonoVerdict all_colorings_mono_simple(const Matroid& s, int k, int palette, MonoMode mode) {
    if (palette < 1) throw std::invalid_argument("palette needs at least one colour");
    const std::size_t n = s.size();
    if (mode == MonoMode::Auto) {
        if (n <= kMaxExhaustivePoints) mode = MonoMode::Backtrack;
        else if (palette == 2 && n <= kMaxMaskElements) mode = MonoMode::Cap;
        else throw ScaleRefusal(std::to_string(n) + " points is beyond the colouring search guard");
    }
    MonoVerdict v;
    v.method = mode;
    if (k < 1) {
        // the empty flat is monochromatic under every colouring
        v.holds = true;
        return v;
    }
    const auto h = flat_hypergraph(s, k);
    switch (mode) {
        case MonoMode::Backtrack: {
            if (n > kMaxExhaustivePoints) {
                throw ScaleRefusal(std::to_string(n) + " points exceeds the exhaustive limit of " +
                                   std::to_string(kMaxExhaustivePoints));
            }
            std::vector<int> c(n, 0);
            std::vector<std::uint64_t> cls(static_cast<std::size_t>(palette), 0);
            if (detail::colour_backtrack(h, palette, 0, 0, c, cls, v.work)) v.witness = Coloring{palette, c};
            break;
        }
        case MonoMode::Raw: {
            const auto total = detail::checked_power(static_cast<std::uint64_t>(palette), n, kMaxRawColorings);
            if (total > kMaxRawColorings) throw ScaleRefusal("raw colouring space exceeds 2^22");
            std::vector<int> c(n, 0);
            for (std::uint64_t idx = 0; idx < total; ++idx) {
                ++v.work;
                std::vector<std::uint64_t> cls(static_cast<std::size_t>(palette), 0);
                std::uint64_t rest = idx;
                for (std::size_t i = 0; i < n; ++i) {
                    c[i] = static_cast<int>(rest % static_cast<std::uint64_t>(palette));
                    rest /= static_cast<std::uint64_t>(palette);
                    cls[static_cast<std::size_t>(c[i])] |= std::uint64_t{1} << i;
                }
                bool mono = false;
                for (auto f : h.flats) {
                    for (auto m : cls) {
                        if ((f & ~m) == 0) {
                            mono = true;
                            break;
                        }
                    }
                    if (mono) break;
                }
                if (!mono) {
                    v.witness = Coloring{palette, c};
                    break;
                }
            }
            break;
        }
        case MonoMode::Cap: {
            if (palette != 2) throw std::invalid_argument("cap mode decides two-colourings only");
            v.cap = max_flatfree_set(s, k);
            v.work = v.cap->nodes;
            // both classes are flat-free, so each has at most cap.size points
            std::uint64_t b = 0;
            if (2 * v.cap->size >= n && detail::cover_search(h, v.cap->size, 0, 0, 0, v.work, b)) {
                std::vector<int> c(n, 0);
                for (std::size_t j = 0; j < n; ++j) c[j] = static_cast<int>((b >> j) & 1U);
                v.witness = Coloring{2, c};
            }
            break;
        }
        case MonoMode::Auto: break;
    }
    v.holds = !v.witness.has_value();
    return v;
}

// Colourings are of points: the search runs on si(M) and a violating
// colouring is spread over parallel classes (loops get colour 0).
inline MonoVerdict all_colorings_mono(const Matroid& m, int k, int palette, MonoMode mode = MonoMode::Auto) {
    const auto [s, map] = simplify(m);
    auto v = all_colorings_mono_simple(s, k, palette, mode);
    if (v.witness) {
        std::vector<int> c(m.size(), 0);
        for (std::size_t e = 0; e < m.size(); ++e) {
            if (map.class_of[e]) c[e] = v.witness->color[*map.class_of[e]];
        }
        v.witness->color = std::move(c);
    }
    if (v.cap) {
        Subset lifted(m.size());
        v.cap->set.for_each([&](std::size_t i) { lifted.set(map.representative[i]); });
        v.cap->set = lifted;
    }
    return v;
}

struct RankVerdict {
    int rank = 0;
    std::size_t points = 0;
    bool holds = false;
    MonoMode method = MonoMode::Auto;
    std::optional<Coloring> witness;
    std::optional<std::size_t> max_flatfree;
    std::vector<MonoMode> agreeing;  // independent methods that reached the same verdict
};

struct RamseyBounds {
    int q = 2;
    int t = 1;
    int colors = 2;
    bool affine = false;
    std::vector<RankVerdict> ranks;
    std::optional<int> holds_at;  // least rank where every colouring has a monochromatic rank-t flat
    std::optional<int> fails_at;  // greatest rank with a violating colouring
};

// For each rank r <= max_rank, decides the colouring statement on PG(r-1,q)
// (or AG(r-1,q) when affine). Two-colourings are decided by the cap method
// and cross-checked by the other methods wherever they fit.
inline RamseyBounds geometry_report(int q, int t, int colors, int max_rank, bool affine) {
    if (t < 1) throw std::invalid_argument("flat rank t must be at least 1");
    if (colors < 1) throw std::invalid_argument("need at least one colour");
    if (max_rank < 1) throw std::invalid_argument("max rank must be at least 1");
    field(q);
    RamseyBounds out{q, t, colors, affine, {}, std::nullopt, std::nullopt};
    for (int r = 1; r <= max_rank; ++r) {
        const auto count = affine ? ipow(static_cast<std::uint64_t>(q), r - 1) : projective_point_count(r, q);
        if (count > kMaxMaskElements) {
            throw ScaleRefusal("rank " + std::to_string(r) + " geometry has " + std::to_string(count) + " points");
        }
        const Matroid m = affine ? affine_geometry(r - 1, q) : projective_geometry(r - 1, q);
        RankVerdict rv;
        rv.rank = r;
        rv.points = m.size();
        MonoMode primary = colors == 2 ? MonoMode::Cap : MonoMode::Backtrack;
        if (primary == MonoMode::Backtrack && m.size() > kMaxExhaustivePoints) {
            throw ScaleRefusal("rank " + std::to_string(r) + " needs an exhaustive search over " +
                               std::to_string(m.size()) + " points");
        }
        const auto v = all_colorings_mono(m, t, colors, primary);
        rv.holds = v.holds;
        rv.method = primary;
        rv.witness = v.witness;
        if (v.cap) rv.max_flatfree = v.cap->size;
        std::vector<MonoMode> checks;
        if (primary != MonoMode::Backtrack && m.size() <= kMaxExhaustivePoints) checks.push_back(MonoMode::Backtrack);
        if (detail::checked_power(static_cast<std::uint64_t>(colors), m.size(), kMaxRawColorings) <= kMaxRawColorings) {
            checks.push_back(MonoMode::Raw);
        }
        for (auto mode : checks) {
            if (all_colorings_mono(m, t, colors, mode).holds != rv.holds) {
                throw std::logic_error("colouring methods disagree at rank " + std::to_string(r));
            }
            rv.agreeing.push_back(mode);
        }
        if (rv.holds && !out.holds_at) out.holds_at = r;
        if (!rv.holds) out.fails_at = r;
        out.ranks.push_back(std::move(rv));
    }
    return out;
}

inline RamseyBounds small_ramsey_report(int q, int t, int max_rank) { return geometry_report(q, t, 2, max_rank, false); }

inline RamseyBounds small_hj_report(int q, int t, int colors, int max_rank) {
    return geometry_report(q, t, colors, max_rank, true);
}

}  // namespace flatforge
