#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "field.hpp"
#include "linalg.hpp"
#include "subset.hpp"

namespace flatforge {

// Matroid represented by labeled column vectors over GF(p). Immutable after
// construction. Loops (zero columns) and parallel elements are allowed;
// simplify() removes them explicitly.
class Matroid {
public:
    Matroid() : Matroid(2, 0, {}) {}

    Matroid(int p, int dim, std::vector<VecGF> vectors, std::vector<std::string> labels = {},
            std::vector<std::size_t> origin = {})
        : p_(p), dim_(dim), vectors_(std::move(vectors)), labels_(std::move(labels)), origin_(std::move(origin)) {
        field(p);
        if (dim < 0 || dim > kMaxDim) {
            throw std::invalid_argument("ambient dimension " + std::to_string(dim) + " outside 0.." + std::to_string(kMaxDim));
        }
        if (labels_.empty()) {
            labels_.reserve(vectors_.size());
            for (std::size_t i = 0; i < vectors_.size(); ++i) labels_.push_back(std::to_string(i));
        }
        if (labels_.size() != vectors_.size()) throw std::invalid_argument("label count differs from element count");
        if (origin_.empty()) {
            origin_.resize(vectors_.size());
            std::iota(origin_.begin(), origin_.end(), std::size_t{0});
        }
        if (origin_.size() != vectors_.size()) throw std::invalid_argument("origin count differs from element count");
        {
            auto sorted = labels_;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
                throw std::invalid_argument("duplicate element label");
            }
        }
        packed_.reserve(vectors_.size());
        bits_.reserve(vectors_.size());
        point_of_.reserve(vectors_.size());
        Span all(p_, dim_);
        for (std::size_t i = 0; i < vectors_.size(); ++i) {
            auto& v = vectors_[i];
            if (v.p != p_ || static_cast<int>(v.dim()) != dim_) {
                throw std::invalid_argument("element " + labels_[i] + " has wrong field or dimension");
            }
            packed_.push_back(pack(v));
            bits_.push_back(pack_bits(v));
            if (v.is_zero()) {
                point_of_.push_back(kLoop);
                continue;
            }
            const auto key = point_key(canonical_point(v));
            auto [it, inserted] = key_to_point_.try_emplace(key, points_.size());
            if (inserted) points_.emplace_back();
            points_[it->second].push_back(i);
            point_of_.push_back(it->second);
            all.insert(packed_.back());
        }
        rank_ = all.rank();
    }

    static constexpr std::size_t kLoop = std::numeric_limits<std::size_t>::max();

    int p() const { return p_; }
    int dim() const { return dim_; }
    std::size_t size() const { return vectors_.size(); }
    const VecGF& vector(std::size_t i) const { return vectors_.at(i); }
    const std::vector<VecGF>& vectors() const { return vectors_; }
    const std::string& label(std::size_t i) const { return labels_.at(i); }
    const std::vector<std::string>& labels() const { return labels_; }
    // Index of each element in the matroid this one was derived from.
    std::size_t origin(std::size_t i) const { return origin_.at(i); }
    const std::vector<std::size_t>& origins() const { return origin_; }
    const Packed& packed(std::size_t i) const { return packed_[i]; }

    int rank() const { return rank_; }
    Subset ground() const { return Subset::full(size()); }
    Subset empty_set() const { return Subset(size()); }

    bool is_loop(std::size_t i) const { return point_of_.at(i) == kLoop; }
    // Parallel class id of a non-loop element, kLoop for loops.
    std::size_t point_of(std::size_t i) const { return point_of_.at(i); }
    std::size_t point_count() const { return points_.size(); }
    // Parallel classes, ordered by smallest member.
    const std::vector<std::vector<std::size_t>>& point_classes() const { return points_; }
    bool is_simple() const { return points_.size() == vectors_.size(); }

    // First element parallel to v, if any.
    std::optional<std::size_t> find_parallel(const VecGF& v) const {
        if (v.is_zero()) return std::nullopt;
        auto it = key_to_point_.find(point_key(canonical_point(v)));
        if (it == key_to_point_.end()) return std::nullopt;
        return points_[it->second].front();
    }

    Span span_of(const Subset& s) const {
        Span sp(p_, dim_);
        if (p_ == 2) {
            s.for_each([&](std::size_t i) { sp.insert_bits(bits_[i]); });
        } else {
            s.for_each([&](std::size_t i) { sp.insert(packed_[i]); });
        }
        return sp;
    }
    Span span_of(const std::vector<std::size_t>& s) const {
        Span sp(p_, dim_);
        for (auto i : s) insert(sp, i);
        return sp;
    }
    bool insert(Span& sp, std::size_t i) const {
        return p_ == 2 ? sp.insert_bits(bits_[i]) : sp.insert(packed_[i]);
    }
    bool spans(const Span& sp, std::size_t i) const {
        return p_ == 2 ? sp.contains_bits(bits_[i]) : sp.contains(packed_[i]);
    }
    Subset elements_in(const Span& sp) const {
        Subset out(size());
        for (std::size_t i = 0; i < size(); ++i) {
            if (spans(sp, i)) out.set(i);
        }
        return out;
    }

    int rank_of(const Subset& s) const {
        check(s);
        return span_of(s).rank();
    }
    Subset closure(const Subset& s) const {
        check(s);
        return elements_in(span_of(s));
    }
    bool is_independent(const Subset& s) const { return rank_of(s) == static_cast<int>(s.count()); }
    bool is_flat(const Subset& s) const { return closure(s) == s; }

    // Lexicographically first basis of s (greedy in index order).
    std::vector<std::size_t> greedy_basis(const Subset& s) const {
        check(s);
        Span sp(p_, dim_);
        std::vector<std::size_t> basis;
        s.for_each([&](std::size_t i) {
            if (insert(sp, i)) basis.push_back(i);
        });
        return basis;
    }

    static std::uint64_t point_key(const VecGF& canonical) {
        std::uint64_t key = 0;
        for (std::size_t i = canonical.dim(); i-- > 0;) key = key * static_cast<std::uint64_t>(canonical.p) + canonical[i];
        return key;
    }

private:
    void check(const Subset& s) const {
        if (s.universe() != size()) throw std::invalid_argument("subset is not over this ground set");
    }

    int p_;
    int dim_;
    std::vector<VecGF> vectors_;
    std::vector<std::string> labels_;
    std::vector<std::size_t> origin_;
    std::vector<Packed> packed_;
    std::vector<std::uint32_t> bits_;
    std::vector<std::size_t> point_of_;
    std::vector<std::vector<std::size_t>> points_;
    std::unordered_map<std::uint64_t, std::size_t> key_to_point_;
    int rank_ = 0;
};

inline int rank_of(const Matroid& m, const Subset& s) { return m.rank_of(s); }
inline Subset closure(const Matroid& m, const Subset& s) { return m.closure(s); }
inline bool is_independent(const Matroid& m, const Subset& s) { return m.is_independent(s); }
inline bool is_flat(const Matroid& m, const Subset& s) { return m.is_flat(s); }

struct MinorRecipe {
    Subset contracted;
    Subset deleted;
};

// Element i of the restriction is element keep[i] of m.
inline Matroid restrict_to(const Matroid& m, const Subset& keep) {
    if (keep.universe() != m.size()) throw std::invalid_argument("subset is not over this ground set");
    std::vector<VecGF> vecs;
    std::vector<std::string> labels;
    std::vector<std::size_t> origin;
    keep.for_each([&](std::size_t i) {
        vecs.push_back(m.vector(i));
        labels.push_back(m.label(i));
        origin.push_back(i);
    });
    return Matroid(m.p(), m.dim(), std::move(vecs), std::move(labels), std::move(origin));
}

inline Matroid delete_elements(const Matroid& m, const Subset& s) { return restrict_to(m, s.complement()); }

// M/S on E - S. Columns are projected onto GF(p)^{dim - r(S)} along span(S);
// elements spanned by S become explicit zero columns.
inline Matroid contract(const Matroid& m, const Subset& s) {
    const Span sp = m.span_of(s);
    std::vector<int> kept;
    for (int i = 0; i < m.dim(); ++i) {
        if (!((sp.pivot_mask() >> i) & 1U)) kept.push_back(i);
    }
    std::vector<VecGF> vecs;
    std::vector<std::string> labels;
    std::vector<std::size_t> origin;
    for (std::size_t e = 0; e < m.size(); ++e) {
        if (s.test(e)) continue;
        const Packed r = sp.reduce(m.packed(e));
        VecGF v(m.p(), std::vector<Residue>(kept.size(), 0));
        for (std::size_t j = 0; j < kept.size(); ++j) v[j] = r[static_cast<std::size_t>(kept[j])];
        vecs.push_back(std::move(v));
        labels.push_back(m.label(e));
        origin.push_back(e);
    }
    return Matroid(m.p(), static_cast<int>(kept.size()), std::move(vecs), std::move(labels), std::move(origin));
}

inline Matroid apply_minor(const Matroid& m, const MinorRecipe& recipe) {
    if (recipe.contracted.intersects(recipe.deleted)) throw std::invalid_argument("contracted and deleted sets overlap");
    const Matroid c = contract(m, recipe.contracted);
    Subset drop(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (recipe.deleted.test(c.origin(i))) drop.set(i);
    }
    Matroid d = delete_elements(c, drop);
    std::vector<std::size_t> origin;
    for (std::size_t i = 0; i < d.size(); ++i) origin.push_back(c.origin(d.origin(i)));
    return Matroid(d.p(), d.dim(), d.vectors(), d.labels(), std::move(origin));
}

// Result of simplification: simplified element i stands for original element
// representative[i]; class_of maps each original non-loop element to its
// simplified index.
struct PointMap {
    std::vector<std::size_t> representative;
    std::vector<std::optional<std::size_t>> class_of;
};

inline std::pair<Matroid, PointMap> simplify(const Matroid& m) {
    PointMap map;
    map.class_of.assign(m.size(), std::nullopt);
    Subset keep(m.size());
    for (const auto& cls : m.point_classes()) keep.set(cls.front());
    keep.for_each([&](std::size_t i) { map.representative.push_back(i); });
    for (std::size_t c = 0; c < m.point_classes().size(); ++c) {
        const auto rep = m.point_classes()[c].front();
        const auto pos = static_cast<std::size_t>(
            std::lower_bound(map.representative.begin(), map.representative.end(), rep) - map.representative.begin());
        for (auto e : m.point_classes()[c]) map.class_of[e] = pos;
    }
    return {restrict_to(m, keep), std::move(map)};
}

inline Matroid si(const Matroid& m) { return simplify(m).first; }

namespace detail {

struct UnionFind {
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    std::vector<std::size_t> parent;
};

}  // namespace detail

// Connectivity classes of the non-loop elements, each sorted, ordered by
// smallest member. Elements are merged along the fundamental circuits of the
// greedy basis.
inline std::vector<std::vector<std::size_t>> connected_components(const Matroid& m) {
    const auto basis = m.greedy_basis(m.ground());
    detail::UnionFind uf(m.size());
    if (!basis.empty()) {
        std::vector<std::size_t> others;
        std::vector<bool> in_basis(m.size(), false);
        for (auto b : basis) in_basis[b] = true;
        for (std::size_t e = 0; e < m.size(); ++e) {
            if (!in_basis[e] && !m.is_loop(e)) others.push_back(e);
        }
        std::vector<VecGF> cols;
        for (auto b : basis) cols.push_back(m.vector(b));
        for (auto e : others) cols.push_back(m.vector(e));
        const auto red = rref(MatGF::from_columns(m.p(), static_cast<std::size_t>(m.dim()), cols));
        // Basis columns come first and are independent, so they are the pivots;
        // row j of the reduced matrix holds coefficients on basis[j].
        for (std::size_t k = 0; k < others.size(); ++k) {
            for (std::size_t j = 0; j < basis.size(); ++j) {
                if (red.matrix.at(j, basis.size() + k) != 0) uf.unite(others[k], basis[j]);
            }
        }
    }
    std::vector<std::vector<std::size_t>> comps;
    std::vector<std::size_t> slot(m.size(), Matroid::kLoop);
    for (std::size_t e = 0; e < m.size(); ++e) {
        if (m.is_loop(e)) continue;
        const auto r = uf.find(e);
        if (slot[r] == Matroid::kLoop) {
            slot[r] = comps.size();
            comps.emplace_back();
        }
        comps[slot[r]].push_back(e);
    }
    return comps;
}

inline bool is_connected(const Matroid& m) { return connected_components(m).size() <= 1; }

inline bool is_coloop(const Matroid& m, std::size_t e) {
    if (e >= m.size()) throw std::out_of_range("element index outside ground set");
    Subset rest = m.ground();
    rest.reset(e);
    return m.rank_of(rest) == m.rank() - 1;
}

inline constexpr std::size_t kInfiniteGirth = std::numeric_limits<std::size_t>::max();

// Size of a smallest circuit; kInfiniteGirth when every subset is independent.
inline std::size_t girth(const Matroid& m) {
    const std::size_t n = m.size();
    const std::size_t limit = std::min<std::size_t>(n, static_cast<std::size_t>(m.rank()) + 1);
    std::vector<std::size_t> pick;
    for (std::size_t s = 1; s <= limit; ++s) {
        pick.resize(s);
        std::iota(pick.begin(), pick.end(), std::size_t{0});
        while (true) {
            Span sp(m.p(), m.dim());
            bool dependent = false;
            for (auto i : pick) {
                if (!m.insert(sp, i)) {
                    dependent = true;
                    break;
                }
            }
            if (dependent) return s;
            std::size_t i = s;
            while (i > 0 && pick[i - 1] == n - s + i - 1) --i;
            if (i == 0) break;
            ++pick[i - 1];
            for (std::size_t j = i; j < s; ++j) pick[j] = pick[j - 1] + 1;
        }
    }
    return kInfiniteGirth;
}

// Rank-1 flats as element sets.
inline std::vector<Subset> points(const Matroid& m) {
    std::vector<Subset> out;
    for (const auto& cls : m.point_classes()) out.emplace_back(m.size(), cls);
    return out;
}

// Every rank-2 flat containing e, ordered by smallest element other than e's point.
inline std::vector<Subset> lines_through(const Matroid& m, std::size_t e) {
    if (e >= m.size()) throw std::out_of_range("element index outside ground set");
    if (m.is_loop(e)) throw std::invalid_argument("lines_through: element " + m.label(e) + " is a loop");
    std::vector<Subset> out;
    Subset covered(m.size());
    for (std::size_t f = 0; f < m.size(); ++f) {
        if (m.is_loop(f) || m.point_of(f) == m.point_of(e) || covered.test(f)) continue;
        Subset line = m.closure(Subset(m.size(), {e, f}));
        covered |= line;
        out.push_back(std::move(line));
    }
    return out;
}

}  // namespace flatforge
