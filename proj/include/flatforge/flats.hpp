#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "linalg.hpp"
#include "matroid.hpp"
#include "subset.hpp"

namespace flatforge {

enum class FlatClass : std::uint8_t { Independent = 1, AffineGeometry = 2, ProjectiveGeometry = 4 };

// Set of FlatClass tags; empty means "Neither".
class FlatClassSet {
public:
    FlatClassSet() = default;
    FlatClassSet(std::initializer_list<FlatClass> tags) {
        for (auto t : tags) insert(t);
    }

    void insert(FlatClass t) { bits_ |= static_cast<std::uint8_t>(t); }
    bool contains(FlatClass t) const { return bits_ & static_cast<std::uint8_t>(t); }
    bool empty() const { return bits_ == 0; }
    std::uint8_t bits() const { return bits_; }
    bool operator==(const FlatClassSet&) const = default;

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        if (contains(FlatClass::Independent)) out.emplace_back("Independent");
        if (contains(FlatClass::AffineGeometry)) out.emplace_back("AffineGeometry");
        if (contains(FlatClass::ProjectiveGeometry)) out.emplace_back("ProjectiveGeometry");
        if (out.empty()) out.emplace_back("Neither");
        return out;
    }
    std::string to_string() const {
        std::string s;
        for (const auto& n : names()) s += (s.empty() ? "" : "+") + n;
        return s;
    }
    static FlatClassSet from_names(const std::vector<std::string>& names) {
        FlatClassSet out;
        for (const auto& n : names) {
            if (n == "Independent") out.insert(FlatClass::Independent);
            else if (n == "AffineGeometry") out.insert(FlatClass::AffineGeometry);
            else if (n == "ProjectiveGeometry") out.insert(FlatClass::ProjectiveGeometry);
            else if (n != "Neither" || names.size() != 1) throw std::invalid_argument("unknown flat class '" + n + "'");
        }
        return out;
    }

private:
    std::uint8_t bits_ = 0;
};

// Ambient functional phi with phi(x) != 0 for every x in S, vanishing on the
// greedy unit-vector complement of span(S), scaled so its first nonzero
// coordinate is 1. With these normalisations it is unique for an affine S.
struct AffineWitness {
    VecGF functional;
    bool operator==(const AffineWitness&) const = default;
};

struct Flat {
    Subset elements;
    int rank = 0;
    FlatClassSet tags;
    std::optional<AffineWitness> affine;
};

inline std::uint64_t ipow(std::uint64_t b, int e) {
    std::uint64_t r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

namespace detail {

// Unit vectors e_j, in order, that extend span(basis) to the whole space.
inline std::vector<std::size_t> greedy_unit_complement(const Matroid& m, const std::vector<std::size_t>& basis) {
    Span sp = m.span_of(basis);
    std::vector<std::size_t> out;
    for (int j = 0; j < m.dim(); ++j) {
        Packed u{};
        u[static_cast<std::size_t>(j)] = 1;
        if (sp.insert(u)) out.push_back(static_cast<std::size_t>(j));
    }
    return out;
}

// Coordinates of each member of s relative to basis (which must span s).
inline std::vector<VecGF> basis_coordinates(const Matroid& m, const std::vector<std::size_t>& basis,
                                            const std::vector<std::size_t>& members) {
    std::vector<VecGF> cols;
    for (auto b : basis) cols.push_back(m.vector(b));
    const auto bm = MatGF::from_columns(m.p(), static_cast<std::size_t>(m.dim()), cols);
    std::vector<VecGF> out;
    for (auto x : members) {
        auto c = in_span(bm, m.vector(x));
        if (!c) throw std::logic_error("element outside the span of its basis");
        out.push_back(std::move(*c));
    }
    return out;
}

// Ambient functional taking the values psi on basis and 0 on the unit complement.
inline VecGF lift_functional(const Matroid& m, const std::vector<std::size_t>& basis, const VecGF& psi) {
    const auto comp = greedy_unit_complement(m, basis);
    const auto n = static_cast<std::size_t>(m.dim());
    MatGF q(m.p(), n, n);
    std::size_t col = 0;
    for (auto b : basis) {
        for (std::size_t i = 0; i < n; ++i) q.set(i, col, m.vector(b)[i]);
        ++col;
    }
    for (auto j : comp) {
        q.set(j, col, 1);
        ++col;
    }
    const auto qinv = inverse(q);
    if (!qinv) throw std::logic_error("basis and complement do not form a basis");
    VecGF target(m.p(), std::vector<Residue>(n, 0));
    for (std::size_t i = 0; i < basis.size(); ++i) target[i] = psi[i];
    // phi^T = target^T * Q^{-1}
    VecGF phi(m.p(), std::vector<Residue>(n, 0));
    const auto& f = field(m.p());
    for (std::size_t j = 0; j < n; ++j) {
        Residue s = 0;
        for (std::size_t i = 0; i < n; ++i) s = f.add(s, f.mul(target[i], qinv->at(i, j)));
        phi[j] = s;
    }
    return canonical_point(phi);
}

}  // namespace detail

// Succeeds iff S is a set of pairwise non-parallel non-loops with |S| = p^{k-1}
// (k = r(S)) and some hyperplane of span(S) avoids S; then M|S = AG(k-1,p).
inline std::optional<AffineWitness> is_affine_restriction(const Matroid& m, const Subset& s) {
    if (s.empty()) return std::nullopt;
    std::vector<std::size_t> members = s.indices();
    std::vector<bool> seen(m.point_count(), false);
    for (auto x : members) {
        if (m.is_loop(x) || seen[m.point_of(x)]) return std::nullopt;
        seen[m.point_of(x)] = true;
    }
    const auto basis = m.greedy_basis(s);
    const int k = static_cast<int>(basis.size());
    if (members.size() != ipow(static_cast<std::uint64_t>(m.p()), k - 1)) return std::nullopt;
    const auto coords = detail::basis_coordinates(m, basis, members);
    for (const auto& psi : hyperplanes_of(k, m.p())) {
        bool avoids = true;
        for (const auto& c : coords) {
            if (dot(psi, c) == 0) {
                avoids = false;
                break;
            }
        }
        if (avoids) return AffineWitness{detail::lift_functional(m, basis, psi)};
    }
    return std::nullopt;
}

// Recomputes the normalisations of an affine witness without searching.
inline bool check_affine_witness(const Matroid& m, const Subset& s, const AffineWitness& w, std::string* why = nullptr) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (w.functional.p != m.p() || static_cast<int>(w.functional.dim()) != m.dim()) return fail("witness has wrong shape");
    if (w.functional.is_zero() || canonical_point(w.functional) != w.functional) return fail("witness functional not canonical");
    const auto members = s.indices();
    std::vector<bool> seen(m.point_count(), false);
    for (auto x : members) {
        if (m.is_loop(x) || seen[m.point_of(x)]) return fail("affine set has a loop or parallel pair");
        seen[m.point_of(x)] = true;
    }
    const auto basis = m.greedy_basis(s);
    if (members.empty() || members.size() != ipow(static_cast<std::uint64_t>(m.p()), static_cast<int>(basis.size()) - 1)) {
        return fail("affine set has wrong cardinality");
    }
    for (auto x : members) {
        if (dot(w.functional, m.vector(x)) == 0) return fail("witness hyperplane meets element " + m.label(x));
    }
    for (auto j : detail::greedy_unit_complement(m, basis)) {
        if (w.functional[j] != 0) return fail("witness functional not normalised on the complement");
    }
    return true;
}

inline FlatClassSet flat_tags(const Matroid& m, const Subset& f, int k, std::optional<AffineWitness>* witness = nullptr) {
    FlatClassSet tags;
    const auto size = f.count();
    if (size == static_cast<std::size_t>(k)) tags.insert(FlatClass::Independent);
    std::size_t distinct = 0;
    {
        std::vector<bool> seen(m.point_count(), false);
        f.for_each([&](std::size_t x) {
            if (!m.is_loop(x) && !seen[m.point_of(x)]) {
                seen[m.point_of(x)] = true;
                ++distinct;
            }
        });
    }
    const bool simple = distinct == size;
    if (k >= 1 && simple && size == projective_point_count(k, m.p())) tags.insert(FlatClass::ProjectiveGeometry);
    auto aff = is_affine_restriction(m, f);
    if (aff) tags.insert(FlatClass::AffineGeometry);
    if (witness) *witness = std::move(aff);
    return tags;
}

// Tag set of a flat; throws std::invalid_argument when f is not a flat of m.
inline Flat classify_flat(const Matroid& m, const Subset& f) {
    if (!m.is_flat(f)) throw std::invalid_argument("classify_flat: set is not a flat");
    Flat out{f, m.rank_of(f), {}, std::nullopt};
    out.tags = flat_tags(m, f, out.rank, &out.affine);
    return out;
}

namespace detail {

template <class Fn>
bool flats_dfs(const Matroid& m, int k, const Span& span, const Subset& closed, std::size_t start, int depth, Fn& fn) {
    if (depth == k) return fn(closed);
    for (std::size_t i = start; i < m.size(); ++i) {
        if (closed.test(i)) continue;
        Span next = span;
        m.insert(next, i);
        const Subset cl = m.elements_in(next);
        // i must be the greedy choice: no smaller element may enter the closure with it.
        bool canonical = true;
        for (std::size_t x = cl.first(); x < i; x = cl.next(x + 1)) {
            if (!closed.test(x)) {
                canonical = false;
                break;
            }
        }
        if (!canonical) continue;
        if (!flats_dfs(m, k, next, cl, i + 1, depth + 1, fn)) return false;
    }
    return true;
}

}  // namespace detail

// Streams every rank-k flat exactly once, ordered by its greedy basis (so by
// smallest non-loop element first). fn returns false to stop early.
template <class Fn>
void for_each_flat(const Matroid& m, int k, Fn&& fn) {
    if (k < 0 || k > m.rank()) return;
    Span empty(m.p(), m.dim());
    const Subset loops = m.elements_in(empty);
    detail::flats_dfs(m, k, empty, loops, 0, 0, fn);
}

inline std::vector<Flat> enumerate_flats(const Matroid& m, int k) {
    std::vector<Flat> out;
    for_each_flat(m, k, [&](const Subset& f) {
        out.push_back(Flat{f, k, {}, std::nullopt});
        return true;
    });
    return out;
}

inline std::size_t count_flats(const Matroid& m, int k) {
    std::size_t n = 0;
    for_each_flat(m, k, [&](const Subset&) {
        ++n;
        return true;
    });
    return n;
}

struct TwoPointLineResult {
    std::optional<Flat> line;
    std::map<std::size_t, std::size_t> histogram;  // line size -> number of lines
};

// First two-point line in enumeration order together with the full line-size histogram.
inline TwoPointLineResult find_two_point_line(const Matroid& m) {
    if (!m.is_simple()) throw std::invalid_argument("find_two_point_line: matroid is not simple");
    TwoPointLineResult out;
    for_each_flat(m, 2, [&](const Subset& l) {
        const auto c = l.count();
        ++out.histogram[c];
        if (c == 2 && !out.line) out.line = classify_flat(m, l);
        return true;
    });
    return out;
}

// Streams every AG(r-1,p)-restriction of rank r: for each rank-r flat, the
// first element of each point off an avoiding hyperplane. fn(set, witness)
// returns false to stop.
template <class Fn>
void for_each_affine_restriction(const Matroid& m, int r, Fn&& fn) {
    if (r < 1) return;
    const auto target = ipow(static_cast<std::uint64_t>(m.p()), r - 1);
    bool go = true;
    for_each_flat(m, r, [&](const Subset& f) {
        std::vector<std::size_t> reps;
        std::vector<bool> seen(m.point_count(), false);
        f.for_each([&](std::size_t x) {
            if (!m.is_loop(x) && !seen[m.point_of(x)]) {
                seen[m.point_of(x)] = true;
                reps.push_back(x);
            }
        });
        if (reps.size() < target) return true;
        const auto basis = m.greedy_basis(f);
        const auto coords = detail::basis_coordinates(m, basis, reps);
        for (const auto& psi : hyperplanes_of(r, m.p())) {
            Subset a(m.size());
            for (std::size_t i = 0; i < reps.size(); ++i) {
                if (dot(psi, coords[i]) != 0) a.set(reps[i]);
            }
            if (a.count() != target) continue;
            auto w = is_affine_restriction(m, a);
            if (!w) continue;
            if (!fn(a, *w)) {
                go = false;
                return false;
            }
        }
        return true;
    });
    (void)go;
}

}  // namespace flatforge
