#pragma once

#include <optional>
#include <string>
#include <vector>

#include "../errors.hpp"
#include "../flats.hpp"
#include "../matroid.hpp"
#include "../ramsey.hpp"
#include "trichotomy.hpp"

namespace flatforge {

// Points of the hyperplane at infinity of span(A), coloured 0 when some
// element of M is parallel to them and 1 otherwise.
struct ExtendResult {
    Subset affine;
    int k = 0;
    std::vector<VecGF> infinity;
    std::vector<int> in_matroid;
    std::vector<std::size_t> h;  // indices into infinity
    std::optional<std::size_t> e;
    std::optional<Flat> flat;
};

namespace detail {

inline std::vector<VecGF> points_at_infinity(const Matroid& m, const std::vector<std::size_t>& basis,
                                             const AffineWitness& w) {
    const auto& f = field(m.p());
    const auto r = static_cast<int>(basis.size());
    std::vector<VecGF> out;
    if (r < 2) return out;
    VecGF psi(m.p(), std::vector<Residue>(basis.size(), 0));
    for (std::size_t i = 0; i < basis.size(); ++i) psi[i] = dot(w.functional, m.vector(basis[i]));
    for (const auto& y : ProjectivePoints(r, m.p())) {
        if (dot(psi, y) != 0) continue;
        VecGF u(m.p(), std::vector<Residue>(static_cast<std::size_t>(m.dim()), 0));
        for (std::size_t i = 0; i < basis.size(); ++i) {
            if (y[i] == 0) continue;
            const auto& v = m.vector(basis[i]);
            for (std::size_t c = 0; c < u.dim(); ++c) u[c] = f.add(u[c], f.mul(y[i], v[c]));
        }
        out.push_back(canonical_point(u));
    }
    return out;
}

}  // namespace detail

// A spans an AG(m-1,p); completes span(A) to the projective geometry and looks
// for a rank-(k-1) flat H at infinity that lies entirely inside or entirely
// outside M. Then E(M) meets span(H u e) in an AG or PG of rank k.
inline ExtendResult extend_affine_to_flat(const Matroid& m, const Subset& a, int k) {
    const auto w = is_affine_restriction(m, a);
    if (!w) throw HypothesisError("set is not an affine restriction", a);
    const auto basis = m.greedy_basis(a);
    const int r = static_cast<int>(basis.size());
    if (k < 1 || k > r) {
        throw std::invalid_argument("k=" + std::to_string(k) + " outside 1.." + std::to_string(r));
    }
    ExtendResult out;
    out.affine = a;
    out.k = k;
    out.infinity = detail::points_at_infinity(m, basis, *w);
    for (const auto& y : out.infinity) out.in_matroid.push_back(m.find_parallel(y) ? 0 : 1);

    std::optional<Subset> h;
    if (k == 1) {
        h = Subset(out.infinity.size());
    } else {
        const Matroid g(m.p(), m.dim(), out.infinity);
        const auto mono = mono_flat_search(g, Coloring{2, out.in_matroid}, k - 1);
        if (mono) h = mono->elements;
    }
    if (!h) return out;
    out.h = h->indices();
    out.e = a.first();
    Span sp(m.p(), m.dim());
    for (auto i : out.h) sp.insert(pack(out.infinity[i]));
    m.insert(sp, *out.e);
    out.flat = classify_flat(m, m.elements_in(sp));
    if (out.flat->rank != k) throw std::logic_error("extended flat has the wrong rank");
    return out;
}

enum class Strategy { Direct, ProofGuided };

inline std::string to_string(Strategy s) { return s == Strategy::Direct ? "direct" : "proof_guided"; }

struct UnavoidableResult {
    Strategy strategy = Strategy::Direct;
    int k = 0;
    std::optional<Flat> flat;
    std::vector<std::string> transcript;
};

namespace detail {

// A rank-t independent flat or a rank-k flat carrying an AG or PG restriction,
// as elements of m.
inline std::optional<Subset> proof_guided(const Matroid& m, int k, int t, int depth, std::vector<std::string>& log) {
    const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    if (m.size() == 0) return std::nullopt;
    if (t <= 1) {
        log.push_back(pad + "t=1: single point " + m.label(0));
        return Subset(m.size(), {0});
    }
    std::optional<Subset> found;
    for_each_flat(m, t, [&](const Subset& f) {
        const auto comps = flat_components(m, f);
        if (comps.size() < 2) return true;
        std::size_t smallest = 0;
        for (std::size_t i = 1; i < comps.size(); ++i) {
            if (comps[i].size() < comps[smallest].size()) smallest = i;
        }
        Subset rest = f;
        for (auto x : comps[smallest]) rest.reset(x);
        const auto sub = restrict_to(m, rest);
        log.push_back(pad + "case 2: disconnected rank-" + std::to_string(t) + " flat, dropping a component of " +
                      std::to_string(comps[smallest].size()));
        const auto rec = proof_guided(sub, k, t - 1, depth + 1, log);
        if (!rec) return true;
        Subset lifted(m.size());
        rec->for_each([&](std::size_t x) { lifted.set(sub.origin(x)); });
        if (static_cast<int>(rec->count()) == t - 1 && sub.is_independent(*rec)) {
            lifted.set(comps[smallest].front());
            if (!m.is_flat(lifted) || !m.is_independent(lifted)) return true;
        }
        found = lifted;
        return false;
    });
    if (found) return found;
    for (int r = m.rank(); r >= k; --r) {
        std::optional<Subset> hit;
        for_each_affine_restriction(m, r, [&](const Subset& a, const AffineWitness&) {
            const auto ext = extend_affine_to_flat(m, a, k);
            if (ext.flat && (ext.flat->tags.contains(FlatClass::AffineGeometry) ||
                             ext.flat->tags.contains(FlatClass::ProjectiveGeometry))) {
                hit = ext.flat->elements;
                return false;
            }
            return true;
        });
        if (hit) {
            log.push_back(pad + "case 1: rank-" + std::to_string(r) + " affine set extends to a rank-" +
                          std::to_string(k) + " flat");
            return hit;
        }
    }
    return std::nullopt;
}

}  // namespace detail

inline UnavoidableResult unavoidable_search(const Matroid& m, int k, Strategy strategy = Strategy::Direct) {
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    if (auto bad = detail::first_nonsimple_class(m)) throw HypothesisError("matroid is not simple", bad);
    UnavoidableResult out;
    out.strategy = strategy;
    out.k = k;
    if (strategy == Strategy::Direct) {
        for_each_flat(m, k, [&](const Subset& f) {
            auto c = classify_flat(m, f);
            if (c.tags.empty()) return true;
            out.flat = std::move(c);
            return false;
        });
        out.transcript.push_back(out.flat ? "direct: first tagged rank-" + std::to_string(k) + " flat"
                                          : "direct: no tagged rank-" + std::to_string(k) + " flat");
        return out;
    }
    if (k > m.rank()) {
        out.transcript.push_back("rank " + std::to_string(m.rank()) + " is below k");
        return out;
    }
    const auto s = detail::proof_guided(m, k, k, 0, out.transcript);
    if (s) {
        out.flat = classify_flat(m, *s);
        if (out.flat->tags.empty()) throw std::logic_error("proof-guided search produced an untagged flat");
    } else {
        out.transcript.push_back("no case applies");
    }
    return out;
}

}  // namespace flatforge
