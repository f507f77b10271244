#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "../errors.hpp"
#include "../flats.hpp"
#include "../linalg.hpp"
#include "../matroid.hpp"
#include "../ramsey.hpp"

namespace flatforge {

// Coordinates of a coextension around an affine set A of M/J, in the frame Q:
//   v_j = Q e_j (j the i-th member of J),  v_x = scale_x * Q [B_x; D_x; 0]  (x in A),
// where the first row of D is all ones. Elements of A are coloured by the code
// of their original B column; a monochromatic rank-k flat of (M/J)|A has its B
// block cleared by subtracting shift times the first row of D.
struct LiftCertificate {
    std::vector<std::size_t> j;
    int k = 0;
    std::vector<std::size_t> a;
    MatGF frame;
    MatGF blocks;  // (|J| + n) x |A|
    std::vector<Residue> scales;
    std::vector<long long> colors;
    bool success = false;
    std::vector<std::size_t> flat_basis;
    Subset flat;
    std::optional<VecGF> shift;
    std::optional<AffineWitness> witness;
};

namespace detail {

inline long long column_code(const MatGF& blocks, std::size_t col, std::size_t rows, int p) {
    long long code = 0;
    for (std::size_t i = rows; i-- > 0;) code = code * p + blocks.at(i, col);
    return code;
}

// The D block as a matroid on A (element order as in cert.a).
inline Matroid lift_d_matroid(const LiftCertificate& c) {
    const std::size_t mm = c.j.size();
    const std::size_t n = c.blocks.rows() - mm;
    std::vector<VecGF> cols;
    for (std::size_t x = 0; x < c.a.size(); ++x) {
        VecGF v(c.frame.p(), std::vector<Residue>(n, 0));
        for (std::size_t i = 0; i < n; ++i) v[i] = c.blocks.at(mm + i, x);
        cols.push_back(std::move(v));
    }
    return Matroid(c.frame.p(), static_cast<int>(n), std::move(cols));
}

inline Coloring dense_coloring(const std::vector<long long>& codes) {
    std::map<long long, int> ids;
    for (auto c : codes) ids.emplace(c, 0);
    int next = 0;
    for (auto& [code, id] : ids) id = next++;
    Coloring out{std::max(next, 1), {}};
    for (auto c : codes) out.color.push_back(ids[c]);
    return out;
}

inline void lift_frame(const Matroid& m, LiftCertificate& c) {
    const int p = m.p();
    const auto& f = field(p);
    const auto d = static_cast<std::size_t>(m.dim());
    const std::size_t mm = c.j.size();
    Span sp = m.span_of(c.j);
    std::vector<std::size_t> basis = c.j;
    for (auto x : c.a) {
        if (m.insert(sp, x)) basis.push_back(x);
    }
    const std::size_t n = basis.size() - mm;
    const auto comp = greedy_unit_complement(m, basis);
    MatGF q0(p, d, d);
    for (std::size_t col = 0; col < basis.size(); ++col) {
        for (std::size_t i = 0; i < d; ++i) q0.set(i, col, m.vector(basis[col])[i]);
    }
    for (std::size_t t = 0; t < comp.size(); ++t) q0.set(comp[t], basis.size() + t, 1);
    const auto q0inv = inverse(q0);
    if (!q0inv) throw std::logic_error("lift frame is singular");

    std::vector<VecGF> coords;
    for (auto x : c.a) coords.push_back(*q0inv * m.vector(x));
    auto d_part = [&](const VecGF& v) {
        VecGF out(p, std::vector<Residue>(n, 0));
        for (std::size_t i = 0; i < n; ++i) out[i] = v[mm + i];
        return out;
    };
    std::optional<VecGF> psi;
    for (const auto& cand : hyperplanes_of(static_cast<int>(n), p)) {
        bool avoids = true;
        for (const auto& v : coords) avoids = avoids && dot(cand, d_part(v)) != 0;
        if (avoids) {
            psi = cand;
            break;
        }
    }
    if (!psi) throw std::logic_error("no hyperplane avoids the affine set");

    // T has first row psi, completed by unit rows.
    MatGF t(p, n, n);
    for (std::size_t i = 0; i < n; ++i) t.set(0, i, (*psi)[i]);
    std::size_t filled = 1;
    for (std::size_t u = 0; u < n && filled < n; ++u) {
        MatGF trial = t;
        trial.set(filled, u, 1);
        MatGF head(p, filled + 1, n);
        for (std::size_t r = 0; r <= filled; ++r) {
            for (std::size_t i = 0; i < n; ++i) head.set(r, i, trial.at(r, i));
        }
        if (rank(head) == filled + 1) {
            t = trial;
            ++filled;
        }
    }
    const auto tinv = inverse(t);
    if (!tinv) throw std::logic_error("completed functional matrix is singular");

    MatGF mid = MatGF::identity(p, d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) mid.set(mm + i, mm + k, tinv->at(i, k));
    }
    c.frame = q0 * mid;
    c.blocks = MatGF(p, mm + n, c.a.size());
    c.scales.clear();
    c.colors.clear();
    for (std::size_t x = 0; x < c.a.size(); ++x) {
        const auto dx = d_part(coords[x]);
        const Residue s = dot(*psi, dx);
        const Residue inv = f.inv(s);
        const auto tdx = t * dx;
        for (std::size_t i = 0; i < mm; ++i) c.blocks.set(i, x, f.mul(coords[x][i], inv));
        for (std::size_t i = 0; i < n; ++i) c.blocks.set(mm + i, x, f.mul(tdx[i], inv));
        c.scales.push_back(s);
        c.colors.push_back(column_code(c.blocks, x, mm, p));
    }
}

}  // namespace detail

// J independent, A (elements of M outside J) an affine restriction of M/J of
// rank at least k; when A is omitted the first one of largest rank is used.
inline LiftCertificate lift_affine(const Matroid& m, const Subset& j, int k, std::optional<Subset> a = std::nullopt) {
    if (k < 1) throw std::invalid_argument("flat rank k must be at least 1");
    if (j.universe() != m.size()) throw std::invalid_argument("J is not over this ground set");
    if (!m.is_independent(j)) throw HypothesisError("J is dependent", j);
    const Matroid mj = contract(m, j);
    std::vector<std::size_t> to_mj(m.size(), Matroid::kLoop);
    for (std::size_t i = 0; i < mj.size(); ++i) to_mj[mj.origin(i)] = i;
    Subset a_mj(mj.size());
    if (a) {
        if (a->universe() != m.size()) throw std::invalid_argument("A is not over this ground set");
        if (a->intersects(j)) throw HypothesisError("A meets J", *a & j);
        a->for_each([&](std::size_t x) { a_mj.set(to_mj[x]); });
        if (!is_affine_restriction(mj, a_mj)) throw HypothesisError("A is not an affine restriction of M/J", *a);
    } else {
        for (int r = mj.rank(); r >= k && a_mj.empty(); --r) {
            for_each_affine_restriction(mj, r, [&](const Subset& s, const AffineWitness&) {
                a_mj = s;
                return false;
            });
        }
        if (a_mj.empty()) {
            throw HypothesisError("M/J has no affine restriction of rank at least " + std::to_string(k));
        }
    }
    const int n = mj.rank_of(a_mj);
    if (n < k) {
        throw HypothesisError("A has rank " + std::to_string(n) + " in M/J, below " + std::to_string(k),
                              a ? a : std::nullopt);
    }
    if (static_cast<double>(j.count()) * std::log2(m.p()) > 60) throw ScaleRefusal("J too large for colour codes");

    LiftCertificate c;
    c.j = j.indices();
    c.k = k;
    a_mj.for_each([&](std::size_t i) { c.a.push_back(mj.origin(i)); });
    detail::lift_frame(m, c);

    const Matroid dm = detail::lift_d_matroid(c);
    const auto mono = mono_flat_search(dm, detail::dense_coloring(c.colors), k);
    c.flat = Subset(m.size());
    if (!mono) return c;

    c.success = true;
    const std::size_t mm = c.j.size();
    const auto& f = field(m.p());
    const std::size_t first = mono->elements.first();
    VecGF beta(m.p(), std::vector<Residue>(mm, 0));
    for (std::size_t i = 0; i < mm; ++i) beta[i] = c.blocks.at(i, first);
    for (std::size_t x = 0; x < c.a.size(); ++x) {
        for (std::size_t i = 0; i < mm; ++i) c.blocks.set(i, x, f.sub(c.blocks.at(i, x), beta[i]));
    }
    // Q' = Q R^{-1}: the first D column absorbs beta.
    for (std::size_t r = 0; r < c.frame.rows(); ++r) {
        Residue v = c.frame.at(r, mm);
        for (std::size_t i = 0; i < mm; ++i) v = f.add(v, f.mul(beta[i], c.frame.at(r, i)));
        c.frame.set(r, mm, v);
    }
    c.shift = beta;
    mono->elements.for_each([&](std::size_t x) { c.flat.set(c.a[x]); });
    for (auto b : dm.greedy_basis(mono->elements)) c.flat_basis.push_back(c.a[b]);
    c.witness = is_affine_restriction(m, c.flat);
    if (!c.witness) throw std::logic_error("lifted flat is not affine");
    return c;
}

}  // namespace flatforge
