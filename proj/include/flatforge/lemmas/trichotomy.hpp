#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "../errors.hpp"
#include "../flats.hpp"
#include "../matroid.hpp"
#include "lift.hpp"
#include "reid.hpp"

namespace flatforge {

struct SearchParams {
    int p = 2;
    int k = 2;
    int t = 2;
    int n = 2;
};

enum class Branch { AGRestriction, LiftedFlat, DisconnectedFlat, SmallFlat, PreconditionFailed, Exhausted };

inline std::string to_string(Branch b) {
    switch (b) {
    case Branch::AGRestriction: return "ag_restriction";
    case Branch::LiftedFlat: return "lifted_flat";
    case Branch::DisconnectedFlat: return "disconnected_flat";
    case Branch::SmallFlat: return "small_flat";
    case Branch::PreconditionFailed: return "precondition_failed";
    case Branch::Exhausted: return "exhausted";
    }
    return "?";
}

inline std::optional<Branch> branch_from_string(const std::string& s) {
    for (auto b : {Branch::AGRestriction, Branch::LiftedFlat, Branch::DisconnectedFlat, Branch::SmallFlat,
                   Branch::PreconditionFailed, Branch::Exhausted}) {
        if (to_string(b) == s) return b;
    }
    return std::nullopt;
}

// How the affine set was built: S_i = cl({f, e_1..e_i}) - C for the basis
// e_1.. of C; chain holds |S_1|, |S_2|, ...
struct AffineConstruction {
    std::size_t f = 0;
    Subset g;  // elements outside C forming a rank-t flat of si(M/C) with n points
    std::vector<std::size_t> c_basis;
    std::vector<std::size_t> chain;
};

struct TrichotomyOutcome {
    std::string lemma;
    SearchParams params;
    Branch branch = Branch::Exhausted;
    Subset set;  // the affine set, C, the offending flat, or empty
    std::optional<AffineWitness> witness;
    std::optional<AffineConstruction> construction;
    std::vector<std::vector<std::size_t>> components;
    std::size_t point_count = 0;
    std::size_t min_points = 0;     // lifted: fewest points on a rank-t flat of si(M/C)
    std::size_t flats_checked = 0;  // lifted: rank-t flats of si(M/C)
    std::vector<std::string> transcript;
};

namespace detail {

inline std::size_t points_in(const Matroid& m, const Subset& s) {
    std::vector<bool> seen(m.point_count(), false);
    std::size_t n = 0;
    s.for_each([&](std::size_t x) {
        if (!m.is_loop(x) && !seen[m.point_of(x)]) {
            seen[m.point_of(x)] = true;
            ++n;
        }
    });
    return n;
}

// Components of M|F as sorted element lists of M.
inline std::vector<std::vector<std::size_t>> flat_components(const Matroid& m, const Subset& f) {
    const auto sub = restrict_to(m, f);
    auto comps = connected_components(sub);
    for (auto& c : comps) {
        for (auto& x : c) x = sub.origin(x);
    }
    return comps;
}

struct MinorScan {
    std::size_t flats = 0;
    std::size_t min_points = std::numeric_limits<std::size_t>::max();
    std::optional<Subset> first_short;  // elements of M outside C mapping into the flat
};

// Rank-t flats of si(M/C), looking for one with fewer than bound points.
inline MinorScan scan_minor(const Matroid& m, const Subset& c, int t, std::size_t bound, bool stop_early) {
    const Matroid mc = contract(m, c);
    const auto [s, map] = simplify(mc);
    MinorScan out;
    for_each_flat(s, t, [&](const Subset& f) {
        ++out.flats;
        out.min_points = std::min(out.min_points, f.count());
        if (f.count() < bound && !out.first_short) {
            Subset lifted(m.size());
            for (std::size_t i = 0; i < mc.size(); ++i) {
                if (map.class_of[i] && f.test(*map.class_of[i])) lifted.set(mc.origin(i));
            }
            out.first_short = lifted;
            if (stop_early) return false;
        }
        return true;
    });
    return out;
}

inline void check_params(const Matroid& m, const SearchParams& sp) {
    if (sp.p != m.p()) {
        throw std::invalid_argument("parameter p=" + std::to_string(sp.p) + " but the matroid is over GF(" +
                                    std::to_string(m.p()) + ")");
    }
    if (sp.k < 2) throw std::invalid_argument("k must be at least 2");
    if (sp.t < 1) throw std::invalid_argument("t must be at least 1");
    if (sp.n < 1) throw std::invalid_argument("n must be at least 1");
}

}  // namespace detail

// Either an AG(k-1,p)-restriction built from a rank-(k-1) flat C and a point f,
// a rank-(k-1) flat C over which every rank-t flat of si(M/C) has more than n
// points, or a disconnected rank-t flat.
inline TrichotomyOutcome kelly2_trichotomy(const Matroid& m, const SearchParams& sp) {
    detail::check_params(m, sp);
    TrichotomyOutcome out;
    out.lemma = "kelly2";
    out.params = sp;
    out.set = Subset(m.size());
    auto note = [&](std::string s) { out.transcript.push_back(std::move(s)); };

    if (auto bad = detail::first_nonsimple_class(m)) {
        out.branch = Branch::PreconditionFailed;
        out.set = *bad;
        note("matroid is not simple");
        return out;
    }
    if (m.rank() < sp.t + sp.k - 1) {
        out.branch = Branch::PreconditionFailed;
        note("rank " + std::to_string(m.rank()) + " is below t+k-1 = " + std::to_string(sp.t + sp.k - 1));
        return out;
    }
    std::optional<Subset> short_flat;
    std::optional<Subset> disconnected;
    for_each_flat(m, sp.t, [&](const Subset& f) {
        if (detail::flat_components(m, f).size() > 1) {
            disconnected = f;
            return false;
        }
        if (!short_flat && f.count() < static_cast<std::size_t>(sp.n)) short_flat = f;
        return true;
    });
    if (disconnected) {
        out.branch = Branch::DisconnectedFlat;
        out.set = *disconnected;
        out.components = detail::flat_components(m, *disconnected);
        out.point_count = disconnected->count();
        note("rank-" + std::to_string(sp.t) + " flat is disconnected");
        return out;
    }
    if (short_flat) {
        out.branch = Branch::PreconditionFailed;
        out.set = *short_flat;
        out.point_count = short_flat->count();
        note("a rank-" + std::to_string(sp.t) + " flat has " + std::to_string(out.point_count) + " < n points");
        return out;
    }

    Subset c(m.size());
    for_each_flat(m, sp.k - 1, [&](const Subset& f) {
        c = f;
        return false;
    });
    note("C = first rank-" + std::to_string(sp.k - 1) + " flat, " + std::to_string(c.count()) + " elements");
    const auto scan = detail::scan_minor(m, c, sp.t, static_cast<std::size_t>(sp.n) + 1, false);
    if (!scan.first_short) {
        out.branch = Branch::LiftedFlat;
        out.set = c;
        out.min_points = scan.flats ? scan.min_points : 0;
        out.flats_checked = scan.flats;
        note("every rank-" + std::to_string(sp.t) + " flat of si(M/C) has more than n points");
        return out;
    }

    // G has exactly n points in si(M/C); X = G u C is a rank-(t+k-1) flat of M.
    const std::size_t f = scan.first_short->first();
    note("rank-" + std::to_string(sp.t) + " flat of si(M/C) with n points; f = " + m.label(f));
    Span skew = m.span_of(c);
    std::vector<std::size_t> chosen;
    scan.first_short->for_each([&](std::size_t y) {
        if (static_cast<int>(chosen.size()) < sp.t && m.insert(skew, y)) chosen.push_back(y);
    });
    const Subset ft = m.closure(Subset(m.size(), chosen));
    if (detail::flat_components(m, ft).size() > 1) {
        out.branch = Branch::DisconnectedFlat;
        out.set = ft;
        out.components = detail::flat_components(m, ft);
        out.point_count = ft.count();
        note("rank-t flat skew to C through f is disconnected");
        return out;
    }

    const auto full = static_cast<std::size_t>(m.p() + 1);
    c.for_each([&](std::size_t e) {
        scan.first_short->for_each([&](std::size_t g) {
            const auto line = m.closure(Subset(m.size(), {e, g}));
            if (line.count() != full) {
                throw std::logic_error("line through " + m.label(e) + " and " + m.label(g) + " has " +
                                       std::to_string(line.count()) + " points");
            }
        });
    });

    AffineConstruction con;
    con.f = f;
    con.g = *scan.first_short;
    con.c_basis = m.greedy_basis(c);
    Subset s(m.size());
    std::vector<std::size_t> gen{f};
    for (auto e : con.c_basis) {
        gen.push_back(e);
        s = m.closure(Subset(m.size(), gen)) - c;
        con.chain.push_back(s.count());
    }
    for (std::size_t i = 0; i < con.chain.size(); ++i) {
        const auto want = ipow(static_cast<std::uint64_t>(m.p()), static_cast<int>(i) + 1);
        if (con.chain[i] != want) {
            throw std::logic_error("S_" + std::to_string(i + 1) + " has " + std::to_string(con.chain[i]) +
                                   " elements, expected " + std::to_string(want));
        }
    }
    out.witness = is_affine_restriction(m, s);
    if (!out.witness) throw std::logic_error("constructed set is not affine");
    out.branch = Branch::AGRestriction;
    out.set = s;
    out.construction = con;
    note("affine set of size " + std::to_string(s.count()));
    return out;
}

// Either an AG(k-1,p)-restriction, or a rank-t flat that has at most n points
// or is disconnected.
inline TrichotomyOutcome restriction_trichotomy(const Matroid& m, const SearchParams& sp) {
    detail::check_params(m, sp);
    TrichotomyOutcome out;
    out.lemma = "restriction";
    out.params = sp;
    out.set = Subset(m.size());
    auto note = [&](std::string s) { out.transcript.push_back(std::move(s)); };

    if (auto bad = detail::first_nonsimple_class(m)) {
        out.branch = Branch::PreconditionFailed;
        out.set = *bad;
        note("matroid is not simple");
        return out;
    }
    std::optional<Subset> hit;
    for_each_flat(m, sp.t, [&](const Subset& f) {
        if (f.count() <= static_cast<std::size_t>(sp.n) || detail::flat_components(m, f).size() > 1) {
            hit = f;
            return false;
        }
        return true;
    });
    if (hit) {
        out.set = *hit;
        out.point_count = hit->count();
        out.components = detail::flat_components(m, *hit);
        // a flat that is both small and disconnected is reported as small
        out.branch = out.point_count <= static_cast<std::size_t>(sp.n) ? Branch::SmallFlat : Branch::DisconnectedFlat;
        note("rank-" + std::to_string(sp.t) + " flat with " + std::to_string(out.point_count) + " points, " +
             std::to_string(out.components.size()) + " component(s)");
        return out;
    }

    auto found_affine = [&](const Subset& s, const AffineWitness& w, const std::string& how) {
        out.branch = Branch::AGRestriction;
        out.set = s;
        out.witness = w;
        note(how);
        return out;
    };

    if (m.rank() >= sp.t + sp.k - 1) {
        const auto sub = kelly2_trichotomy(m, {sp.p, sp.k, sp.t, sp.n + 1});
        for (const auto& line : sub.transcript) note("kelly2: " + line);
        if (sub.branch == Branch::AGRestriction) {
            out.construction = sub.construction;
            return found_affine(sub.set, *sub.witness, "affine set from kelly2 with n+1");
        }
        if (sub.branch == Branch::LiftedFlat) {
            const Subset c = sub.set;
            const Matroid mc = contract(m, c);
            const auto [s, map] = simplify(mc);
            const Subset j(m.size(), m.greedy_basis(c));
            for (int r = s.rank(); r >= sp.k; --r) {
                std::optional<LiftCertificate> lifted;
                for_each_affine_restriction(s, r, [&](const Subset& a, const AffineWitness&) {
                    Subset in_m(m.size());
                    a.for_each([&](std::size_t i) { in_m.set(mc.origin(map.representative[i])); });
                    auto cert = lift_affine(m, j, sp.k, in_m);
                    if (cert.success) {
                        lifted = std::move(cert);
                        return false;
                    }
                    return true;
                });
                if (lifted) {
                    return found_affine(lifted->flat, *lifted->witness,
                                        "lifted a rank-" + std::to_string(r) + " affine set of si(M/C)");
                }
            }
            note("no affine set of si(M/C) lifted");
        }
    }
    std::optional<std::pair<Subset, AffineWitness>> any;
    for_each_affine_restriction(m, sp.k, [&](const Subset& a, const AffineWitness& w) {
        any.emplace(a, w);
        return false;
    });
    if (any) return found_affine(any->first, any->second, "affine set by exhaustive search");
    out.branch = Branch::Exhausted;
    note("no affine restriction of rank " + std::to_string(sp.k));
    return out;
}

}  // namespace flatforge
