#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "../errors.hpp"
#include "../flats.hpp"
#include "../matroid.hpp"

namespace flatforge {

using LineTriple = std::array<Subset, 3>;

struct ReidEdge {
    std::size_t x = 0;    // on L1
    std::size_t y = 0;    // on L3
    std::size_t via = 0;  // a or b
    bool operator==(const ReidEdge&) const = default;
};

struct ReidCertificate {
    std::size_t apex = 0;
    LineTriple lines;
    std::optional<Subset> two_point_line;  // lexicographically least, when one exists
    std::optional<std::size_t> a, b;
    std::vector<ReidEdge> edges;
    std::vector<std::vector<std::size_t>> cycles;  // x0, y0, x1, y1, ... alternating a- and b-edges
    std::vector<std::size_t> cycle_values;         // |V(C)|/2
    bool equal_sizes = false;
    bool cycles_divisible = false;  // p divides every cycle value
    bool line_divisible = false;    // p divides |L1| - 1
    bool conclusion_holds = false;
};

struct Reid1Verdict {
    std::size_t apex = 0;
    LineTriple lines;
    std::optional<Subset> two_point_line;
    std::array<std::size_t, 3> sizes{};
    bool holds = false;  // a two-point line exists, or every size is p+1
};

namespace detail {

inline std::optional<Subset> first_nonsimple_class(const Matroid& m) {
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m.is_loop(i)) return Subset(m.size(), {i});
    }
    for (const auto& cls : m.point_classes()) {
        if (cls.size() > 1) return Subset(m.size(), cls);
    }
    return std::nullopt;
}

// Three rank-2 flats through e, pairwise meeting in {e}, covering a simple rank-3 matroid.
inline void check_copunctual(const Matroid& n, std::size_t e, const LineTriple& lines) {
    if (e >= n.size()) throw HypothesisError("apex index outside the ground set");
    if (auto bad = first_nonsimple_class(n)) throw HypothesisError("matroid is not simple", bad);
    if (n.rank() != 3) throw HypothesisError("matroid has rank " + std::to_string(n.rank()) + ", expected 3");
    Subset all(n.size());
    for (std::size_t i = 0; i < 3; ++i) {
        const auto& l = lines[i];
        if (l.universe() != n.size()) throw HypothesisError("line " + std::to_string(i + 1) + " is over another ground set");
        if (!l.test(e)) throw HypothesisError("line " + std::to_string(i + 1) + " misses the apex", l);
        if (n.rank_of(l) != 2 || !n.is_flat(l)) throw HypothesisError("line " + std::to_string(i + 1) + " is not a rank-2 flat", l);
        all |= l;
    }
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = i + 1; j < 3; ++j) {
            const Subset meet = lines[i] & lines[j];
            if (meet != Subset(n.size(), {e})) {
                throw HypothesisError("lines " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                                          " do not meet exactly in the apex",
                                      meet);
            }
        }
    }
    if (all != n.ground()) throw HypothesisError("the three lines do not cover the ground set", n.ground() - all);
}

// First two-point line in lexicographic order of its pair.
inline std::optional<Subset> least_two_point_line(const Matroid& n) {
    for (std::size_t x = 0; x < n.size(); ++x) {
        for (std::size_t y = x + 1; y < n.size(); ++y) {
            Subset pair(n.size(), {x, y});
            if (n.rank_of(pair) == 2 && n.closure(pair) == pair) return pair;
        }
    }
    return std::nullopt;
}

// The element of l other than e that lies on the line through x and via.
inline std::size_t third_point_on(const Matroid& n, std::size_t x, std::size_t via, const Subset& l, std::size_t e) {
    Subset hit = n.closure(Subset(n.size(), {x, via})) & l;
    hit.reset(e);
    if (hit.count() != 1) {
        throw std::logic_error("line through " + n.label(x) + " and " + n.label(via) + " meets the third line in " +
                               std::to_string(hit.count()) + " points");
    }
    return hit.first();
}

}  // namespace detail

inline ReidCertificate verify_reid_characteristic(const Matroid& n, std::size_t e, const LineTriple& lines) {
    detail::check_copunctual(n, e, lines);
    ReidCertificate cert;
    cert.apex = e;
    cert.lines = lines;
    const auto s1 = lines[0].count(), s2 = lines[1].count(), s3 = lines[2].count();
    cert.equal_sizes = s1 == s2 && s2 == s3;
    cert.line_divisible = (s1 - 1) % static_cast<std::size_t>(n.p()) == 0;
    cert.two_point_line = detail::least_two_point_line(n);
    if (!cert.two_point_line) {
        Subset l2 = lines[1];
        l2.reset(e);
        cert.a = l2.first();
        cert.b = l2.next(*cert.a + 1);
        Subset l1 = lines[0], l3 = lines[2];
        l1.reset(e);
        l3.reset(e);
        std::vector<std::size_t> via_a(n.size()), via_b(n.size()), back_b(n.size());
        l1.for_each([&](std::size_t x) {
            via_a[x] = detail::third_point_on(n, x, *cert.a, lines[2], e);
            via_b[x] = detail::third_point_on(n, x, *cert.b, lines[2], e);
            cert.edges.push_back({x, via_a[x], *cert.a});
            cert.edges.push_back({x, via_b[x], *cert.b});
            back_b[via_b[x]] = x;
        });
        Subset seen(n.size());
        l1.for_each([&](std::size_t x0) {
            if (seen.test(x0)) return;
            std::vector<std::size_t> cyc;
            std::size_t x = x0;
            do {
                seen.set(x);
                cyc.push_back(x);
                const auto y = via_a[x];
                cyc.push_back(y);
                x = back_b[y];
            } while (x != x0);
            cert.cycle_values.push_back(cyc.size() / 2);
            cert.cycles.push_back(std::move(cyc));
        });
    }
    cert.cycles_divisible = std::all_of(cert.cycle_values.begin(), cert.cycle_values.end(),
                                        [&](std::size_t v) { return v % static_cast<std::size_t>(n.p()) == 0; });
    cert.conclusion_holds = cert.two_point_line.has_value() || (cert.equal_sizes && cert.cycles_divisible && cert.line_divisible);
    return cert;
}

inline Reid1Verdict verify_reid1(const Matroid& n, std::size_t e, const LineTriple& lines) {
    detail::check_copunctual(n, e, lines);
    Reid1Verdict v;
    v.apex = e;
    v.lines = lines;
    for (std::size_t i = 0; i < 3; ++i) v.sizes[i] = lines[i].count();
    v.two_point_line = detail::least_two_point_line(n);
    const auto full = static_cast<std::size_t>(n.p() + 1);
    v.holds = v.two_point_line.has_value() || (v.sizes[0] == full && v.sizes[1] == full && v.sizes[2] == full);
    return v;
}

// Finds the three lines through e when there are exactly three.
inline LineTriple lines_through_apex(const Matroid& n, std::size_t e) {
    auto ls = lines_through(n, e);
    if (ls.size() != 3) {
        throw HypothesisError("element " + n.label(e) + " lies on " + std::to_string(ls.size()) + " lines, expected 3");
    }
    return {ls[0], ls[1], ls[2]};
}

struct Reid2Report {
    std::size_t element = 0;
    bool simple = false;
    bool nonloop = false;
    bool not_coloop = false;
    std::size_t m = 0;  // |si(M/e)|
    bool contraction_connected = false;
    bool m_at_least_3 = false;
    std::optional<Subset> small_hyperplane;  // disjoint from e with fewer than m points
    bool hypotheses_hold = false;
    std::vector<Subset> lines;  // lines through e
    bool conclusion_checked = false;
    bool conclusion_holds = false;
    std::vector<std::string> failures;
};

inline Reid2Report verify_reid2(const Matroid& m, std::size_t e) {
    if (e >= m.size()) throw std::out_of_range("element index outside ground set");
    Reid2Report r;
    r.element = e;
    r.simple = m.is_simple();
    if (!r.simple) r.failures.emplace_back("matroid is not simple");
    r.nonloop = !m.is_loop(e);
    if (!r.nonloop) {
        r.failures.emplace_back("element is a loop");
        return r;
    }
    r.not_coloop = !is_coloop(m, e);
    if (!r.not_coloop) r.failures.emplace_back("element is a coloop");
    const Matroid s = si(contract(m, Subset(m.size(), {e})));
    r.m = s.size();
    r.m_at_least_3 = r.m >= 3;
    if (!r.m_at_least_3) r.failures.emplace_back("si(M/e) has fewer than 3 elements");
    r.contraction_connected = is_connected(s);
    if (!r.contraction_connected) r.failures.emplace_back("si(M/e) is not connected");
    for_each_flat(m, m.rank() - 1, [&](const Subset& h) {
        if (h.test(e)) return true;
        std::vector<bool> seen(m.point_count(), false);
        std::size_t pts = 0;
        h.for_each([&](std::size_t x) {
            if (!m.is_loop(x) && !seen[m.point_of(x)]) {
                seen[m.point_of(x)] = true;
                ++pts;
            }
        });
        if (pts < r.m) {
            r.small_hyperplane = h;
            return false;
        }
        return true;
    });
    if (r.small_hyperplane) r.failures.emplace_back("a hyperplane avoiding the element has fewer than m points");
    r.lines = lines_through(m, e);
    r.hypotheses_hold = r.failures.empty();
    r.conclusion_checked = r.hypotheses_hold;
    if (r.conclusion_checked) {
        r.conclusion_holds = std::all_of(r.lines.begin(), r.lines.end(), [&](const Subset& l) {
            return l.count() == static_cast<std::size_t>(m.p() + 1);
        });
    }
    return r;
}

}  // namespace flatforge
