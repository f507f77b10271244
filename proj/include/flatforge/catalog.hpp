#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "linalg.hpp"
#include "matroid.hpp"

namespace flatforge {

struct CatalogSpec;

namespace catalog {
struct Projective { int n; int p; };
struct Affine { int n; int p; };
struct Reid { int p; };
struct Free { int r; int p; };
struct Random { int r; int n; int p; std::uint64_t seed; };
struct Sum { std::vector<CatalogSpec> parts; };
}  // namespace catalog

struct CatalogSpec {
    std::variant<catalog::Projective, catalog::Affine, catalog::Reid, catalog::Free, catalog::Random, catalog::Sum> value;
};

inline constexpr std::uint64_t kMaxCatalogPoints = 200000;

inline int catalog_prime(const CatalogSpec& spec) {
    return std::visit(
        [](const auto& v) -> int {
            if constexpr (std::is_same_v<std::decay_t<decltype(v)>, catalog::Sum>) {
                return v.parts.empty() ? 0 : catalog_prime(v.parts.front());
            } else {
                return v.p;
            }
        },
        spec.value);
}

namespace detail {

inline std::vector<long long> parse_ints(const std::string& body, std::size_t expected, const std::string& text) {
    std::vector<long long> out;
    std::size_t pos = 0;
    while (pos <= body.size()) {
        const auto comma = body.find(',', pos);
        const auto tok = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (tok.empty()) throw std::invalid_argument("catalog spec '" + text + "': empty parameter");
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size()) throw std::invalid_argument("catalog spec '" + text + "': bad integer '" + tok + "'");
        out.push_back(v);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.size() != expected) {
        throw std::invalid_argument("catalog spec '" + text + "': expected " + std::to_string(expected) + " parameters");
    }
    return out;
}

inline int checked_prime(long long p, const std::string& text) {
    if (!is_supported_prime(static_cast<int>(p)) || p > kMaxPrime) {
        throw std::invalid_argument("catalog spec '" + text + "': unsupported prime " + std::to_string(p));
    }
    return static_cast<int>(p);
}

}  // namespace detail

// Grammar: pg:n,p | ag:n,p | reid:p | free:r,p | random:r,n,p,seed | sum:<spec>+<spec>[+...]
inline CatalogSpec parse_catalog_spec(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("catalog spec '" + text + "': missing ':'");
    const auto kind = text.substr(0, colon);
    const auto body = text.substr(colon + 1);
    if (kind == "sum") {
        catalog::Sum s;
        std::size_t pos = 0;
        while (true) {
            const auto plus = body.find('+', pos);
            const auto part = body.substr(pos, plus == std::string::npos ? std::string::npos : plus - pos);
            if (part.rfind("sum:", 0) == 0) throw std::invalid_argument("catalog spec '" + text + "': nested sum");
            s.parts.push_back(parse_catalog_spec(part));
            if (plus == std::string::npos) break;
            pos = plus + 1;
        }
        if (s.parts.size() < 2) throw std::invalid_argument("catalog spec '" + text + "': sum needs two parts");
        for (std::size_t i = 1; i < s.parts.size(); ++i) {
            if (catalog_prime(s.parts[0]) != catalog_prime(s.parts[i])) throw std::invalid_argument("catalog spec '" + text + "': summands over different primes");
        }
        return CatalogSpec{std::move(s)};
    }
    if (kind == "pg" || kind == "ag") {
        const auto v = detail::parse_ints(body, 2, text);
        if (v[0] < 0 || v[0] + 1 > kMaxDim) throw std::invalid_argument("catalog spec '" + text + "': n out of range");
        const int p = detail::checked_prime(v[1], text);
        if (projective_point_count(static_cast<int>(v[0]) + 1, p) > kMaxCatalogPoints) {
            throw std::invalid_argument("catalog spec '" + text + "': geometry too large");
        }
        if (kind == "pg") return CatalogSpec{catalog::Projective{static_cast<int>(v[0]), p}};
        return CatalogSpec{catalog::Affine{static_cast<int>(v[0]), p}};
    }
    if (kind == "reid") {
        const auto v = detail::parse_ints(body, 1, text);
        return CatalogSpec{catalog::Reid{detail::checked_prime(v[0], text)}};
    }
    if (kind == "free") {
        const auto v = detail::parse_ints(body, 2, text);
        if (v[0] < 0 || v[0] > kMaxDim) throw std::invalid_argument("catalog spec '" + text + "': r out of range");
        return CatalogSpec{catalog::Free{static_cast<int>(v[0]), detail::checked_prime(v[1], text)}};
    }
    if (kind == "random") {
        const auto v = detail::parse_ints(body, 4, text);
        const int p = detail::checked_prime(v[2], text);
        if (v[0] < 0 || v[0] > kMaxDim) throw std::invalid_argument("catalog spec '" + text + "': r out of range");
        if (v[1] < v[0]) throw std::invalid_argument("catalog spec '" + text + "': n < r cannot span");
        if (v[0] == 0 && v[1] > 0) throw std::invalid_argument("catalog spec '" + text + "': rank 0 has no points");
        if (v[0] > 0 && static_cast<std::uint64_t>(v[1]) > projective_point_count(static_cast<int>(v[0]), p)) {
            throw std::invalid_argument("catalog spec '" + text + "': more points than PG(r-1,p) has");
        }
        if (static_cast<std::uint64_t>(v[1]) > kMaxCatalogPoints || v[3] < 0) {
            throw std::invalid_argument("catalog spec '" + text + "': parameters out of range");
        }
        return CatalogSpec{catalog::Random{static_cast<int>(v[0]), static_cast<int>(v[1]), p, static_cast<std::uint64_t>(v[3])}};
    }
    throw std::invalid_argument("catalog spec '" + text + "': unknown kind '" + kind + "'");
}

inline std::string to_string(const CatalogSpec& spec) {
    struct V {
        std::string operator()(const catalog::Projective& s) const { return "pg:" + std::to_string(s.n) + "," + std::to_string(s.p); }
        std::string operator()(const catalog::Affine& s) const { return "ag:" + std::to_string(s.n) + "," + std::to_string(s.p); }
        std::string operator()(const catalog::Reid& s) const { return "reid:" + std::to_string(s.p); }
        std::string operator()(const catalog::Free& s) const { return "free:" + std::to_string(s.r) + "," + std::to_string(s.p); }
        std::string operator()(const catalog::Random& s) const {
            return "random:" + std::to_string(s.r) + "," + std::to_string(s.n) + "," + std::to_string(s.p) + "," + std::to_string(s.seed);
        }
        std::string operator()(const catalog::Sum& s) const {
            std::string out = "sum:";
            for (std::size_t i = 0; i < s.parts.size(); ++i) out += (i ? "+" : "") + to_string(s.parts[i]);
            return out;
        }
    };
    return std::visit(V{}, spec.value);
}

inline Matroid projective_geometry(int n, int p) {
    std::vector<VecGF> pts;
    for (const auto& v : ProjectivePoints(n + 1, p)) pts.push_back(v);
    return Matroid(p, n + 1, std::move(pts));
}

// Points of PG(n,p) with first coordinate 1.
inline Matroid affine_geometry(int n, int p) {
    std::vector<VecGF> pts;
    for (const auto& v : ProjectivePoints(n + 1, p)) {
        if (v[0] == 1) pts.push_back(v);
    }
    return Matroid(p, n + 1, std::move(pts));
}

// Three full concurrent lines of PG(2,p): element 0 is the apex (1,0,0),
// followed by the other p points of each line in turn.
inline Matroid reid_geometry(int p) {
    const auto& f = field(p);
    std::vector<VecGF> pts{VecGF(p, {1, 0, 0})};
    const std::vector<std::vector<Residue>> dirs{{0, 1, 0}, {0, 0, 1}, {0, 1, 1}};
    for (const auto& d : dirs) {
        for (int lambda = 0; lambda < p; ++lambda) {
            pts.push_back(canonical_point(VecGF(p, {f.reduce(lambda), d[1], d[2]})));
        }
    }
    return Matroid(p, 3, std::move(pts));
}

// Element indices of the three lines of reid_geometry(p), each including the apex.
inline std::vector<std::vector<std::size_t>> reid_lines(int p) {
    std::vector<std::vector<std::size_t>> lines(3);
    for (std::size_t l = 0; l < 3; ++l) {
        lines[l].push_back(0);
        for (int i = 0; i < p; ++i) lines[l].push_back(1 + l * static_cast<std::size_t>(p) + static_cast<std::size_t>(i));
    }
    return lines;
}

inline Matroid free_matroid(int r, int p) {
    std::vector<VecGF> pts;
    for (int i = 0; i < r; ++i) {
        VecGF v(p, std::vector<Residue>(static_cast<std::size_t>(r), 0));
        v[static_cast<std::size_t>(i)] = 1;
        pts.push_back(std::move(v));
    }
    return Matroid(p, r, std::move(pts));
}

inline Matroid direct_sum(const std::vector<Matroid>& parts) {
    if (parts.empty()) throw std::invalid_argument("direct_sum: no summands");
    const int p = parts.front().p();
    int dim = 0;
    for (const auto& m : parts) {
        if (m.p() != p) throw std::invalid_argument("direct_sum: summands over different primes");
        dim += m.dim();
    }
    if (dim > kMaxDim) throw std::invalid_argument("direct_sum: ambient dimension exceeds " + std::to_string(kMaxDim));
    std::vector<VecGF> pts;
    int offset = 0;
    for (const auto& m : parts) {
        for (const auto& v : m.vectors()) {
            VecGF w(p, std::vector<Residue>(static_cast<std::size_t>(dim), 0));
            for (std::size_t i = 0; i < v.dim(); ++i) w[static_cast<std::size_t>(offset) + i] = v[i];
            pts.push_back(std::move(w));
        }
        offset += m.dim();
    }
    return Matroid(p, dim, std::move(pts));
}

// n distinct points of PG(r-1,p) spanning rank r, drawn from a seeded mt19937_64.
inline Matroid random_matroid(int r, int n, int p, std::uint64_t seed) {
    if (r < 0 || r > kMaxDim || n < r || (r == 0 && n > 0) ||
        (r > 0 && static_cast<std::uint64_t>(n) > projective_point_count(r, p))) {
        throw std::invalid_argument("random_matroid: no simple rank-" + std::to_string(r) + " matroid on " +
                                    std::to_string(n) + " points over GF(" + std::to_string(p) + ")");
    }
    std::mt19937_64 rng(seed);
    const auto& f = field(p);
    while (true) {
        std::set<VecGF> chosen;
        std::vector<VecGF> pts;
        while (pts.size() < static_cast<std::size_t>(n)) {
            VecGF v(p, std::vector<Residue>(static_cast<std::size_t>(r), 0));
            for (auto& x : v.coords) x = f.reduce(static_cast<long long>(rng() % static_cast<std::uint64_t>(p)));
            if (v.is_zero()) continue;
            v = canonical_point(v);
            if (chosen.insert(v).second) pts.push_back(std::move(v));
        }
        Matroid m(p, r, std::move(pts));
        if (m.rank() == r) return m;
    }
}

inline Matroid build_catalog(const CatalogSpec& spec) {
    struct V {
        Matroid operator()(const catalog::Projective& s) const { return projective_geometry(s.n, s.p); }
        Matroid operator()(const catalog::Affine& s) const { return affine_geometry(s.n, s.p); }
        Matroid operator()(const catalog::Reid& s) const { return reid_geometry(s.p); }
        Matroid operator()(const catalog::Free& s) const { return free_matroid(s.r, s.p); }
        Matroid operator()(const catalog::Random& s) const { return random_matroid(s.r, s.n, s.p, s.seed); }
        Matroid operator()(const catalog::Sum& s) const {
            std::vector<Matroid> parts;
            for (const auto& part : s.parts) parts.push_back(build_catalog(part));
            return direct_sum(parts);
        }
    };
    return std::visit(V{}, spec.value);
}

inline Matroid build_catalog(const std::string& text) { return build_catalog(parse_catalog_spec(text)); }

}  // namespace flatforge
