#pragma once

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"
#include "flats.hpp"
#include "io.hpp"
#include "lemmas/lift.hpp"
#include "lemmas/reid.hpp"
#include "lemmas/trichotomy.hpp"
#include "lemmas/unavoidable.hpp"
#include "matroid.hpp"
#include "ramsey.hpp"

namespace flatforge {

using json = nlohmann::json;

inline constexpr int kCertificateSchema = 1;

// A certificate failed to parse or one of its claims is false.
class CertificateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ValidationResult {
    bool ok = false;
    std::string detail;
};

namespace detail {

[[noreturn]] inline void reject(const std::string& why) { throw CertificateError(why); }

inline json set_json(const Subset& s) { return json(s.indices()); }

inline json opt_set_json(const std::optional<Subset>& s) { return s ? set_json(*s) : json(nullptr); }

inline json vec_json(const VecGF& v) {
    json out = json::array();
    for (auto x : v.coords) out.push_back(static_cast<int>(x));
    return out;
}

inline json mat_json(const MatGF& m) {
    json out = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(static_cast<int>(m.at(i, j)));
        out.push_back(std::move(row));
    }
    return out;
}

inline void exact_keys(const json& o, std::initializer_list<const char*> keys, const std::string& what) {
    if (!o.is_object()) reject(what + " is not an object");
    for (auto k : keys) {
        if (!o.contains(k)) reject(what + " is missing '" + k + "'");
    }
    if (o.size() != keys.size()) reject(what + " has unexpected fields");
}

inline long long as_int(const json& v, const std::string& what) {
    if (!v.is_number_integer()) reject(what + " is not an integer");
    return v.get<long long>();
}

inline bool as_bool(const json& v, const std::string& what) {
    if (!v.is_boolean()) reject(what + " is not a boolean");
    return v.get<bool>();
}

inline std::string as_string(const json& v, const std::string& what) {
    if (!v.is_string()) reject(what + " is not a string");
    return v.get<std::string>();
}

inline std::size_t as_index(const json& v, std::size_t n, const std::string& what) {
    const auto x = as_int(v, what);
    if (x < 0 || static_cast<unsigned long long>(x) >= n) reject(what + " index " + std::to_string(x) + " out of range");
    return static_cast<std::size_t>(x);
}

inline std::vector<std::size_t> as_indices(const json& v, std::size_t n, const std::string& what) {
    if (!v.is_array()) reject(what + " is not an array");
    std::vector<std::size_t> out;
    for (const auto& x : v) out.push_back(as_index(x, n, what));
    return out;
}

// Strictly increasing index list.
inline Subset as_set(const json& v, std::size_t n, const std::string& what) {
    const auto idx = as_indices(v, n, what);
    for (std::size_t i = 1; i < idx.size(); ++i) {
        if (idx[i] <= idx[i - 1]) reject(what + " is not strictly increasing");
    }
    return Subset(n, idx);
}

inline std::optional<Subset> as_opt_set(const json& v, std::size_t n, const std::string& what) {
    if (v.is_null()) return std::nullopt;
    return as_set(v, n, what);
}

inline VecGF as_vec(const json& v, int p, std::size_t dim, const std::string& what) {
    if (!v.is_array() || v.size() != dim) reject(what + " must have " + std::to_string(dim) + " entries");
    std::vector<Residue> c;
    for (const auto& x : v) {
        const auto r = as_int(x, what);
        if (r < 0 || r >= p) reject(what + " entry " + std::to_string(r) + " is not a residue mod " + std::to_string(p));
        c.push_back(static_cast<Residue>(r));
    }
    return VecGF(p, std::move(c));
}

inline MatGF as_mat(const json& v, int p, std::size_t rows, std::size_t cols, const std::string& what) {
    if (!v.is_array() || v.size() != rows) reject(what + " must have " + std::to_string(rows) + " rows");
    MatGF out(p, rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        const auto row = as_vec(v[i], p, cols, what);
        for (std::size_t j = 0; j < cols; ++j) out.set(i, j, row[j]);
    }
    return out;
}

// First top-level key where two payloads differ.
inline void require_equal(const json& expected, const json& got, const std::string& what) {
    if (expected == got) return;
    if (expected.is_object() && got.is_object()) {
        for (const auto& [key, val] : expected.items()) {
            if (!got.contains(key) || got[key] != val) reject(what + ": field '" + key + "' does not match");
        }
        reject(what + " has unexpected fields");
    }
    reject(what + " does not match");
}

}  // namespace detail

inline json make_certificate(const std::string& kind, const Matroid& m, json payload) {
    return json{{"schema_version", kCertificateSchema},
                {"kind", kind},
                {"matroid_hash", matroid_digest(m)},
                {"payload", std::move(payload)}};
}

// ---- flats ----

inline json flat_payload(const Matroid& m, const Flat& f) {
    return json{{"elements", detail::set_json(f.elements)},
                {"basis", m.greedy_basis(f.elements)},
                {"rank", f.rank},
                {"tags", f.tags.names()},
                {"affine", f.affine ? detail::vec_json(f.affine->functional) : json(nullptr)}};
}

inline Flat flat_from_json(const Matroid& m, const json& j) {
    detail::exact_keys(j, {"elements", "basis", "rank", "tags", "affine"}, "flat");
    Flat f;
    f.elements = detail::as_set(j["elements"], m.size(), "flat elements");
    detail::as_indices(j["basis"], m.size(), "flat basis");
    f.rank = static_cast<int>(detail::as_int(j["rank"], "flat rank"));
    if (!j["tags"].is_array()) detail::reject("flat tags is not an array");
    std::vector<std::string> names;
    for (const auto& t : j["tags"]) names.push_back(detail::as_string(t, "flat tag"));
    try {
        f.tags = FlatClassSet::from_names(names);
    } catch (const std::invalid_argument& e) {
        detail::reject(e.what());
    }
    if (f.tags.names() != names) detail::reject("flat tags are not in canonical form");
    if (!j["affine"].is_null()) {
        f.affine = AffineWitness{detail::as_vec(j["affine"], m.p(), static_cast<std::size_t>(m.dim()), "affine functional")};
    }
    return f;
}

inline json certify_flat(const Matroid& m, const Flat& f) { return make_certificate("flat", m, flat_payload(m, f)); }

inline json certify_unavoidable(const Matroid& m, const UnavoidableResult& r) {
    if (!r.flat) throw std::invalid_argument("no flat to certify");
    return make_certificate("unavoidable", m,
                            json{{"k", r.k}, {"strategy", to_string(r.strategy)}, {"flat", flat_payload(m, *r.flat)}});
}

// ---- Reid ----

inline json reid_payload(const ReidCertificate& c) {
    json edges = json::array();
    for (const auto& e : c.edges) edges.push_back(json::array({e.x, e.y, e.via}));
    return json{{"apex", c.apex},
                {"lines", json::array({detail::set_json(c.lines[0]), detail::set_json(c.lines[1]),
                                       detail::set_json(c.lines[2])})},
                {"two_point_line", detail::opt_set_json(c.two_point_line)},
                {"a", c.a ? json(*c.a) : json(nullptr)},
                {"b", c.b ? json(*c.b) : json(nullptr)},
                {"edges", std::move(edges)},
                {"cycles", c.cycles},
                {"cycle_values", c.cycle_values},
                {"equal_sizes", c.equal_sizes},
                {"cycles_divisible", c.cycles_divisible},
                {"line_divisible", c.line_divisible},
                {"conclusion_holds", c.conclusion_holds}};
}

inline ReidCertificate reid_from_json(const Matroid& m, const json& j) {
    detail::exact_keys(j, {"apex", "lines", "two_point_line", "a", "b", "edges", "cycles", "cycle_values",
                           "equal_sizes", "cycles_divisible", "line_divisible", "conclusion_holds"},
                       "reid payload");
    const auto n = m.size();
    ReidCertificate c;
    c.apex = detail::as_index(j["apex"], n, "apex");
    if (!j["lines"].is_array() || j["lines"].size() != 3) detail::reject("reid payload needs three lines");
    for (std::size_t i = 0; i < 3; ++i) c.lines[i] = detail::as_set(j["lines"][i], n, "line");
    c.two_point_line = detail::as_opt_set(j["two_point_line"], n, "two-point line");
    if (!j["a"].is_null()) c.a = detail::as_index(j["a"], n, "a");
    if (!j["b"].is_null()) c.b = detail::as_index(j["b"], n, "b");
    if (!j["edges"].is_array()) detail::reject("edges is not an array");
    for (const auto& e : j["edges"]) {
        const auto t = detail::as_indices(e, n, "edge");
        if (t.size() != 3) detail::reject("edge must list x, y and the witness");
        c.edges.push_back({t[0], t[1], t[2]});
    }
    if (!j["cycles"].is_array()) detail::reject("cycles is not an array");
    for (const auto& cyc : j["cycles"]) c.cycles.push_back(detail::as_indices(cyc, n, "cycle"));
    if (!j["cycle_values"].is_array()) detail::reject("cycle_values is not an array");
    for (const auto& v : j["cycle_values"]) {
        const auto x = detail::as_int(v, "cycle value");
        if (x < 0) detail::reject("negative cycle value");
        c.cycle_values.push_back(static_cast<std::size_t>(x));
    }
    c.equal_sizes = detail::as_bool(j["equal_sizes"], "equal_sizes");
    c.cycles_divisible = detail::as_bool(j["cycles_divisible"], "cycles_divisible");
    c.line_divisible = detail::as_bool(j["line_divisible"], "line_divisible");
    c.conclusion_holds = detail::as_bool(j["conclusion_holds"], "conclusion_holds");
    return c;
}

inline json certify_reid(const Matroid& m, const ReidCertificate& c) { return make_certificate("reid", m, reid_payload(c)); }

inline json reid1_payload(const Reid1Verdict& v) {
    return json{{"apex", v.apex},
                {"lines", json::array({detail::set_json(v.lines[0]), detail::set_json(v.lines[1]),
                                       detail::set_json(v.lines[2])})},
                {"sizes", v.sizes},
                {"two_point_line", detail::opt_set_json(v.two_point_line)},
                {"holds", v.holds}};
}

inline json certify_reid1(const Matroid& m, const Reid1Verdict& v) { return make_certificate("reid1", m, reid1_payload(v)); }

inline json reid2_payload(const Reid2Report& r) {
    json lines = json::array();
    for (const auto& l : r.lines) lines.push_back(detail::set_json(l));
    return json{{"element", r.element},
                {"simple", r.simple},
                {"nonloop", r.nonloop},
                {"not_coloop", r.not_coloop},
                {"m", r.m},
                {"contraction_connected", r.contraction_connected},
                {"m_at_least_3", r.m_at_least_3},
                {"small_hyperplane", detail::opt_set_json(r.small_hyperplane)},
                {"hypotheses_hold", r.hypotheses_hold},
                {"lines", std::move(lines)},
                {"conclusion_checked", r.conclusion_checked},
                {"conclusion_holds", r.conclusion_holds},
                {"failures", r.failures}};
}

inline json certify_reid2(const Matroid& m, const Reid2Report& r) { return make_certificate("reid2", m, reid2_payload(r)); }

// ---- trichotomy ----

inline json trichotomy_payload(const TrichotomyOutcome& o) {
    json con = nullptr;
    if (o.construction) {
        con = json{{"f", o.construction->f},
                   {"g", detail::set_json(o.construction->g)},
                   {"c_basis", o.construction->c_basis},
                   {"chain", o.construction->chain}};
    }
    return json{{"lemma", o.lemma},
                {"params", json{{"p", o.params.p}, {"k", o.params.k}, {"t", o.params.t}, {"n", o.params.n}}},
                {"branch", to_string(o.branch)},
                {"set", detail::set_json(o.set)},
                {"witness", o.witness ? detail::vec_json(o.witness->functional) : json(nullptr)},
                {"construction", std::move(con)},
                {"components", o.components},
                {"point_count", o.point_count},
                {"min_points", o.min_points},
                {"flats_checked", o.flats_checked}};
}

inline TrichotomyOutcome trichotomy_from_json(const Matroid& m, const json& j) {
    detail::exact_keys(j, {"lemma", "params", "branch", "set", "witness", "construction", "components", "point_count",
                           "min_points", "flats_checked"},
                       "trichotomy payload");
    const auto n = m.size();
    TrichotomyOutcome o;
    o.lemma = detail::as_string(j["lemma"], "lemma");
    if (o.lemma != "kelly2" && o.lemma != "restriction") detail::reject("unknown lemma '" + o.lemma + "'");
    const auto& pj = j["params"];
    detail::exact_keys(pj, {"p", "k", "t", "n"}, "params");
    auto small_int = [](const json& v, const char* what) {
        const auto x = detail::as_int(v, what);
        if (x < -1000000 || x > 1000000) detail::reject(std::string(what) + " out of range");
        return static_cast<int>(x);
    };
    o.params = {small_int(pj["p"], "p"), small_int(pj["k"], "k"), small_int(pj["t"], "t"), small_int(pj["n"], "n")};
    const auto b = branch_from_string(detail::as_string(j["branch"], "branch"));
    if (!b) detail::reject("unknown branch");
    o.branch = *b;
    o.set = detail::as_set(j["set"], n, "set");
    if (!j["witness"].is_null()) {
        o.witness = AffineWitness{detail::as_vec(j["witness"], m.p(), static_cast<std::size_t>(m.dim()), "witness")};
    }
    if (!j["construction"].is_null()) {
        const auto& cj = j["construction"];
        detail::exact_keys(cj, {"f", "g", "c_basis", "chain"}, "construction");
        AffineConstruction c;
        c.f = detail::as_index(cj["f"], n, "f");
        c.g = detail::as_set(cj["g"], n, "g");
        c.c_basis = detail::as_indices(cj["c_basis"], n, "c_basis");
        if (!cj["chain"].is_array()) detail::reject("chain is not an array");
        for (const auto& x : cj["chain"]) {
            const auto v = detail::as_int(x, "chain entry");
            if (v < 0) detail::reject("negative chain entry");
            c.chain.push_back(static_cast<std::size_t>(v));
        }
        o.construction = std::move(c);
    }
    if (!j["components"].is_array()) detail::reject("components is not an array");
    for (const auto& c : j["components"]) o.components.push_back(detail::as_indices(c, n, "component"));
    auto count = [](const json& v, const char* what) {
        const auto x = detail::as_int(v, what);
        if (x < 0) detail::reject(std::string(what) + " is negative");
        return static_cast<std::size_t>(x);
    };
    o.point_count = count(j["point_count"], "point_count");
    o.min_points = count(j["min_points"], "min_points");
    o.flats_checked = count(j["flats_checked"], "flats_checked");
    return o;
}

inline json certify_trichotomy(const Matroid& m, const TrichotomyOutcome& o) {
    return make_certificate("trichotomy", m, trichotomy_payload(o));
}

// ---- lift ----

inline json lift_payload(const LiftCertificate& c) {
    std::vector<int> scales(c.scales.begin(), c.scales.end());
    return json{{"j", c.j},
                {"k", c.k},
                {"a", c.a},
                {"frame", detail::mat_json(c.frame)},
                {"blocks", detail::mat_json(c.blocks)},
                {"scales", scales},
                {"colors", c.colors},
                {"success", c.success},
                {"flat_basis", c.flat_basis},
                {"flat", detail::set_json(c.flat)},
                {"shift", c.shift ? detail::vec_json(*c.shift) : json(nullptr)},
                {"witness", c.witness ? detail::vec_json(c.witness->functional) : json(nullptr)}};
}

inline LiftCertificate lift_from_json(const Matroid& m, const json& j) {
    detail::exact_keys(j, {"j", "k", "a", "frame", "blocks", "scales", "colors", "success", "flat_basis", "flat", "shift",
                           "witness"},
                       "lift payload");
    const auto n = m.size();
    const int p = m.p();
    const auto d = static_cast<std::size_t>(m.dim());
    LiftCertificate c;
    c.j = detail::as_indices(j["j"], n, "J");
    const auto k = detail::as_int(j["k"], "k");
    if (k < 1 || k > static_cast<long long>(d)) detail::reject("k out of range");
    c.k = static_cast<int>(k);
    c.a = detail::as_indices(j["a"], n, "A");
    c.frame = detail::as_mat(j["frame"], p, d, d, "frame");
    if (!j["blocks"].is_array()) detail::reject("blocks is not an array");
    c.blocks = detail::as_mat(j["blocks"], p, j["blocks"].size(), c.a.size(), "blocks");
    if (!j["scales"].is_array()) detail::reject("scales is not an array");
    for (const auto& s : j["scales"]) {
        const auto x = detail::as_int(s, "scale");
        if (x < 1 || x >= p) detail::reject("scale " + std::to_string(x) + " is not a nonzero residue");
        c.scales.push_back(static_cast<Residue>(x));
    }
    if (!j["colors"].is_array()) detail::reject("colors is not an array");
    for (const auto& x : j["colors"]) c.colors.push_back(detail::as_int(x, "color"));
    c.success = detail::as_bool(j["success"], "success");
    c.flat_basis = detail::as_indices(j["flat_basis"], n, "flat basis");
    c.flat = detail::as_set(j["flat"], n, "flat");
    if (!j["shift"].is_null()) c.shift = detail::as_vec(j["shift"], p, c.j.size(), "shift");
    if (!j["witness"].is_null()) c.witness = AffineWitness{detail::as_vec(j["witness"], p, d, "witness")};
    return c;
}

inline json certify_lift(const Matroid& m, const LiftCertificate& c) { return make_certificate("lift", m, lift_payload(c)); }

// ---- Ramsey lab ----

inline json certify_flatfree(const Matroid& m, int k, const FlatFreeResult& r) {
    return make_certificate("flatfree", m, json{{"k", k}, {"size", r.size}, {"set", detail::set_json(r.set)}});
}

// Claims that no rank-k flat is monochromatic under the colouring.
inline json certify_coloring(const Matroid& m, int k, const Coloring& c) {
    return make_certificate("coloring", m, json{{"k", k}, {"palette", c.palette}, {"color", c.color}});
}

// ---- validation ----

namespace detail {

inline void validate_flat(const Matroid& m, const json& j, const Flat& f) {
    const auto basis = as_indices(j["basis"], m.size(), "flat basis");
    if (basis != m.greedy_basis(f.elements)) reject("flat basis is not the greedy basis of the flat");
    if (f.rank != static_cast<int>(basis.size())) reject("flat rank does not match its basis");
    if (!m.is_flat(f.elements)) reject("set is not closed");
    std::optional<AffineWitness> w;
    const auto tags = flat_tags(m, f.elements, f.rank, &w);
    if (!(tags == f.tags)) reject("flat tags are " + f.tags.to_string() + " but the flat is " + tags.to_string());
    if (f.affine.has_value() != w.has_value()) reject("affine witness presence does not match the tags");
    if (f.affine) {
        std::string why;
        if (!check_affine_witness(m, f.elements, *f.affine, &why)) reject("affine witness fails: " + why);
        if (!(*f.affine == *w)) reject("affine witness is not normalised");
    }
}

inline void validate_unavoidable(const Matroid& m, const json& j) {
    exact_keys(j, {"k", "strategy", "flat"}, "unavoidable payload");
    const auto k = as_int(j["k"], "k");
    const auto strategy = as_string(j["strategy"], "strategy");
    if (strategy != "direct" && strategy != "proof_guided") reject("unknown strategy '" + strategy + "'");
    if (!m.is_simple()) reject("matroid is not simple");
    const auto f = flat_from_json(m, j["flat"]);
    validate_flat(m, j["flat"], f);
    if (f.rank != k) reject("flat has rank " + std::to_string(f.rank) + ", expected " + std::to_string(k));
    if (f.tags.empty()) reject("flat carries no class");
}

inline LineTriple read_lines(const Matroid& m, const json& j) {
    if (!j.is_array() || j.size() != 3) reject("three lines expected");
    LineTriple out;
    for (std::size_t i = 0; i < 3; ++i) out[i] = as_set(j[i], m.size(), "line");
    return out;
}

inline void validate_reid(const Matroid& m, const json& j) {
    const auto c = reid_from_json(m, j);
    ReidCertificate fresh;
    try {
        fresh = verify_reid_characteristic(m, c.apex, c.lines);
    } catch (const HypothesisError& e) {
        reject(std::string("hypotheses fail: ") + e.what());
    }
    require_equal(reid_payload(fresh), j, "reid certificate");
}

inline void validate_reid1(const Matroid& m, const json& j) {
    exact_keys(j, {"apex", "lines", "sizes", "two_point_line", "holds"}, "reid1 payload");
    const auto e = as_index(j["apex"], m.size(), "apex");
    const auto lines = read_lines(m, j["lines"]);
    Reid1Verdict fresh;
    try {
        fresh = verify_reid1(m, e, lines);
    } catch (const HypothesisError& ex) {
        reject(std::string("hypotheses fail: ") + ex.what());
    }
    require_equal(reid1_payload(fresh), j, "reid1 verdict");
}

inline void validate_reid2(const Matroid& m, const json& j) {
    if (!j.is_object() || !j.contains("element")) reject("reid2 payload is missing 'element'");
    const auto e = as_index(j["element"], m.size(), "element");
    require_equal(reid2_payload(verify_reid2(m, e)), j, "reid2 report");
}

// Every rank-t flat is connected with at least min_count points.
inline void require_good_flats(const Matroid& m, int t, std::size_t min_count) {
    for_each_flat(m, t, [&](const Subset& f) {
        if (f.count() < min_count) {
            reject("a rank-" + std::to_string(t) + " flat has only " + std::to_string(f.count()) + " points");
        }
        if (flat_components(m, f).size() > 1) reject("a rank-" + std::to_string(t) + " flat is disconnected");
        return true;
    });
}

inline void require_rank_t_flat(const Matroid& m, const Subset& s, int t) {
    if (!m.is_flat(s)) reject("set is not a flat");
    if (m.rank_of(s) != t) reject("set has rank " + std::to_string(m.rank_of(s)) + ", expected " + std::to_string(t));
}

inline void check_construction(const Matroid& m, const TrichotomyOutcome& o, int n) {
    const auto& con = *o.construction;
    const int k = o.params.k, t = o.params.t;
    const Subset cb(m.size(), con.c_basis);
    if (static_cast<int>(con.c_basis.size()) != k - 1 || !m.is_independent(cb)) reject("c_basis is not a rank-(k-1) basis");
    const Subset c = m.closure(cb);
    if (m.greedy_basis(c) != con.c_basis) reject("c_basis is not the greedy basis of its closure");
    if (con.g.empty() || con.g.intersects(c)) reject("G is empty or meets C");
    Subset x = con.g;
    x |= c;
    if (!m.is_flat(x)) reject("G u C is not a flat");
    if (m.rank_of(x) != t + k - 1) reject("G u C has the wrong rank");
    const Matroid mc = contract(m, c);
    std::vector<std::size_t> to_mc(m.size(), Matroid::kLoop);
    for (std::size_t i = 0; i < mc.size(); ++i) to_mc[mc.origin(i)] = i;
    Subset gmc(mc.size());
    con.g.for_each([&](std::size_t y) { gmc.set(to_mc[y]); });
    if (points_in(mc, gmc) != static_cast<std::size_t>(n)) reject("G does not have n points in si(M/C)");
    if (con.f != con.g.first()) reject("f is not the first element of G");
    if (con.chain.size() != con.c_basis.size()) reject("chain has the wrong length");
    Subset s(m.size());
    std::vector<std::size_t> gen{con.f};
    for (std::size_t i = 0; i < con.c_basis.size(); ++i) {
        gen.push_back(con.c_basis[i]);
        s = m.closure(Subset(m.size(), gen)) - c;
        if (con.chain[i] != s.count()) reject("chain entry " + std::to_string(i + 1) + " does not match |S_i|");
        if (s.count() != ipow(static_cast<std::uint64_t>(m.p()), static_cast<int>(i) + 1)) {
            reject("S_" + std::to_string(i + 1) + " does not have p^" + std::to_string(i + 1) + " elements");
        }
    }
    if (!(s == o.set)) reject("set is not the last S_i of the construction");
}

inline void validate_trichotomy(const Matroid& m, const json& j) {
    const auto o = trichotomy_from_json(m, j);
    const auto& sp = o.params;
    if (sp.p != m.p()) reject("parameter p does not match the matroid");
    if (sp.k < 2 || sp.t < 1 || sp.n < 1) reject("parameters out of range");
    const bool kelly = o.lemma == "kelly2";
    const auto bad = first_nonsimple_class(m);
    const auto n = static_cast<std::size_t>(sp.n);

    auto require_defaults = [&](bool comps, bool count, bool lifted) {
        if (!comps && !o.components.empty()) reject("components present for this branch");
        if (!count && o.point_count != 0) reject("point_count present for this branch");
        if (!lifted && (o.min_points != 0 || o.flats_checked != 0)) reject("lift counts present for this branch");
    };
    auto require_simple = [&] {
        if (bad) reject("matroid is not simple");
    };
    auto require_components = [&] {
        if (o.components != flat_components(m, o.set)) reject("components do not match");
        if (o.point_count != o.set.count()) reject("point_count does not match");
    };
    if (o.branch != Branch::AGRestriction && (o.witness || o.construction)) reject("affine data present for this branch");

    switch (o.branch) {
    case Branch::PreconditionFailed: {
        require_defaults(false, !bad, false);
        if (bad) {
            if (!(o.set == *bad)) reject("set is not the first loop or parallel class");
            if (o.point_count != 0) reject("point_count present for this branch");
            return;
        }
        if (!kelly) reject("restriction preconditions only fail on non-simple input");
        if (m.rank() < sp.t + sp.k - 1) {
            if (!o.set.empty() || o.point_count != 0) reject("rank shortfall carries no set");
            return;
        }
        std::optional<Subset> first_short;
        for_each_flat(m, sp.t, [&](const Subset& f) {
            if (flat_components(m, f).size() > 1) reject("a disconnected rank-t flat exists");
            if (!first_short && f.count() < n) first_short = f;
            return true;
        });
        if (!first_short || !(*first_short == o.set)) reject("set is not the first rank-t flat with fewer than n points");
        if (o.point_count != o.set.count()) reject("point_count does not match");
        return;
    }
    case Branch::DisconnectedFlat: {
        require_simple();
        require_defaults(true, true, false);
        if (kelly && m.rank() < sp.t + sp.k - 1) reject("rank is below t+k-1");
        require_rank_t_flat(m, o.set, sp.t);
        require_components();
        if (o.components.size() < 2) reject("flat is connected");
        if (!kelly && o.set.count() <= n) reject("flat has at most n points; the small branch applies");
        return;
    }
    case Branch::SmallFlat: {
        require_simple();
        require_defaults(true, true, false);
        if (kelly) reject("kelly2 has no small-flat branch");
        require_rank_t_flat(m, o.set, sp.t);
        require_components();
        if (o.set.count() > n) reject("flat has more than n points");
        return;
    }
    case Branch::LiftedFlat: {
        require_simple();
        require_defaults(false, false, true);
        if (!kelly) reject("restriction has no lifted branch");
        if (m.rank() < sp.t + sp.k - 1) reject("rank is below t+k-1");
        require_good_flats(m, sp.t, n);
        if (!m.is_flat(o.set) || m.rank_of(o.set) != sp.k - 1) reject("set is not a rank-(k-1) flat");
        const auto scan = scan_minor(m, o.set, sp.t, n + 1, false);
        if (scan.first_short) reject("a rank-t flat of si(M/C) has at most n points");
        if (scan.flats != o.flats_checked) reject("flats_checked does not match");
        if ((scan.flats ? scan.min_points : 0) != o.min_points) reject("min_points does not match");
        return;
    }
    case Branch::AGRestriction: {
        require_simple();
        require_defaults(false, false, false);
        if (!o.witness) reject("affine branch without witness");
        if (m.rank_of(o.set) != sp.k) reject("set does not have rank k");
        if (o.set.count() != ipow(static_cast<std::uint64_t>(m.p()), sp.k - 1)) reject("set has the wrong cardinality");
        std::string why;
        if (!check_affine_witness(m, o.set, *o.witness, &why)) reject("affine witness fails: " + why);
        if (!(*o.witness == *is_affine_restriction(m, o.set))) reject("affine witness is not normalised");
        if (kelly) {
            if (m.rank() < sp.t + sp.k - 1) reject("rank is below t+k-1");
            require_good_flats(m, sp.t, n);
            if (!o.construction) reject("kelly2 affine branch without construction");
            check_construction(m, o, sp.n);
        } else {
            require_good_flats(m, sp.t, n + 1);
            if (o.construction) check_construction(m, o, sp.n + 1);
        }
        return;
    }
    case Branch::Exhausted: {
        require_simple();
        require_defaults(false, false, false);
        if (kelly) reject("kelly2 is never exhausted");
        if (!o.set.empty()) reject("exhausted outcome carries a set");
        require_good_flats(m, sp.t, n + 1);
        for_each_affine_restriction(m, sp.k, [&](const Subset&, const AffineWitness&) -> bool {
            reject("an affine restriction of rank k exists");
        });
        return;
    }
    }
}

inline void validate_lift(const Matroid& m, const json& j) {
    const auto c = lift_from_json(m, j);
    const int p = m.p();
    const auto& f = field(p);
    const auto d = static_cast<std::size_t>(m.dim());
    const std::size_t mm = c.j.size();
    const Subset js(m.size(), c.j);
    if (js.count() != mm || c.j != js.indices()) reject("J is not strictly increasing");
    if (!m.is_independent(js)) reject("J is dependent");
    const Subset as(m.size(), c.a);
    if (as.count() != c.a.size() || c.a != as.indices()) reject("A is not strictly increasing");
    if (as.intersects(js)) reject("A meets J");
    if (c.a.empty()) reject("A is empty");

    // frame: J columns, then the D part, then the unit complement of span(J u A)
    Span sp = m.span_of(c.j);
    std::vector<std::size_t> basis = c.j;
    for (auto x : c.a) {
        if (m.insert(sp, x)) basis.push_back(x);
    }
    const std::size_t n = basis.size() - mm;
    if (c.blocks.rows() != mm + n) reject("blocks have the wrong number of rows");
    if (!inverse(c.frame)) reject("frame is singular");
    for (std::size_t i = 0; i < mm; ++i) {
        for (std::size_t r = 0; r < d; ++r) {
            if (c.frame.at(r, i) != m.vector(c.j[i])[r]) reject("frame column " + std::to_string(i) + " is not v_j");
        }
    }
    const auto comp = greedy_unit_complement(m, basis);
    for (std::size_t t = 0; t < comp.size(); ++t) {
        for (std::size_t r = 0; r < d; ++r) {
            if (c.frame.at(r, mm + n + t) != (r == comp[t] ? 1 : 0)) reject("frame complement columns are not canonical");
        }
    }
    if (c.scales.size() != c.a.size()) reject("one scale per element of A expected");
    for (std::size_t x = 0; x < c.a.size(); ++x) {
        VecGF col(p, std::vector<Residue>(d, 0));
        for (std::size_t i = 0; i < mm + n; ++i) col[i] = c.blocks.at(i, x);
        auto v = c.frame * col;
        for (auto& e : v.coords) e = f.mul(e, c.scales[x]);
        if (!(v == m.vector(c.a[x]))) reject("blocks do not re-multiply to element " + m.label(c.a[x]));
    }
    for (std::size_t x = 0; x < c.a.size(); ++x) {
        if (n == 0 || c.blocks.at(mm, x) != 1) reject("first row of D is not all ones");
    }
    const Matroid dm = lift_d_matroid(c);
    if (!dm.is_simple() || c.a.size() != ipow(static_cast<std::uint64_t>(p), static_cast<int>(n) - 1)) {
        reject("A is not an affine geometry of rank " + std::to_string(n) + " in M/J");
    }
    if (c.k > static_cast<int>(n)) reject("k exceeds the rank of A");

    if (c.colors.size() != c.a.size()) reject("one colour per element of A expected");
    VecGF beta(p, std::vector<Residue>(mm, 0));
    if (c.shift) beta = *c.shift;
    for (std::size_t x = 0; x < c.a.size(); ++x) {
        long long code = 0;
        for (std::size_t i = mm; i-- > 0;) code = code * p + f.add(c.blocks.at(i, x), beta[i]);
        if (c.colors[x] != code) reject("colour of element " + m.label(c.a[x]) + " does not match its B column");
    }

    if (!c.success) {
        if (c.shift || c.witness || !c.flat.empty() || !c.flat_basis.empty()) reject("failed lift carries a flat");
        const auto col = dense_coloring(c.colors);
        for_each_flat(dm, c.k, [&](const Subset& fl) {
            const int first = col.color[fl.first()];
            bool mono = true;
            fl.for_each([&](std::size_t x) { mono = mono && col.color[x] == first; });
            if (mono) reject("a colour class contains a rank-k flat");
            return true;
        });
        return;
    }
    if (!c.shift || !c.witness) reject("successful lift without shift or witness");
    if (c.flat.count() != ipow(static_cast<std::uint64_t>(p), c.k - 1)) reject("wrong cardinality");
    if (!c.flat.is_subset_of(as)) reject("flat is not inside A");
    std::vector<std::size_t> pos(m.size(), 0);
    for (std::size_t x = 0; x < c.a.size(); ++x) pos[c.a[x]] = x;
    Subset fd(c.a.size());
    c.flat.for_each([&](std::size_t x) { fd.set(pos[x]); });
    if (dm.rank_of(fd) != c.k || !dm.is_flat(fd)) reject("flat is not a rank-k flat of the affine geometry");
    std::vector<std::size_t> fb;
    for (auto b : dm.greedy_basis(fd)) fb.push_back(c.a[b]);
    if (fb != c.flat_basis) reject("flat basis is not the greedy basis");
    fd.for_each([&](std::size_t x) {
        for (std::size_t i = 0; i < mm; ++i) {
            if (c.blocks.at(i, x) != 0) reject("B block is not cleared on the flat");
        }
    });
    std::string why;
    if (!check_affine_witness(m, c.flat, *c.witness, &why)) reject("affine witness fails: " + why);
    const auto w = is_affine_restriction(m, c.flat);
    if (!w || !(*w == *c.witness)) reject("affine witness is not normalised");
}

inline void validate_flatfree(const Matroid& m, const json& j) {
    exact_keys(j, {"k", "size", "set"}, "flatfree payload");
    const auto k = as_int(j["k"], "k");
    if (k < 1 || k > m.rank()) reject("k out of range");
    const auto s = as_set(j["set"], m.size(), "set");
    if (as_int(j["size"], "size") != static_cast<long long>(s.count())) reject("size does not match the set");
    Subset covered(m.size());
    for_each_flat(m, static_cast<int>(k), [&](const Subset& f) {
        const Subset out = f - s;
        if (out.empty()) reject("set contains a rank-k flat");
        if (out.count() == 1) covered |= out;
        return true;
    });
    if (!(covered == s.complement())) reject("set is not maximal: an element can be added");
}

inline void validate_coloring(const Matroid& m, const json& j) {
    exact_keys(j, {"k", "palette", "color"}, "coloring payload");
    const auto k = as_int(j["k"], "k");
    if (k < 1 || k > m.rank()) reject("k out of range");
    Coloring c;
    const auto pal = as_int(j["palette"], "palette");
    if (pal < 1 || pal > 64) reject("palette out of range");
    c.palette = static_cast<int>(pal);
    if (!j["color"].is_array()) reject("color is not an array");
    for (const auto& x : j["color"]) {
        const auto v = as_int(x, "colour");
        if (v < 0 || v >= pal) reject("colour outside the palette");
        c.color.push_back(static_cast<int>(v));
    }
    if (c.color.size() != m.size()) reject("one colour per element expected");
    for_each_flat(m, static_cast<int>(k), [&](const Subset& f) {
        bool mono = true;
        f.for_each([&](std::size_t x) { mono = mono && c.color[x] == c.color[f.first()]; });
        if (mono) reject("a rank-k flat is monochromatic");
        return true;
    });
}

}  // namespace detail

inline const std::vector<std::string>& certificate_kinds() {
    static const std::vector<std::string> kinds = {"flat",       "unavoidable", "reid", "reid1", "reid2",
                                                   "trichotomy", "lift",        "flatfree", "coloring"};
    return kinds;
}

inline ValidationResult validate_certificate(const Matroid& m, const json& cert) {
    try {
        detail::exact_keys(cert, {"schema_version", "kind", "matroid_hash", "payload"}, "certificate");
        if (detail::as_int(cert["schema_version"], "schema_version") != kCertificateSchema) {
            return {false, "unsupported schema version"};
        }
        const auto kind = detail::as_string(cert["kind"], "kind");
        if (detail::as_string(cert["matroid_hash"], "matroid_hash") != matroid_digest(m)) {
            return {false, "matroid hash does not match"};
        }
        const auto& pl = cert["payload"];
        if (kind == "flat") {
            const auto f = flat_from_json(m, pl);
            detail::validate_flat(m, pl, f);
        } else if (kind == "unavoidable") {
            detail::validate_unavoidable(m, pl);
        } else if (kind == "reid") {
            detail::validate_reid(m, pl);
        } else if (kind == "reid1") {
            detail::validate_reid1(m, pl);
        } else if (kind == "reid2") {
            detail::validate_reid2(m, pl);
        } else if (kind == "trichotomy") {
            detail::validate_trichotomy(m, pl);
        } else if (kind == "lift") {
            detail::validate_lift(m, pl);
        } else if (kind == "flatfree") {
            detail::validate_flatfree(m, pl);
        } else if (kind == "coloring") {
            detail::validate_coloring(m, pl);
        } else {
            return {false, "unknown certificate kind '" + kind + "'"};
        }
    } catch (const CertificateError& e) {
        return {false, e.what()};
    } catch (const json::exception& e) {
        return {false, std::string("malformed certificate: ") + e.what()};
    } catch (const std::exception& e) {
        return {false, e.what()};
    }
    return {true, "ok"};
}

}  // namespace flatforge
