#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "flatforge/flatforge.hpp"

using namespace flatforge;

namespace {

constexpr int kOk = 0;
constexpr int kNotFound = 1;
constexpr int kUsage = 2;
constexpr int kScale = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::string out;
    bool trace = false;
};

// A file path, or failing that a catalog spec.
Matroid load_matroid(const std::string& arg) {
    if (std::filesystem::exists(arg)) return parse_matroid(read_file(arg));
    try {
        return build_catalog(arg);
    } catch (const std::invalid_argument& e) {
        throw UsageError("'" + arg + "' is neither a readable file nor a catalog spec (" + e.what() + ")");
    }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::size_t element_index(const Matroid& m, const std::string& tok) {
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m.label(i) == tok) return i;
    }
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
        v = std::stoul(tok, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != tok.size() || tok.empty() || v >= m.size()) throw UsageError("unknown element '" + tok + "'");
    return v;
}

// Comma-separated labels or indices.
Subset element_list(const Matroid& m, const std::string& text) {
    Subset s(m.size());
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) s.set(element_index(m, tok));
    }
    return s;
}

void trace(const Globals& g, const std::vector<std::string>& lines) {
    if (!g.trace) return;
    for (const auto& l : lines) std::cerr << l << "\n";
}

int run_classify(const std::string& path, int k, std::string& out) {
    const auto m = load_matroid(path);
    if (k < 0 || k > m.rank()) throw UsageError("--k must lie in 0.." + std::to_string(m.rank()));
    json flats = json::array();
    std::map<std::string, std::size_t> by_class;
    for_each_flat(m, k, [&](const Subset& f) {
        const auto c = classify_flat(m, f);
        ++by_class[c.tags.to_string()];
        flats.push_back(json{{"elements", c.elements.indices()}, {"tags", c.tags.names()}});
        return true;
    });
    out = dump(json{{"report", "classify"},
                    {"matroid_hash", matroid_digest(m)},
                    {"k", k},
                    {"total", flats.size()},
                    {"by_class", by_class},
                    {"flats", flats}});
    return kOk;
}

int run_find(const Globals& g, const std::string& path, int k, const std::string& strategy, std::string& out) {
    const auto m = load_matroid(path);
    Strategy s;
    if (strategy == "direct") s = Strategy::Direct;
    else if (strategy == "proof" || strategy == "proof_guided") s = Strategy::ProofGuided;
    else throw UsageError("unknown strategy '" + strategy + "'");
    const auto r = unavoidable_search(m, k, s);
    trace(g, r.transcript);
    if (!r.flat) {
        out = dump(json{{"report", "find-unavoidable"},
                        {"matroid_hash", matroid_digest(m)},
                        {"k", k},
                        {"strategy", to_string(s)},
                        {"result", "none"}});
        return kNotFound;
    }
    out = dump(certify_unavoidable(m, r));
    return kOk;
}

int run_ramsey(int q, int t, int colors, int max_rank, bool affine, std::string& out) {
    const auto rep = geometry_report(q, t, colors, max_rank, affine);
    json ranks = json::array();
    for (const auto& rv : rep.ranks) {
        json agreeing = json::array();
        for (auto mode : rv.agreeing) agreeing.push_back(to_string(mode));
        json r{{"rank", rv.rank},
               {"points", rv.points},
               {"holds", rv.holds},
               {"method", to_string(rv.method)},
               {"agreeing", agreeing},
               {"max_flatfree", rv.max_flatfree ? json(*rv.max_flatfree) : json(nullptr)},
               {"witness", nullptr}};
        if (rv.witness) {
            const auto geo = affine ? affine_geometry(rv.rank - 1, q) : projective_geometry(rv.rank - 1, q);
            r["witness"] = json{{"matroid", emit_matroid(geo)}, {"certificate", certify_coloring(geo, t, *rv.witness)}};
        }
        ranks.push_back(std::move(r));
    }
    out = dump(json{{"report", "ramsey"},
                    {"q", q},
                    {"t", t},
                    {"colors", colors},
                    {"affine", affine},
                    {"holds_at", rep.holds_at ? json(*rep.holds_at) : json(nullptr)},
                    {"fails_at", rep.fails_at ? json(*rep.fails_at) : json(nullptr)},
                    {"ranks", ranks}});
    return kOk;
}

int run_cap(const std::string& path, int k, std::string& out) {
    const auto m = load_matroid(path);
    if (k < 1 || k > m.rank()) throw UsageError("--k must lie in 1.." + std::to_string(m.rank()));
    out = dump(certify_flatfree(m, k, max_flatfree_set(m, k)));
    return kOk;
}

struct LemmaArgs {
    std::string lemma;
    std::string matroid;
    std::string apex = "0";
    std::string lines;
    std::string j;
    std::string a;
    int k = 2;
    int t = 2;
    int n = 2;
};

int run_lemma(const Globals& g, const LemmaArgs& la, std::string& out) {
    const auto m = load_matroid(la.matroid);
    if (la.lemma == "kelly" || la.lemma == "reid1") {
        const auto e = element_index(m, la.apex);
        LineTriple lines;
        if (la.lines.empty()) {
            lines = lines_through_apex(m, e);
        } else {
            std::stringstream ss(la.lines);
            std::string part;
            std::size_t i = 0;
            while (std::getline(ss, part, ';')) {
                if (i == 3) throw UsageError("--lines takes three ';'-separated lines");
                lines[i++] = element_list(m, part);
            }
            if (i != 3) throw UsageError("--lines takes three ';'-separated lines");
        }
        if (la.lemma == "kelly") {
            const auto c = verify_reid_characteristic(m, e, lines);
            out = dump(certify_reid(m, c));
            return c.conclusion_holds ? kOk : kNotFound;
        }
        const auto v = verify_reid1(m, e, lines);
        out = dump(certify_reid1(m, v));
        return v.holds ? kOk : kNotFound;
    }
    if (la.lemma == "reid2") {
        const auto r = verify_reid2(m, element_index(m, la.apex));
        out = dump(certify_reid2(m, r));
        return r.hypotheses_hold && r.conclusion_holds ? kOk : kNotFound;
    }
    if (la.lemma == "kelly2" || la.lemma == "restriction") {
        const SearchParams sp{m.p(), la.k, la.t, la.n};
        const auto o = la.lemma == "kelly2" ? kelly2_trichotomy(m, sp) : restriction_trichotomy(m, sp);
        trace(g, o.transcript);
        out = dump(certify_trichotomy(m, o));
        return o.branch == Branch::PreconditionFailed || o.branch == Branch::Exhausted ? kNotFound : kOk;
    }
    if (la.lemma == "affine") {
        std::optional<Subset> a;
        if (!la.a.empty()) a = element_list(m, la.a);
        const auto c = lift_affine(m, element_list(m, la.j), la.k, a);
        out = dump(certify_lift(m, c));
        return c.success ? kOk : kNotFound;
    }
    throw UsageError("unknown lemma '" + la.lemma + "'");
}

int run_enumerate(const Globals& g, int r, int k, std::size_t samples, std::string& out) {
    CensusOptions opt;
    opt.threads = g.threads;
    opt.samples = samples;
    opt.seed = g.seed;
    const auto rep = theorem_census(r, k, opt);
    json canon = json::array();
    for (const auto& c : rep.counterexamples) canon.push_back(c);
    out = dump(json{{"report", "enumerate-check"},
                    {"r", rep.r},
                    {"p", rep.p},
                    {"k", rep.k},
                    {"exhaustive", rep.exhaustive},
                    {"total", rep.total},
                    {"by_class", rep.by_class},
                    {"counterexample_count", rep.counterexample_count},
                    {"counterexample_masks", rep.counterexample_masks},
                    {"counterexamples", canon}});
    return kOk;
}

int run_catalog(const std::string& spec, std::string& out) {
    Matroid m = [&] {
        try {
            return build_catalog(spec);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }();
    out = emit_matroid(m);
    return kOk;
}

int run_validate(const std::string& cert_path, const std::string& matroid, std::string& out) {
    json cert;
    try {
        cert = json::parse(read_file(cert_path));
    } catch (const json::parse_error& e) {
        throw UsageError(std::string("certificate is not JSON: ") + e.what());
    }
    const auto m = load_matroid(matroid);
    const auto v = validate_certificate(m, cert);
    out = v.ok ? "valid\n" : "invalid: " + v.detail + "\n";
    return v.ok ? kOk : kNotFound;
}

unsigned default_threads() {
    if (const char* env = std::getenv("FLATFORGE_THREADS")) {
        try {
            const auto v = std::stoul(env);
            if (v >= 1) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
        std::cerr << "ignoring FLATFORGE_THREADS='" << env << "'\n";
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact search for unavoidable flats in GF(p)-represented matroids"};
    app.set_version_flag("--version", "flatforge 1.0");
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    g.threads = default_threads();
    app.add_option("--seed", g.seed, "seed for sampled enumeration");
    app.add_option("--threads", g.threads, "worker threads (default: FLATFORGE_THREADS or 1)")->check(CLI::PositiveNumber);
    app.add_option("--out", g.out, "write the result here instead of stdout");
    app.add_flag("--trace", g.trace, "print search transcripts on stderr");

    std::string matroid, spec, cert_path, strategy = "direct";
    int k = 2, t = 2, q = 2, colors = 2, max_rank = 3, r = 3;
    bool affine = false;
    std::size_t samples = 0;
    LemmaArgs la;

    auto* classify = app.add_subcommand("classify", "tag every rank-k flat");
    classify->add_option("matroid", matroid, "matroid file or catalog spec")->required();
    classify->add_option("--k", k, "flat rank")->required();

    auto* find = app.add_subcommand("find-unavoidable", "find an independent, affine or projective rank-k flat");
    find->add_option("matroid", matroid, "matroid file or catalog spec")->required();
    find->add_option("--k", k, "flat rank")->required();
    find->add_option("--strategy", strategy, "direct or proof")->check(CLI::IsMember({"direct", "proof", "proof_guided"}));

    auto* ramsey = app.add_subcommand("ramsey", "decide the colouring statement on small geometries");
    ramsey->add_option("--q", q, "field size")->required();
    ramsey->add_option("--t", t, "flat rank")->required();
    ramsey->add_option("--colors", colors, "palette size");
    ramsey->add_option("--max-rank", max_rank, "largest geometry rank")->required();
    ramsey->add_flag("--affine", affine, "use affine geometries");

    auto* cap = app.add_subcommand("cap", "largest set containing no rank-k flat");
    cap->add_option("matroid", matroid, "matroid file or catalog spec")->required();
    cap->add_option("--k", k, "flat rank")->required();

    auto* lemma = app.add_subcommand("verify-lemma", "run one lemma and emit its certificate");
    lemma->add_option("lemma", la.lemma, "kelly, reid1, reid2, kelly2, affine or restriction")
        ->required()
        ->check(CLI::IsMember({"kelly", "reid1", "reid2", "kelly2", "affine", "restriction"}));
    lemma->add_option("matroid", la.matroid, "matroid file or catalog spec")->required();
    lemma->add_option("--apex,--element", la.apex, "apex (kelly, reid1) or element (reid2)");
    lemma->add_option("--lines", la.lines, "three lines 'a,b;c,d;e,f' (default: the lines through the apex)");
    lemma->add_option("--j", la.j, "independent set J (affine)");
    lemma->add_option("--a", la.a, "affine set A of M/J (affine; default: found)");
    lemma->add_option("--k", la.k, "rank k");
    lemma->add_option("--t", la.t, "flat rank t (kelly2, restriction)");
    lemma->add_option("--n", la.n, "point bound n (kelly2, restriction)");

    auto* enumerate = app.add_subcommand("enumerate-check", "census of simple binary matroids");
    enumerate->add_option("--r", r, "rank")->required();
    enumerate->add_option("--k", k, "flat rank")->required();
    enumerate->add_option("--samples", samples, "random samples (rank 5)");

    auto* catalog = app.add_subcommand("catalog", "emit a catalog matroid");
    catalog->add_option("spec", spec, "pg:n,p | ag:n,p | reid:p | free:r,p | random:r,n,p,seed | sum:a+b")->required();

    auto* validate = app.add_subcommand("validate", "check a certificate against a matroid");
    validate->add_option("certificate", cert_path, "certificate JSON")->required();
    validate->add_option("matroid", matroid, "matroid file or catalog spec")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    std::string out;
    int code = kOk;
    try {
        if (*classify) code = run_classify(matroid, k, out);
        else if (*find) code = run_find(g, matroid, k, strategy, out);
        else if (*ramsey) code = run_ramsey(q, t, colors, max_rank, affine, out);
        else if (*cap) code = run_cap(matroid, k, out);
        else if (*lemma) code = run_lemma(g, la, out);
        else if (*enumerate) code = run_enumerate(g, r, k, samples, out);
        else if (*catalog) code = run_catalog(spec, out);
        else if (*validate) code = run_validate(cert_path, matroid, out);
    } catch (const ScaleRefusal& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return kScale;
    } catch (const HypothesisError& e) {
        std::cerr << "hypothesis failed: " << e.what();
        if (e.violating()) {
            std::cerr << " [";
            const auto idx = e.violating()->indices();
            for (std::size_t i = 0; i < idx.size(); ++i) std::cerr << (i ? "," : "") << idx[i];
            std::cerr << "]";
        }
        std::cerr << "\n";
        return kNotFound;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kUsage;
    } catch (const UsageError& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    if (g.out.empty()) {
        std::cout << out;
    } else {
        try {
            write_file(g.out, out);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kUsage;
        }
    }
    return code;
}
