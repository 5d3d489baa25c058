// polaris: build finite classical polar spaces and their Grassmann graphs,
// construct frames and apartments, run the characterization verifiers with
// certificate extraction, and search for pattern-isomorphic subsets.
//
// Exit codes: 0 accept/success, 1 reject, 2 usage error, 3 budget truncation.

#include "polaris/apartments.hpp"
#include "polaris/io.hpp"
#include "polaris/search.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

using namespace polaris;

namespace {

struct CommonArgs {
    std::string kind = "symplectic";
    int n = 3;
    uint32_t p = 2;
    int k = -1;
    int m = -1;
    int l = -1;
    uint64_t seed = 0;
    uint64_t budget = 0;
    std::string output;
};

FormKind parse_form_kind(const std::string& kind) {
    if (kind == "symplectic") return FormKind::Symplectic;
    if (kind == "hyperbolic") return FormKind::Hyperbolic;
    if (kind == "parabolic") return FormKind::Parabolic;
    throw CLI::ValidationError("--kind", "unknown polar space kind: " + kind);
}

Theorem parse_theorem(const std::string& name) {
    if (name == "thm4.1") return Theorem::T41;
    if (name == "thm4.2") return Theorem::T42;
    if (name == "thm4.3") return Theorem::T43;
    if (name == "thm4.4") return Theorem::T44;
    if (name == "thm4.5") return Theorem::T45;
    if (name == "cor4.1") return Theorem::C41;
    if (name == "cor4.3") return Theorem::C43;
    throw CLI::ValidationError("theorem", "unknown theorem: " + name);
}

std::string default_path(const std::string& stem, const std::string& ext) {
    return stem + "." + ext;
}

int cmd_build(const CommonArgs& a, int grassmann_level, const std::string& fmt) {
    Json header = header_json("build", a.seed);
    header["kind"] = a.kind;
    header["n"] = a.n;

    if (a.kind == "pj" || a.kind == "hypercube") {
        AbstractGraph g = (a.kind == "pj") ? build_pj(a.n, a.k) : build_hypercube(a.n);
        if (a.kind == "pj") header["k"] = a.k;
        std::string out = a.output.empty() ? default_path(g.name, fmt) : a.output;
        if (fmt == "json") {
            write_json(out, abstract_graph_to_json(g, header));
        } else {
            std::vector<std::pair<int, int>> edges;
            std::vector<std::string> labels;
            for (int u = 0; u < g.size(); ++u) {
                labels.push_back(detail::label_str(g.labels[u]));
                for (int v = u + 1; v < g.size(); ++v)
                    if (g.adj[u][v]) edges.emplace_back(u, v);
            }
            atomic_write(out, graph_to_dot(g.name, g.size(), edges, labels));
        }
        std::cout << g.name << ": " << g.size() << " vertices -> " << out << "\n";
        return 0;
    }

    PolarSpace s = build_polar_space(parse_form_kind(a.kind), a.n, a.p);
    header["p"] = a.p;
    std::cout << a.kind << " rank " << a.n << " over GF(" << a.p << "): " << s.point_count()
              << " points\n";
    if (grassmann_level < 0) {
        if (!a.output.empty()) {
            Json j;
            j["header"] = header;
            j["points"] = Json::array();
            for (const auto& v : s.points) j["points"].push_back(v);
            write_json(a.output, j);
            std::cout << "points -> " << a.output << "\n";
        }
        return 0;
    }
    header["grassmann"] = grassmann_level;
    auto verts = enumerate_singular(s, grassmann_level);
    auto adj = grassmann_adjacency(s, verts);
    std::string stem = a.kind + "_n" + std::to_string(a.n) + "_p" + std::to_string(a.p) + "_g" +
                       std::to_string(grassmann_level);
    std::string out = a.output.empty() ? default_path(stem, fmt) : a.output;
    if (fmt == "json") {
        write_json(out, grassmann_graph_to_json(s, verts, adj, header));
    } else {
        std::vector<std::pair<int, int>> edges;
        for (size_t u = 0; u < verts.size(); ++u)
            for (size_t v = u + 1; v < verts.size(); ++v)
                if (adj[u][v]) edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
        atomic_write(out, graph_to_dot(stem, verts.size(), edges));
    }
    std::cout << "grassmann level " << grassmann_level << ": " << verts.size() << " vertices -> "
              << out << "\n";
    return 0;
}

int cmd_apartment(const CommonArgs& a, bool span_experiment) {
    PolarSpace s = build_polar_space(parse_form_kind(a.kind), a.n, a.p);
    Frame f = standard_frame(s);
    if (a.l > 0 && a.l < a.n) {
        Frame sub;
        sub.points.assign(f.points.begin(), f.points.begin() + 2 * a.l);
        f = sub;
    }
    int k = a.k < 0 ? 0 : a.k;
    Apartment ap = build_apartment(s, f, k);
    std::cout << "apartment of " << a.kind << " n=" << a.n << " p=" << a.p << " at level " << k
              << ": " << ap.members.size() << " members\n";
    for (size_t i = 0; i < ap.members.size(); ++i)
        std::cout << "  " << detail::label_str(ap.pj.labels[i]) << "\n";
    if (span_experiment) {
        // how much of the Grassmann space the apartment spans; reported
        // only, nothing is asserted
        auto closure = span_closure(s, std::set<RowSpace>(ap.members.begin(), ap.members.end()));
        auto all = enumerate_singular(s, k);
        std::cout << "span experiment: closure has " << closure.size() << " of " << all.size()
                  << " elements of the Grassmannian ("
                  << (closure.size() == all.size() ? "spans" : "does not span") << ")\n";
    }
    if (!a.output.empty()) {
        Json header = header_json("apartment", a.seed);
        header["kind"] = a.kind;
        header["n"] = a.n;
        header["p"] = a.p;
        header["k"] = k;
        header["l"] = f.pair_count();
        Json j;
        j["header"] = header;
        j["members"] = Json::array();
        for (size_t i = 0; i < ap.members.size(); ++i) {
            Json e;
            e["label"] = signed_set_to_json(ap.pj.labels[i]);
            e["subspace"] = subspace_to_json(ap.members[i]);
            j["members"].push_back(std::move(e));
        }
        write_json(a.output, j);
        std::cout << "members -> " << a.output << "\n";
    }
    return 0;
}

struct GeneratedInput {
    std::vector<RowSpace> members;
    std::optional<EmbeddingMap> witness;
};

GeneratedInput generate_input(const PolarSpace& s, const std::string& what, int k, int m, int l) {
    GeneratedInput out;
    if (what == "apartment" || what == "lframe") {
        Frame f = standard_frame(s);
        if (what == "lframe" || (l > 0 && l < s.rank)) {
            if (l <= 0) throw CLI::ValidationError("-l", "lframe generation needs -l");
            Frame sub;
            sub.points.assign(f.points.begin(), f.points.begin() + 2 * l);
            f = sub;
        }
        Apartment ap = build_apartment(s, f, k);
        out.members = ap.members;
        if (k <= f.pair_count() - 2 || f.pair_count() == s.rank)
            out.witness = apartment_embedding(ap);
        return out;
    }
    if (what == "parabolic") {
        if (m < 0 || k < 0) throw CLI::ValidationError("--generated", "parabolic needs -k and -m");
        int dim_n = k - m; // rank of N
        Frame f = standard_frame(s);
        std::vector<int> seed_pts;
        for (int i = 0; i < dim_n; ++i) seed_pts.push_back(f.points[2 * i]);
        RowSpace N = span_of_points(s, seed_pts);
        QuotientSpace q = quotient_space(s, N);
        Frame qf = greedy_frame(q.space);
        if (l > 0 && l < q.space.rank) {
            Frame sub;
            sub.points.assign(qf.points.begin(), qf.points.begin() + 2 * l);
            qf = sub;
        }
        ParabolicApartment pa = parabolic_apartment(s, N, k, qf);
        out.members = pa.members;
        out.witness = parabolic_embedding(pa);
        return out;
    }
    throw CLI::ValidationError("--generated", "unknown generator: " + what);
}

int cmd_verify(const CommonArgs& a, const std::string& theorem_name, const std::string& generated,
               const std::string& input_file) {
    Theorem thm = parse_theorem(theorem_name);
    PolarSpace s = build_polar_space(parse_form_kind(a.kind), a.n, a.p);
    int k = a.k;
    if (k < 0) k = (thm == Theorem::T41) ? s.rank - 1 : -1;
    if (k < 0) throw CLI::ValidationError("-k", "this theorem needs the level -k");

    GeneratedInput in;
    if (!generated.empty()) {
        in = generate_input(s, generated, k, a.m, a.l);
    } else if (!input_file.empty()) {
        in.members = members_from_json(read_json(input_file));
        for (const auto& x : in.members)
            make_singular(s, x); // validate against the space
    } else {
        throw CLI::ValidationError("--input", "need --generated or --input");
    }

    VerifyOptions opt;
    opt.l = a.l;
    opt.m = a.m;
    if (a.budget) opt.iso_budget = a.budget;
    if (in.witness) {
        if (opt.l > 0 && opt.l != in.witness->l)
            throw CLI::ValidationError("-l", "generated input has l=" + std::to_string(in.witness->l));
        if (opt.m >= 0 && opt.m != in.witness->m)
            throw CLI::ValidationError("-m", "generated input has m=" + std::to_string(in.witness->m));
        opt.l = in.witness->l;
        opt.m = in.witness->m;
    }

    VerifyResult res = [&]() -> VerifyResult {
        switch (thm) {
            case Theorem::T41:
                return verify_theorem(s, thm, in.members, k, opt);
            case Theorem::T43:
            case Theorem::T44: {
                if (in.witness) return verify_theorem(s, thm, *in.witness, k, opt);
                auto fe = find_pj_embedding(s, in.members, opt.l, opt.m, opt.iso_budget);
                if (auto* rej = std::get_if<Rejection>(&fe)) return *rej;
                return verify_theorem(s, thm, std::get<EmbeddingMap>(fe), k, opt);
            }
            default:
                if (in.witness) return verify_theorem_with_witness(s, thm, *in.witness, k, opt);
                return verify_theorem(s, thm, in.members, k, opt);
        }
    }();

    Json header = header_json("verify", a.seed);
    header["theorem"] = theorem_name;
    header["kind"] = a.kind;
    header["n"] = a.n;
    header["p"] = a.p;
    header["k"] = k;

    if (auto* cert = std::get_if<Certificate>(&res)) {
        std::string out = a.output.empty() ? "certificate.json" : a.output;
        write_json(out, certificate_to_json(*cert, header));
        std::cout << "ACCEPT " << theorem_name << " dim(N)=" << cert->n.proj_dim()
                  << " l=" << cert->l << " m=" << cert->m << " certificate=" << out << "\n";
        return 0;
    }
    const Rejection& rej = std::get<Rejection>(res);
    if (!a.output.empty()) write_json(a.output, rejection_to_json(rej, header));
    std::cout << "REJECT " << theorem_name << " clause=" << rej.clause << " detail=" << rej.detail
              << "\n";
    return 1;
}

int cmd_search(const CommonArgs& a, const std::string& pattern_name, uint64_t findings_cap) {
    PolarSpace s = build_polar_space(parse_form_kind(a.kind), a.n, a.p);
    int k = a.k < 0 ? 0 : a.k;
    AbstractGraph pattern;
    if (pattern_name == "pj") {
        if (a.l <= 0 || a.m < 0) throw CLI::ValidationError("--pattern", "pj pattern needs -l and -m");
        pattern = build_pj(a.l, a.m);
    } else if (pattern_name == "hypercube") {
        if (a.m <= 0) throw CLI::ValidationError("--pattern", "hypercube pattern needs -m");
        pattern = build_hypercube(a.m);
    } else {
        throw CLI::ValidationError("--pattern", "unknown pattern: " + pattern_name);
    }

    auto universe = enumerate_singular(s, k);
    SearchConfig cfg;
    cfg.seed = a.seed;
    cfg.trials = a.budget ? a.budget : 500;
    cfg.stop_after_findings = findings_cap;
    SearchOutcome outcome = search_pattern(s, pattern, universe, cfg);

    Json header = header_json("search", a.seed);
    header["pattern"] = pattern.name;
    header["kind"] = a.kind;
    header["n"] = a.n;
    header["p"] = a.p;
    header["k"] = k;
    header["trials"] = outcome.trials_run;
    header["truncated"] = outcome.truncated;

    Json j;
    j["header"] = header;
    j["findings"] = Json::array();
    std::map<std::string, int> classes;
    for (const auto& f : outcome.findings) {
        Json e;
        e["members"] = Json::array();
        for (const auto& x : f.members) e["members"].push_back(subspace_to_json(x));
        std::string cls;
        if (pattern_name == "pj" && a.m == 0) {
            auto c = classify_pj_l0_image(s, f.members, k);
            if (auto* ok = std::get_if<PJ0Classification>(&c)) {
                cls = ok->tag == PJ0Classification::Case::BigStarFrame ? "big-star-frame"
                                                                       : "rank-three-frame";
                e["S"] = subspace_to_json(ok->s);
                if (ok->tag == PJ0Classification::Case::RankThreeFrame)
                    e["M"] = subspace_to_json(ok->m);
            } else {
                cls = "inconsistent:" + std::get<Rejection>(c).clause;
            }
        } else if (pattern_name == "hypercube") {
            bool li = locally_independent(s, f.members);
            if (li) {
                auto v = verify_theorem(s, Theorem::T41, f.members, k);
                cls = std::holds_alternative<Certificate>(v) ? "locally-independent-apartment"
                                                             : ("locally-independent-rejected:" +
                                                                std::get<Rejection>(v).clause);
            } else {
                cls = "not-locally-independent";
            }
        } else {
            RowSpace mt = f.members.front();
            for (const auto& x : f.members) mt = meet(mt, x);
            cls = (mt.rank() == k) ? "in-big-star" : "not-in-big-star";
        }
        e["class"] = cls;
        ++classes[cls];
        j["findings"].push_back(std::move(e));
    }
    std::cout << "search " << pattern.name << " in G_" << k << " of " << a.kind << " n=" << a.n
              << " p=" << a.p << ": " << outcome.findings.size() << " findings in "
              << outcome.trials_run << " trials\n";
    for (const auto& [cls, count] : classes) std::cout << "  " << cls << ": " << count << "\n";
    if (!a.output.empty()) {
        write_json(a.output, j);
        std::cout << "findings -> " << a.output << "\n";
    }
    if (outcome.truncated) {
        std::cout << "truncated: trial budget exhausted before the requested findings\n";
        return 3;
    }
    return 0;
}

int cmd_selftest() {
    int failures = 0;
    auto report = [&](const std::string& name, bool ok) {
        std::cout << "selftest " << name << ": " << (ok ? "ok" : "FAIL") << "\n";
        if (!ok) ++failures;
    };
    auto w5 = build_polar_space(FormKind::Symplectic, 3, 2);
    report("symplectic n=3 p=2 points == 63", w5.point_count() == 63);
    report("lines == 315", enumerate_singular(w5, 1).size() == 315);
    report("planes == 135", enumerate_singular(w5, 2).size() == 135);
    auto d3 = build_polar_space(FormKind::Hyperbolic, 3, 2);
    report("hyperbolic n=3 p=2 points == 35", d3.point_count() == 35);
    report("hyperbolic generators == 30", enumerate_singular(d3, 2).size() == 30);

    bool ap_ok = true;
    try {
        Apartment ap = build_apartment(w5, standard_frame(w5), 1);
        ap_ok = ap.members.size() == 12;
    } catch (...) {
        ap_ok = false;
    }
    report("apartment PJ(3,1) label map", ap_ok);

    bool g_ok = true;
    try {
        halfcube_split_and_g();
    } catch (...) {
        g_ok = false;
    }
    report("PJ(4,1) top-to-star automorphism", g_ok);

    std::vector<RowSpace> apartment2;
    Frame f = standard_frame(w5);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int l = 0; l < 2; ++l)
                apartment2.push_back(span_of_points(
                    w5, {f.points[0 + i], f.points[2 + j], f.points[4 + l]}));
    auto t41 = verify_theorem(w5, Theorem::T41, apartment2, 2);
    report("thm4.1 accepts the dual apartment", std::holds_alternative<Certificate>(t41));

    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite classical polar spaces, Grassmann graphs and apartment verification"};
    app.require_subcommand(1);

    CommonArgs a;
    std::string theorem_name, generated, input_file, fmt = "json", pattern_name;
    int grassmann_level = -1;
    uint64_t findings_cap = 0;

    auto add_common = [&](CLI::App* cmd, bool with_p = true) {
        cmd->add_option("--kind", a.kind, "space kind: symplectic|hyperbolic|parabolic|pj|hypercube");
        cmd->add_option("-n,--n,--rank", a.n, "rank n");
        if (with_p) cmd->add_option("-p,--p,--prime", a.p, "field characteristic (prime)");
        cmd->add_option("-k,--k,--level", a.k, "Grassmann level / PJ level k");
        cmd->add_option("-m,--m", a.m, "PJ index m (or hypercube dimension)");
        cmd->add_option("-l,--l", a.l, "frame size l");
        cmd->add_option("--seed", a.seed, "PRNG seed");
        cmd->add_option("--budget", a.budget, "search trials / iso node budget");
        cmd->add_option("--output", a.output, "output file path");
    };

    CLI::App* build = app.add_subcommand("build", "build a space or graph and export it");
    add_common(build);
    build->add_option("--grassmann", grassmann_level, "enumerate this Grassmann level");
    build->add_option("--export", fmt, "export format: dot|json")
        ->check(CLI::IsMember({"dot", "json"}));

    CLI::App* apartment = app.add_subcommand("apartment", "build and list an apartment");
    add_common(apartment);
    bool span_experiment = false;
    apartment->add_flag("--span-experiment", span_experiment,
                        "report the span closure of the apartment in the Grassmann space");

    CLI::App* verify = app.add_subcommand("verify", "run a characterization verifier");
    add_common(verify);
    verify->add_option("theorem", theorem_name,
                       "thm4.1|thm4.2|thm4.3|thm4.4|thm4.5|cor4.1|cor4.3")
        ->required();
    verify->add_option("--generated", generated, "generate the input: apartment|parabolic|lframe");
    verify->add_option("--input", input_file, "members JSON file");

    CLI::App* search = app.add_subcommand("search", "seeded search for pattern-isomorphic subsets");
    add_common(search);
    search->add_option("--pattern", pattern_name, "pj|hypercube")->required();
    search->add_option("--findings", findings_cap, "stop after this many findings");

    CLI::App* selftest = app.add_subcommand("selftest", "quick internal checks");
    (void)selftest;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (build->parsed()) return cmd_build(a, grassmann_level, fmt);
        if (apartment->parsed()) return cmd_apartment(a, span_experiment);
        if (verify->parsed()) return cmd_verify(a, theorem_name, generated, input_file);
        if (search->parsed()) return cmd_search(a, pattern_name, findings_cap);
        if (selftest->parsed()) return cmd_selftest();
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
