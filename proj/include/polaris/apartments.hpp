#pragma once

#include "polaris/abstract_graphs.hpp"
#include "polaris/grassmann.hpp"

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace polaris {

// ---------------------------------------------------------------------------
// Apartments

/// The apartment A_k of a frame: all k-dimensional singular subspaces
/// spanned by admissible subsets of the frame, labeled by PJ(l,k) vertices
/// (+a <-> frame slot 2(a-1), -a <-> slot 2(a-1)+1). Construction verifies
/// that the label map is a graph isomorphism.
struct Apartment {
    Frame frame;
    int level = 0;
    AbstractGraph pj;              // PJ(l, level), ambient-consistent sum clause
    std::vector<RowSpace> members; // parallel to pj.labels

    int index_of(const RowSpace& x) const {
        for (size_t i = 0; i < members.size(); ++i)
            if (members[i] == x) return static_cast<int>(i);
        return -1;
    }
};

inline RowSpace span_of_labels(const PolarSpace& s, const Frame& f, const SignedSet& v) {
    std::vector<int> pts;
    for (int lab : v.elems) pts.push_back(f.points[f.slot_of_label(lab)]);
    return span_of_points(s, pts);
}

inline Apartment build_apartment(const PolarSpace& s, const Frame& f, int k) {
    std::string why;
    if (!validate_frame(s, f, &why))
        throw std::invalid_argument("build_apartment: " + why);
    const int l = f.pair_count();
    if (k < 0 || k > l - 1)
        throw std::invalid_argument("build_apartment: level out of range");
    Apartment ap;
    ap.frame = f;
    ap.level = k;
    // adjacency among members of G_k keeps the singular-span clause up to
    // the ambient rank, not the frame size
    ap.pj = build_pj(l, k, k <= s.rank - 2);
    std::set<RowSpace> seen;
    for (const auto& v : ap.pj.labels) {
        RowSpace m = span_of_labels(s, f, v);
        if (m.rank() != k + 1)
            throw std::logic_error("frame points are not independent");
        if (!seen.insert(m).second)
            throw std::logic_error("frame spans collide");
        ap.members.push_back(std::move(m));
    }
    // the label map must be an isomorphism onto Gamma(members)
    for (size_t a = 0; a < ap.members.size(); ++a)
        for (size_t b = a + 1; b < ap.members.size(); ++b)
            if (adjacent(s, ap.members[a], ap.members[b]) != (ap.pj.adj[a][b] != 0))
                throw std::logic_error("apartment label map is not an isomorphism");
    return ap;
}

/// An apartment of the parabolic subspace [N>_k: the lift of a (full-frame)
/// apartment of the quotient polar space at level m = k - dim N - 1.
struct ParabolicApartment {
    RowSpace n;
    QuotientSpace q;
    Apartment quotient_apartment;  // lives in q.space at level m
    std::vector<RowSpace> members; // lifted to the ambient space
    int level = 0;                 // k
};

inline ParabolicApartment parabolic_apartment(const PolarSpace& s, const RowSpace& N, int k,
                                              std::optional<Frame> quotient_frame = std::nullopt) {
    ParabolicApartment pa;
    pa.n = N;
    pa.level = k;
    pa.q = quotient_space(s, N);
    int m = k - N.rank();
    Frame f = quotient_frame ? *quotient_frame
                             : (pa.q.space.kind == FormKind::Derived ? greedy_frame(pa.q.space)
                                                                     : standard_frame(pa.q.space));
    pa.quotient_apartment = build_apartment(pa.q.space, f, m);
    for (const auto& z : pa.quotient_apartment.members)
        pa.members.push_back(pa.q.lift(z));
    return pa;
}

// ---------------------------------------------------------------------------
// Embeddings

/// A labeled injection of PJ(l,m) into G_k; the subject of the
/// characterization theorems.
struct EmbeddingMap {
    int l = 0, m = 0;
    AbstractGraph source;        // PJ(l,m) with its standard adjacency
    std::vector<RowSpace> image; // parallel to source.labels
};

inline bool is_embedding(const PolarSpace& s, const EmbeddingMap& f) {
    const int sz = f.source.size();
    if (static_cast<int>(f.image.size()) != sz) return false;
    for (int a = 0; a < sz; ++a)
        for (int b = a + 1; b < sz; ++b) {
            if (f.image[a] == f.image[b]) return false;
            if ((f.source.adj[a][b] != 0) != adjacent(s, f.image[a], f.image[b])) return false;
        }
    return true;
}

/// The label map of an apartment as an embedding. Requires a level where
/// the ambient-consistent adjacency coincides with the standard PJ(l,m).
inline EmbeddingMap apartment_embedding(const Apartment& ap) {
    const int l = ap.frame.pair_count();
    AbstractGraph def = build_pj(l, ap.level);
    if (def.adj != ap.pj.adj)
        throw std::invalid_argument("apartment graph deviates from PJ at this level");
    return EmbeddingMap{l, ap.level, std::move(def), ap.members};
}

inline EmbeddingMap parabolic_embedding(const ParabolicApartment& pa) {
    EmbeddingMap f = apartment_embedding(pa.quotient_apartment);
    f.image = pa.members;
    return f;
}

// ---------------------------------------------------------------------------
// Rejections

/// Structured verifier verdict: the named clause that failed plus detail.
struct Rejection {
    std::string clause;
    std::string detail;
};

namespace detail {

inline Rejection reject(std::string clause, std::string detail) {
    return Rejection{std::move(clause), std::move(detail)};
}

inline std::string label_str(const SignedSet& v) {
    std::ostringstream os;
    os << "{";
    for (size_t i = 0; i < v.elems.size(); ++i)
        os << (i ? "," : "") << v.elems[i];
    os << "}";
    return os.str();
}

} // namespace detail

// ---------------------------------------------------------------------------
// Clique image report (conditions (T1), (T2) and friends)

struct CliqueImageReport {
    bool tops_injective = true;
    bool tops_independent = true;
    bool tops_in_tops = true;        // every top image inside a top
    bool t2 = true;                  // adjacent tops -> distinct tops
    int tops_in_stars = 0;           // count of top images inside a star
    bool stars_independent = true;
    bool stars_in_stars = true;
    int stars_in_tops = 0;           // count of star images inside a top
    bool big_stars_unique = true;    // big star image in exactly one big star
    std::optional<RowSpace> image_big_star; // S with image(f) subset of [S>,
                                            // when the whole image sits in one
    std::vector<std::string> notes;
};

/// Per-clique scan of an adjacency-preserving map given by images of all
/// PJ(l,i) vertices. `target_level` is the projective dimension of the
/// images.
/// Independence with the projective fast path where it is defined (inside
/// one top or one star) and the span-closure definition otherwise. The two
/// routes are proven to agree by the independence tests.
inline bool independent_checked(const PolarSpace& s, const std::vector<RowSpace>& xs) {
    auto fast = independent_projective(s, xs);
    return fast ? *fast : independent(s, xs);
}

inline CliqueImageReport check_clique_images(const PolarSpace& s, const AbstractGraph& domain,
                                             const std::vector<RowSpace>& image,
                                             int target_level) {
    CliqueImageReport rep;
    const int j = target_level;
    PJCliques cl = pj_cliques(domain);

    auto in_top = [&](const RowSpace& join_all, size_t count) {
        return count >= 2 && join_all.rank() == j + 2 && is_singular_subspace(s, join_all);
    };
    auto in_star = [&](const RowSpace& meet_all, const RowSpace& join_all) {
        return meet_all.rank() == j && is_singular_subspace(s, join_all);
    };

    std::vector<std::optional<RowSpace>> top_join(cl.top_index.size());
    for (size_t t = 0; t < cl.top_index.size(); ++t) {
        const auto& mem = cl.top_members[t];
        std::set<RowSpace> distinct;
        RowSpace jn = image[mem[0]], mt = image[mem[0]];
        std::vector<RowSpace> imgs;
        for (int v : mem) {
            imgs.push_back(image[v]);
            distinct.insert(image[v]);
            jn = join(jn, image[v]);
            mt = meet(mt, image[v]);
        }
        if (distinct.size() != mem.size()) {
            rep.tops_injective = false;
            rep.notes.push_back("top " + detail::label_str(cl.top_index[t]) + ": repeated image");
            continue;
        }
        if (!independent_checked(s, imgs)) {
            rep.tops_independent = false;
            rep.notes.push_back("top " + detail::label_str(cl.top_index[t]) + ": dependent image");
        }
        if (in_top(jn, mem.size())) {
            top_join[t] = jn;
        } else {
            rep.tops_in_tops = false;
            if (in_star(mt, jn)) ++rep.tops_in_stars;
            rep.notes.push_back("top " + detail::label_str(cl.top_index[t]) + ": image not in a top");
        }
    }

    // (T2): adjacent tops of the domain land in distinct tops
    AbstractGraph upper = build_pj(domain.n, domain.k + 1);
    for (size_t t1 = 0; t1 < cl.top_index.size(); ++t1)
        for (size_t t2i = t1 + 1; t2i < cl.top_index.size(); ++t2i) {
            if (!top_join[t1] || !top_join[t2i]) continue;
            int u1 = upper.vertex_id(cl.top_index[t1]);
            int u2 = upper.vertex_id(cl.top_index[t2i]);
            if (!upper.adj[u1][u2]) continue;
            if (*top_join[t1] == *top_join[t2i]) {
                rep.t2 = false;
                rep.notes.push_back("adjacent tops " + detail::label_str(cl.top_index[t1]) + "," +
                                    detail::label_str(cl.top_index[t2i]) + " share a top");
            }
        }

    for (size_t st = 0; st < cl.star_index.size(); ++st) {
        const auto& mem = cl.star_members[st];
        std::vector<RowSpace> imgs;
        RowSpace jn = image[mem[0]], mt = image[mem[0]];
        for (int v : mem) {
            imgs.push_back(image[v]);
            jn = join(jn, image[v]);
            mt = meet(mt, image[v]);
        }
        if (!independent_checked(s, imgs)) rep.stars_independent = false;
        if (!in_star(mt, jn)) {
            rep.stars_in_stars = false;
            if (in_top(jn, mem.size())) ++rep.stars_in_tops;
            rep.notes.push_back("star (" + detail::label_str(cl.star_index[st].first) + "," +
                                detail::label_str(cl.star_index[st].second) + ") not in a star");
        }
    }

    for (size_t b = 0; b < cl.big_star_index.size(); ++b) {
        const auto& mem = cl.big_star_members[b];
        RowSpace mt = image[mem[0]];
        for (int v : mem) mt = meet(mt, image[v]);
        if (mt.rank() != j) {
            rep.big_stars_unique = false;
            rep.notes.push_back("big star " + detail::label_str(cl.big_star_index[b]) +
                                ": common part has rank " + std::to_string(mt.rank()));
        }
    }

    RowSpace whole = image[0];
    for (const auto& x : image) whole = meet(whole, x);
    if (whole.rank() == j) rep.image_big_star = whole;
    return rep;
}

// ---------------------------------------------------------------------------
// Special-map descent (the constructive core)

/// A level map of the descent: images of all PJ(l, level) vertices inside
/// G_{target_level} of the polar space.
struct LevelMap {
    int l = 0;
    int level = 0;        // i
    int target_level = 0; // j
    AbstractGraph domain; // PJ(l, level)
    std::vector<RowSpace> image;
};

inline LevelMap level_map_of(const EmbeddingMap& f, int k) {
    return LevelMap{f.l, f.m, k, f.source, f.image};
}

/// One step of the induced-map descent: f_{i-1}(S) is the intersection of
/// the big-star image of S. Validates (T1) and (T2) on the input and the
/// dimension of every induced image.
inline std::variant<LevelMap, Rejection> descend_special_map(const PolarSpace& s,
                                                             const LevelMap& f) {
    if (f.level < 1)
        throw std::invalid_argument("descend: level must be at least 1");
    CliqueImageReport rep = check_clique_images(s, f.domain, f.image, f.target_level);
    if (!rep.tops_injective || !rep.tops_independent || !rep.tops_in_tops)
        return detail::reject("T1", rep.notes.empty() ? "top image violates (T1)" : rep.notes.front());
    if (!rep.t2)
        return detail::reject("T2", rep.notes.empty() ? "adjacent tops collide" : rep.notes.back());

    LevelMap down;
    down.l = f.l;
    down.level = f.level - 1;
    down.target_level = f.target_level - 1;
    down.domain = build_pj(f.l, f.level - 1);
    down.image.resize(down.domain.size());
    for (int sv = 0; sv < down.domain.size(); ++sv) {
        const SignedSet& sub = down.domain.labels[sv];
        RowSpace mt;
        bool first = true;
        for (int xv = 0; xv < f.domain.size(); ++xv) {
            if (!ss_subset(sub, f.domain.labels[xv])) continue;
            mt = first ? f.image[xv] : meet(mt, f.image[xv]);
            first = false;
        }
        if (first)
            return detail::reject("descent-dimension", "empty big star at " + detail::label_str(sub));
        if (mt.rank() != f.target_level)
            return detail::reject("descent-dimension",
                                  "induced image at " + detail::label_str(sub) + " has rank " +
                                      std::to_string(mt.rank()) + ", expected " +
                                      std::to_string(f.target_level));
        down.image[sv] = std::move(mt);
    }
    // incidence transport: S inside X forces the images to be incident
    for (int sv = 0; sv < down.domain.size(); ++sv)
        for (int xv = 0; xv < f.domain.size(); ++xv)
            if (ss_subset(down.domain.labels[sv], f.domain.labels[xv]) &&
                !contains(f.image[xv], down.image[sv]))
                return detail::reject("descent-incidence",
                                      "transport failed at " + detail::label_str(down.domain.labels[sv]));
    return down;
}

// ---------------------------------------------------------------------------
// Certificates

/// The computational content of the characterization theorems: the singular
/// subspace N, the 2l subspaces Q_i that form an l-frame of the quotient
/// [N>_{k-m}, and the table showing how every image element is spanned.
struct Certificate {
    int l = 0, m = 0, k = 0;
    RowSpace n;                          // rank k-m (projective dim k-m-1); may be empty
    std::vector<RowSpace> q;             // 2l entries; slot 2(a-1) <-> +a, 2(a-1)+1 <-> -a
    std::vector<SignedSet> vertices;     // source vertex labels
    std::vector<std::vector<int>> table; // per vertex: the Q slots spanning its image
    std::vector<RowSpace> regenerated;   // spans, parallel to vertices (== the image)
};

inline int slot_of_label(int lab) {
    int a = lab > 0 ? lab : -lab;
    return 2 * (a - 1) + (lab > 0 ? 0 : 1);
}

using ExtractResult = std::variant<Certificate, Rejection>;

/// The Q_i / N extraction pipeline: descend to level 0, intersect one
/// transversal of the sigma-pairs, verify the frame structure in the
/// quotient and the spanning table.
inline ExtractResult extract_certificate(const PolarSpace& s, const EmbeddingMap& f, int k) {
    if (f.m < 1) throw std::invalid_argument("extract_certificate: m >= 1 required");
    if (static_cast<int>(f.image.size()) != f.source.size())
        throw std::invalid_argument("extract_certificate: image size mismatch");
    for (const auto& x : f.image) {
        if (x.rank() != k + 1)
            return detail::reject("member-dimension", "image member of wrong rank");
        if (!is_singular_subspace(s, x))
            return detail::reject("member-dimension", "image member not singular");
    }
    if (!is_embedding(s, f))
        return detail::reject("embedding", "adjacency is not preserved and reflected");

    LevelMap cur = level_map_of(f, k);
    for (int i = f.m; i >= 1; --i) {
        auto step = descend_special_map(s, cur);
        if (auto* rej = std::get_if<Rejection>(&step)) return *rej;
        cur = std::get<LevelMap>(std::move(step));
    }

    // cur.level == 0: canonical PJ(l,0) order is {+1},{-1},{+2},... which
    // matches the frame slot convention
    Certificate cert;
    cert.l = f.l;
    cert.m = f.m;
    cert.k = k;
    cert.q = cur.image;

    RowSpace N;
    bool first = true;
    for (int slot = 0; slot < 2 * f.l; slot += 2) {
        N = first ? cert.q[slot] : meet(N, cert.q[slot]);
        first = false;
    }
    if (N.rank() != k - f.m)
        return detail::reject("N-dimension", "meet over the transversal has rank " +
                                                 std::to_string(N.rank()) + ", expected " +
                                                 std::to_string(k - f.m));
    for (int slot = 0; slot < 2 * f.l; ++slot)
        if (!contains(cert.q[slot], N))
            return detail::reject("N-containment", "Q slot " + std::to_string(slot) +
                                                       " does not contain N");
    cert.n = N;

    // frame structure of the Q's in the quotient polar space
    QuotientSpace q = quotient_space(s, N);
    Frame qframe;
    for (int slot = 0; slot < 2 * f.l; ++slot) {
        RowSpace z = q.project(cert.q[slot]);
        if (z.rank() != 1)
            return detail::reject("frame-structure", "Q slot " + std::to_string(slot) +
                                                         " does not project to a point");
        int pid = q.space.point_id(z.rows[0]);
        if (pid < 0)
            return detail::reject("frame-structure", "projected Q is not a point of the quotient");
        qframe.points.push_back(pid);
    }
    std::string why;
    if (!validate_frame(q.space, qframe, &why))
        return detail::reject("frame-structure", why);

    // spanning table (every vertex is the span of its Q's)
    cert.vertices = f.source.labels;
    for (int v = 0; v < f.source.size(); ++v) {
        std::vector<int> slots;
        RowSpace span;
        bool fst = true;
        for (int lab : f.source.labels[v].elems) {
            int slot = slot_of_label(lab);
            slots.push_back(slot);
            span = fst ? cert.q[slot] : join(span, cert.q[slot]);
            fst = false;
        }
        if (!(span == f.image[v]))
            return detail::reject("spanning-table", "vertex " +
                                                        detail::label_str(f.source.labels[v]) +
                                                        " is not the span of its Q's");
        cert.table.push_back(std::move(slots));
        cert.regenerated.push_back(std::move(span));
    }
    return cert;
}

// ---------------------------------------------------------------------------
// PJ(l,0) image classifier

/// Outcome of the two-case classification of cocktail-party images:
/// an l-frame of a big star [S>_k, or (l = 3) a frame of the rank-3
/// polar space [N,M]_k.
struct PJ0Classification {
    enum class Case { BigStarFrame, RankThreeFrame };
    Case tag = Case::BigStarFrame;
    RowSpace s; // case 1: the common S; case 2: N = X meet Y (may be empty)
    RowSpace m; // case 2: M = <X,Y>
    int l = 0;
};

using PJ0Result = std::variant<PJ0Classification, Rejection>;

inline PJ0Result classify_pj_l0_image(const PolarSpace& s, const std::vector<RowSpace>& xs,
                                      int k) {
    if (xs.size() % 2 || xs.size() < 6)
        return detail::reject("graph-iso", "PJ(l,0) images have 2l >= 6 elements");
    const int l = static_cast<int>(xs.size()) / 2;
    for (const auto& x : xs) {
        if (x.rank() != k + 1) return detail::reject("member-dimension", "wrong rank");
        if (!is_singular_subspace(s, x)) return detail::reject("member-dimension", "not singular");
    }
    // cocktail-party structure: exactly one non-neighbor each, involutive
    std::vector<int> opp(xs.size(), -1);
    for (size_t a = 0; a < xs.size(); ++a) {
        for (size_t b = 0; b < xs.size(); ++b) {
            if (a == b) continue;
            if (xs[a] == xs[b]) return detail::reject("graph-iso", "repeated member");
            if (!adjacent(s, xs[a], xs[b])) {
                if (opp[a] != -1) return detail::reject("graph-iso", "two non-neighbors");
                opp[a] = static_cast<int>(b);
            }
        }
        if (opp[a] < 0) return detail::reject("graph-iso", "no non-neighbor");
    }
    for (size_t a = 0; a < xs.size(); ++a)
        if (opp[opp[a]] != static_cast<int>(a))
            return detail::reject("graph-iso", "non-neighbor relation is not an involution");

    const RowSpace& X = xs[0];
    const RowSpace& Y = xs[opp[0]];
    RowSpace inter = meet(X, Y);

    if (inter.rank() == k && !is_singular_subspace(s, join(X, Y))) {
        // case (1): an l-frame of the big star [S>_k
        if (l > s.rank - k)
            return detail::reject("inconsistent-input", "l exceeds the big-star rank");
        for (const auto& z : xs)
            if (!contains(z, inter))
                return detail::reject("inconsistent-input", "member misses the common S");
        QuotientSpace q = quotient_space(s, inter);
        Frame fr;
        std::vector<bool> used(xs.size(), false);
        for (size_t a = 0; a < xs.size(); ++a) {
            if (used[a]) continue;
            used[a] = used[opp[a]] = true;
            for (size_t idx : {a, static_cast<size_t>(opp[a])}) {
                RowSpace z = q.project(xs[idx]);
                if (z.rank() != 1)
                    return detail::reject("inconsistent-input", "member does not project to a point");
                fr.points.push_back(q.space.point_id(z.rows[0]));
            }
        }
        std::string why;
        if (!validate_frame(q.space, fr, &why))
            return detail::reject("inconsistent-input", "projected set is not an l-frame: " + why);
        PJ0Classification out;
        out.tag = PJ0Classification::Case::BigStarFrame;
        out.s = inter;
        out.l = l;
        return out;
    }
    if (inter.rank() == k - 1) {
        // case (2): l = 3 and xs is a frame of [N,M]_k
        if (l != 3)
            return detail::reject("inconsistent-input", "intersection drops by 2 but l != 3");
        RowSpace M = join(X, Y);
        if (M.rank() != k + 3 || !is_singular_subspace(s, M))
            return detail::reject("inconsistent-input", "<X,Y> is not a (k+2)-dimensional singular subspace");
        for (const auto& z : xs)
            if (!contains(z, inter) || !contains(M, z))
                return detail::reject("inconsistent-input", "member outside [N,M]");
        PJ0Classification out;
        out.tag = PJ0Classification::Case::RankThreeFrame;
        out.s = inter;
        out.m = M;
        out.l = 3;
        return out;
    }
    return detail::reject("inconsistent-input",
                          "opposite members intersect in rank " + std::to_string(inter.rank()));
}

// ---------------------------------------------------------------------------
// Theorem verifiers

enum class Theorem { T41, T42, T43, T44, T45, C41, C43 };

inline const char* theorem_name(Theorem t) {
    switch (t) {
        case Theorem::T41: return "thm4.1";
        case Theorem::T42: return "thm4.2";
        case Theorem::T43: return "thm4.3";
        case Theorem::T44: return "thm4.4";
        case Theorem::T45: return "thm4.5";
        case Theorem::C41: return "cor4.1";
        case Theorem::C43: return "cor4.3";
    }
    return "?";
}

struct VerifyOptions {
    int l = 0;
    int m = 0;
    uint64_t iso_budget = 50'000'000;
};

using VerifyResult = std::variant<Certificate, Rejection>;

namespace detail {

inline AbstractGraph restriction_graph(const PolarSpace& s, const std::vector<RowSpace>& xs) {
    AbstractGraph g;
    g.name = "restriction";
    for (size_t i = 0; i < xs.size(); ++i)
        g.labels.push_back(SignedSet::of({static_cast<int>(i) + 1}));
    const int m = static_cast<int>(xs.size());
    g.adj.assign(m, std::vector<uint8_t>(m, 0));
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b)
            if (!(xs[a] == xs[b]) && adjacent(s, xs[a], xs[b]))
                g.adj[a][b] = g.adj[b][a] = 1;
    return g;
}

// Find an isomorphism PJ(l,m) -> Gamma(xs) and package it as an embedding.
inline std::variant<EmbeddingMap, Rejection> embed_from_witness(const PolarSpace& s,
                                                                const std::vector<RowSpace>& xs,
                                                                int l, int m, uint64_t budget) {
    AbstractGraph source = build_pj(l, m);
    if (source.size() != static_cast<int>(xs.size()))
        return reject("graph-iso", "vertex count " + std::to_string(xs.size()) + " differs from |PJ(" +
                                       std::to_string(l) + "," + std::to_string(m) + ")| = " +
                                       std::to_string(source.size()));
    for (size_t a = 0; a < xs.size(); ++a)
        for (size_t b = a + 1; b < xs.size(); ++b)
            if (xs[a] == xs[b]) return reject("graph-iso", "repeated member");
    AbstractGraph target = restriction_graph(s, xs);
    IsoOptions opts;
    opts.node_budget = budget;
    IsoResult iso = find_isomorphism(source, target, opts);
    if (iso.status == IsoStatus::BudgetExceeded)
        return reject("budget", "isomorphism search exceeded the node budget");
    if (iso.status == IsoStatus::None)
        return reject("graph-iso", "Gamma(X) is not isomorphic to PJ(" + std::to_string(l) + "," +
                                       std::to_string(m) + ")");
    EmbeddingMap f;
    f.l = l;
    f.m = m;
    f.source = std::move(source);
    f.image.resize(xs.size());
    for (int v = 0; v < f.source.size(); ++v) f.image[v] = xs[iso.mapping[v]];
    return f;
}

// Whole-image big-star containment: S with image subset of [S>_k, if any.
inline std::optional<RowSpace> image_big_star(const std::vector<RowSpace>& xs, int k) {
    RowSpace mt = xs.front();
    for (const auto& x : xs) mt = meet(mt, x);
    if (mt.rank() == k) return mt;
    return std::nullopt;
}

// Regenerated-apartment equality: the lifted full apartment over the
// certificate frame must equal the verified set.
inline std::optional<Rejection> check_apartment_equality(const PolarSpace& s,
                                                         const Certificate& cert,
                                                         const std::vector<RowSpace>& xs) {
    QuotientSpace q = quotient_space(s, cert.n);
    if (q.space.rank != cert.l)
        return reject("apartment-equality", "quotient rank differs from l");
    try {
        Frame fr;
        for (const auto& sub : cert.q) {
            RowSpace z = q.project(sub);
            fr.points.push_back(q.space.point_id(z.rows[0]));
        }
        Apartment ap = build_apartment(q.space, fr, cert.m);
        std::set<RowSpace> regen;
        for (const auto& z : ap.members) regen.insert(q.lift(z));
        std::set<RowSpace> given(xs.begin(), xs.end());
        if (regen != given)
            return reject("apartment-equality", "the regenerated apartment differs from the input set");
    } catch (const std::exception& e) {
        return reject("apartment-equality", e.what());
    }
    return std::nullopt;
}

inline std::optional<Rejection> check_max_cliques_independent(const PolarSpace& s,
                                                              const EmbeddingMap& f) {
    PJCliques cl = pj_cliques(f.source);
    auto scan = [&](const std::vector<std::vector<int>>& cliques,
                    const char* kind) -> std::optional<Rejection> {
        for (const auto& mem : cliques) {
            std::vector<RowSpace> imgs;
            for (int v : mem) imgs.push_back(f.image[v]);
            if (!independent_checked(s, imgs))
                return reject("clique-independence", std::string(kind) + " image is dependent");
        }
        return std::nullopt;
    };
    if (auto r = scan(cl.top_members, "top")) return r;
    if (auto r = scan(cl.star_members, "star")) return r;
    return std::nullopt;
}

// Theorem 4.1 core: locally independent hypercube image at the dual level.
inline VerifyResult verify_hypercube_apartment(const PolarSpace& s,
                                               const std::vector<RowSpace>& xs,
                                               uint64_t iso_budget) {
    if (xs.empty()) return reject("graph-iso", "empty input");
    for (const auto& x : xs)
        if (x.rank() != s.rank)
            return reject("member-dimension", "members must be maximal singular subspaces");
    for (size_t a = 0; a < xs.size(); ++a)
        for (size_t b = a + 1; b < xs.size(); ++b)
            if (xs[a] == xs[b]) return reject("graph-iso", "repeated member");

    // local independence first: its failure is the characteristic reject
    if (!locally_independent(s, xs))
        return reject("local-independence", "a member's neighbor hyperplanes are dependent");

    int m = 0;
    while ((size_t(1) << m) < xs.size()) ++m;
    if ((size_t(1) << m) != xs.size() || m < 1)
        return reject("graph-iso", "vertex count is not a power of two (>= 2)");
    IsoOptions opts;
    opts.node_budget = iso_budget;
    IsoResult iso = find_isomorphism(restriction_graph(s, xs), build_hypercube(m), opts);
    if (iso.status == IsoStatus::BudgetExceeded) return reject("budget", "iso search budget exceeded");
    if (iso.status != IsoStatus::Found)
        return reject("graph-iso", "Gamma(X) is not a hypercube");

    RowSpace N = xs.front();
    for (const auto& x : xs) N = meet(N, x);
    if (N.rank() != s.rank - m)
        return reject("N-dimension", "common intersection has rank " + std::to_string(N.rank()) +
                                         ", expected " + std::to_string(s.rank - m));

    QuotientSpace q = quotient_space(s, N);
    std::vector<RowSpace> proj;
    for (const auto& x : xs) proj.push_back(q.project(x));

    // recover the frame: corner points from pairwise meets with neighbors
    std::set<RowSpace> corner_set;
    for (size_t v = 0; v < proj.size(); ++v) {
        std::vector<RowSpace> hyps;
        for (size_t u = 0; u < proj.size(); ++u) {
            if (u == v) continue;
            RowSpace h = meet(proj[v], proj[u]);
            if (h.rank() == m - 1) hyps.push_back(h);
        }
        if (hyps.size() != static_cast<size_t>(m))
            return reject("local-structure", "member has " + std::to_string(hyps.size()) +
                                                 " neighbors, expected " + std::to_string(m));
        for (size_t skip = 0; skip < hyps.size(); ++skip) {
            RowSpace corner = proj[v];
            for (size_t h = 0; h < hyps.size(); ++h)
                if (h != skip) corner = meet(corner, hyps[h]);
            if (corner.rank() != 1)
                return reject("local-structure", "corner recovery failed");
            corner_set.insert(corner);
        }
    }
    if (corner_set.size() != static_cast<size_t>(2 * m))
        return reject("frame-structure", "expected " + std::to_string(2 * m) + " corner points, got " +
                                             std::to_string(corner_set.size()));
    // pair the corners into a frame of the quotient
    std::vector<int> ids;
    for (const auto& c : corner_set) {
        int pid = q.space.point_id(c.rows[0]);
        if (pid < 0) return reject("frame-structure", "corner is not a quotient point");
        ids.push_back(pid);
    }
    std::vector<int> sigma(ids.size(), -1);
    for (size_t a = 0; a < ids.size(); ++a)
        for (size_t b = 0; b < ids.size(); ++b) {
            if (a == b) continue;
            if (!q.space.collinear(ids[a], ids[b])) {
                if (sigma[a] != -1) return reject("frame-structure", "corner has two opposites");
                sigma[a] = static_cast<int>(b);
            }
        }
    for (size_t a = 0; a < ids.size(); ++a)
        if (sigma[a] < 0 || sigma[sigma[a]] != static_cast<int>(a))
            return reject("frame-structure", "corners do not pair up");
    Frame fr;
    try {
        fr = make_frame(q.space, ids, sigma);
    } catch (const std::invalid_argument& e) {
        return reject("frame-structure", e.what());
    }

    Apartment ap = build_apartment(q.space, fr, m - 1);
    std::set<RowSpace> regen(ap.members.begin(), ap.members.end());
    std::set<RowSpace> given(proj.begin(), proj.end());
    if (regen != given)
        return reject("apartment-equality", "the frame apartment differs from the projected set");

    Certificate cert;
    cert.l = m;
    cert.m = m - 1;
    cert.k = s.rank - 1;
    cert.n = N;
    for (int slot = 0; slot < 2 * m; ++slot) {
        RowSpace pt = rref_canonical({q.space.points[fr.points[slot]]}, q.space.p, q.space.ambient);
        cert.q.push_back(q.lift(pt));
    }
    // spanning table against the apartment labels
    for (int v = 0; v < ap.pj.size(); ++v) {
        std::vector<int> slots;
        RowSpace span;
        bool fst = true;
        for (int lab : ap.pj.labels[v].elems) {
            int slot = slot_of_label(lab);
            slots.push_back(slot);
            span = fst ? cert.q[slot] : join(span, cert.q[slot]);
            fst = false;
        }
        RowSpace lifted = q.lift(ap.members[v]);
        if (!(span == lifted))
            return reject("spanning-table", "hypercube member is not the span of its Q's");
        cert.vertices.push_back(ap.pj.labels[v]);
        cert.table.push_back(std::move(slots));
        cert.regenerated.push_back(std::move(lifted));
    }
    return cert;
}

// Theorems 4.2/4.5 and the corollaries share this routing: build a witness
// embedding, check independence, get tops into tops (possibly through the
// PJ(4,1) automorphism), extract, and optionally demand full-apartment
// equality.
inline VerifyResult verify_pj_image(const PolarSpace& s, Theorem which,
                                    const std::vector<RowSpace>& xs, int k,
                                    const VerifyOptions& opt,
                                    std::optional<EmbeddingMap> witness = std::nullopt) {
    const int n = s.rank;
    int l = opt.l, m = opt.m;
    if (which == Theorem::C41) {
        l = n - k + 1;
        m = 1;
        if (n - k < 3) return reject("hypothesis", "cor4.1 needs n-k >= 3");
    }
    if (which == Theorem::C43) {
        m = 1;
        if (l < 4) return reject("hypothesis", "cor4.3 needs l >= 4");
        if (n - k + 1 < l) return reject("hypothesis", "cor4.3 needs n-k+1 >= l");
    }
    const bool want_apartment = (which == Theorem::T42 || which == Theorem::C41);
    // hypothesis gates: (4.1) for the apartment theorems, (4.2) otherwise
    if (want_apartment) {
        if (!(0 < m && m <= k && l <= n && l - m == n - k && n - k > 1))
            return reject("hypothesis-4.1", "parameters violate 0<m<=k, l<=n, l-m=n-k>1");
    } else {
        if (!(0 < m && m <= k && l <= n && 3 <= l - m && l - m <= n - k))
            return reject("hypothesis-4.2", "parameters violate 0<m<=k, l<=n, 3<=l-m<=n-k");
    }
    auto obtain_embedding = [&]() -> std::variant<EmbeddingMap, Rejection> {
        if (witness) {
            if (witness->l != l || witness->m != m)
                return reject("hypothesis", "witness parameters disagree with the options");
            if (!is_embedding(s, *witness))
                return reject("embedding", "supplied witness is not an embedding");
            return *witness;
        }
        return embed_from_witness(s, xs, l, m, opt.iso_budget);
    };

    if (l - m < 3 && which == Theorem::T42) {
        // l-m == 2: tops of PJ(l,l-2) induce a hypercube image at the dual
        // level; delegate to the locally-independent characterization
        auto fe = obtain_embedding();
        if (auto* rej = std::get_if<Rejection>(&fe)) return *rej;
        EmbeddingMap f = std::get<EmbeddingMap>(std::move(fe));
        if (auto r = check_max_cliques_independent(s, f)) return *r;
        PJCliques cl = pj_cliques(f.source);
        std::set<RowSpace> duals;
        for (const auto& mem : cl.top_members) {
            RowSpace jn = f.image[mem[0]];
            std::vector<RowSpace> imgs;
            for (int v : mem) {
                imgs.push_back(f.image[v]);
                jn = join(jn, f.image[v]);
            }
            if (jn.rank() != k + 2 || !is_singular_subspace(s, jn))
                return reject("tops-in-tops", "a top image is not contained in a top");
            if (!independent_checked(s, imgs))
                return reject("clique-independence", "top image is dependent");
            duals.insert(jn);
        }
        if (duals.size() != cl.top_members.size())
            return reject("T2", "distinct tops collide at the dual level");
        std::vector<RowSpace> dual_xs(duals.begin(), duals.end());
        VerifyResult up = verify_hypercube_apartment(s, dual_xs, opt.iso_budget);
        if (auto* rej = std::get_if<Rejection>(&up)) return *rej;
        Certificate upc = std::get<Certificate>(std::move(up));
        // rebuild the level-k certificate from the dual one; the dual frame
        // carries its own slot order, so spanning slots are recovered by
        // containment
        Certificate cert;
        cert.l = l;
        cert.m = m;
        cert.k = k;
        cert.n = upc.n;
        cert.q = upc.q;
        for (int v = 0; v < f.source.size(); ++v) {
            std::vector<int> slots;
            RowSpace span;
            bool fst = true;
            for (int slot = 0; slot < 2 * l; ++slot) {
                if (!contains(f.image[v], cert.q[slot])) continue;
                slots.push_back(slot);
                span = fst ? cert.q[slot] : join(span, cert.q[slot]);
                fst = false;
            }
            if (slots.size() != static_cast<size_t>(m + 1) || !(span == f.image[v]))
                return reject("spanning-table", "member is not the span of its Q's");
            cert.vertices.push_back(f.source.labels[v]);
            cert.table.push_back(std::move(slots));
            cert.regenerated.push_back(std::move(span));
        }
        if (auto r = check_apartment_equality(s, cert, xs)) return *r;
        return cert;
    }

    auto fe = obtain_embedding();
    if (auto* rej = std::get_if<Rejection>(&fe)) return *rej;
    EmbeddingMap f = std::get<EmbeddingMap>(std::move(fe));
    if (auto r = check_max_cliques_independent(s, f)) return *r;

    std::optional<RowSpace> big = image_big_star(xs, k);
    const bool cond_narrow = (which == Theorem::T42) ? (2 * m + 2 > l) : (m + 2 > n - k);
    if (which == Theorem::T42 || which == Theorem::T45) {
        const bool cond_free = (which == Theorem::T42) ? !big.has_value()
                                                       : (l - m >= 4 && !big.has_value());
        if (!cond_narrow && !cond_free)
            return reject("hypothesis-conditions",
                          big ? "image is contained in a big star and the size condition fails"
                              : "neither size condition nor big-star freeness holds");
    }
    if ((which == Theorem::C41 || which == Theorem::C43) && big)
        return reject("hypothesis-conditions", "image is contained in a big star");

    CliqueImageReport rep = check_clique_images(s, f.source, f.image, k);
    EmbeddingMap routed = f;
    if (!rep.tops_in_tops) {
        if (l == 4 && m == 1 && rep.stars_in_tops > 0) {
            // reroute through the PJ(4,1) automorphism whose tops land on
            // the stars that f sends into tops
            HalfcubeSplit hs = halfcube_split_and_g();
            PJCliques cl = pj_cliques(f.source);
            std::optional<bool> use_plus;
            for (size_t st = 0; st < cl.star_index.size() && !use_plus; ++st) {
                const auto& mem = cl.star_members[st];
                RowSpace jn = f.image[mem[0]];
                for (int v : mem) jn = join(jn, f.image[v]);
                if (jn.rank() == k + 2 && is_singular_subspace(s, jn)) {
                    const SignedSet& u = cl.star_index[st].second;
                    bool in_plus = std::find(hs.a_plus.begin(), hs.a_plus.end(), u) != hs.a_plus.end();
                    use_plus = in_plus;
                }
            }
            if (!use_plus)
                return reject("tops-in-tops", "no star image inside a top to reroute through");
            const auto& g = *use_plus ? hs.g_to_plus : hs.g_to_minus;
            for (int v = 0; v < f.source.size(); ++v) routed.image[v] = f.image[g[v]];
            rep = check_clique_images(s, routed.source, routed.image, k);
            if (!rep.tops_in_tops)
                return reject("tops-in-tops", "top images still escape tops after rerouting");
        } else {
            return reject("tops-in-tops", "a top image is not contained in a top");
        }
    }

    ExtractResult ex = extract_certificate(s, routed, k);
    if (auto* rej = std::get_if<Rejection>(&ex)) return *rej;
    Certificate cert = std::get<Certificate>(std::move(ex));
    if (want_apartment)
        if (auto r = check_apartment_equality(s, cert, xs)) return *r;
    return cert;
}

} // namespace detail

/// Vertex-set verifier for Theorems 4.1, 4.2, 4.5 and Corollaries 4.1, 4.3.
inline VerifyResult verify_theorem(const PolarSpace& s, Theorem which,
                                   const std::vector<RowSpace>& xs, int k,
                                   VerifyOptions opt = {}) {
    switch (which) {
        case Theorem::T41:
            return detail::verify_hypercube_apartment(s, xs, opt.iso_budget);
        case Theorem::T42:
        case Theorem::T45:
        case Theorem::C41:
        case Theorem::C43:
            return detail::verify_pj_image(s, which, xs, k, opt);
        case Theorem::T43:
        case Theorem::T44:
            break;
    }
    throw std::invalid_argument("theorems 4.3/4.4 verify an explicit embedding; use the overload");
}

/// Witness search: an isomorphism PJ(l,m) -> Gamma(xs) packaged as an
/// embedding, or the rejection explaining why none exists.
inline std::variant<EmbeddingMap, Rejection> find_pj_embedding(const PolarSpace& s,
                                                               const std::vector<RowSpace>& xs,
                                                               int l, int m,
                                                               uint64_t iso_budget = 50'000'000) {
    return detail::embed_from_witness(s, xs, l, m, iso_budget);
}

/// Set verifier with a caller-supplied witness embedding (skips the
/// isomorphism search; the witness is re-validated).
inline VerifyResult verify_theorem_with_witness(const PolarSpace& s, Theorem which,
                                                const EmbeddingMap& f, int k,
                                                VerifyOptions opt = {}) {
    opt.l = f.l;
    opt.m = f.m;
    switch (which) {
        case Theorem::T42:
        case Theorem::T45:
        case Theorem::C41:
        case Theorem::C43:
            return detail::verify_pj_image(s, which, f.image, k, opt, f);
        default:
            throw std::invalid_argument("witness route applies to 4.2/4.5/cor4.1/cor4.3");
    }
}

/// Embedding verifier for Theorems 4.3 and 4.4 (tops to independent subsets
/// of tops). 4.3 additionally demands the full-apartment conclusion, which
/// holds under (4.1).
inline VerifyResult verify_theorem(const PolarSpace& s, Theorem which, const EmbeddingMap& f,
                                   int k, VerifyOptions opt = {}) {
    (void)opt;
    const int n = s.rank;
    if (which == Theorem::T43) {
        if (!(0 < f.m && f.m <= k && f.l <= n && f.l - f.m == n - k && n - k > 1 && f.m <= f.l - 3))
            return detail::reject("hypothesis-4.1", "parameters violate (4.1) with m <= l-3");
    } else if (which == Theorem::T44) {
        if (!(0 < f.m && f.m <= k && f.l <= n && 3 <= f.l - f.m && f.l - f.m <= n - k))
            return detail::reject("hypothesis-4.2", "parameters violate (4.2)");
    } else {
        throw std::invalid_argument("this overload verifies theorems 4.3/4.4");
    }
    ExtractResult ex = extract_certificate(s, f, k);
    if (auto* rej = std::get_if<Rejection>(&ex)) return *rej;
    Certificate cert = std::get<Certificate>(std::move(ex));
    if (which == Theorem::T43)
        if (auto r = detail::check_apartment_equality(s, cert, f.image)) return *r;
    return cert;
}

// ---------------------------------------------------------------------------
// Local apartment certificates

/// For one member S of a verified-locally image: the local data whose
/// existence forces X(S) = A_S(S) for an actual apartment A_S.
struct LocalCertificate {
    RowSpace s_member;
    RowSpace n_s;
    std::vector<RowSpace> base_in_s;  // m+1 elements of B_S contained in S
    std::vector<RowSpace> base_out;   // 2(l-m-1) elements X_T
    Frame quotient_frame;             // extension of B_S to a frame of [N_S>_{k-m}
    std::vector<RowSpace> neighborhood; // A_S(S) = X(S), lifted members
};

using LocalResult = std::variant<LocalCertificate, Rejection>;

inline LocalResult local_apartment_certificate(const PolarSpace& s,
                                               const std::vector<RowSpace>& xs,
                                               const RowSpace& S, int k, int l, int m,
                                               uint64_t iso_budget = 50'000'000) {
    auto fe = detail::embed_from_witness(s, xs, l, m, iso_budget);
    if (auto* rej = std::get_if<Rejection>(&fe)) return *rej;
    EmbeddingMap f = std::get<EmbeddingMap>(std::move(fe));
    int sv = -1;
    for (int v = 0; v < f.source.size(); ++v)
        if (f.image[v] == S) sv = v;
    if (sv < 0) return detail::reject("member", "S is not a member of the set");

    PJCliques cl = pj_cliques(f.source);
    std::vector<size_t> tops_through;
    for (size_t t = 0; t < cl.top_members.size(); ++t)
        if (std::find(cl.top_members[t].begin(), cl.top_members[t].end(), sv) !=
            cl.top_members[t].end())
            tops_through.push_back(t);
    if (tops_through.size() != static_cast<size_t>(2 * (l - m - 1)))
        return detail::reject("top-count", "expected " + std::to_string(2 * (l - m - 1)) +
                                               " tops through S, found " +
                                               std::to_string(tops_through.size()));

    std::optional<RowSpace> n_s;
    std::set<RowSpace> in_s_base;
    std::vector<RowSpace> out_base;
    for (size_t t : tops_through) {
        const auto& mem = cl.top_members[t];
        std::vector<RowSpace> imgs;
        RowSpace jn = f.image[mem[0]], nt = f.image[mem[0]];
        for (int v : mem) {
            imgs.push_back(f.image[v]);
            jn = join(jn, f.image[v]);
            nt = meet(nt, f.image[v]);
        }
        if (jn.rank() != k + 2 || !is_singular_subspace(s, jn) || !independent_checked(s, imgs))
            return detail::reject("tops-in-tops", "a top through S is not independent-in-a-top");
        if (nt.rank() != k - m)
            return detail::reject("N-dimension", "top intersection has rank " + std::to_string(nt.rank()));
        if (n_s && !(*n_s == nt))
            return detail::reject("N-consistency", "tops through S disagree on N_S");
        n_s = nt;
        // the base B_T: X_i = meet of all members except one
        int out_count = 0;
        for (size_t skip = 0; skip < mem.size(); ++skip) {
            RowSpace xi;
            bool fst = true;
            for (size_t i = 0; i < mem.size(); ++i) {
                if (i == skip) continue;
                xi = fst ? f.image[mem[i]] : meet(xi, f.image[mem[i]]);
                fst = false;
            }
            if (xi.rank() != k - m + 1)
                return detail::reject("base-structure", "base element has wrong rank");
            if (contains(S, xi)) {
                in_s_base.insert(xi);
            } else {
                out_base.push_back(xi);
                ++out_count;
            }
        }
        if (out_count != 1)
            return detail::reject("base-structure", "a top through S contributed " +
                                                        std::to_string(out_count) +
                                                        " outside elements");
    }
    if (in_s_base.size() != static_cast<size_t>(m + 1))
        return detail::reject("base-structure", "expected m+1 base elements inside S, found " +
                                                    std::to_string(in_s_base.size()));
    {
        std::set<RowSpace> distinct(out_base.begin(), out_base.end());
        if (distinct.size() != out_base.size())
            return detail::reject("base-structure", "outside base elements repeat");
    }

    // work inside the quotient by N_S
    QuotientSpace q = quotient_space(s, *n_s);
    auto project_point = [&](const RowSpace& x) -> int {
        RowSpace z = q.project(x);
        return z.rank() == 1 ? q.space.point_id(z.rows[0]) : -1;
    };
    std::vector<int> in_ids, out_ids;
    for (const auto& x : in_s_base) {
        int pid = project_point(x);
        if (pid < 0) return detail::reject("base-structure", "base element is not a quotient point");
        in_ids.push_back(pid);
    }
    for (const auto& x : out_base) {
        int pid = project_point(x);
        if (pid < 0) return detail::reject("base-structure", "base element is not a quotient point");
        out_ids.push_back(pid);
    }
    // in-S points are collinear with everything in B_S
    for (int a : in_ids)
        for (int b : in_ids)
            if (a != b && !q.space.collinear(a, b))
                return detail::reject("partner-structure", "in-S base points are not collinear");
    for (int a : in_ids)
        for (int b : out_ids)
            if (a == b || !q.space.collinear(a, b))
                return detail::reject("partner-structure", "in-S point non-collinear with an X_T");
    // every outer base element has exactly one non-collinear partner in B_S
    std::vector<int> partner(out_ids.size(), -1);
    for (size_t a = 0; a < out_ids.size(); ++a) {
        int hits = 0;
        for (size_t b = 0; b < out_ids.size(); ++b) {
            if (a == b) continue;
            if (out_ids[a] == out_ids[b] || !q.space.collinear(out_ids[a], out_ids[b])) {
                partner[a] = static_cast<int>(b);
                ++hits;
            }
        }
        if (hits != 1)
            return detail::reject("partner-structure", "an X_T has " + std::to_string(hits) +
                                                           " non-collinear partners");
    }
    for (size_t a = 0; a < out_ids.size(); ++a)
        if (partner[partner[a]] != static_cast<int>(a))
            return detail::reject("partner-structure", "partners do not pair up");

    // the coplanar-triple condition: no line of the Grassmann space meets
    // the set in three members
    for (size_t a = 0; a < xs.size(); ++a)
        for (size_t b = a + 1; b < xs.size(); ++b) {
            if (xs[a] == xs[b] || !adjacent(s, xs[a], xs[b])) continue;
            auto line = line_through(s, xs[a], xs[b]);
            int on = 0;
            for (const auto& memx : line->members)
                if (std::find(xs.begin(), xs.end(), memx) != xs.end()) ++on;
            if (on > 2)
                return detail::reject("coplanar-triple", "three members on one pencil line");
        }

    // extend B_S to a frame of the quotient: X carries the in-S points plus
    // one of each pair, Y the partners
    std::vector<int> X = in_ids, Y;
    std::vector<bool> used(out_ids.size(), false);
    for (size_t a = 0; a < out_ids.size(); ++a) {
        if (used[a]) continue;
        used[a] = used[partner[a]] = true;
        X.push_back(out_ids[a]);
        Y.push_back(out_ids[partner[a]]);
    }
    Frame fr;
    try {
        fr = extend_to_frame(q.space, X, Y);
    } catch (const std::invalid_argument& e) {
        return detail::reject("frame-extension", e.what());
    } catch (const std::logic_error& e) {
        return detail::reject("frame-extension", e.what());
    }

    Apartment ap = build_apartment(q.space, fr, m);
    // X(S) must equal A_S(S)
    RowSpace s_in_q = q.project(S);
    int s_idx = ap.index_of(s_in_q);
    if (s_idx < 0)
        return detail::reject("local-neighborhood", "S does not belong to the extended apartment");
    std::set<RowSpace> apt_nbhd{S};
    for (int v = 0; v < ap.pj.size(); ++v)
        if (ap.pj.adj[s_idx][v]) apt_nbhd.insert(q.lift(ap.members[v]));
    std::set<RowSpace> xs_nbhd{S};
    for (int v = 0; v < f.source.size(); ++v)
        if (f.source.adj[sv][v]) xs_nbhd.insert(f.image[v]);
    if (apt_nbhd != xs_nbhd)
        return detail::reject("local-neighborhood", "X(S) differs from A_S(S)");

    LocalCertificate out;
    out.s_member = S;
    out.n_s = *n_s;
    out.base_in_s.assign(in_s_base.begin(), in_s_base.end());
    out.base_out = out_base;
    out.quotient_frame = fr;
    out.neighborhood.assign(xs_nbhd.begin(), xs_nbhd.end());
    return out;
}

} // namespace polaris
