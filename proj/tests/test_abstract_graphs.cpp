#include <catch2/catch.hpp>

#include "polaris/abstract_graphs.hpp"

#include <set>

using namespace polaris;

namespace {

uint64_t binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    uint64_t r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

} // namespace

TEST_CASE("signed sets") {
    auto s = SignedSet::of({-2, 1});
    CHECK(s.elems == std::vector<int>{1, -2});
    CHECK_THROWS_AS(SignedSet::of({1, -1}), std::invalid_argument);
    CHECK_THROWS_AS(SignedSet::of({2, 2}), std::invalid_argument);

    auto t = SignedSet::of({3});
    auto u = ss_union_singular(s, t);
    REQUIRE(u.has_value());
    CHECK(u->size() == 3);
    CHECK_FALSE(ss_union_singular(s, SignedSet::of({2})).has_value());
    CHECK(ss_inter_size(s, SignedSet::of({1, 3})) == 1);
}

TEST_CASE("PJ vertex counts match the closed formula") {
    CHECK(build_pj(3, 0).size() == 6);
    CHECK(build_pj(4, 1).size() == 24);
    for (int n = 1; n <= 6; ++n)
        for (int k = 0; k <= n - 1; ++k) {
            auto g = build_pj(n, k);
            CHECK(g.size() == static_cast<int>((1ull << (k + 1)) * binom(n, k + 1)));
        }
    CHECK_THROWS_AS(build_pj(3, 3), std::invalid_argument);
}

TEST_CASE("PJ(n,n-1) is the hypercube") {
    for (int n : {3, 4}) {
        auto pj = build_pj(n, n - 1);
        auto h = build_hypercube(n);
        auto iso = find_isomorphism(pj, h);
        REQUIRE(iso.status == IsoStatus::Found);
        CHECK(check_isomorphism(pj, h, iso.mapping));
    }
}

TEST_CASE("PJ(4,0) is the 4-dimensional half-cube") {
    auto iso = find_isomorphism(build_pj(4, 0), build_halfcube(4));
    CHECK(iso.status == IsoStatus::Found);
}

TEST_CASE("PJ clique structure") {
    auto pj = build_pj(4, 1);
    auto cl = pj_cliques(pj);
    CHECK(cl.top_index.size() == 32); // |PJ(4,2)|
    for (const auto& t : cl.top_members) CHECK(t.size() == 3);   // m+2
    for (const auto& s : cl.star_members) CHECK(s.size() == 3);  // l-m
    // every top/star member list is a clique
    for (const auto& t : cl.top_members)
        for (size_t i = 0; i < t.size(); ++i)
            for (size_t j = i + 1; j < t.size(); ++j)
                CHECK(pj.adjacent(t[i], t[j]));
    for (const auto& s : cl.star_members)
        for (size_t i = 0; i < s.size(); ++i)
            for (size_t j = i + 1; j < s.size(); ++j)
                CHECK(pj.adjacent(s[i], s[j]));
}

TEST_CASE("big star restrictions are PJ(n-k,0)") {
    for (int n = 3; n <= 5; ++n)
        for (int k = 1; k <= n - 3; ++k) {
            auto pj = build_pj(n, k);
            auto cl = pj_cliques(pj);
            auto target = build_pj(n - k, 0);
            for (size_t b = 0; b < cl.big_star_members.size(); b += 3) {
                const auto& mem = cl.big_star_members[b];
                AbstractGraph sub;
                sub.name = "restriction";
                sub.labels.resize(mem.size());
                for (size_t i = 0; i < mem.size(); ++i)
                    sub.labels[i] = pj.labels[mem[i]];
                sub.adj.assign(mem.size(), std::vector<uint8_t>(mem.size(), 0));
                for (size_t i = 0; i < mem.size(); ++i)
                    for (size_t j = i + 1; j < mem.size(); ++j)
                        sub.adj[i][j] = sub.adj[j][i] = pj.adj[mem[i]][mem[j]];
                auto iso = find_isomorphism(sub, target);
                REQUIRE(iso.status == IsoStatus::Found);
            }
        }
}

TEST_CASE("maximal cliques of PJ(n,k) are exactly tops and stars") {
    for (int n = 3; n <= 5; ++n)
        for (int k = 1; k <= n - 2; ++k) {
            auto pj = build_pj(n, k);
            auto cliques = maximal_cliques(pj.adj);
            std::set<std::vector<int>> expected;
            auto cl = pj_cliques(pj);
            for (auto t : cl.top_members) {
                std::sort(t.begin(), t.end());
                expected.insert(t);
            }
            for (auto s : cl.star_members) {
                std::sort(s.begin(), s.end());
                if (s.size() >= 2) expected.insert(s);
            }
            std::set<std::vector<int>> got(cliques.begin(), cliques.end());
            if (k <= n - 3) {
                CHECK(got == expected);
            } else {
                // at k = n-2 the stars degenerate; tops are the only maximal cliques
                std::set<std::vector<int>> tops_only;
                for (auto t : cl.top_members) {
                    std::sort(t.begin(), t.end());
                    tops_only.insert(t);
                }
                CHECK(got == tops_only);
            }
        }
}

TEST_CASE("isomorphism outcomes") {
    auto g = build_pj(3, 1);
    auto id = find_isomorphism(g, g);
    REQUIRE(id.status == IsoStatus::Found);
    CHECK(check_isomorphism(g, g, id.mapping));

    CHECK(find_isomorphism(build_pj(3, 0), build_hypercube(3)).status == IsoStatus::None);

    // same size, different structure
    auto h4 = build_hypercube(4);
    auto pj41 = build_pj(4, 1);
    (void)h4;
    auto none = find_isomorphism(build_pj(4, 3), pj41);
    CHECK(none.status == IsoStatus::None);

    // budget exhaustion is a distinct outcome
    IsoOptions tight;
    tight.node_budget = 2;
    auto capped = find_isomorphism(pj41, pj41, tight);
    CHECK(capped.status == IsoStatus::BudgetExceeded);
}

TEST_CASE("half-cube split and the top-to-star automorphism") {
    HalfcubeSplit hs = halfcube_split_and_g(); // throws on any internal failure
    CHECK(hs.a_plus.size() == 8);
    CHECK(hs.a_minus.size() == 8);

    auto pj41 = build_pj(4, 1);
    for (const auto* g : {&hs.g_to_plus, &hs.g_to_minus}) {
        REQUIRE(g->size() == 24);
        // full 24x24 automorphism check
        for (int a = 0; a < 24; ++a)
            for (int b = a + 1; b < 24; ++b)
                CHECK(pj41.adj[a][b] == pj41.adj[(*g)[a]][(*g)[b]]);
    }

    // tops map onto stars bijectively enough to cover all 32 tops
    auto cl = pj_cliques(pj41);
    CHECK(cl.top_members.size() == 32);
}
