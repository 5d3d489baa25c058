#pragma once

#include "polaris/abstract_graphs.hpp"
#include "polaris/grassmann.hpp"
#include "polaris/prng.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <vector>

namespace polaris {

/// Seeded randomized search for pattern-isomorphic subsets of a Grassmann
/// level. Each trial runs a randomized backtracking embedding attempt from
/// a shuffled candidate order; adjacency is enforced in both directions, so
/// every completed assignment is an embedding by construction.
struct SearchConfig {
    uint64_t seed = 0;
    uint64_t trials = 500;
    uint64_t nodes_per_trial = 20'000;
    uint64_t stop_after_findings = 0; // 0 = no early stop
};

struct Finding {
    std::vector<int> vertex_ids;    // pattern vertex -> universe index
    std::vector<RowSpace> members;  // the image set, in pattern-vertex order
};

struct SearchOutcome {
    std::vector<Finding> findings;  // deduplicated by member set
    uint64_t trials_run = 0;
    uint64_t nodes = 0;
    bool truncated = false;         // stopped before the requested trials
};

inline SearchOutcome search_pattern(const PolarSpace& s, const AbstractGraph& pattern,
                                    const std::vector<RowSpace>& universe, SearchConfig cfg) {
    SearchOutcome out;
    const int pv = pattern.size();
    const int uv = static_cast<int>(universe.size());
    if (pv == 0 || uv < pv) {
        out.trials_run = cfg.trials;
        return out;
    }
    SplitMix64 rng(cfg.seed);

    // process pattern vertices in a connected order (max back-degree first)
    std::vector<int> order;
    {
        std::vector<uint8_t> placed(pv, 0);
        order.push_back(0);
        placed[0] = 1;
        while (static_cast<int>(order.size()) < pv) {
            int best = -1, best_links = -1;
            for (int v = 0; v < pv; ++v) {
                if (placed[v]) continue;
                int links = 0;
                for (int u : order)
                    if (pattern.adj[v][u]) ++links;
                if (links > best_links) {
                    best_links = links;
                    best = v;
                }
            }
            order.push_back(best);
            placed[best] = 1;
        }
    }

    // adjacency of universe members: precomputed when the universe is small,
    // demand-driven with a memo otherwise
    const bool precompute = uv <= 1500;
    std::vector<std::vector<uint8_t>> full;
    if (precompute) full = grassmann_adjacency(s, universe);
    std::map<std::pair<int, int>, bool> adj_memo;
    auto uadj = [&](int a, int b) {
        if (precompute) return full[a][b] != 0;
        if (a > b) std::swap(a, b);
        auto it = adj_memo.find({a, b});
        if (it != adj_memo.end()) return it->second;
        bool r = !(universe[a] == universe[b]) && adjacent(s, universe[a], universe[b]);
        adj_memo.emplace(std::make_pair(a, b), r);
        return r;
    };

    std::set<std::vector<int>> seen; // dedup by sorted universe ids
    for (uint64_t trial = 0; trial < cfg.trials; ++trial) {
        ++out.trials_run;
        uint64_t node_cap = cfg.nodes_per_trial;
        std::vector<int> assign(pv, -1);
        std::vector<uint8_t> used(uv, 0);
        // per-slot shuffled candidate order, drawn once per trial
        std::vector<int> shuffled(uv);
        for (int i = 0; i < uv; ++i) shuffled[i] = i;
        rng.shuffle(shuffled);

        auto rec = [&](auto&& self, int depth) -> bool {
            if (depth == pv) return true;
            int v = order[depth];
            for (int cand : shuffled) {
                if (used[cand]) continue;
                if (node_cap == 0) return false;
                --node_cap;
                ++out.nodes;
                bool ok = true;
                for (int d = 0; d < depth && ok; ++d) {
                    int u = order[d];
                    if ((pattern.adj[v][u] != 0) != uadj(cand, assign[u])) ok = false;
                }
                if (!ok) continue;
                assign[v] = cand;
                used[cand] = 1;
                if (self(self, depth + 1)) return true;
                assign[v] = -1;
                used[cand] = 0;
            }
            return false;
        };
        if (rec(rec, 0)) {
            std::vector<int> key = assign;
            std::sort(key.begin(), key.end());
            if (seen.insert(key).second) {
                Finding f;
                f.vertex_ids = assign;
                for (int v = 0; v < pv; ++v) f.members.push_back(universe[assign[v]]);
                out.findings.push_back(std::move(f));
            }
            if (cfg.stop_after_findings && out.findings.size() >= cfg.stop_after_findings)
                return out;
        }
    }
    if (cfg.stop_after_findings && out.findings.size() < cfg.stop_after_findings)
        out.truncated = true;
    return out;
}

} // namespace polaris
