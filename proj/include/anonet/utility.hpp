#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "anonet/graph.hpp"
#include "anonet/rng.hpp"

namespace anonet {

// Exact unweighted betweenness centrality (Brandes): one BFS plus one
// dependency-accumulation sweep per source, in fixed source order 0..n-1.
// Scores are raw path-count sums over unordered pairs (halved at the end),
// not normalized; the top-k comparison only needs the ranking.
inline std::vector<double> betweenness(const Graph& g) {
    const std::uint32_t n = g.node_count();
    std::vector<double> bc(n, 0.0);
    constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> dist(n);
    std::vector<double> sigma(n);
    std::vector<double> delta(n);
    std::vector<NodeId> order;
    std::vector<NodeId> queue(n);
    order.reserve(n);

    for (NodeId s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), kUnreached);
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(delta.begin(), delta.end(), 0.0);
        order.clear();

        dist[s] = 0;
        sigma[s] = 1.0;
        std::size_t head = 0;
        std::size_t tail = 0;
        queue[tail++] = s;
        while (head < tail) {
            const NodeId v = queue[head++];
            order.push_back(v);
            for (const NodeId u : g.neighbors(v)) {
                if (dist[u] == kUnreached) {
                    dist[u] = dist[v] + 1;
                    queue[tail++] = u;
                }
                if (dist[u] == dist[v] + 1) sigma[u] += sigma[v];
            }
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const NodeId w = *it;
            for (const NodeId v : g.neighbors(w)) {
                if (dist[v] + 1 == dist[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if (w != s) bc[w] += delta[w];
        }
    }
    for (auto& x : bc) x /= 2.0;
    return bc;
}

// Fraction of the k highest-scoring nodes two score vectors have in common.
// Ranking ties break on lower node id so the comparison is deterministic; k is
// clamped to the node count.
inline double topk_overlap(const std::vector<double>& a, const std::vector<double>& b,
                           std::uint32_t k) {
    if (a.size() != b.size())
        throw std::invalid_argument("topk_overlap: score vectors must have equal length");
    if (a.empty() || k == 0) throw std::invalid_argument("topk_overlap: empty ranking");
    const auto n = static_cast<std::uint32_t>(a.size());
    const std::uint32_t kk = std::min(k, n);

    auto top_ids = [kk, n](const std::vector<double>& scores) {
        std::vector<std::uint32_t> ids(n);
        for (std::uint32_t i = 0; i < n; ++i) ids[i] = i;
        std::sort(ids.begin(), ids.end(), [&](std::uint32_t x, std::uint32_t y) {
            if (scores[x] != scores[y]) return scores[x] > scores[y];
            return x < y;
        });
        ids.resize(kk);
        return ids;
    };

    std::vector<std::uint8_t> in_a(n, 0);
    for (const std::uint32_t i : top_ids(a)) in_a[i] = 1;
    std::uint32_t shared = 0;
    for (const std::uint32_t i : top_ids(b)) shared += in_a[i];
    return static_cast<double>(shared) / kk;
}

// Community assignment, one label per node, ids dense 0..k-1.
struct Partition {
    std::vector<std::uint32_t> label;

    std::uint32_t community_count() const {
        if (label.empty()) return 0;
        return *std::max_element(label.begin(), label.end()) + 1;
    }
};

// Renames community ids to first-seen order over nodes, making structurally
// equal partitions compare equal as vectors.
inline void canonicalize(Partition& p) {
    std::unordered_map<std::uint32_t, std::uint32_t> remap;
    remap.reserve(p.label.size());
    std::uint32_t next = 0;
    for (auto& l : p.label) {
        const auto [it, inserted] = remap.emplace(l, next);
        if (inserted) ++next;
        l = it->second;
    }
}

// Newman modularity of a partition on an unweighted graph; used to sanity
// check community results against exhaustive search on tiny instances.
inline double modularity(const Graph& g, const Partition& part) {
    if (part.label.size() != g.node_count())
        throw std::invalid_argument("modularity: partition must cover the node set");
    if (g.edge_count() == 0) throw std::invalid_argument("modularity: graph has no edges");
    const std::uint32_t k = part.community_count();
    std::vector<std::int64_t> internal(k, 0);
    std::vector<std::int64_t> degree_sum(k, 0);
    for (NodeId v = 0; v < g.node_count(); ++v) degree_sum[part.label[v]] += g.degree(v);
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        const auto [v, w] = g.edge(e);
        if (part.label[v] == part.label[w]) ++internal[part.label[v]];
    }
    const double m = g.edge_count();
    double q = 0.0;
    for (std::uint32_t c = 0; c < k; ++c) {
        const double frac = degree_sum[c] / (2.0 * m);
        q += internal[c] / m - frac * frac;
    }
    return q;
}

namespace detail {

// Working representation for the Louvain phases: a weighted graph whose nodes
// are communities of the previous level. Adjacency lists exclude self-loops
// (collapsed internal weight lives in self_weight) and carry only positive
// weights; strength is the weighted degree including both self-loop ends.
struct WeightedLevel {
    std::uint32_t n = 0;
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;
    std::vector<double> self_weight;
    std::vector<double> strength;
    double m2 = 0.0;  // total weighted degree

    void finalize_strength() {
        strength.assign(n, 0.0);
        for (std::uint32_t v = 0; v < n; ++v) {
            strength[v] = 2.0 * self_weight[v];
            for (const auto& [u, w] : adj[v]) strength[v] += w;
        }
        m2 = 0.0;
        for (const double s : strength) m2 += s;
    }
};

inline WeightedLevel level_from_graph(const Graph& g) {
    WeightedLevel lv;
    lv.n = g.node_count();
    lv.adj.resize(lv.n);
    lv.self_weight.assign(lv.n, 0.0);
    for (NodeId v = 0; v < lv.n; ++v) {
        const auto ns = g.neighbors(v);
        lv.adj[v].reserve(ns.size());
        for (const NodeId u : ns) lv.adj[v].emplace_back(u, 1.0);
    }
    lv.finalize_strength();
    return lv;
}

inline WeightedLevel level_from_weighted_edges(
    std::uint32_t n, std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> edges) {
    WeightedLevel lv;
    lv.n = n;
    lv.adj.resize(n);
    lv.self_weight.assign(n, 0.0);
    for (auto& [a, b, w] : edges) {
        if (a >= n || b >= n) throw std::invalid_argument("louvain: edge endpoint out of range");
        if (a > b) std::swap(a, b);
    }
    std::sort(edges.begin(), edges.end(),
              [](const auto& x, const auto& y) {
                  return std::tie(std::get<0>(x), std::get<1>(x)) <
                         std::tie(std::get<0>(y), std::get<1>(y));
              });
    for (std::size_t i = 0; i < edges.size();) {
        const auto [a, b, w0] = edges[i];
        double w = w0;
        for (++i; i < edges.size() && std::get<0>(edges[i]) == a && std::get<1>(edges[i]) == b; ++i)
            w += std::get<2>(edges[i]);
        if (w <= 0.0) continue;
        if (a == b) {
            lv.self_weight[a] += w;
        } else {
            lv.adj[a].emplace_back(b, w);
            lv.adj[b].emplace_back(a, w);
        }
    }
    lv.finalize_strength();
    return lv;
}

// Local-moving phase. Nodes are visited in an rng-shuffled order (the only
// stochastic ingredient of the whole pipeline); each node greedily joins the
// neighboring community with the largest modularity gain, strictly positive
// against staying put. Returns whether any move happened.
inline bool louvain_level(const WeightedLevel& lv, Rng& rng, std::vector<std::uint32_t>& comm) {
    const std::uint32_t n = lv.n;
    comm.resize(n);
    for (std::uint32_t v = 0; v < n; ++v) comm[v] = v;
    std::vector<double> sigma_tot = lv.strength;

    std::vector<std::uint32_t> order(n);
    for (std::uint32_t v = 0; v < n; ++v) order[v] = v;
    for (std::uint32_t i = n; i > 1; --i) {
        const std::uint32_t j = rng.below_u32(i);
        std::swap(order[i - 1], order[j]);
    }

    std::vector<double> neigh_w(n, 0.0);
    std::vector<std::uint32_t> touched;
    bool any_move = false;
    bool moving = true;
    // The pass counter is a safety net; modularity strictly increases with
    // every move, so the loop terminates on its own.
    for (int pass = 0; moving && pass < 1000; ++pass) {
        moving = false;
        for (const std::uint32_t v : order) {
            const std::uint32_t c_old = comm[v];
            touched.clear();
            for (const auto& [u, w] : lv.adj[v]) {
                const std::uint32_t cu = comm[u];
                if (neigh_w[cu] == 0.0) touched.push_back(cu);
                neigh_w[cu] += w;
            }
            const double kv = lv.strength[v];
            sigma_tot[c_old] -= kv;
            double best_gain = neigh_w[c_old] - sigma_tot[c_old] * kv / lv.m2;
            std::uint32_t best_c = c_old;
            for (const std::uint32_t cu : touched) {
                if (cu == c_old) continue;
                const double gain = neigh_w[cu] - sigma_tot[cu] * kv / lv.m2;
                if (gain > best_gain) {
                    best_gain = gain;
                    best_c = cu;
                }
            }
            comm[v] = best_c;
            sigma_tot[best_c] += kv;
            if (best_c != c_old) {
                moving = true;
                any_move = true;
            }
            for (const std::uint32_t cu : touched) neigh_w[cu] = 0.0;
        }
    }
    return any_move;
}

inline WeightedLevel aggregate_level(const WeightedLevel& lv,
                                     const std::vector<std::uint32_t>& node_to_dense,
                                     std::uint32_t community_count) {
    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> edges;
    WeightedLevel nx;
    nx.n = community_count;
    nx.adj.resize(community_count);
    nx.self_weight.assign(community_count, 0.0);
    for (std::uint32_t v = 0; v < lv.n; ++v) {
        const std::uint32_t a = node_to_dense[v];
        nx.self_weight[a] += lv.self_weight[v];
        for (const auto& [u, w] : lv.adj[v]) {
            if (v >= u) continue;  // visit each undirected edge once
            const std::uint32_t b = node_to_dense[u];
            if (a == b) {
                nx.self_weight[a] += w;
            } else {
                edges.emplace_back(std::min(a, b), std::max(a, b), w);
            }
        }
    }
    std::sort(edges.begin(), edges.end(),
              [](const auto& x, const auto& y) {
                  return std::tie(std::get<0>(x), std::get<1>(x)) <
                         std::tie(std::get<0>(y), std::get<1>(y));
              });
    for (std::size_t i = 0; i < edges.size();) {
        const auto [a, b, w0] = edges[i];
        double w = w0;
        for (++i; i < edges.size() && std::get<0>(edges[i]) == a && std::get<1>(edges[i]) == b; ++i)
            w += std::get<2>(edges[i]);
        nx.adj[a].emplace_back(b, w);
        nx.adj[b].emplace_back(a, w);
    }
    nx.finalize_strength();
    return nx;
}

// Full Louvain: alternate local moving and aggregation until a level makes no
// move. Returns the original-node labeling (dense, but not yet canonical).
inline std::vector<std::uint32_t> run_louvain(WeightedLevel lv, Rng& rng) {
    const std::uint32_t n0 = lv.n;
    std::vector<std::uint32_t> assign(n0);
    for (std::uint32_t v = 0; v < n0; ++v) assign[v] = v;
    if (lv.m2 <= 0.0) return assign;

    while (true) {
        std::vector<std::uint32_t> comm;
        if (!louvain_level(lv, rng, comm)) break;
        constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();
        std::vector<std::uint32_t> dense(lv.n, kUnset);
        std::uint32_t nc = 0;
        std::vector<std::uint32_t> node_to_dense(lv.n);
        for (std::uint32_t v = 0; v < lv.n; ++v) {
            if (dense[comm[v]] == kUnset) dense[comm[v]] = nc++;
            node_to_dense[v] = dense[comm[v]];
        }
        for (std::uint32_t i = 0; i < n0; ++i) assign[i] = node_to_dense[assign[i]];
        if (nc == lv.n) break;
        lv = aggregate_level(lv, node_to_dense, nc);
    }
    return assign;
}

}  // namespace detail

// Modularity-maximizing partition via the two-phase Louvain method. The rng
// shuffles node visit order, which is the run-to-run variation the consensus
// step smooths out. An edgeless graph yields the singleton partition.
inline Partition louvain(const Graph& g, Rng& rng) {
    Partition p;
    p.label = detail::run_louvain(detail::level_from_graph(g), rng);
    canonicalize(p);
    return p;
}

// Louvain over an explicit weighted edge list (used for the agreement graph
// inside consensus clustering).
inline Partition louvain_weighted(
    std::uint32_t n, const std::vector<std::tuple<std::uint32_t, std::uint32_t, double>>& edges,
    Rng& rng) {
    Partition p;
    p.label = detail::run_louvain(detail::level_from_weighted_edges(n, edges), rng);
    canonicalize(p);
    return p;
}

// Consensus clustering: run Louvain `runs` times, connect every node pair
// co-assigned in at least half the runs with that fraction as edge weight,
// recluster the agreement graph, and repeat until the runs are unanimous
// (capped at 10 rounds, then majority vote among the final partitions).
inline Partition consensus_partition(const Graph& g, std::uint32_t runs, Rng& rng) {
    if (runs < 1) throw std::invalid_argument("consensus_partition: runs must be >= 1");
    const std::uint32_t n = g.node_count();
    const std::uint64_t base = rng.next_u64();

    std::vector<Partition> parts(runs);
    for (std::uint32_t r = 0; r < runs; ++r) {
        Rng run_rng(derive_seed(base, 0, r));
        parts[r] = louvain(g, run_rng);
    }

    auto unanimous = [&] {
        for (std::uint32_t r = 1; r < runs; ++r) {
            if (parts[r].label != parts[0].label) return false;
        }
        return true;
    };

    for (std::uint32_t iter = 1; iter <= 10; ++iter) {
        if (unanimous()) return parts[0];

        std::unordered_map<std::uint64_t, std::uint32_t> pair_count;
        std::vector<std::vector<NodeId>> groups;
        for (const Partition& p : parts) {
            groups.assign(p.community_count(), {});
            for (NodeId v = 0; v < n; ++v) groups[p.label[v]].push_back(v);
            for (const auto& members : groups) {
                for (std::size_t i = 0; i < members.size(); ++i) {
                    for (std::size_t j = i + 1; j < members.size(); ++j) {
                        const std::uint64_t key =
                            (static_cast<std::uint64_t>(members[i]) << 32) | members[j];
                        ++pair_count[key];
                    }
                }
            }
        }

        std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> agreement;
        agreement.reserve(pair_count.size());
        for (const auto& [key, count] : pair_count) {
            const double frac = static_cast<double>(count) / runs;
            if (frac >= 0.5) {
                agreement.emplace_back(static_cast<std::uint32_t>(key >> 32),
                                       static_cast<std::uint32_t>(key & 0xffffffffu), frac);
            }
        }

        for (std::uint32_t r = 0; r < runs; ++r) {
            Rng run_rng(derive_seed(base, iter, r));
            parts[r] = louvain_weighted(n, agreement, run_rng);
        }
    }

    // No unanimity within the cap: return the most frequent partition,
    // earliest run breaking ties.
    std::vector<std::uint32_t> votes(runs, 0);
    for (std::uint32_t r = 0; r < runs; ++r) {
        for (std::uint32_t s = 0; s < runs; ++s) {
            if (parts[s].label == parts[r].label) ++votes[r];
        }
    }
    std::uint32_t winner = 0;
    for (std::uint32_t r = 1; r < runs; ++r) {
        if (votes[r] > votes[winner]) winner = r;
    }
    return parts[winner];
}

// Normalized mutual information between two partitions of the same node set:
// 2 I(p;q) / (H(p) + H(q)) with natural logarithms. Two zero-entropy
// partitions are identical up to relabeling, so the value is defined as 1.
inline double nmi(const Partition& p, const Partition& q) {
    if (p.label.size() != q.label.size() || p.label.empty())
        throw std::invalid_argument("nmi: partitions must cover the same non-empty node set");
    if (p.label == q.label) return 1.0;

    const auto n = static_cast<double>(p.label.size());
    const std::uint32_t kp = p.community_count();
    const std::uint32_t kq = q.community_count();
    std::vector<double> np(kp, 0.0);
    std::vector<double> nq(kq, 0.0);
    std::unordered_map<std::uint64_t, std::uint32_t> joint;
    joint.reserve(p.label.size());
    for (std::size_t v = 0; v < p.label.size(); ++v) {
        np[p.label[v]] += 1.0;
        nq[q.label[v]] += 1.0;
        ++joint[(static_cast<std::uint64_t>(p.label[v]) << 32) | q.label[v]];
    }

    // Deterministic summation order keeps the value reproducible.
    std::vector<std::pair<std::uint64_t, std::uint32_t>> cells(joint.begin(), joint.end());
    std::sort(cells.begin(), cells.end());
    double info = 0.0;
    for (const auto& [key, count] : cells) {
        const double pij = count / n;
        const double pi = np[key >> 32] / n;
        const double pj = nq[key & 0xffffffffu] / n;
        info += pij * std::log(pij / (pi * pj));
    }
    double hp = 0.0;
    for (const double c : np) {
        if (c > 0.0) hp -= (c / n) * std::log(c / n);
    }
    double hq = 0.0;
    for (const double c : nq) {
        if (c > 0.0) hq -= (c / n) * std::log(c / n);
    }
    if (hp == 0.0 && hq == 0.0) return 1.0;
    return std::clamp(2.0 * info / (hp + hq), 0.0, 1.0);
}

// The six privacy-cost measures comparing a graph with its anonymized
// counterpart. Deltas are signed (anonymized minus original);
// delta_avg_distance is NaN when the anonymized graph has no connected pair
// left to average over.
struct UtilityReport {
    double frac_deleted = 0.0;
    double delta_clustering = 0.0;
    double delta_avg_distance = 0.0;
    double delta_lcc_frac = 0.0;
    double betweenness_top100_overlap = 1.0;
    double community_nmi = 1.0;
};

inline UtilityReport utility_report(const Graph& g, const std::vector<bool>& deleted,
                                    std::uint64_t seed, std::uint32_t consensus_runs = 100,
                                    std::uint32_t top_k = 100) {
    const Graph anon = delete_edges(g, deleted);
    const std::uint32_t n = g.node_count();

    UtilityReport r;
    std::uint32_t removed = 0;
    for (const bool b : deleted) removed += b ? 1 : 0;
    r.frac_deleted = static_cast<double>(removed) / g.edge_count();
    r.delta_clustering = average_clustering(anon) - average_clustering(g);
    r.delta_avg_distance = anon.edge_count() == 0
                               ? std::numeric_limits<double>::quiet_NaN()
                               : distance_stats(anon).average - distance_stats(g).average;
    r.delta_lcc_frac = connected_components(anon).largest_fraction(n) -
                       connected_components(g).largest_fraction(n);
    r.betweenness_top100_overlap = topk_overlap(betweenness(g), betweenness(anon), top_k);

    // Both consensus runs start from the same derived seed, so comparing a
    // graph against itself yields literally identical partitions and NMI 1.
    const std::uint64_t consensus_seed = derive_seed(seed, 0xC0);
    Rng rng_original(consensus_seed);
    Rng rng_anonymized(consensus_seed);
    const Partition p = consensus_partition(g, consensus_runs, rng_original);
    const Partition q = consensus_partition(anon, consensus_runs, rng_anonymized);
    r.community_nmi = nmi(p, q);
    return r;
}

}  // namespace anonet
