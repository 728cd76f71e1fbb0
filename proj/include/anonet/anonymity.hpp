#pragma once

#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "anonet/graph.hpp"

namespace anonet {

// Equivalence key of the COUNT measure: two nodes match iff they share both
// degree and triangle participation. A node is anonymous iff at least one
// other node has the same state.
struct NodeState {
    std::uint32_t degree = 0;
    std::uint32_t triangles = 0;

    bool operator==(const NodeState&) const = default;
};

inline std::uint64_t pack_state(NodeState s) {
    return (static_cast<std::uint64_t>(s.degree) << 32) | s.triangles;
}
inline NodeState unpack_state(std::uint64_t key) {
    return {static_cast<std::uint32_t>(key >> 32), static_cast<std::uint32_t>(key)};
}

// Undo log for a batch of speculative deletions (objective evaluation applies
// the deltas of one individual, reads |V_u|, then rolls everything back).
struct ViewJournal {
    std::vector<std::pair<NodeId, std::uint64_t>> prior_states;
    std::vector<EdgeId> deleted_edges;
    std::uint32_t prior_unique = 0;

    void clear() {
        prior_states.clear();
        deleted_edges.clear();
    }
};

// Per-node states plus the state census of a graph under a (possibly empty)
// set of edge deletions, maintained incrementally.
//
// Deleting edge {v, w} only changes the states of v, w and their surviving
// common neighbors, so one deletion costs O(deg(v) + deg(w)) instead of a
// full recomputation. The invariant checked throughout the test suite: after
// any deletion sequence the view equals a from-scratch build on the derived
// graph.
class AnonymityView {
public:
    AnonymityView() = default;

    explicit AnonymityView(const Graph& g) : g_(&g) {
        state_.resize(g.node_count());
        const auto tri = triangle_counts(g);
        for (NodeId v = 0; v < g.node_count(); ++v)
            state_[v] = pack_state({g.degree(v), tri[v]});
        census_.reserve(g.node_count() * 2);
        for (auto s : state_) ++census_[s];
        unique_ = 0;
        for (const auto& [s, c] : census_)
            if (c == 1) ++unique_;
        deleted_.assign(g.edge_count(), 0);
        deleted_count_ = 0;
    }

    const Graph& graph() const { return *g_; }

    NodeState state(NodeId v) const { return unpack_state(state_[v]); }
    bool is_deleted(EdgeId e) const { return deleted_[e] != 0; }
    std::uint32_t deleted_count() const { return deleted_count_; }

    // |V_u| of the derived graph.
    std::uint32_t unique_count() const { return unique_; }

    double uniqueness() const {
        return g_->node_count() == 0
                   ? 0.0
                   : static_cast<double>(unique_) / g_->node_count();
    }

    bool is_unique(NodeId v) const { return census_.find(state_[v])->second == 1; }

    std::vector<NodeId> unique_nodes() const {
        std::vector<NodeId> out;
        out.reserve(unique_);
        for (NodeId v = 0; v < state_.size(); ++v)
            if (is_unique(v)) out.push_back(v);
        return out;
    }

    // Surviving edges with at least one unique endpoint (E_u).
    std::vector<EdgeId> unique_edges() const {
        std::vector<EdgeId> out;
        for (EdgeId e = 0; e < g_->edge_count(); ++e) {
            if (deleted_[e]) continue;
            const auto [v, w] = g_->edge(e);
            if (is_unique(v) || is_unique(w)) out.push_back(e);
        }
        return out;
    }

    const std::unordered_map<std::uint64_t, std::uint32_t>& census() const { return census_; }

    // Applies the deletion of edge e. With a journal, the change can later be
    // undone by rollback(); journals may span several deletions.
    void delete_edge(EdgeId e, ViewJournal* journal = nullptr) {
        if (deleted_[e]) throw std::invalid_argument("delete_edge: edge already deleted");
        if (journal && journal->deleted_edges.empty()) journal->prior_unique = unique_;
        const auto [v, w] = g_->edge(e);

        // Surviving common neighbors of v and w: each loses one triangle.
        auto a = g_->neighbors(v);
        auto ae = g_->incident_edges(v);
        auto b = g_->neighbors(w);
        auto be = g_->incident_edges(w);
        std::size_t i = 0, j = 0;
        std::uint32_t closed = 0;
        while (i < a.size() && j < b.size()) {
            if (a[i] < b[j]) ++i;
            else if (b[j] < a[i]) ++j;
            else {
                if (!deleted_[ae[i]] && !deleted_[be[j]]) {
                    const NodeId u = a[i];
                    auto s = unpack_state(state_[u]);
                    --s.triangles;
                    set_state(u, s, journal);
                    ++closed;
                }
                ++i;
                ++j;
            }
        }

        auto sv = unpack_state(state_[v]);
        --sv.degree;
        sv.triangles -= closed;
        set_state(v, sv, journal);

        auto sw = unpack_state(state_[w]);
        --sw.degree;
        sw.triangles -= closed;
        set_state(w, sw, journal);

        deleted_[e] = 1;
        ++deleted_count_;
        if (journal) journal->deleted_edges.push_back(e);
    }

    // Undoes every change recorded in the journal (reverse order) and clears it.
    void rollback(ViewJournal& journal) {
        for (auto it = journal.prior_states.rbegin(); it != journal.prior_states.rend(); ++it) {
            const auto [v, old_state] = *it;
            decrement_census(state_[v]);
            ++census_[old_state];
            state_[v] = old_state;
        }
        for (EdgeId e : journal.deleted_edges) {
            deleted_[e] = 0;
            --deleted_count_;
        }
        if (!journal.deleted_edges.empty()) unique_ = journal.prior_unique;
        journal.clear();
    }

private:
    void set_state(NodeId v, NodeState next, ViewJournal* journal) {
        const std::uint64_t old_key = state_[v], new_key = pack_state(next);
        if (old_key == new_key) return;
        if (journal) journal->prior_states.emplace_back(v, old_key);
        decrement_census(old_key);
        const std::uint32_t now = ++census_[new_key];
        if (now == 1) ++unique_;
        else if (now == 2) --unique_;
        state_[v] = new_key;
    }

    void decrement_census(std::uint64_t key) {
        auto it = census_.find(key);
        if (--it->second == 0) {
            census_.erase(it);
            --unique_;
        } else if (it->second == 1) {
            ++unique_;
        }
    }

    const Graph* g_ = nullptr;
    std::vector<std::uint64_t> state_;
    std::unordered_map<std::uint64_t, std::uint32_t> census_;
    std::vector<std::uint8_t> deleted_;
    std::uint32_t unique_ = 0;
    std::uint32_t deleted_count_ = 0;
};

inline NodeState node_state(const Graph& g, NodeId v) {
    return {g.degree(v), triangle_count(g, v)};
}

inline AnonymityView build_view(const Graph& g) { return AnonymityView(g); }

inline double uniqueness(const AnonymityView& view) { return view.uniqueness(); }

}  // namespace anonet
