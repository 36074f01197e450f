#include "spx/graph.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <queue>
#include <stdexcept>

namespace spx {

void GraphBuilder::add_edge(int u, int v, double w) {
    assert(u != v);
    assert(u >= 0 && u < n_ && v >= 0 && v < n_);
    edges_.push_back({u, v, w});
}

void GraphBuilder::add_self_loop(int u, double matrix_entry) {
    assert(u >= 0 && u < n_);
    self_loops_.emplace_back(u, matrix_entry);
}

WeightedGraph GraphBuilder::build() const {
    WeightedGraph g;
    std::vector<int> degree(n_, 0);
    for (const Edge& e : edges_) {
        ++degree[e.u];
        ++degree[e.v];
    }
    for (const auto& [u, w] : self_loops_) ++degree[u];

    g.offsets_.assign(n_ + 1, 0);
    for (int u = 0; u < n_; ++u) g.offsets_[u + 1] = g.offsets_[u] + degree[u];
    g.links_.resize(g.offsets_[n_]);
    g.strength_.assign(n_, 0.0);
    g.self_loop_.assign(n_, 0.0);

    std::vector<int> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const Edge& e : edges_) {
        g.links_[cursor[e.u]++] = {e.v, e.w};
        g.links_[cursor[e.v]++] = {e.u, e.w};
        g.strength_[e.u] += e.w;
        g.strength_[e.v] += e.w;
    }
    for (const auto& [u, w] : self_loops_) {
        g.links_[cursor[u]++] = {u, w};
        g.strength_[u] += w;
        g.self_loop_[u] += w;
    }

    g.strength_sum_ = 0.0;
    for (int u = 0; u < n_; ++u) g.strength_sum_ += g.strength_[u];
    return g;
}

bool check_symmetry(const WeightedGraph& g) {
    std::map<std::pair<int, int>, double> seen;
    for (int u = 0; u < g.node_count(); ++u) {
        std::map<int, int> local;
        for (const Link& l : g.links(u)) {
            if (++local[l.to] > 1) return false;  // duplicate entry
            if (l.to == u) continue;
            seen[{std::min(u, l.to), std::max(u, l.to)}] += (u < l.to ? l.weight : -l.weight);
        }
    }
    for (const auto& [edge, residual] : seen) {
        if (residual != 0.0) return false;
    }
    return true;
}

std::vector<int> connected_components(const WeightedGraph& g) {
    const int n = g.node_count();
    std::vector<int> comp(n, -1);
    int next = 0;
    std::queue<int> frontier;
    for (int s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        comp[s] = next;
        frontier.push(s);
        while (!frontier.empty()) {
            const int u = frontier.front();
            frontier.pop();
            for (const Link& l : g.links(u)) {
                if (comp[l.to] < 0) {
                    comp[l.to] = next;
                    frontier.push(l.to);
                }
            }
        }
        ++next;
    }
    return comp;
}

}  // namespace spx
