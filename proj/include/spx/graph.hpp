#pragma once

#include <span>
#include <vector>

namespace spx {

struct Link {
    int to = 0;
    double weight = 0.0;
};

/// Undirected weighted graph in CSR form. Every edge is stored in both
/// directions; a self-loop is stored once and its weight is the adjacency
/// MATRIX entry w_uu (so a contracted community with internal undirected
/// weight s carries a self-loop entry of 2s). With that convention
/// strength(u) = sum of matrix row u and strength_sum() = sum over all
/// matrix entries, which keeps modularity and the map equation invariant
/// under contraction.
class WeightedGraph {
public:
    WeightedGraph() = default;

    int node_count() const { return offsets_.empty() ? 0 : static_cast<int>(offsets_.size()) - 1; }

    std::span<const Link> links(int u) const {
        return {links_.data() + offsets_[u], links_.data() + offsets_[u + 1]};
    }

    double strength(int u) const { return strength_[u]; }
    double self_loop(int u) const { return self_loop_[u]; }
    double strength_sum() const { return strength_sum_; }
    long long link_count() const { return static_cast<long long>(links_.size()); }

private:
    friend class GraphBuilder;

    std::vector<int> offsets_;
    std::vector<Link> links_;
    std::vector<double> strength_;
    std::vector<double> self_loop_;
    double strength_sum_ = 0.0;
};

class GraphBuilder {
public:
    explicit GraphBuilder(int node_count) : n_(node_count) {}

    void reserve_edges(std::size_t n) { edges_.reserve(n); }

    /// Adds the undirected edge {u, v}, u != v; both directions materialize.
    void add_edge(int u, int v, double w);

    /// Adds w to the matrix diagonal entry of u.
    void add_self_loop(int u, double matrix_entry);

    WeightedGraph build() const;

private:
    struct Edge {
        int u, v;
        double w;
    };
    int n_;
    std::vector<Edge> edges_;
    std::vector<std::pair<int, double>> self_loops_;
};

/// True if adjacency is symmetric with equal weights and free of duplicates.
bool check_symmetry(const WeightedGraph& g);

/// Connected component id per node (by BFS, ids dense in discovery order).
std::vector<int> connected_components(const WeightedGraph& g);

}  // namespace spx
