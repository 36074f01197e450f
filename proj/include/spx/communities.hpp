#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spx/graph.hpp"

namespace spx {

/// Node id -> community id, ids dense in [0, community_count).
struct Partition {
    std::vector<int> assignment;
    int community_count = 0;
};

enum class Algorithm { label_propagation, louvain, infomap };

const char* algorithm_name(Algorithm a);
Algorithm parse_algorithm(const std::string& name);

// ---------------------------------------------------------------------------
// Label Propagation

struct LabelPropagationOptions {
    int max_sweeps = 100;
    bool weighted = true;  // sum incident edge weights per label; false counts neighbors
};

struct LabelPropagationResult {
    Partition partition;
    bool converged = false;
    int sweeps = 0;
};

/// Starts from per-node labels, sweeps nodes in a seeded shuffle and assigns
/// each node the (weighted) majority label of its neighborhood. Ties keep the
/// current label when it is among the majority set, otherwise take the lowest
/// label id. Converged when a full sweep changes nothing.
LabelPropagationResult label_propagation(const WeightedGraph& g, std::uint64_t seed,
                                         const LabelPropagationOptions& opts = {});

// ---------------------------------------------------------------------------
// Modularity / Louvain

/// Q = sum_c [ in_c / 2W - (S_c / 2W)^2 ], in_c the adjacency-matrix sum over
/// c x c and S_c the community strength. Throws on zero-weight graphs.
double modularity(const WeightedGraph& g, const Partition& part);

struct LouvainOptions {
    double gain_tol = 1e-12;
    bool trace_quality = false;  // record Q after every accepted move
};

struct LouvainResult {
    Partition partition;
    std::vector<double> quality_trace;
    int levels = 0;
};

/// Greedy modularity maximization: local moves to the neighboring community
/// of maximal positive gain (seeded node order, shuffled once per level),
/// then contraction of communities to super-nodes, repeated until a level
/// yields no move.
LouvainResult louvain(const WeightedGraph& g, std::uint64_t seed, const LouvainOptions& opts = {});

// ---------------------------------------------------------------------------
// Map equation / Infomap

/// Two-level map equation in bits for an undirected walk (p_a proportional to
/// strength, no teleportation), 0 log 0 = 0. Throws on zero-weight graphs.
double map_equation(const WeightedGraph& g, const Partition& part);

struct InfomapOptions {
    double gain_tol = 1e-12;
    bool trace_quality = false;  // record L after every accepted move
};

struct InfomapResult {
    Partition partition;
    std::vector<double> codelength_trace;
    int levels = 0;
};

/// Greedy map-equation minimization with Louvain-style local moves and
/// contraction, starting from singletons. A zero-weight graph degenerates to
/// the singleton partition (L = 0 by convention).
InfomapResult infomap(const WeightedGraph& g, std::uint64_t seed, const InfomapOptions& opts = {});

// ---------------------------------------------------------------------------
// Batch statistics

struct PartitionSummary {
    int community_count = 0;
    int max_size = 0;
    int min_size = 0;
};

PartitionSummary summarize_partition(const Partition& part);

/// Mean and population standard deviation of count / max size / min size
/// across a batch of partitions.
struct CommunityStats {
    double count_mean = 0.0, count_std = 0.0;
    double max_size_mean = 0.0, max_size_std = 0.0;
    double min_size_mean = 0.0, min_size_std = 0.0;
    int batch_size = 0;
};

CommunityStats community_stats(std::span<const PartitionSummary> batch);

}  // namespace spx
