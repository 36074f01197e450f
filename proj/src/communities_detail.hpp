#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "spx/communities.hpp"
#include "spx/graph.hpp"

namespace spx::detail {

/// Deterministic RNG helper. Index generation avoids std::shuffle and
/// std::uniform_int_distribution, whose sequences are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    std::uint64_t next_below(std::uint64_t n) { return engine_() % n; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[next_below(i)]);
        }
    }

private:
    std::mt19937_64 engine_;
};

void validate_partition(const WeightedGraph& g, const Partition& part);

/// Renumbers community ids to [0, k) by first occurrence in node order.
Partition densify_partition(std::vector<int> assignment);

/// Community quotient graph. Edge weight between communities c != d is the
/// matrix sum over c x d; the self-loop entry of c is the matrix sum over
/// c x c (twice the internal undirected weight).
WeightedGraph contract(const WeightedGraph& g, const std::vector<int>& comm, int comm_count);

/// Scratch accumulator for per-community link weights around a single node;
/// touched entries are visited in insertion order so argmax scans are
/// deterministic. Weights must be non-negative (-1 marks absent slots).
class NeighborWeights {
public:
    explicit NeighborWeights(int comm_count) : weight_(comm_count, -1.0) {}

    void clear() {
        for (int c : touched_) weight_[c] = -1.0;
        touched_.clear();
    }

    void add(int c, double w) {
        if (weight_[c] < 0.0) {
            weight_[c] = w;
            touched_.push_back(c);
        } else {
            weight_[c] += w;
        }
    }

    void touch(int c) { add(c, 0.0); }

    double get(int c) const { return weight_[c] < 0.0 ? 0.0 : weight_[c]; }
    const std::vector<int>& touched() const { return touched_; }

private:
    std::vector<double> weight_;
    std::vector<int> touched_;
};

}  // namespace spx::detail
