#include "spx/communities.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "communities_detail.hpp"
#include "spx/image.hpp"

namespace spx {

const char* algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::label_propagation: return "label-propagation";
        case Algorithm::louvain: return "louvain";
        case Algorithm::infomap: return "infomap";
    }
    return "?";
}

Algorithm parse_algorithm(const std::string& name) {
    if (name == "label-propagation" || name == "lp") return Algorithm::label_propagation;
    if (name == "louvain") return Algorithm::louvain;
    if (name == "infomap") return Algorithm::infomap;
    throw std::invalid_argument("unknown algorithm: " + name);
}

namespace detail {

void validate_partition(const WeightedGraph& g, const Partition& part) {
    if (static_cast<int>(part.assignment.size()) != g.node_count()) {
        throw std::invalid_argument("partition does not cover the graph");
    }
    for (int c : part.assignment) {
        if (c < 0 || c >= part.community_count) {
            throw std::invalid_argument("partition has out-of-range community id");
        }
    }
}

Partition densify_partition(std::vector<int> assignment) {
    Partition part;
    part.assignment = std::move(assignment);
    part.community_count = spx::densify_ids(part.assignment);
    return part;
}

WeightedGraph contract(const WeightedGraph& g, const std::vector<int>& comm, int comm_count) {
    // Accumulate matrix entries per community pair; each CSR link is one
    // ordered pair, so internal u!=v edges land on the diagonal twice.
    std::vector<std::vector<std::pair<int, double>>> rows(comm_count);
    {
        std::vector<double> acc(comm_count, -1.0);
        std::vector<int> touched;
        for (int c = 0; c < comm_count; ++c) rows[c].reserve(4);
        std::vector<std::vector<int>> members(comm_count);
        for (int u = 0; u < g.node_count(); ++u) members[comm[u]].push_back(u);
        for (int c = 0; c < comm_count; ++c) {
            touched.clear();
            for (int u : members[c]) {
                for (const Link& l : g.links(u)) {
                    const int d = comm[l.to];
                    if (acc[d] < 0.0) {
                        acc[d] = l.weight;
                        touched.push_back(d);
                    } else {
                        acc[d] += l.weight;
                    }
                }
            }
            std::sort(touched.begin(), touched.end());
            for (int d : touched) {
                rows[c].emplace_back(d, acc[d]);
                acc[d] = -1.0;
            }
        }
    }

    GraphBuilder builder(comm_count);
    for (int c = 0; c < comm_count; ++c) {
        for (const auto& [d, w] : rows[c]) {
            if (d == c) {
                builder.add_self_loop(c, w);
            } else if (c < d) {
                builder.add_edge(c, d, w);
            }
        }
    }
    return builder.build();
}

}  // namespace detail

double modularity(const WeightedGraph& g, const Partition& part) {
    detail::validate_partition(g, part);
    const double two_w = g.strength_sum();
    if (two_w <= 0.0) throw std::invalid_argument("modularity: zero-weight graph");

    std::vector<double> internal(part.community_count, 0.0);
    std::vector<double> total(part.community_count, 0.0);
    for (int u = 0; u < g.node_count(); ++u) {
        const int c = part.assignment[u];
        total[c] += g.strength(u);
        for (const Link& l : g.links(u)) {
            if (part.assignment[l.to] == c) internal[c] += l.weight;
        }
    }
    double q = 0.0;
    for (int c = 0; c < part.community_count; ++c) {
        const double frac = total[c] / two_w;
        q += internal[c] / two_w - frac * frac;
    }
    return q;
}

double map_equation(const WeightedGraph& g, const Partition& part) {
    detail::validate_partition(g, part);
    const double two_w = g.strength_sum();
    if (two_w <= 0.0) throw std::invalid_argument("map_equation: zero-weight graph");

    auto plogp = [](double x) { return x > 0.0 ? x * std::log2(x) : 0.0; };

    std::vector<double> exit(part.community_count, 0.0);   // q_m
    std::vector<double> inside(part.community_count, 0.0); // p_m
    double node_term = 0.0;                                // sum_a plogp(p_a)
    for (int u = 0; u < g.node_count(); ++u) {
        const int c = part.assignment[u];
        const double p_u = g.strength(u) / two_w;
        inside[c] += p_u;
        node_term += plogp(p_u);
        for (const Link& l : g.links(u)) {
            if (l.to != u && part.assignment[l.to] != c) exit[c] += l.weight / two_w;
        }
    }

    double exit_sum = 0.0, exit_term = 0.0, module_term = 0.0;
    for (int m = 0; m < part.community_count; ++m) {
        exit_sum += exit[m];
        exit_term += plogp(exit[m]);
        module_term += plogp(exit[m] + inside[m]);
    }
    return plogp(exit_sum) - 2.0 * exit_term + module_term - node_term;
}

PartitionSummary summarize_partition(const Partition& part) {
    if (part.assignment.empty()) throw std::invalid_argument("summarize_partition: empty partition");
    std::vector<int> sizes(part.community_count, 0);
    for (int c : part.assignment) ++sizes[c];
    PartitionSummary s;
    s.community_count = part.community_count;
    s.max_size = *std::max_element(sizes.begin(), sizes.end());
    s.min_size = *std::min_element(sizes.begin(), sizes.end());
    return s;
}

CommunityStats community_stats(std::span<const PartitionSummary> batch) {
    if (batch.empty()) throw std::invalid_argument("community_stats: empty batch");

    auto mean_std = [&](auto field) {
        double mean = 0.0;
        for (const PartitionSummary& s : batch) mean += field(s);
        mean /= static_cast<double>(batch.size());
        double var = 0.0;
        for (const PartitionSummary& s : batch) {
            const double d = field(s) - mean;
            var += d * d;
        }
        var /= static_cast<double>(batch.size());  // population std
        return std::pair{mean, std::sqrt(var)};
    };

    CommunityStats out;
    out.batch_size = static_cast<int>(batch.size());
    std::tie(out.count_mean, out.count_std) =
        mean_std([](const PartitionSummary& s) { return s.community_count; });
    std::tie(out.max_size_mean, out.max_size_std) =
        mean_std([](const PartitionSummary& s) { return s.max_size; });
    std::tie(out.min_size_mean, out.min_size_std) =
        mean_std([](const PartitionSummary& s) { return s.min_size; });
    return out;
}

}  // namespace spx
