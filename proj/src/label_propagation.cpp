#include <numeric>
#include <stdexcept>

#include "communities_detail.hpp"
#include "spx/communities.hpp"

namespace spx {

LabelPropagationResult label_propagation(const WeightedGraph& g, std::uint64_t seed,
                                         const LabelPropagationOptions& opts) {
    const int n = g.node_count();
    if (n == 0) throw std::invalid_argument("label_propagation: empty graph");

    std::vector<int> label(n);
    std::iota(label.begin(), label.end(), 0);

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    detail::Rng rng(seed);
    detail::NeighborWeights votes(n);

    LabelPropagationResult result;
    while (result.sweeps < opts.max_sweeps) {
        rng.shuffle(order);
        ++result.sweeps;
        int changes = 0;
        for (int u : order) {
            votes.clear();
            for (const Link& l : g.links(u)) {
                if (l.to == u) continue;
                votes.add(label[l.to], opts.weighted ? l.weight : 1.0);
            }
            if (votes.touched().empty()) continue;

            // Majority label; among ties keep the current label when present,
            // otherwise the lowest label id.
            double best_w = -1.0;
            int best = -1;
            bool current_tied = false;
            for (int cand : votes.touched()) {
                const double w = votes.get(cand);
                if (w > best_w) {
                    best_w = w;
                    best = cand;
                    current_tied = (cand == label[u]);
                } else if (w == best_w) {
                    if (cand == label[u]) current_tied = true;
                    if (cand < best) best = cand;
                }
            }
            const int chosen = current_tied ? label[u] : best;
            if (chosen != label[u]) {
                label[u] = chosen;
                ++changes;
            }
        }
        if (changes == 0) {
            result.converged = true;
            break;
        }
    }

    result.partition = detail::densify_partition(std::move(label));
    return result;
}

}  // namespace spx
