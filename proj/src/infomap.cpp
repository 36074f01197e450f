#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "communities_detail.hpp"
#include "spx/communities.hpp"
#include "spx/image.hpp"

namespace spx {

namespace {

double plogp(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

// Module bookkeeping for local moves. All rates are normalized by the
// strength sum of the ORIGINAL graph, which contraction preserves, so the
// running codelength stays the true map equation of the induced partition
// across levels: the per-node term sum_a plogp(p_a) is a constant fixed at
// level 0 and lives in the caller. Module ids live in [0, n); vacant tracks
// the empty ones so nodes can split off.
struct ModuleState {
    const WeightedGraph* g = nullptr;
    double two_w = 0.0;
    std::vector<double> rate, node_exit;  // per node: p_a and its outward rate
    std::vector<int> comm;
    std::vector<double> exit;    // q_m
    std::vector<double> inside;  // p_m
    std::vector<int> module_size;
    std::vector<int> vacant;
    double exit_sum = 0.0;
    double exit_plogp_sum = 0.0;
    double combined_plogp_sum = 0.0;  // sum_m plogp(q_m + p_m)

    void init(const WeightedGraph& graph, std::vector<int> assignment) {
        g = &graph;
        two_w = graph.strength_sum();
        const int n = graph.node_count();
        comm = std::move(assignment);
        rate.resize(n);
        node_exit.resize(n);
        for (int u = 0; u < n; ++u) {
            rate[u] = graph.strength(u) / two_w;
            node_exit[u] = (graph.strength(u) - graph.self_loop(u)) / two_w;
        }
        exit.assign(n, 0.0);
        inside.assign(n, 0.0);
        module_size.assign(n, 0);
        for (int u = 0; u < n; ++u) {
            inside[comm[u]] += rate[u];
            ++module_size[comm[u]];
        }
        for (int u = 0; u < n; ++u) {
            for (const Link& l : graph.links(u)) {
                if (l.to != u && comm[l.to] != comm[u]) exit[comm[u]] += l.weight / two_w;
            }
        }
        vacant.clear();
        exit_sum = exit_plogp_sum = combined_plogp_sum = 0.0;
        for (int m = n - 1; m >= 0; --m) {
            if (module_size[m] == 0) vacant.push_back(m);
            exit_sum += exit[m];
            exit_plogp_sum += plogp(exit[m]);
            combined_plogp_sum += plogp(exit[m] + inside[m]);
        }
    }

    double three_terms() const {
        return plogp(exit_sum) - 2.0 * exit_plogp_sum + combined_plogp_sum;
    }

    // Codelength change of moving u into target, given u's normalized link
    // weight into its own module (w_old) and into the target (w_tgt).
    double delta(int u, int target, double w_old, double w_tgt) const {
        const int old_m = comm[u];
        const double old_exit_new = exit[old_m] - node_exit[u] + 2.0 * w_old;
        const double old_inside_new = inside[old_m] - rate[u];
        const double tgt_exit_new = exit[target] + node_exit[u] - 2.0 * w_tgt;
        const double tgt_inside_new = inside[target] + rate[u];
        const double exit_sum_new =
            exit_sum + (old_exit_new - exit[old_m]) + (tgt_exit_new - exit[target]);
        const double d_exit_plogp = plogp(old_exit_new) + plogp(tgt_exit_new) -
                                    plogp(exit[old_m]) - plogp(exit[target]);
        const double d_combined = plogp(old_exit_new + old_inside_new) +
                                  plogp(tgt_exit_new + tgt_inside_new) -
                                  plogp(exit[old_m] + inside[old_m]) -
                                  plogp(exit[target] + inside[target]);
        return plogp(exit_sum_new) - plogp(exit_sum) - 2.0 * d_exit_plogp + d_combined;
    }

    // target must be non-empty or the top of the vacant stack.
    void apply(int u, int target, double w_old, double w_tgt) {
        const int old_m = comm[u];
        const double old_exit_new = exit[old_m] - node_exit[u] + 2.0 * w_old;
        const double old_inside_new = inside[old_m] - rate[u];
        const double tgt_exit_new = exit[target] + node_exit[u] - 2.0 * w_tgt;
        const double tgt_inside_new = inside[target] + rate[u];
        exit_sum += (old_exit_new - exit[old_m]) + (tgt_exit_new - exit[target]);
        exit_sum = std::max(0.0, exit_sum);
        exit_plogp_sum += plogp(old_exit_new) + plogp(tgt_exit_new) - plogp(exit[old_m]) -
                          plogp(exit[target]);
        combined_plogp_sum += plogp(old_exit_new + old_inside_new) +
                              plogp(tgt_exit_new + tgt_inside_new) -
                              plogp(exit[old_m] + inside[old_m]) -
                              plogp(exit[target] + inside[target]);
        exit[old_m] = std::max(0.0, old_exit_new);
        inside[old_m] = std::max(0.0, old_inside_new);
        exit[target] = std::max(0.0, tgt_exit_new);
        inside[target] = tgt_inside_new;
        if (--module_size[old_m] == 0) vacant.push_back(old_m);
        if (module_size[target] == 0) vacant.pop_back();
        ++module_size[target];
        comm[u] = target;
    }
};

struct BestMove {
    int target = -1;
    double delta = 0.0;
    double w_old = 0.0;
    double w_tgt = 0.0;
};

// Best relocation of u over neighboring modules plus a vacant module
// (splitting off). With force_away the current module is not a candidate;
// target == current module then means "no move possible".
BestMove best_move(const ModuleState& st, detail::NeighborWeights& weights, int u,
                   bool force_away) {
    const WeightedGraph& g = *st.g;
    const int old_m = st.comm[u];
    weights.clear();
    weights.touch(old_m);
    for (const Link& l : g.links(u)) {
        if (l.to != u) weights.add(st.comm[l.to], l.weight / st.two_w);
    }
    const double w_old = weights.get(old_m);

    BestMove best{old_m, force_away ? std::numeric_limits<double>::infinity() : 0.0, w_old, 0.0};
    for (int cand : weights.touched()) {
        if (cand == old_m) continue;
        const double d = st.delta(u, cand, w_old, weights.get(cand));
        if (d < best.delta) best = {cand, d, w_old, weights.get(cand)};
    }
    // splitting off into a vacant module
    if (st.module_size[old_m] > 1 && !st.vacant.empty()) {
        const int spare = st.vacant.back();
        const double d = st.delta(u, spare, w_old, 0.0);
        if (d < best.delta) best = {spare, d, w_old, 0.0};
    }
    if (best.target == old_m && force_away) return {old_m, 0.0, w_old, 0.0};
    return best;
}

long hill_climb(ModuleState& st, detail::Rng& rng, const InfomapOptions& opts, double& l_running,
                std::vector<double>* trace) {
    const int n = st.g->node_count();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);

    detail::NeighborWeights weights(n);
    long accepted = 0;
    bool moved = true;
    while (moved) {
        moved = false;
        for (int u : order) {
            const BestMove mv = best_move(st, weights, u, false);
            if (mv.target != st.comm[u] && mv.delta < -opts.gain_tol) {
                st.apply(u, mv.target, mv.w_old, mv.w_tgt);
                moved = true;
                ++accepted;
                l_running += mv.delta;
                if (trace) trace->push_back(l_running);
            }
        }
    }
    return accepted;
}

// Kernighan-Lin style escape, mirroring the modularity side: force nodes to
// their least-bad alternatives, keep the best prefix when it lowers the
// codelength. best_first selects moves through a lazy min-heap re-evaluated
// at pop time; otherwise one forced sweep in random order.
bool escape_pass(ModuleState& st, detail::Rng& rng, const InfomapOptions& opts, double& l_running,
                 std::vector<double>* trace, bool best_first) {
    const int n = st.g->node_count();
    const std::vector<int> saved = st.comm;
    detail::NeighborWeights weights(n);

    struct Step {
        int node, target;
    };
    std::vector<Step> chain;
    double l = l_running, best_l = l_running;
    long best_prefix = -1;

    auto take = [&](int u, const BestMove& mv) {
        st.apply(u, mv.target, mv.w_old, mv.w_tgt);
        l += mv.delta;
        chain.push_back({u, mv.target});
        if (l < best_l - opts.gain_tol) {
            best_l = l;
            best_prefix = static_cast<long>(chain.size());
        }
    };

    if (best_first) {
        std::vector<int> rank(n);
        std::iota(rank.begin(), rank.end(), 0);
        rng.shuffle(rank);
        struct Entry {
            double delta;
            int rank;
            int node;
            bool operator<(const Entry& other) const {  // min-heap on delta
                if (delta != other.delta) return delta > other.delta;
                return rank < other.rank;
            }
        };
        std::priority_queue<Entry> heap;
        std::vector<bool> locked(n, false);
        for (int u = 0; u < n; ++u) {
            const BestMove mv = best_move(st, weights, u, true);
            if (mv.target != st.comm[u]) heap.push({mv.delta, rank[u], u});
            else locked[u] = true;
        }
        while (!heap.empty()) {
            const Entry top = heap.top();
            heap.pop();
            if (locked[top.node]) continue;
            const BestMove mv = best_move(st, weights, top.node, true);
            if (mv.target == st.comm[top.node]) {
                locked[top.node] = true;
                continue;
            }
            if (!heap.empty() && mv.delta > heap.top().delta) {
                heap.push({mv.delta, top.rank, top.node});
                continue;
            }
            locked[top.node] = true;
            take(top.node, mv);
        }
    } else {
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(order);
        for (int u : order) {
            const BestMove mv = best_move(st, weights, u, true);
            if (mv.target != st.comm[u]) take(u, mv);
        }
    }

    st.init(*st.g, saved);
    if (best_prefix < 0) return false;
    detail::NeighborWeights replay(n);
    for (long i = 0; i < best_prefix; ++i) {
        const int u = chain[i].node;
        replay.clear();
        replay.touch(st.comm[u]);
        for (const Link& lk : st.g->links(u)) {
            if (lk.to != u) replay.add(st.comm[lk.to], lk.weight / st.two_w);
        }
        st.apply(u, chain[i].target, replay.get(st.comm[u]), replay.get(chain[i].target));
    }
    l_running = best_l;
    if (trace) trace->push_back(l_running);
    return true;
}

long optimize(const WeightedGraph& g, std::vector<int>& comm, detail::Rng& rng,
              const InfomapOptions& opts, double& l_running, double node_term,
              std::vector<double>* trace) {
    const int kEscapeAttempts = g.link_count() <= 400000 ? 12 : 2;
    ModuleState st;
    st.init(g, std::move(comm));
    l_running = st.three_terms() - node_term;
    long accepted = hill_climb(st, rng, opts, l_running, trace);
    for (int attempt = 0; attempt < kEscapeAttempts; ++attempt) {
        if (!escape_pass(st, rng, opts, l_running, trace, attempt == 0)) continue;
        ++accepted;
        accepted += hill_climb(st, rng, opts, l_running, trace);
        attempt = -1;  // improvements reopen the attempt budget
    }
    comm = std::move(st.comm);
    return accepted;
}

std::vector<int> singletons(int n) {
    std::vector<int> comm(n);
    std::iota(comm.begin(), comm.end(), 0);
    return comm;
}

}  // namespace

InfomapResult infomap(const WeightedGraph& g, std::uint64_t seed, const InfomapOptions& opts) {
    const int n = g.node_count();
    if (n == 0) throw std::invalid_argument("infomap: empty graph");

    InfomapResult result;
    if (g.strength_sum() <= 0.0) {
        // Degenerate edgeless graph: singleton partition, L = 0 by convention.
        result.partition = detail::densify_partition(singletons(n));
        return result;
    }

    detail::Rng rng(seed);
    std::vector<double>* trace = opts.trace_quality ? &result.codelength_trace : nullptr;

    double node_term = 0.0;
    for (int u = 0; u < n; ++u) node_term += plogp(g.strength(u) / g.strength_sum());

    std::vector<int> mapping = singletons(n);
    WeightedGraph level_graph = g;
    double l_running = 0.0;
    if (trace) {
        ModuleState probe;
        probe.init(g, singletons(n));
        trace->push_back(probe.three_terms() - node_term);
    }

    while (true) {
        std::vector<int> comm = singletons(level_graph.node_count());
        const long accepted = optimize(level_graph, comm, rng, opts, l_running, node_term, trace);
        if (accepted > 0) {
            const int comm_count = spx::densify_ids(comm);
            for (int& m : mapping) m = comm[m];
            level_graph = detail::contract(level_graph, comm, comm_count);
            ++result.levels;
            continue;
        }
        // Level converged; refine over single original nodes, then restart
        // from the refined partition when that found anything.
        std::vector<int> refined(n);
        for (int v = 0; v < n; ++v) refined[v] = comm[mapping[v]];
        spx::densify_ids(refined);
        if (optimize(g, refined, rng, opts, l_running, node_term, trace) == 0) {
            mapping = std::move(refined);
            break;
        }
        spx::densify_ids(refined);
        mapping = refined;
        level_graph = detail::contract(
            g, refined, *std::max_element(refined.begin(), refined.end()) + 1);
        ++result.levels;
    }

    result.partition = detail::densify_partition(std::move(mapping));
    return result;
}

}  // namespace spx
