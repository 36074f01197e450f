#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "communities_detail.hpp"
#include "spx/communities.hpp"
#include "spx/image.hpp"

namespace spx {

namespace {

// Mutable community state during one optimization phase. Community ids live
// in [0, n); vacant tracks the empty ones so nodes can split off.
struct MoveState {
    const WeightedGraph* g = nullptr;
    double w = 0.0;  // total undirected weight
    std::vector<int> comm;
    std::vector<double> comm_strength;
    std::vector<int> comm_size;
    std::vector<int> vacant;

    void init(const WeightedGraph& graph, std::vector<int> assignment) {
        g = &graph;
        w = graph.strength_sum() / 2.0;
        comm = std::move(assignment);
        const int n = graph.node_count();
        comm_strength.assign(n, 0.0);
        comm_size.assign(n, 0);
        for (int u = 0; u < n; ++u) {
            comm_strength[comm[u]] += graph.strength(u);
            ++comm_size[comm[u]];
        }
        vacant.clear();
        for (int c = n - 1; c >= 0; --c) {
            if (comm_size[c] == 0) vacant.push_back(c);
        }
    }

    // to must be non-empty or the top of the vacant stack.
    void apply(int u, int to) {
        const int from = comm[u];
        const double s_u = g->strength(u);
        comm_strength[from] -= s_u;
        if (--comm_size[from] == 0) vacant.push_back(from);
        if (comm_size[to] == 0) vacant.pop_back();
        comm_strength[to] += s_u;
        ++comm_size[to];
        comm[u] = to;
    }
};

struct BestMove {
    int target = -1;
    double delta = 0.0;  // exact modularity change of moving there
};

// Best relocation of u over neighboring communities plus a vacant community
// (splitting off). The returned delta is relative to the current placement
// and may be negative. With force_away the current community is not a
// candidate, so the move is the least-bad departure (Kernighan-Lin style);
// target == current community then means "no move possible". A non-null
// within restricts candidates to neighbors in the same within-block as u.
BestMove best_move(MoveState& st, detail::NeighborWeights& weights, int u, bool force_away,
                   const std::vector<int>* within = nullptr) {
    const WeightedGraph& g = *st.g;
    const int old_comm = st.comm[u];
    weights.clear();
    weights.touch(old_comm);
    for (const Link& l : g.links(u)) {
        if (l.to == u) continue;
        if (within && (*within)[l.to] != (*within)[u]) continue;
        weights.add(st.comm[l.to], l.weight);
    }

    const double s_u = g.strength(u);
    st.comm_strength[old_comm] -= s_u;

    // gain(C) = w(u,C)/W - S_C * s_u / (2 W^2), relative to u isolated.
    auto gain = [&](int c) {
        return weights.get(c) / st.w - st.comm_strength[c] * s_u / (2.0 * st.w * st.w);
    };

    const double old_gain = gain(old_comm);
    int best = old_comm;
    double best_gain = force_away ? -std::numeric_limits<double>::infinity() : old_gain;
    for (int cand : weights.touched()) {
        if (cand == old_comm) continue;
        const double cand_gain = gain(cand);
        if (cand_gain > best_gain) {
            best_gain = cand_gain;
            best = cand;
        }
    }
    // splitting off into a vacant community scores gain 0 by definition
    if (best_gain < 0.0 && st.comm_size[old_comm] > 1 && !st.vacant.empty()) {
        best = st.vacant.back();
        best_gain = 0.0;
    }

    st.comm_strength[old_comm] += s_u;
    if (best == old_comm && force_away) return {old_comm, 0.0};
    return {best, best_gain - old_gain};
}

// Sweeps until no single move improves modularity by more than the
// tolerance. Every accepted move advances q_running by its exact delta.
long hill_climb(MoveState& st, detail::Rng& rng, const LouvainOptions& opts, double& q_running,
                std::vector<double>* trace, const std::vector<int>* within = nullptr) {
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
            const BestMove mv = best_move(st, weights, u, false, within);
            if (mv.target != st.comm[u] && mv.delta > opts.gain_tol) {
                st.apply(u, mv.target);
                moved = true;
                ++accepted;
                q_running += mv.delta;
                if (trace) trace->push_back(q_running);
            }
        }
    }
    return accepted;
}

// Kernighan-Lin style escape: force every node once to its best alternative
// even at a loss, always taking the least-bad available move next, then keep
// the best prefix of that move chain. Commits only when the prefix improves
// on the starting partition; the quality trace records the committed state
// once. Selection runs over a lazy max-heap whose entries are re-evaluated
// exactly at pop time, so stale priorities never corrupt the bookkeeping.
bool escape_pass(MoveState& st, detail::Rng& rng, const LouvainOptions& opts, double& q_running,
                 std::vector<double>* trace, bool best_first) {
    const int n = st.g->node_count();
    const std::vector<int> saved = st.comm;
    detail::NeighborWeights weights(n);

    struct Step {
        int node, target;
    };
    std::vector<Step> chain;
    double q = q_running, best_q = q_running;
    long best_prefix = -1;

    auto take = [&](int u, const BestMove& mv) {
        st.apply(u, mv.target);
        q += mv.delta;
        chain.push_back({u, mv.target});
        if (q > best_q + opts.gain_tol) {
            best_q = q;
            best_prefix = static_cast<long>(chain.size());
        }
    };

    if (best_first) {
        // lazy max-heap; entries re-evaluated exactly at pop time so stale
        // priorities never corrupt the bookkeeping, ties broken by rank
        std::vector<int> rank(n);
        std::iota(rank.begin(), rank.end(), 0);
        rng.shuffle(rank);
        struct Entry {
            double delta;
            int rank;
            int node;
            bool operator<(const Entry& other) const {
                if (delta != other.delta) return delta < other.delta;
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
            // yield when the refreshed delta falls behind the runner-up
            if (!heap.empty() && mv.delta < heap.top().delta) {
                heap.push({mv.delta, top.rank, top.node});
                continue;
            }
            locked[top.node] = true;
            take(top.node, mv);
        }
    } else {
        // one forced sweep in random order, for sequence diversity
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(order);
        for (int u : order) {
            const BestMove mv = best_move(st, weights, u, true);
            if (mv.target != st.comm[u]) take(u, mv);
        }
    }

    // rewind to the starting partition, then replay the winning prefix
    st.init(*st.g, saved);
    if (best_prefix < 0) return false;
    for (long i = 0; i < best_prefix; ++i) st.apply(chain[i].node, chain[i].target);
    q_running = best_q;
    if (trace) trace->push_back(q_running);
    return true;
}

std::vector<int> singletons(int n) {
    std::vector<int> comm(n);
    std::iota(comm.begin(), comm.end(), 0);
    return comm;
}

// Full optimization of one graph from the given assignment: alternate hill
// climbing with escape passes until neither finds anything. Failed escape
// attempts retry with fresh tie-breaking ranks a couple of times.
long optimize(const WeightedGraph& g, std::vector<int>& comm, detail::Rng& rng,
              const LouvainOptions& opts, double& q_running, std::vector<double>* trace) {
    const int kEscapeAttempts = g.link_count() <= 400000 ? 12 : 2;
    MoveState st;
    st.init(g, std::move(comm));
    long accepted = hill_climb(st, rng, opts, q_running, trace);
    for (int attempt = 0; attempt < kEscapeAttempts; ++attempt) {
        if (!escape_pass(st, rng, opts, q_running, trace, attempt == 0)) continue;
        ++accepted;
        accepted += hill_climb(st, rng, opts, q_running, trace);
        attempt = -1;  // improvements reopen the attempt budget
    }
    comm = std::move(st.comm);
    return accepted;
}

// Splits every community into locally coherent sub-communities (greedy moves
// restricted within community borders). The working partition is untouched;
// the sub-partition only sets the contraction granularity, so a community
// glued together too early can later migrate in pieces.
std::vector<int> refine_within(const WeightedGraph& g, const std::vector<int>& comm,
                               detail::Rng& rng, const LouvainOptions& opts) {
    MoveState st;
    st.init(g, singletons(g.node_count()));
    double q_scratch = 0.0;  // quality of the throwaway sub-partition, untraced
    hill_climb(st, rng, opts, q_scratch, nullptr, &comm);
    return std::move(st.comm);
}

}  // namespace

LouvainResult louvain(const WeightedGraph& g, std::uint64_t seed, const LouvainOptions& opts) {
    if (g.node_count() == 0) throw std::invalid_argument("louvain: empty graph");
    if (g.strength_sum() <= 0.0) throw std::invalid_argument("louvain: zero-weight graph");

    detail::Rng rng(seed);
    LouvainResult result;
    std::vector<double>* trace = opts.trace_quality ? &result.quality_trace : nullptr;

    // mapping: original node -> node of the current level graph.
    // init: level node -> community; the induced working partition is
    // init[mapping[.]] and q_running is always its exact modularity.
    std::vector<int> mapping = singletons(g.node_count());
    std::vector<int> init = singletons(g.node_count());

    WeightedGraph level_graph = g;
    double q_running = [&] {
        Partition start;
        start.assignment = singletons(g.node_count());
        start.community_count = g.node_count();
        return modularity(g, start);
    }();
    if (trace) trace->push_back(q_running);

    std::vector<int> final_partition;
    while (true) {
        std::vector<int> comm = init;
        const long accepted = optimize(level_graph, comm, rng, opts, q_running, trace);

        if (accepted == 0) {
            // Aggregation is stable at this granularity. Refine over single
            // original nodes, which can still cross borders that whole
            // super-nodes cannot, and restart from the refined partition.
            std::vector<int> current(g.node_count());
            for (int v = 0; v < g.node_count(); ++v) current[v] = comm[mapping[v]];
            spx::densify_ids(current);
            if (optimize(g, current, rng, opts, q_running, trace) == 0) {
                final_partition = std::move(current);
                break;
            }
            spx::densify_ids(current);
            mapping = current;
            level_graph = detail::contract(
                g, current, *std::max_element(current.begin(), current.end()) + 1);
            init = singletons(level_graph.node_count());
            ++result.levels;
            continue;
        }

        // Contract by the refined sub-partition and carry the coarse
        // assignment over as the next level's starting point.
        spx::densify_ids(comm);
        std::vector<int> sub = refine_within(level_graph, comm, rng, opts);
        const int sub_count = spx::densify_ids(sub);
        std::vector<int> next_init(sub_count, 0);
        for (int v = 0; v < level_graph.node_count(); ++v) next_init[sub[v]] = comm[v];
        for (int& m : mapping) m = sub[m];
        level_graph = detail::contract(level_graph, sub, sub_count);
        init = std::move(next_init);
        ++result.levels;
    }

    result.partition = detail::densify_partition(std::move(final_partition));
    return result;
}

}  // namespace spx
