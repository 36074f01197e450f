#include "spx/segmentation.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <queue>
#include <stdexcept>
#include <unordered_set>

#include "spx/metrics.hpp"

namespace spx {

Labeling partition_to_labeling(const Partition& part, const PixelGrid& grid) {
    if (static_cast<int>(part.assignment.size()) != grid.node_count()) {
        throw std::invalid_argument("partition_to_labeling: partition does not cover the grid");
    }
    const int w = grid.width(), h = grid.height();
    const int n = w * h;

    // Group key per pixel: community id, or a unique key for isolated pixels.
    std::vector<int> key(n);
    int next_isolated = part.community_count;
    for (int p = 0; p < n; ++p) {
        const int node = grid.pixel_node(p);
        key[p] = node >= 0 ? part.assignment[node] : next_isolated++;
    }

    // 4-connected components of equal keys, ids by first occurrence.
    Labeling lab;
    lab.width = w;
    lab.height = h;
    lab.ids.assign(n, -1);
    std::vector<int> stack;
    int next_id = 0;
    for (int start = 0; start < n; ++start) {
        if (lab.ids[start] >= 0) continue;
        const int id = next_id++;
        lab.ids[start] = id;
        stack.push_back(start);
        while (!stack.empty()) {
            const int p = stack.back();
            stack.pop_back();
            const int x = p % w, y = p / w;
            const int neighbors[4] = {x > 0 ? p - 1 : -1, x + 1 < w ? p + 1 : -1,
                                      y > 0 ? p - w : -1, y + 1 < h ? p + w : -1};
            for (int q : neighbors) {
                if (q >= 0 && lab.ids[q] < 0 && key[q] == key[p]) {
                    lab.ids[q] = id;
                    stack.push_back(q);
                }
            }
        }
    }
    lab.region_count = next_id;
    return lab;
}

RegionAdjacencyGraph build_rag(const Labeling& lab, const LabImage& img) {
    if (lab.width != img.width || lab.height != img.height) {
        throw std::invalid_argument("build_rag: labeling and image dimensions differ");
    }
    RegionAdjacencyGraph rag;
    rag.source = lab;
    rag.regions.resize(lab.region_count);
    for (int p = 0; p < lab.pixel_count(); ++p) {
        auto& region = rag.regions[lab.ids[p]];
        ++region.size;
        region.color_sum.l += img.pixels[p].l;
        region.color_sum.a += img.pixels[p].a;
        region.color_sum.b += img.pixels[p].b;
    }

    std::unordered_set<std::uint64_t> pairs;
    auto note = [&](int a, int b) {
        if (a == b) return;
        if (a > b) std::swap(a, b);
        pairs.insert((static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b));
    };
    for (int y = 0; y < lab.height; ++y) {
        for (int x = 0; x < lab.width; ++x) {
            if (x + 1 < lab.width) note(lab.at(x, y), lab.at(x + 1, y));
            if (y + 1 < lab.height) note(lab.at(x, y), lab.at(x, y + 1));
        }
    }
    rag.adjacency.resize(lab.region_count);
    for (std::uint64_t key : pairs) {
        const int a = static_cast<int>(key >> 32);
        const int b = static_cast<int>(key & 0xffffffffu);
        rag.adjacency[a].push_back(b);
        rag.adjacency[b].push_back(a);
    }
    for (auto& list : rag.adjacency) std::sort(list.begin(), list.end());
    return rag;
}

namespace {

struct MergeState {
    std::vector<int> parent;
    std::vector<bool> alive;
    std::vector<long long> size;
    std::vector<Lab> color_sum;
    std::vector<std::unordered_set<int>> neighbors;
    int live_count = 0;

    int find(int r) {
        while (parent[r] != r) {
            parent[r] = parent[parent[r]];
            r = parent[r];
        }
        return r;
    }

    Lab mean(int r) const {
        const double n = static_cast<double>(size[r]);
        return {color_sum[r].l / n, color_sum[r].a / n, color_sum[r].b / n};
    }
};

// Most similar live neighbor of region a; ties prefer the larger neighbor,
// then the lower id. The total order makes the choice independent of the
// neighbor set's iteration order.
int most_similar_neighbor(const MergeState& st, int a, double sigma) {
    const Lab mean_a = st.mean(a);
    int best = -1;
    double best_w = -1.0;
    for (int b : st.neighbors[a]) {
        const double w = edge_weight(mean_a, st.mean(b), sigma);
        if (w > best_w || (w == best_w && (st.size[b] > st.size[best] ||
                                           (st.size[b] == st.size[best] && b < best)))) {
            best_w = w;
            best = b;
        }
    }
    return best;
}

void absorb(MergeState& st, int a, int b) {
    assert(st.neighbors[a].count(b));  // merges only join RAG-adjacent regions
    st.parent[a] = b;
    st.alive[a] = false;
    st.size[b] += st.size[a];
    st.color_sum[b].l += st.color_sum[a].l;
    st.color_sum[b].a += st.color_sum[a].a;
    st.color_sum[b].b += st.color_sum[a].b;
    st.neighbors[b].erase(a);
    for (int x : st.neighbors[a]) {
        if (x == b) continue;
        st.neighbors[x].erase(a);
        st.neighbors[x].insert(b);
        st.neighbors[b].insert(x);
    }
    st.neighbors[a].clear();
    --st.live_count;
}

}  // namespace

Labeling merge_to_k(const RegionAdjacencyGraph& rag, int k, double sigma) {
    if (k < 1) throw std::invalid_argument("merge_to_k: k must be >= 1");
    const int initial = static_cast<int>(rag.regions.size());

    MergeState st;
    st.parent.resize(initial);
    st.alive.assign(initial, true);
    st.size.resize(initial);
    st.color_sum.resize(initial);
    st.neighbors.resize(initial);
    st.live_count = initial;
    for (int r = 0; r < initial; ++r) {
        st.parent[r] = r;
        st.size[r] = rag.regions[r].size;
        st.color_sum[r] = rag.regions[r].color_sum;
        st.neighbors[r].insert(rag.adjacency[r].begin(), rag.adjacency[r].end());
    }

    // Min-heap of (size, id) with lazy invalidation.
    using Entry = std::pair<long long, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;
    for (int r = 0; r < initial; ++r) heap.emplace(st.size[r], r);

    const double total_px = static_cast<double>(rag.source.pixel_count());
    const double phase_thresholds[3] = {total_px / (10.0 * k), total_px / k,
                                        std::numeric_limits<double>::infinity()};

    for (double threshold : phase_thresholds) {
        while (st.live_count > k) {
            // Smallest live region, ties to the lower id.
            while (!heap.empty()) {
                const auto [sz, r] = heap.top();
                if (!st.alive[r] || st.size[r] != sz) heap.pop();
                else break;
            }
            assert(!heap.empty());
            const auto [sz, r] = heap.top();
            if (!(static_cast<double>(sz) < threshold)) break;
            heap.pop();
            const int target = most_similar_neighbor(st, r, sigma);
            assert(target >= 0);
            absorb(st, r, target);
            heap.emplace(st.size[target], target);
        }
    }

    Labeling out;
    out.width = rag.source.width;
    out.height = rag.source.height;
    out.ids.resize(rag.source.ids.size());
    for (std::size_t p = 0; p < out.ids.size(); ++p) {
        out.ids[p] = st.find(rag.source.ids[p]);
    }
    densify_labeling(out);
    return out;
}

SegmentResult segment(const LabImage& img, const SegmentParams& params) {
    const PixelGrid grid =
        build_pixel_grid(img, GridParams{params.radius, params.rho, params.sigma});

    SegmentResult result;
    Partition part;
    if (grid.node_count() > 0) {
        switch (params.algorithm) {
            case Algorithm::label_propagation: {
                auto lp = label_propagation(grid.graph(), params.seed);
                part = std::move(lp.partition);
                result.lp_converged = lp.converged;
                break;
            }
            case Algorithm::louvain:
                part = louvain(grid.graph(), params.seed).partition;
                break;
            case Algorithm::infomap:
                part = infomap(grid.graph(), params.seed).partition;
                break;
        }
    }

    const Labeling pre_merge = partition_to_labeling(part, grid);
    result.pre_merge_regions = pre_merge.region_count;
    const RegionAdjacencyGraph rag = build_rag(pre_merge, img);
    result.labeling = merge_to_k(rag, params.superpixels, params.sigma);
    result.k_shortfall = result.labeling.region_count < params.superpixels;
    return result;
}

RgbImage overlay_boundaries(const RgbImage& img, const Labeling& lab) {
    if (lab.width != img.width || lab.height != img.height) {
        throw std::invalid_argument("overlay_boundaries: dimensions differ");
    }
    RgbImage out = img;
    const auto mask = boundary_pixels(lab);
    for (std::size_t p = 0; p < mask.size(); ++p) {
        if (mask[p]) out.pixels[p] = Rgb8{255, 0, 0};
    }
    return out;
}

}  // namespace spx
