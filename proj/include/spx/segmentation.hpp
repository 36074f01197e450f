#pragma once

#include <cstdint>
#include <vector>

#include "spx/communities.hpp"
#include "spx/image.hpp"
#include "spx/pixel_grid.hpp"

namespace spx {

/// Regions of a labeling with sizes, mean Lab colors and 4-adjacency. Keeps
/// the source labeling so merges can be projected back onto pixels.
struct RegionAdjacencyGraph {
    struct Region {
        long long size = 0;
        Lab color_sum;  // mean = color_sum / size
    };
    std::vector<Region> regions;
    std::vector<std::vector<int>> adjacency;  // sorted, symmetric
    Labeling source;

    Lab mean_color(int r) const {
        const double n = static_cast<double>(regions[r].size);
        return {regions[r].color_sum.l / n, regions[r].color_sum.a / n,
                regions[r].color_sum.b / n};
    }
};

/// Projects a graph partition onto pixels: pixels dropped from the grid
/// become singleton regions, every community is split into its 4-connected
/// components, ids are densified by first occurrence in row-major order.
Labeling partition_to_labeling(const Partition& part, const PixelGrid& grid);

RegionAdjacencyGraph build_rag(const Labeling& lab, const LabImage& img);

/// Merges regions down to k superpixels. Three phases, all of which stop at
/// region_count == k: first regions smaller than |I|/(10k) are absorbed, then
/// regions smaller than |I|/k, then the globally smallest regions. The
/// smallest region (ties: lower id) is merged into its most similar RAG
/// neighbor by Gaussian similarity of mean colors (ties: larger neighbor,
/// then lower id). When the initial region count is below k the input comes
/// back unchanged apart from densification (K-shortfall).
Labeling merge_to_k(const RegionAdjacencyGraph& rag, int k, double sigma);

struct SegmentParams {
    int radius = 5;
    double rho = 0.98;
    double sigma = 125.0;
    int superpixels = 1000;  // k
    Algorithm algorithm = Algorithm::infomap;
    std::uint64_t seed = 0;
};

struct SegmentResult {
    Labeling labeling;
    int pre_merge_regions = 0;
    bool k_shortfall = false;  // fewer regions than requested
    bool lp_converged = true;  // meaningful for label propagation only
};

/// Full pipeline: pixel grid, community detection, projection, RAG, merging.
SegmentResult segment(const LabImage& img, const SegmentParams& params);

/// Copy of the image with boundary pixels painted red, for inspection.
RgbImage overlay_boundaries(const RgbImage& img, const Labeling& lab);

}  // namespace spx
