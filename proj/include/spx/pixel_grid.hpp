#pragma once

#include <iosfwd>

#include "spx/graph.hpp"
#include "spx/image.hpp"

namespace spx {

struct GridParams {
    int radius = 5;
    double rho = 0.98;
    double sigma = 125.0;
};

struct GridStats {
    long long vertex_count = 0;
    long long edge_count = 0;  // undirected edges counted once
    double total_weight = 0.0;
};

/// Gaussian similarity between two Lab colors: exp(-|p-q|^2 / (2 sigma^2)).
double edge_weight(const Lab& p, const Lab& q, double sigma);

/// Weighted grid over the pixels of an image. Candidate edges join pixels on
/// the same row or column at axis distance 1..radius; an edge is kept iff its
/// weight exceeds rho; pixels with no kept edge are omitted from the node set.
/// Node ids follow row-major pixel order over the retained pixels.
class PixelGrid {
public:
    int width() const { return width_; }
    int height() const { return height_; }
    const GridParams& params() const { return params_; }
    const WeightedGraph& graph() const { return graph_; }

    int node_count() const { return graph_.node_count(); }
    int node_pixel(int node) const { return node_pixel_[node]; }
    /// -1 when the pixel was dropped as isolated.
    int pixel_node(int pixel) const { return pixel_node_[pixel]; }

private:
    friend PixelGrid build_pixel_grid(const LabImage&, const GridParams&);

    GridParams params_;
    int width_ = 0;
    int height_ = 0;
    std::vector<int> node_pixel_;
    std::vector<int> pixel_node_;
    WeightedGraph graph_;
};

PixelGrid build_pixel_grid(const LabImage& img, const GridParams& params);

GridStats grid_stats(const PixelGrid& g);

/// Debug dump: one line "u v w" per undirected edge, u < v, row-major pixel ids.
void dump_edges(const PixelGrid& g, std::ostream& out);

}  // namespace spx
