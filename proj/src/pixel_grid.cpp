#include "spx/pixel_grid.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace spx {

double edge_weight(const Lab& p, const Lab& q, double sigma) {
    return std::exp(-lab_distance_sq(p, q) / (2.0 * sigma * sigma));
}

PixelGrid build_pixel_grid(const LabImage& img, const GridParams& params) {
    if (img.width < 1 || img.height < 1 || img.pixels.empty()) {
        throw std::invalid_argument("build_pixel_grid: empty image");
    }
    if (params.radius < 1) throw std::invalid_argument("build_pixel_grid: radius must be >= 1");
    if (params.rho < 0.0 || params.rho >= 1.0) throw std::invalid_argument("build_pixel_grid: rho must be in [0,1)");
    if (params.sigma <= 0.0) throw std::invalid_argument("build_pixel_grid: sigma must be positive");

    const int w = img.width;
    const int h = img.height;
    const int r = params.radius;

    struct KeptEdge {
        int u, v;
        double weight;
    };
    std::vector<KeptEdge> kept;
    kept.reserve(static_cast<std::size_t>(2) * r * w * h);
    std::vector<bool> touched(static_cast<std::size_t>(w) * h, false);

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int p = y * w + x;
            for (int d = 1; d <= r; ++d) {
                if (x + d < w) {
                    const int q = p + d;
                    const double wgt = edge_weight(img.pixels[p], img.pixels[q], params.sigma);
                    if (wgt > params.rho) {
                        kept.push_back({p, q, wgt});
                        touched[p] = touched[q] = true;
                    }
                }
                if (y + d < h) {
                    const int q = p + d * w;
                    const double wgt = edge_weight(img.pixels[p], img.pixels[q], params.sigma);
                    if (wgt > params.rho) {
                        kept.push_back({p, q, wgt});
                        touched[p] = touched[q] = true;
                    }
                }
            }
        }
    }

    PixelGrid grid;
    grid.params_ = params;
    grid.width_ = w;
    grid.height_ = h;
    grid.pixel_node_.assign(static_cast<std::size_t>(w) * h, -1);
    for (int p = 0; p < w * h; ++p) {
        if (touched[p]) {
            grid.pixel_node_[p] = static_cast<int>(grid.node_pixel_.size());
            grid.node_pixel_.push_back(p);
        }
    }

    GraphBuilder builder(static_cast<int>(grid.node_pixel_.size()));
    builder.reserve_edges(kept.size());
    for (const KeptEdge& e : kept) {
        builder.add_edge(grid.pixel_node_[e.u], grid.pixel_node_[e.v], e.weight);
    }
    grid.graph_ = builder.build();
    return grid;
}

GridStats grid_stats(const PixelGrid& g) {
    GridStats stats;
    stats.vertex_count = g.node_count();
    stats.edge_count = g.graph().link_count() / 2;
    double sum = 0.0;
    for (int u = 0; u < g.node_count(); ++u) sum += g.graph().strength(u);
    stats.total_weight = sum / 2.0;
    return stats;
}

void dump_edges(const PixelGrid& g, std::ostream& out) {
    char line[80];
    for (int u = 0; u < g.node_count(); ++u) {
        const int up = g.node_pixel(u);
        for (const Link& l : g.graph().links(u)) {
            const int vp = g.node_pixel(l.to);
            if (up < vp) {
                std::snprintf(line, sizeof(line), "%d %d %.12g\n", up, vp, l.weight);
                out << line;
            }
        }
    }
}

}  // namespace spx
