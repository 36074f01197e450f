#include "spx/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace spx {

namespace {

void require_same_dims(const Labeling& a, const Labeling& b) {
    if (a.width != b.width || a.height != b.height) {
        throw std::invalid_argument("labeling dimension mismatch");
    }
}

// Contingency counts |S_j cap G_i| keyed by (gt id, seg id).
std::unordered_map<std::uint64_t, long long> contingency(const Labeling& gt, const Labeling& seg) {
    std::unordered_map<std::uint64_t, long long> table;
    table.reserve(static_cast<std::size_t>(gt.region_count) * 2);
    for (int p = 0; p < gt.pixel_count(); ++p) {
        const std::uint64_t key =
            (static_cast<std::uint64_t>(gt.ids[p]) << 32) | static_cast<std::uint32_t>(seg.ids[p]);
        ++table[key];
    }
    return table;
}

std::vector<long long> region_sizes(const Labeling& lab) {
    std::vector<long long> sizes(lab.region_count, 0);
    for (int id : lab.ids) ++sizes[id];
    return sizes;
}

}  // namespace

std::vector<bool> boundary_pixels(const Labeling& lab) {
    std::vector<bool> mask(static_cast<std::size_t>(lab.width) * lab.height, false);
    for (int y = 0; y < lab.height; ++y) {
        const int row = y * lab.width;
        for (int x = 0; x < lab.width; ++x) {
            const int id = lab.ids[row + x];
            if ((x + 1 < lab.width && lab.ids[row + x + 1] != id) ||
                (y + 1 < lab.height && lab.ids[row + lab.width + x] != id)) {
                mask[row + x] = true;
            }
        }
    }
    return mask;
}

double boundary_recall(const Labeling& gt, const Labeling& seg, int tol) {
    require_same_dims(gt, seg);
    if (tol < 0) throw std::invalid_argument("boundary_recall: tol must be >= 0");
    const auto gt_mask = boundary_pixels(gt);
    const auto seg_mask = boundary_pixels(seg);
    const int w = gt.width, h = gt.height;

    long long tp = 0, fn = 0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!gt_mask[static_cast<std::size_t>(y) * w + x]) continue;
            bool hit = false;
            const int y0 = std::max(0, y - tol), y1 = std::min(h - 1, y + tol);
            const int x0 = std::max(0, x - tol), x1 = std::min(w - 1, x + tol);
            for (int sy = y0; sy <= y1 && !hit; ++sy) {
                for (int sx = x0; sx <= x1; ++sx) {
                    if (seg_mask[static_cast<std::size_t>(sy) * w + sx]) {
                        hit = true;
                        break;
                    }
                }
            }
            if (hit) ++tp; else ++fn;
        }
    }
    if (tp + fn == 0) return 1.0;
    return static_cast<double>(tp) / static_cast<double>(tp + fn);
}

double undersegmentation_error(const Labeling& gt, const Labeling& seg) {
    require_same_dims(gt, seg);
    const auto table = contingency(gt, seg);
    const auto seg_sizes = region_sizes(seg);

    long long total = 0;
    for (const auto& [key, inter] : table) {
        const long long seg_size = seg_sizes[static_cast<std::uint32_t>(key & 0xffffffffu)];
        total += std::min(inter, seg_size - inter);
    }
    return static_cast<double>(total) / gt.pixel_count();
}

double ue_levin(const Labeling& gt, const Labeling& seg) {
    require_same_dims(gt, seg);
    const auto table = contingency(gt, seg);
    const auto gt_sizes = region_sizes(gt);
    const auto seg_sizes = region_sizes(seg);

    std::vector<long long> covered(gt.region_count, 0);
    for (const auto& [key, inter] : table) {
        covered[key >> 32] += seg_sizes[static_cast<std::uint32_t>(key & 0xffffffffu)];
    }
    double total = 0.0;
    for (int i = 0; i < gt.region_count; ++i) {
        total += static_cast<double>(covered[i] - gt_sizes[i]) / static_cast<double>(gt_sizes[i]);
    }
    return total / gt.region_count;
}

double explained_variation(const LabImage& img, const Labeling& seg) {
    if (img.width != seg.width || img.height != seg.height) {
        throw std::invalid_argument("labeling dimension mismatch");
    }
    const int n = img.pixel_count();

    Lab mu{0, 0, 0};
    for (const Lab& p : img.pixels) {
        mu.l += p.l;
        mu.a += p.a;
        mu.b += p.b;
    }
    mu.l /= n; mu.a /= n; mu.b /= n;

    std::vector<Lab> sums(seg.region_count, Lab{0, 0, 0});
    const auto sizes = region_sizes(seg);
    double denom = 0.0;
    for (int p = 0; p < n; ++p) {
        Lab& s = sums[seg.ids[p]];
        s.l += img.pixels[p].l;
        s.a += img.pixels[p].a;
        s.b += img.pixels[p].b;
        denom += lab_distance_sq(img.pixels[p], mu);
    }
    if (denom == 0.0) return 1.0;

    double numer = 0.0;
    for (int j = 0; j < seg.region_count; ++j) {
        const Lab mean{sums[j].l / sizes[j], sums[j].a / sizes[j], sums[j].b / sizes[j]};
        numer += static_cast<double>(sizes[j]) * lab_distance_sq(mean, mu);
    }
    return numer / denom;
}

double compactness(const Labeling& seg) {
    const auto sizes = region_sizes(seg);
    std::vector<long long> perimeter(seg.region_count, 0);
    const int w = seg.width, h = seg.height;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int id = seg.at(x, y);
            if (x == 0 || seg.at(x - 1, y) != id) ++perimeter[id];
            if (x == w - 1 || seg.at(x + 1, y) != id) ++perimeter[id];
            if (y == 0 || seg.at(x, y - 1) != id) ++perimeter[id];
            if (y == h - 1 || seg.at(x, y + 1) != id) ++perimeter[id];
        }
    }
    double total = 0.0;
    for (int j = 0; j < seg.region_count; ++j) {
        const double p = static_cast<double>(perimeter[j]);
        total += static_cast<double>(sizes[j]) *
                 (4.0 * std::numbers::pi * static_cast<double>(sizes[j]) / (p * p));
    }
    return total / seg.pixel_count();
}

MetricReport evaluate(const LabImage& img, const Labeling& gt, const Labeling& seg, int tol) {
    MetricReport r;
    r.rec = boundary_recall(gt, seg, tol);
    r.ue = undersegmentation_error(gt, seg);
    r.ue_levin = ue_levin(gt, seg);
    r.ev = explained_variation(img, seg);
    r.co = compactness(seg);
    r.k_actual = seg.region_count;
    r.tolerance_px = tol;
    return r;
}

int default_tolerance(int width, int height) {
    const double diag = std::sqrt(static_cast<double>(width) * width +
                                  static_cast<double>(height) * height);
    return static_cast<int>(std::lround(0.0025 * diag));
}

std::string to_csv_row(const MetricReport& r, const std::string& image_id, int k_requested) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), ",%d,%d,%.6f,%.6f,%.6f,%.6f,%.6f", k_requested, r.k_actual,
                  r.rec, r.ue, r.ue_levin, r.ev, r.co);
    return image_id + buf;
}

}  // namespace spx
