#pragma once

#include <cstdint>
#include <vector>

namespace spx {

struct Rgb8 {
    std::uint8_t r = 0, g = 0, b = 0;
};

/// CIELAB triple, D65 white point. L in [0, 100].
struct Lab {
    double l = 0.0, a = 0.0, b = 0.0;
};

double lab_distance_sq(const Lab& p, const Lab& q);

struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<Rgb8> pixels;  // row-major

    int pixel_count() const { return width * height; }
    const Rgb8& at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    Rgb8& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

struct LabImage {
    int width = 0;
    int height = 0;
    std::vector<Lab> pixels;  // row-major

    int pixel_count() const { return width * height; }
    const Lab& at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    Lab& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

/// Per-pixel region ids, dense in [0, region_count).
struct Labeling {
    int width = 0;
    int height = 0;
    std::vector<int> ids;  // row-major
    int region_count = 0;

    int pixel_count() const { return width * height; }
    int at(int x, int y) const { return ids[static_cast<std::size_t>(y) * width + x]; }
};

/// sRGB (IEC 61966-2-1) to CIELAB under D65.
LabImage rgb_to_lab(const RgbImage& img);

/// Remaps ids to [0, n) ordered by first occurrence; returns the id count.
int densify_ids(std::vector<int>& ids);

/// Densifies in place and refreshes region_count.
void densify_labeling(Labeling& lab);

}  // namespace spx
