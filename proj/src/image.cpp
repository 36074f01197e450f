#include "spx/image.hpp"

#include <cmath>
#include <unordered_map>

namespace spx {

double lab_distance_sq(const Lab& p, const Lab& q) {
    const double dl = p.l - q.l;
    const double da = p.a - q.a;
    const double db = p.b - q.b;
    return dl * dl + da * da + db * db;
}

namespace {

double srgb_to_linear(std::uint8_t v) {
    const double c = v / 255.0;
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

// D65 reference white.
constexpr double kXn = 0.95047;
constexpr double kYn = 1.0;
constexpr double kZn = 1.08883;

double lab_f(double t) {
    constexpr double delta = 6.0 / 29.0;
    constexpr double delta3 = delta * delta * delta;
    if (t > delta3) return std::cbrt(t);
    return t / (3.0 * delta * delta) + 4.0 / 29.0;
}

Lab pixel_to_lab(const Rgb8& p) {
    const double r = srgb_to_linear(p.r);
    const double g = srgb_to_linear(p.g);
    const double b = srgb_to_linear(p.b);

    const double x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
    const double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
    const double z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;

    const double fx = lab_f(x / kXn);
    const double fy = lab_f(y / kYn);
    const double fz = lab_f(z / kZn);

    Lab out;
    out.l = 116.0 * fy - 16.0;
    out.a = 500.0 * (fx - fy);
    out.b = 200.0 * (fy - fz);
    return out;
}

}  // namespace

LabImage rgb_to_lab(const RgbImage& img) {
    LabImage out;
    out.width = img.width;
    out.height = img.height;
    out.pixels.resize(img.pixels.size());
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        out.pixels[i] = pixel_to_lab(img.pixels[i]);
    }
    return out;
}

int densify_ids(std::vector<int>& ids) {
    std::unordered_map<int, int> remap;
    remap.reserve(64);
    int next = 0;
    for (int& id : ids) {
        auto [it, inserted] = remap.try_emplace(id, next);
        if (inserted) ++next;
        id = it->second;
    }
    return next;
}

void densify_labeling(Labeling& lab) {
    lab.region_count = densify_ids(lab.ids);
}

}  // namespace spx
