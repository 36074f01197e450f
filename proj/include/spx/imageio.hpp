#pragma once

#include <filesystem>

#include "spx/image.hpp"

namespace spx {

/// Decodes a binary PPM (P6, 8-bit) file. Missing file, malformed header and
/// truncated pixel data are reported as distinct errors.
RgbImage load_ppm(const std::filesystem::path& path);

void write_ppm(const RgbImage& img, const std::filesystem::path& path);

/// Label-map text format: first line "width height", then height lines of
/// width space-separated non-negative integers. Ids are re-densified on read,
/// ordered by first occurrence.
Labeling read_label_map(const std::filesystem::path& path);

void write_label_map(const Labeling& lab, const std::filesystem::path& path);

}  // namespace spx
