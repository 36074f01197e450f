#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spx/communities.hpp"
#include "spx/segmentation.hpp"

namespace spx {

struct RunConfig {
    int radius = 5;
    double rho = 0.98;
    double sigma = 125.0;
    Algorithm algorithm = Algorithm::infomap;
    std::vector<int> superpixel_counts = {200, 400, 600, 800, 1000, 1500, 2000, 2500, 5000};
    std::uint64_t seed = 0;
    int tolerance = -1;  // boundary-recall tolerance; -1 derives it per image
    int jobs = 1;        // worker threads for dataset evaluation; 0 = hardware
};

/// One image plus its ground-truth label maps (`<stem>.ppm`,
/// `<stem>.gt<i>.labels`).
struct DatasetEntry {
    std::string stem;
    std::filesystem::path image;
    std::vector<std::filesystem::path> ground_truths;
};

/// Scans a directory for dataset entries, sorted by stem.
std::vector<DatasetEntry> discover_dataset(const std::filesystem::path& dir);

/// Deterministic per-image seed: FNV-1a over the stem mixed with the global
/// seed, so parallel schedules cannot change any result.
std::uint64_t per_image_seed(std::uint64_t global_seed, const std::string& stem);

struct SegmentFileReport {
    int k_actual = 0;
    int pre_merge_regions = 0;
    bool k_shortfall = false;
};

/// Segments one image and writes the label map (and optional boundary
/// overlay PPM). Uses config.superpixel_counts as the single requested k,
/// which must hold exactly one value.
SegmentFileReport cmd_segment(const RunConfig& config, const std::filesystem::path& image,
                              const std::filesystem::path& out_labels,
                              const std::optional<std::filesystem::path>& overlay = std::nullopt);

struct EvaluateOutcome {
    int entries = 0;
    int failures = 0;  // failed entries are logged to "<out>.errors"
};

/// Segments every dataset image at every requested k, scores it against all
/// of its ground truths keeping the per-metric worst value (min for rec,
/// max for ue and ue_levin), and writes per-image CSV rows followed by per-k
/// mean and population-std rows. Output bytes are independent of config.jobs.
EvaluateOutcome cmd_evaluate(const RunConfig& config, const std::filesystem::path& dataset_dir,
                             const std::filesystem::path& out_csv);

/// Mean grid statistics over the dataset for every (radius, rho) pair.
void cmd_grid_stats(const RunConfig& config, const std::filesystem::path& dataset_dir,
                    const std::vector<int>& radii, const std::vector<double>& rhos,
                    std::ostream& out);

/// Mean/std of community count and extreme sizes over the dataset, per
/// algorithm and (radius, rho) pair, on pre-merge partitions.
void cmd_community_stats(const RunConfig& config, const std::filesystem::path& dataset_dir,
                         const std::vector<int>& radii, const std::vector<double>& rhos,
                         const std::vector<Algorithm>& algorithms, std::ostream& out);

}  // namespace spx
