#include "spx/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "spx/imageio.hpp"
#include "spx/metrics.hpp"

namespace spx {

namespace fs = std::filesystem;

std::vector<DatasetEntry> discover_dataset(const fs::path& dir) {
    if (!fs::is_directory(dir)) {
        throw std::runtime_error("dataset directory not found: " + dir.string());
    }
    std::vector<DatasetEntry> entries;
    for (const auto& item : fs::directory_iterator(dir)) {
        if (!item.is_regular_file() || item.path().extension() != ".ppm") continue;
        DatasetEntry e;
        e.stem = item.path().stem().string();
        e.image = item.path();
        entries.push_back(std::move(e));
    }
    std::sort(entries.begin(), entries.end(),
              [](const DatasetEntry& a, const DatasetEntry& b) { return a.stem < b.stem; });

    for (DatasetEntry& e : entries) {
        std::vector<std::pair<long, fs::path>> gts;
        for (long i = 0;; ++i) {
            fs::path gt = e.image.parent_path() / (e.stem + ".gt" + std::to_string(i) + ".labels");
            if (!fs::exists(gt)) {
                if (i == 0) continue;  // allow numbering to start at 1
                break;
            }
            gts.emplace_back(i, gt);
        }
        for (auto& [i, p] : gts) e.ground_truths.push_back(std::move(p));
    }
    return entries;
}

std::uint64_t per_image_seed(std::uint64_t global_seed, const std::string& stem) {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
    for (unsigned char c : stem) {
        h ^= c;
        h *= 1099511628211ull;
    }
    h ^= global_seed;
    // splitmix64 finalizer
    h += 0x9e3779b97f4a7c15ull;
    h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ull;
    h = (h ^ (h >> 27)) * 0x94d049bb133111ebull;
    return h ^ (h >> 31);
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::string fmt_rho(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

int effective_jobs(int jobs, std::size_t task_count) {
    if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs < 1) jobs = 1;
    return static_cast<int>(std::min<std::size_t>(jobs, std::max<std::size_t>(task_count, 1)));
}

// Runs fn(i) for i in [0, n) on the given number of worker threads. Exceptions
// must be handled inside fn.
template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
    if (jobs <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int t = 0; t < jobs; ++t) {
        pool.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) break;
                fn(i);
            }
        });
    }
    for (std::thread& t : pool) t.join();
}

}  // namespace

SegmentFileReport cmd_segment(const RunConfig& config, const fs::path& image,
                              const fs::path& out_labels,
                              const std::optional<fs::path>& overlay) {
    if (config.superpixel_counts.size() != 1) {
        throw std::invalid_argument("cmd_segment expects exactly one superpixel count");
    }
    const RgbImage rgb = load_ppm(image);
    const LabImage lab = rgb_to_lab(rgb);

    SegmentParams params;
    params.radius = config.radius;
    params.rho = config.rho;
    params.sigma = config.sigma;
    params.superpixels = config.superpixel_counts.front();
    params.algorithm = config.algorithm;
    params.seed = config.seed;

    const SegmentResult result = segment(lab, params);
    write_label_map(result.labeling, out_labels);
    if (overlay) {
        write_ppm(overlay_boundaries(rgb, result.labeling), *overlay);
    }

    SegmentFileReport report;
    report.k_actual = result.labeling.region_count;
    report.pre_merge_regions = result.pre_merge_regions;
    report.k_shortfall = result.k_shortfall;
    return report;
}

namespace {

struct MetricRow {
    int k_requested = 0;
    int k_actual = 0;
    double rec = 0, ue = 0, ue_levin = 0, ev = 0, co = 0;
};

struct EntryResult {
    std::vector<MetricRow> rows;
    bool failed = false;
    std::string error;
};

EntryResult evaluate_entry(const RunConfig& config, const DatasetEntry& entry) {
    EntryResult result;
    try {
        if (entry.ground_truths.empty()) {
            throw std::runtime_error("no ground truths found for " + entry.stem);
        }
        const RgbImage rgb = load_ppm(entry.image);
        const LabImage lab = rgb_to_lab(rgb);
        std::vector<Labeling> gts;
        for (const fs::path& p : entry.ground_truths) {
            Labeling gt = read_label_map(p);
            if (gt.width != rgb.width || gt.height != rgb.height) {
                throw std::runtime_error("ground truth dimension mismatch: " + p.string());
            }
            gts.push_back(std::move(gt));
        }

        // Grid and communities are shared across all k; only merging differs.
        const PixelGrid grid =
            build_pixel_grid(lab, GridParams{config.radius, config.rho, config.sigma});
        const std::uint64_t seed = per_image_seed(config.seed, entry.stem);
        Partition part;
        if (grid.node_count() > 0) {
            switch (config.algorithm) {
                case Algorithm::label_propagation:
                    part = label_propagation(grid.graph(), seed).partition;
                    break;
                case Algorithm::louvain:
                    part = louvain(grid.graph(), seed).partition;
                    break;
                case Algorithm::infomap:
                    part = infomap(grid.graph(), seed).partition;
                    break;
            }
        }
        const Labeling pre_merge = partition_to_labeling(part, grid);
        const RegionAdjacencyGraph rag = build_rag(pre_merge, lab);

        const int tol =
            config.tolerance >= 0 ? config.tolerance : default_tolerance(rgb.width, rgb.height);
        for (int k : config.superpixel_counts) {
            const Labeling seg = merge_to_k(rag, k, config.sigma);
            MetricRow row;
            row.k_requested = k;
            row.k_actual = seg.region_count;
            row.ev = explained_variation(lab, seg);
            row.co = compactness(seg);
            row.rec = 1.0;
            row.ue = 0.0;
            row.ue_levin = 0.0;
            for (std::size_t g = 0; g < gts.size(); ++g) {
                const double rec = boundary_recall(gts[g], seg, tol);
                const double ue = undersegmentation_error(gts[g], seg);
                const double levin = ue_levin(gts[g], seg);
                if (g == 0) {
                    row.rec = rec;
                    row.ue = ue;
                    row.ue_levin = levin;
                } else {
                    row.rec = std::min(row.rec, rec);      // worst = lowest quality
                    row.ue = std::max(row.ue, ue);         // worst = highest error
                    row.ue_levin = std::max(row.ue_levin, levin);
                }
            }
            result.rows.push_back(row);
        }
    } catch (const std::exception& e) {
        result.failed = true;
        result.error = e.what();
        result.rows.clear();
    }
    return result;
}

}  // namespace

EvaluateOutcome cmd_evaluate(const RunConfig& config, const fs::path& dataset_dir,
                             const fs::path& out_csv) {
    if (config.superpixel_counts.empty()) {
        throw std::invalid_argument("cmd_evaluate: empty superpixel count schedule");
    }
    const std::vector<DatasetEntry> entries = discover_dataset(dataset_dir);
    if (entries.empty()) throw std::runtime_error("empty dataset: " + dataset_dir.string());

    std::vector<EntryResult> results(entries.size());
    parallel_for(entries.size(), effective_jobs(config.jobs, entries.size()),
                 [&](std::size_t i) { results[i] = evaluate_entry(config, entries[i]); });

    std::ofstream out(out_csv);
    if (!out) throw std::runtime_error("cannot open output CSV: " + out_csv.string());
    out << "image,k_requested,k_actual,rec,ue,ue_levin,ev,co\n";
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (results[i].failed) continue;
        for (const MetricRow& row : results[i].rows) {
            MetricReport r;
            r.rec = row.rec;
            r.ue = row.ue;
            r.ue_levin = row.ue_levin;
            r.ev = row.ev;
            r.co = row.co;
            r.k_actual = row.k_actual;
            out << to_csv_row(r, entries[i].stem, row.k_requested) << "\n";
        }
    }

    // Aggregate rows: mean then population std per k, over successful entries.
    for (std::size_t ki = 0; ki < config.superpixel_counts.size(); ++ki) {
        std::vector<const MetricRow*> rows;
        for (const EntryResult& res : results) {
            if (!res.failed) rows.push_back(&res.rows[ki]);
        }
        if (rows.empty()) continue;
        const double n = static_cast<double>(rows.size());
        auto emit = [&](const char* tag, auto reduce) {
            out << tag << "," << config.superpixel_counts[ki] << "," << fmt(reduce([](const MetricRow& r) { return double(r.k_actual); }))
                << "," << fmt(reduce([](const MetricRow& r) { return r.rec; }))
                << "," << fmt(reduce([](const MetricRow& r) { return r.ue; }))
                << "," << fmt(reduce([](const MetricRow& r) { return r.ue_levin; }))
                << "," << fmt(reduce([](const MetricRow& r) { return r.ev; }))
                << "," << fmt(reduce([](const MetricRow& r) { return r.co; })) << "\n";
        };
        auto mean_of = [&](auto field) {
            double sum = 0.0;
            for (const MetricRow* r : rows) sum += field(*r);
            return sum / n;
        };
        emit("mean", mean_of);
        emit("std", [&](auto field) {
            const double mean = mean_of(field);
            double var = 0.0;
            for (const MetricRow* r : rows) {
                const double d = field(*r) - mean;
                var += d * d;
            }
            return std::sqrt(var / n);
        });
    }
    out.close();

    EvaluateOutcome outcome;
    outcome.entries = static_cast<int>(entries.size());
    const fs::path sidecar = out_csv.string() + ".errors";
    std::error_code ec;
    fs::remove(sidecar, ec);
    std::ostringstream log;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (results[i].failed) {
            ++outcome.failures;
            log << entries[i].stem << ": " << results[i].error << "\n";
        }
    }
    if (outcome.failures > 0) {
        std::ofstream side(sidecar);
        side << log.str();
    }
    return outcome;
}

void cmd_grid_stats(const RunConfig& config, const fs::path& dataset_dir,
                    const std::vector<int>& radii, const std::vector<double>& rhos,
                    std::ostream& out) {
    const std::vector<DatasetEntry> entries = discover_dataset(dataset_dir);
    if (entries.empty()) throw std::runtime_error("empty dataset: " + dataset_dir.string());

    std::vector<LabImage> images;
    images.reserve(entries.size());
    for (const DatasetEntry& e : entries) images.push_back(rgb_to_lab(load_ppm(e.image)));

    out << "r,rho,vertices,edges,total_weight\n";
    for (int r : radii) {
        for (double rho : rhos) {
            double vertices = 0.0, edges = 0.0, weight = 0.0;
            for (const LabImage& img : images) {
                const GridStats s = grid_stats(build_pixel_grid(img, {r, rho, config.sigma}));
                vertices += static_cast<double>(s.vertex_count);
                edges += static_cast<double>(s.edge_count);
                weight += s.total_weight;
            }
            const double n = static_cast<double>(images.size());
            out << r << "," << fmt_rho(rho) << "," << fmt(vertices / n) << "," << fmt(edges / n)
                << "," << fmt(weight / n) << "\n";
        }
    }
}

void cmd_community_stats(const RunConfig& config, const fs::path& dataset_dir,
                         const std::vector<int>& radii, const std::vector<double>& rhos,
                         const std::vector<Algorithm>& algorithms, std::ostream& out) {
    const std::vector<DatasetEntry> entries = discover_dataset(dataset_dir);
    if (entries.empty()) throw std::runtime_error("empty dataset: " + dataset_dir.string());

    std::vector<LabImage> images;
    std::vector<std::uint64_t> seeds;
    for (const DatasetEntry& e : entries) {
        images.push_back(rgb_to_lab(load_ppm(e.image)));
        seeds.push_back(per_image_seed(config.seed, e.stem));
    }

    out << "algorithm,r,rho,communities_mean,communities_std,max_size_mean,max_size_std,"
           "min_size_mean,min_size_std\n";
    for (Algorithm algo : algorithms) {
        for (int r : radii) {
            for (double rho : rhos) {
                std::vector<PartitionSummary> batch;
                for (std::size_t i = 0; i < images.size(); ++i) {
                    const PixelGrid grid = build_pixel_grid(images[i], {r, rho, config.sigma});
                    if (grid.node_count() == 0) continue;
                    Partition part;
                    switch (algo) {
                        case Algorithm::label_propagation:
                            part = label_propagation(grid.graph(), seeds[i]).partition;
                            break;
                        case Algorithm::louvain:
                            part = louvain(grid.graph(), seeds[i]).partition;
                            break;
                        case Algorithm::infomap:
                            part = infomap(grid.graph(), seeds[i]).partition;
                            break;
                    }
                    batch.push_back(summarize_partition(part));
                }
                if (batch.empty()) continue;
                const CommunityStats s = community_stats(batch);
                out << algorithm_name(algo) << "," << r << "," << fmt_rho(rho) << ","
                    << fmt(s.count_mean) << "," << fmt(s.count_std) << "," << fmt(s.max_size_mean)
                    << "," << fmt(s.max_size_std) << "," << fmt(s.min_size_mean) << ","
                    << fmt(s.min_size_std) << "\n";
            }
        }
    }
}

}  // namespace spx
