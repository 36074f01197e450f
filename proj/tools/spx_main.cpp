#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>

#include "spx/bench.hpp"

namespace {

struct CommonFlags {
    spx::RunConfig config;
    std::string algo = "infomap";
};

void add_graph_flags(CLI::App* cmd, spx::RunConfig& config, std::string& algo) {
    cmd->add_option("--radius", config.radius, "pixel-grid radius")->check(CLI::PositiveNumber);
    cmd->add_option("--rho", config.rho, "edge-weight threshold in [0,1)")
        ->check(CLI::Range(0.0, 0.9999999));
    cmd->add_option("--sigma", config.sigma, "similarity scale")->check(CLI::PositiveNumber);
    cmd->add_option("--algo", algo, "label-propagation | louvain | infomap");
    cmd->add_option("--seed", config.seed, "RNG seed");
}

std::vector<int> normalize_k_list(std::vector<int> ks) {
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    return ks;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Superpixel segmentation through graph community detection"};
    app.require_subcommand(1);

    // --- segment ---------------------------------------------------------
    std::string seg_image, seg_out, seg_overlay;
    CommonFlags seg;
    int seg_k = 1000;
    auto* seg_cmd = app.add_subcommand("segment", "segment one PPM image into superpixels");
    seg_cmd->add_option("image", seg_image, "input P6 PPM")->required();
    seg_cmd->add_option("--out", seg_out, "output label-map path")->required();
    seg_cmd->add_option("--overlay", seg_overlay, "optional boundary-overlay PPM path");
    seg_cmd->add_option("--k", seg_k, "requested superpixel count")->check(CLI::PositiveNumber);
    add_graph_flags(seg_cmd, seg.config, seg.algo);

    // --- evaluate --------------------------------------------------------
    std::string eval_dir, eval_out;
    CommonFlags eval;
    std::vector<int> eval_ks;
    auto* eval_cmd = app.add_subcommand("evaluate", "run the dataset benchmark and write a CSV report");
    eval_cmd->add_option("dataset", eval_dir, "dataset directory (<stem>.ppm + <stem>.gt<i>.labels)")
        ->required();
    eval_cmd->add_option("--out", eval_out, "output CSV path")->required();
    eval_cmd->add_option("--k", eval_ks, "requested superpixel count (repeatable)")
        ->check(CLI::PositiveNumber);
    eval_cmd->add_option("--tolerance", eval.config.tolerance,
                         "boundary-recall tolerance in pixels (default: derived from image size)");
    eval_cmd->add_option("--jobs", eval.config.jobs, "worker threads (0 = hardware)");
    add_graph_flags(eval_cmd, eval.config, eval.algo);

    // --- grid-stats ------------------------------------------------------
    std::string gs_dir, gs_out;
    CommonFlags gs;
    std::vector<int> gs_radii{1, 2, 5};
    std::vector<double> gs_rhos{0.0, 0.98};
    auto* gs_cmd = app.add_subcommand("grid-stats", "mean pixel-grid statistics per (radius, rho)");
    gs_cmd->add_option("dataset", gs_dir, "dataset directory")->required();
    gs_cmd->add_option("--out", gs_out, "output CSV path (default: stdout)");
    gs_cmd->add_option("--radius", gs_radii, "grid radii (repeatable)")->check(CLI::PositiveNumber);
    gs_cmd->add_option("--rho", gs_rhos, "thresholds (repeatable)")->check(CLI::Range(0.0, 0.9999999));
    gs_cmd->add_option("--sigma", gs.config.sigma, "similarity scale")->check(CLI::PositiveNumber);

    // --- community-stats -------------------------------------------------
    std::string cs_dir, cs_out;
    CommonFlags cs;
    std::vector<int> cs_radii{2, 5};
    std::vector<double> cs_rhos{0.0, 0.98};
    std::vector<std::string> cs_algos{"label-propagation", "louvain", "infomap"};
    auto* cs_cmd = app.add_subcommand("community-stats",
                                      "pre-merge community statistics per algorithm and (radius, rho)");
    cs_cmd->add_option("dataset", cs_dir, "dataset directory")->required();
    cs_cmd->add_option("--out", cs_out, "output CSV path (default: stdout)");
    cs_cmd->add_option("--radius", cs_radii, "grid radii (repeatable)")->check(CLI::PositiveNumber);
    cs_cmd->add_option("--rho", cs_rhos, "thresholds (repeatable)")->check(CLI::Range(0.0, 0.9999999));
    cs_cmd->add_option("--algo", cs_algos, "algorithms (repeatable)");
    cs_cmd->add_option("--sigma", cs.config.sigma, "similarity scale")->check(CLI::PositiveNumber);
    cs_cmd->add_option("--seed", cs.config.seed, "RNG seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (seg_cmd->parsed()) {
            seg.config.algorithm = spx::parse_algorithm(seg.algo);
            seg.config.superpixel_counts = {seg_k};
            std::optional<std::filesystem::path> overlay;
            if (!seg_overlay.empty()) overlay = seg_overlay;
            const auto report = spx::cmd_segment(seg.config, seg_image, seg_out, overlay);
            std::cout << "k_actual=" << report.k_actual
                      << " pre_merge_regions=" << report.pre_merge_regions << "\n";
            if (report.k_shortfall) {
                std::cout << "warning: produced fewer superpixels than requested ("
                          << report.k_actual << " < " << seg_k << ")\n";
            }
        } else if (eval_cmd->parsed()) {
            eval.config.algorithm = spx::parse_algorithm(eval.algo);
            if (!eval_ks.empty()) eval.config.superpixel_counts = normalize_k_list(eval_ks);
            const auto outcome = spx::cmd_evaluate(eval.config, eval_dir, eval_out);
            std::cout << "evaluated " << (outcome.entries - outcome.failures) << "/"
                      << outcome.entries << " entries -> " << eval_out << "\n";
            if (outcome.failures > 0) {
                std::cerr << outcome.failures << " entries failed; see " << eval_out
                          << ".errors\n";
                return 1;
            }
        } else if (gs_cmd->parsed()) {
            if (gs_out.empty()) {
                spx::cmd_grid_stats(gs.config, gs_dir, gs_radii, gs_rhos, std::cout);
            } else {
                std::ofstream out(gs_out);
                if (!out) throw std::runtime_error("cannot open output: " + gs_out);
                spx::cmd_grid_stats(gs.config, gs_dir, gs_radii, gs_rhos, out);
            }
        } else if (cs_cmd->parsed()) {
            std::vector<spx::Algorithm> algos;
            for (const std::string& a : cs_algos) algos.push_back(spx::parse_algorithm(a));
            if (cs_out.empty()) {
                spx::cmd_community_stats(cs.config, cs_dir, cs_radii, cs_rhos, algos, std::cout);
            } else {
                std::ofstream out(cs_out);
                if (!out) throw std::runtime_error("cannot open output: " + cs_out);
                spx::cmd_community_stats(cs.config, cs_dir, cs_radii, cs_rhos, algos, out);
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
