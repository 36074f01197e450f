#pragma once

#include <string>
#include <vector>

#include "spx/image.hpp"

namespace spx {

struct MetricReport {
    double rec = 0.0;
    double ue = 0.0;
    double ue_levin = 0.0;
    double ev = 0.0;
    double co = 0.0;
    int k_actual = 0;
    int tolerance_px = 0;  // Rec only
};

/// Boundary convention shared by ground truth and segmentation: a pixel is
/// boundary iff its right or bottom 4-neighbor has a different id, so each
/// inter-region crack is marked once, on one side.
std::vector<bool> boundary_pixels(const Labeling& lab);

/// Fraction of gt boundary pixels with a seg boundary pixel within Chebyshev
/// distance tol. 1.0 when gt has no boundary pixels.
double boundary_recall(const Labeling& gt, const Labeling& seg, int tol);

double undersegmentation_error(const Labeling& gt, const Labeling& seg);

double ue_levin(const Labeling& gt, const Labeling& seg);

/// Fraction of image color variance captured by per-region mean colors;
/// defined as 1.0 on zero-variance images.
double explained_variation(const LabImage& img, const Labeling& seg);

/// Size-weighted mean isoperimetric quotient 4*pi*A/P^2 with A the pixel count
/// and P the number of unit pixel sides on the region boundary, image border
/// included.
double compactness(const Labeling& seg);

MetricReport evaluate(const LabImage& img, const Labeling& gt, const Labeling& seg, int tol);

/// Default boundary-recall tolerance: round(0.0025 * image diagonal).
int default_tolerance(int width, int height);

/// One CSV row: image id, K requested, k_actual, rec, ue, ue_levin, ev, co.
std::string to_csv_row(const MetricReport& r, const std::string& image_id, int k_requested);

}  // namespace spx
