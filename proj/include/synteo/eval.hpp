#pragma once

#include <optional>
#include <string>
#include <vector>

#include "synteo/geometry.hpp"

namespace synteo::eval {

// --- anchor configuration ---------------------------------------------------

struct AnchorConfig {
    double model_h = 1024, model_w = 1024;  // training chip, px
    double image_h = 2048, image_w = 2048;  // inference frame, px
    double stride = 16;                     // backbone output stride
    double anchor_h = 4, anchor_w = 4;      // base anchor, feature cells
};

// Scale per target object size (square, px at frame resolution):
// sqrt(T_h * T_w * (M_h * M_w) / (I_h * I_w)) / (stride * A_h * A_w)
std::vector<double> anchor_scales(const AnchorConfig& cfg,
                                  const std::vector<double>& target_sizes);

// --- detection post-processing ----------------------------------------------

struct Detection {
    geom::GeometrySet geometry;
    double score = 0;
    std::string site;
};

// Drops detections below `score_threshold`, then greedy NMS: highest score
// wins, suppresses anything with IoU >= overlap_threshold against a keeper.
// Ties in score keep input order. Output sorted by descending score.
std::vector<Detection> score_filter_nms(const std::vector<Detection>& detections,
                                        double score_threshold = 0.8,
                                        double overlap_threshold = 0.5);

struct MergedDetection {
    geom::GeometrySet geometry;  // union of the member geometries
    double score = 0;            // max over members
    std::vector<size_t> members; // indices into the input vector
};

// Repeatedly unions any two detections with IoU >= min_iou until no pair
// qualifies (fixed point; the result is independent of merge order up to
// output ordering, which follows the smallest member index).
std::vector<MergedDetection> cascade_merge(const std::vector<Detection>& detections,
                                           double min_iou = 1.0 / 3.0);

// --- matching and metrics ---------------------------------------------------

struct MatchResult {
    int tp = 0, fp = 0, fn = 0;
    // per prediction in descending-score order: true if matched to a GT box
    std::vector<bool> ranked_labels;
};

// Greedy by score: each prediction takes the unmatched GT box of maximal IoU
// when that IoU >= tau; every GT box matches at most once.
MatchResult match_and_count(const std::vector<MergedDetection>& predictions,
                            const std::vector<geom::Box>& ground_truth,
                            double tau = 0.33);

struct Rates {
    double precision = 0, recall = 0, f1 = 0;  // 0/0 counts as 0
};
Rates precision_recall_f1(int tp, int fp, int fn);

// All-point interpolated AP over the ranked TP/FP labels, with Rc(0) = 0.
// Throws std::invalid_argument when n_gt == 0.
double average_precision(const std::vector<bool>& ranked_labels, int n_gt);

struct TurbineRecall {
    int gt = 0, tp = 0;
    double recall = 0;  // 0 when gt == 0
};
// A turbine point counts as found when it lies inside any merged detection.
TurbineRecall turbine_recall(const std::vector<MergedDetection>& predictions,
                             const std::vector<geom::Vec2>& turbine_points);

// Sliding-window inference plan: chips of side `chip`, stride chip*(1-overlap),
// final row/column clamped so the frame is fully covered without spill.
std::vector<geom::Box> chip_plan(int image_w, int image_h, int chip = 2048,
                                 double overlap = 0.5);

// --- report-level evaluation --------------------------------------------------

struct SiteMetrics {
    std::string site;
    int gt = 0, tp = 0, fp = 0, fn = 0;
    std::optional<double> precision, recall, f1;  // blank when gt == 0
    std::optional<double> ap;
    int gt_turbines = 0, tp_turbines = 0;
    std::optional<double> turbine_rc;  // blank when no turbine GT
};

struct MetricsReport {
    std::string frame;
    std::vector<SiteMetrics> sites;
    SiteMetrics combined;  // counts summed, rates recomputed, AP pooled
};

struct EvalConfig {
    double score_threshold = 0.8;
    double nms_overlap = 0.5;
    double merge_min_iou = 1.0 / 3.0;
    double match_tau = 0.33;
};

// Both inputs are GeoJSON FeatureCollections carrying a top-level
// properties.frame tag; mismatched frames are an error. Predictions carry
// properties.score (and optional site); ground truth features carry
// properties.kind = "farm" (polygon) or "turbine" (point) plus site.
MetricsReport evaluate(const std::string& predictions_geojson,
                       const std::string& ground_truth_geojson,
                       const EvalConfig& cfg = {});

std::string report_to_text(const MetricsReport& report);
std::string report_to_json(const MetricsReport& report);

}  // namespace synteo::eval
