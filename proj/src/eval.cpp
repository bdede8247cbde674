#include "synteo/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace synteo::eval {

std::vector<double> anchor_scales(const AnchorConfig& cfg,
                                  const std::vector<double>& target_sizes) {
    const double chip_ratio = (cfg.model_h * cfg.model_w) / (cfg.image_h * cfg.image_w);
    const double denom = cfg.stride * cfg.anchor_h * cfg.anchor_w;
    std::vector<double> out;
    out.reserve(target_sizes.size());
    for (double t : target_sizes) out.push_back(std::sqrt(t * t * chip_ratio) / denom);
    return out;
}

namespace {

// stable descending-score order
std::vector<size_t> rank_by_score(const std::vector<Detection>& dets) {
    std::vector<size_t> order(dets.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return dets[a].score > dets[b].score;
    });
    return order;
}

}  // namespace

std::vector<Detection> score_filter_nms(const std::vector<Detection>& detections,
                                        double score_threshold,
                                        double overlap_threshold) {
    std::vector<Detection> kept;
    for (size_t i : rank_by_score(detections)) {
        const Detection& d = detections[i];
        if (d.score < score_threshold) continue;
        bool suppressed = false;
        for (const Detection& k : kept) {
            if (geom::GeometrySet::iou(k.geometry, d.geometry) >= overlap_threshold) {
                suppressed = true;
                break;
            }
        }
        if (!suppressed) kept.push_back(d);
    }
    return kept;
}

std::vector<MergedDetection> cascade_merge(const std::vector<Detection>& detections,
                                           double min_iou) {
    std::vector<MergedDetection> groups;
    groups.reserve(detections.size());
    for (size_t i = 0; i < detections.size(); ++i)
        groups.push_back({detections[i].geometry, detections[i].score, {i}});

    bool merged = true;
    while (merged) {
        merged = false;
        for (size_t i = 0; i < groups.size() && !merged; ++i) {
            for (size_t j = i + 1; j < groups.size() && !merged; ++j) {
                if (geom::GeometrySet::iou(groups[i].geometry, groups[j].geometry) <
                    min_iou)
                    continue;
                groups[i].geometry.merge(groups[j].geometry);
                groups[i].score = std::max(groups[i].score, groups[j].score);
                groups[i].members.insert(groups[i].members.end(),
                                         groups[j].members.begin(),
                                         groups[j].members.end());
                std::sort(groups[i].members.begin(), groups[i].members.end());
                groups.erase(groups.begin() + static_cast<ptrdiff_t>(j));
                merged = true;
            }
        }
    }
    std::sort(groups.begin(), groups.end(),
              [](const MergedDetection& a, const MergedDetection& b) {
                  return a.members.front() < b.members.front();
              });
    return groups;
}

MatchResult match_and_count(const std::vector<MergedDetection>& predictions,
                            const std::vector<geom::Box>& ground_truth,
                            double tau) {
    std::vector<size_t> order(predictions.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return predictions[a].score > predictions[b].score;
    });

    MatchResult result;
    std::vector<bool> gt_taken(ground_truth.size(), false);
    for (size_t i : order) {
        double best = 0;
        size_t best_gt = ground_truth.size();
        for (size_t g = 0; g < ground_truth.size(); ++g) {
            if (gt_taken[g]) continue;
            geom::GeometrySet gset;
            gset.add_box(ground_truth[g]);
            const double v = geom::GeometrySet::iou(predictions[i].geometry, gset);
            if (v > best) {
                best = v;
                best_gt = g;
            }
        }
        const bool matched = best_gt < ground_truth.size() && best >= tau;
        if (matched) gt_taken[best_gt] = true;
        result.ranked_labels.push_back(matched);
        matched ? ++result.tp : ++result.fp;
    }
    result.fn = static_cast<int>(ground_truth.size()) - result.tp;
    return result;
}

Rates precision_recall_f1(int tp, int fp, int fn) {
    Rates r;
    r.precision = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0;
    r.recall = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0;
    r.f1 = r.precision + r.recall > 0
               ? 2 * r.precision * r.recall / (r.precision + r.recall)
               : 0;
    return r;
}

double average_precision(const std::vector<bool>& ranked_labels, int n_gt) {
    if (n_gt <= 0)
        throw std::invalid_argument("average_precision: no ground-truth objects");
    const size_t n = ranked_labels.size();
    std::vector<double> precision(n), recall(n);
    int tp = 0;
    for (size_t k = 0; k < n; ++k) {
        if (ranked_labels[k]) ++tp;
        precision[k] = static_cast<double>(tp) / static_cast<double>(k + 1);
        recall[k] = static_cast<double>(tp) / n_gt;
    }
    // interpolate: precision at rank k becomes the max over ranks >= k
    for (size_t k = n; k-- > 1;) precision[k - 1] = std::max(precision[k - 1], precision[k]);

    double ap = 0;
    double prev_recall = 0;  // Rc(0) = 0
    for (size_t k = 0; k < n; ++k) {
        ap += (recall[k] - prev_recall) * precision[k];
        prev_recall = recall[k];
    }
    return ap;
}

TurbineRecall turbine_recall(const std::vector<MergedDetection>& predictions,
                             const std::vector<geom::Vec2>& turbine_points) {
    TurbineRecall out;
    out.gt = static_cast<int>(turbine_points.size());
    for (const auto& p : turbine_points) {
        for (const auto& pred : predictions) {
            if (pred.geometry.contains(p)) {
                ++out.tp;
                break;
            }
        }
    }
    out.recall = out.gt > 0 ? static_cast<double>(out.tp) / out.gt : 0;
    return out;
}

std::vector<geom::Box> chip_plan(int image_w, int image_h, int chip, double overlap) {
    if (chip <= 0 || image_w < chip || image_h < chip)
        throw std::invalid_argument("chip_plan: chip larger than the image");
    if (overlap < 0 || overlap >= 1)
        throw std::invalid_argument("chip_plan: overlap must be in [0, 1)");
    const int stride = std::max(1, static_cast<int>(std::lround(chip * (1 - overlap))));

    auto starts = [&](int extent) {
        std::vector<int> out;
        for (int s = 0;; s += stride) {
            if (s + chip >= extent) {
                out.push_back(extent - chip);  // clamp the final chip to the edge
                break;
            }
            out.push_back(s);
        }
        return out;
    };

    std::vector<geom::Box> plan;
    for (int y : starts(image_h))
        for (int x : starts(image_w))
            plan.push_back({static_cast<double>(x), static_cast<double>(y),
                            static_cast<double>(x + chip), static_cast<double>(y + chip)});
    return plan;
}

// --- GeoJSON-level evaluation -------------------------------------------------

namespace {

bool is_axis_aligned_rect(const geom::Polygon& p, geom::Box& out) {
    if (p.vertices.size() != 4) return false;
    const geom::Box bb = p.bounding_box();
    for (const auto& v : p.vertices) {
        const bool on_x = v.x == bb.x0 || v.x == bb.x1;
        const bool on_y = v.y == bb.y0 || v.y == bb.y1;
        if (!(on_x && on_y)) return false;
    }
    out = bb;
    return bb.valid();
}

geom::Polygon ring_to_polygon(const nlohmann::json& ring) {
    geom::Polygon poly;
    for (const auto& coord : ring)
        poly.vertices.push_back({coord.at(0).get<double>(), coord.at(1).get<double>()});
    // GeoJSON rings repeat the first vertex
    if (poly.vertices.size() > 1 &&
        poly.vertices.front().x == poly.vertices.back().x &&
        poly.vertices.front().y == poly.vertices.back().y)
        poly.vertices.pop_back();
    return poly;
}

geom::GeometrySet parse_geometry(const nlohmann::json& geometry) {
    geom::GeometrySet set;
    const std::string type = geometry.at("type").get<std::string>();
    auto add_polygon = [&](const nlohmann::json& rings) {
        for (const auto& ring : rings) {
            geom::Polygon poly = ring_to_polygon(ring);
            geom::Box box;
            set.add(poly, is_axis_aligned_rect(poly, box));
        }
    };
    if (type == "Polygon") {
        add_polygon(geometry.at("coordinates"));
    } else if (type == "MultiPolygon") {
        for (const auto& rings : geometry.at("coordinates")) add_polygon(rings);
    } else {
        throw std::runtime_error("unsupported geometry type '" + type + "'");
    }
    return set;
}

std::string frame_of(const nlohmann::json& doc) {
    if (doc.contains("properties") && doc["properties"].contains("frame"))
        return doc["properties"]["frame"].get<std::string>();
    return "";
}

std::string fmt3(std::optional<double> v) {
    if (!v) return "";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", *v);
    return buf;
}

}  // namespace

MetricsReport evaluate(const std::string& predictions_geojson,
                       const std::string& ground_truth_geojson,
                       const EvalConfig& cfg) {
    const auto preds_doc = nlohmann::json::parse(predictions_geojson);
    const auto gt_doc = nlohmann::json::parse(ground_truth_geojson);

    const std::string pred_frame = frame_of(preds_doc);
    const std::string gt_frame = frame_of(gt_doc);
    if (pred_frame != gt_frame)
        throw std::runtime_error("frame mismatch: predictions are for '" + pred_frame +
                                 "', ground truth for '" + gt_frame + "'");

    std::map<std::string, std::vector<Detection>> preds_by_site;
    for (const auto& feature : preds_doc.at("features")) {
        Detection d;
        const auto& props = feature.at("properties");
        d.score = props.at("score").get<double>();
        d.site = props.value("site", "default");
        d.geometry = parse_geometry(feature.at("geometry"));
        preds_by_site[d.site].push_back(std::move(d));
    }

    struct SiteGT {
        std::vector<geom::Box> farms;
        std::vector<geom::Vec2> turbines;
    };
    std::map<std::string, SiteGT> gt_by_site;
    for (const auto& feature : gt_doc.at("features")) {
        const auto& props = feature.at("properties");
        const std::string site = props.value("site", "default");
        const std::string kind = props.value("kind", "farm");
        if (kind == "turbine") {
            const auto& coords = feature.at("geometry").at("coordinates");
            gt_by_site[site].turbines.push_back(
                {coords.at(0).get<double>(), coords.at(1).get<double>()});
            continue;
        }
        const geom::GeometrySet set = parse_geometry(feature.at("geometry"));
        for (const auto& poly : set.members())
            gt_by_site[site].farms.push_back(poly.bounding_box());
    }

    std::vector<std::string> sites;
    for (const auto& [site, gt] : gt_by_site) sites.push_back(site);
    for (const auto& [site, dets] : preds_by_site)
        if (!gt_by_site.count(site)) sites.push_back(site);
    std::sort(sites.begin(), sites.end());

    MetricsReport report;
    report.frame = pred_frame;
    std::vector<std::pair<double, bool>> pooled;  // (score, matched) across sites
    int total_gt = 0;

    for (const auto& site : sites) {
        const SiteGT& gt = gt_by_site[site];
        const auto filtered =
            score_filter_nms(preds_by_site[site], cfg.score_threshold, cfg.nms_overlap);
        const auto merged = cascade_merge(filtered, cfg.merge_min_iou);
        const auto match = match_and_count(merged, gt.farms, cfg.match_tau);

        SiteMetrics m;
        m.site = site;
        m.gt = static_cast<int>(gt.farms.size());
        m.tp = match.tp;
        m.fp = match.fp;
        m.fn = match.fn;
        if (m.gt > 0) {
            const Rates r = precision_recall_f1(m.tp, m.fp, m.fn);
            m.precision = r.precision;
            m.recall = r.recall;
            m.f1 = r.f1;
            m.ap = average_precision(match.ranked_labels, m.gt);
        }
        if (!gt.turbines.empty()) {
            const TurbineRecall tr = turbine_recall(merged, gt.turbines);
            m.gt_turbines = tr.gt;
            m.tp_turbines = tr.tp;
            m.turbine_rc = tr.recall;
        }
        report.sites.push_back(m);

        total_gt += m.gt;
        std::vector<size_t> order(merged.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            return merged[a].score > merged[b].score;
        });
        for (size_t k = 0; k < order.size(); ++k)
            pooled.push_back({merged[order[k]].score, match.ranked_labels[k]});
    }

    SiteMetrics& c = report.combined;
    c.site = "combined";
    for (const auto& m : report.sites) {
        c.gt += m.gt;
        c.tp += m.tp;
        c.fp += m.fp;
        c.fn += m.fn;
        c.gt_turbines += m.gt_turbines;
        c.tp_turbines += m.tp_turbines;
    }
    if (c.gt > 0) {
        const Rates r = precision_recall_f1(c.tp, c.fp, c.fn);
        c.precision = r.precision;
        c.recall = r.recall;
        c.f1 = r.f1;
        std::stable_sort(pooled.begin(), pooled.end(),
                         [](const auto& a, const auto& b) { return a.first > b.first; });
        std::vector<bool> labels;
        labels.reserve(pooled.size());
        for (const auto& [score, matched] : pooled) labels.push_back(matched);
        c.ap = average_precision(labels, c.gt);
    }
    if (c.gt_turbines > 0)
        c.turbine_rc = static_cast<double>(c.tp_turbines) / c.gt_turbines;
    return report;
}

std::string report_to_text(const MetricsReport& report) {
    const std::vector<std::string> header = {"site", "gt",  "tp", "fp", "fn", "pr",
                                             "rc",   "f1",  "ap", "gt-wt", "tp-wt",
                                             "rc-wt"};
    std::vector<std::vector<std::string>> rows;
    auto add_row = [&](const SiteMetrics& m) {
        rows.push_back({m.site, std::to_string(m.gt), std::to_string(m.tp),
                        std::to_string(m.fp), std::to_string(m.fn), fmt3(m.precision),
                        fmt3(m.recall), fmt3(m.f1), fmt3(m.ap),
                        m.turbine_rc ? std::to_string(m.gt_turbines) : "",
                        m.turbine_rc ? std::to_string(m.tp_turbines) : "",
                        fmt3(m.turbine_rc)});
    };
    for (const auto& m : report.sites) add_row(m);
    add_row(report.combined);

    std::vector<size_t> widths(header.size());
    for (size_t i = 0; i < header.size(); ++i) widths[i] = header[i].size();
    for (const auto& row : rows)
        for (size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());

    std::string out = "frame: " + (report.frame.empty() ? "-" : report.frame) + "\n";
    auto emit = [&](const std::vector<std::string>& row) {
        for (size_t i = 0; i < row.size(); ++i) {
            out += row[i];
            out.append(widths[i] - row[i].size() + (i + 1 < row.size() ? 2 : 0), ' ');
        }
        out += '\n';
    };
    emit(header);
    for (const auto& row : rows) emit(row);
    return out;
}

std::string report_to_json(const MetricsReport& report) {
    auto site_json = [](const SiteMetrics& m) {
        nlohmann::json j = {{"site", m.site}, {"gt", m.gt},  {"tp", m.tp},
                            {"fp", m.fp},     {"fn", m.fn}};
        auto opt = [](const std::optional<double>& v) {
            return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
        };
        j["precision"] = opt(m.precision);
        j["recall"] = opt(m.recall);
        j["f1"] = opt(m.f1);
        j["ap"] = opt(m.ap);
        j["gt_turbines"] = m.gt_turbines;
        j["tp_turbines"] = m.tp_turbines;
        j["turbine_recall"] = opt(m.turbine_rc);
        return j;
    };
    nlohmann::json doc = {{"frame", report.frame},
                          {"sites", nlohmann::json::array()},
                          {"combined", site_json(report.combined)}};
    for (const auto& m : report.sites) doc["sites"].push_back(site_json(m));
    return doc.dump(2) + "\n";
}

}  // namespace synteo::eval
