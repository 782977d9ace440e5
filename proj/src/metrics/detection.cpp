#include <algorithm>
#include <numeric>
#include <tuple>

#include "curb/error.hpp"
#include "curb/metrics.hpp"

namespace curb {

namespace {

using FrameKey = std::tuple<std::int64_t, std::string>;

FrameKey key_of(const DetectionRecord& r) { return {r.frame_id, r.sensor_id}; }

const BoundingBox2D& box_of(const DetectionRecord& r) {
  if (!r.bbox2d) throw Error(ErrorCode::InvalidArgument, "average precision needs 2D boxes");
  return *r.bbox2d;
}

// Area under the monotone precision envelope of a PR curve given in detection
// order (recall non-decreasing).
double area_all_points(const std::vector<double>& recall, const std::vector<double>& precision) {
  std::vector<double> envelope(precision);
  for (std::size_t i = envelope.size(); i-- > 1;) {
    envelope[i - 1] = std::max(envelope[i - 1], envelope[i]);
  }
  double area = 0.0;
  double prev_recall = 0.0;
  for (std::size_t i = 0; i < recall.size(); ++i) {
    area += (recall[i] - prev_recall) * envelope[i];
    prev_recall = recall[i];
  }
  return area;
}

double area_101(const std::vector<double>& recall, const std::vector<double>& precision) {
  std::vector<double> envelope(precision);
  for (std::size_t i = envelope.size(); i-- > 1;) {
    envelope[i - 1] = std::max(envelope[i - 1], envelope[i]);
  }
  double sum = 0.0;
  std::size_t idx = 0;
  for (int k = 0; k <= 100; ++k) {
    const double r = k / 100.0;
    while (idx < recall.size() && recall[idx] < r) ++idx;
    if (idx < recall.size()) sum += envelope[idx];
  }
  return sum / 101.0;
}

}  // namespace

ApResult average_precision(std::span<const DetectionRecord> dets,
                           std::span<const DetectionRecord> gts, double iou_threshold,
                           ApInterpolation interpolation) {
  if (!(iou_threshold >= 0.0 && iou_threshold <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "IoU threshold must lie in [0, 1]");
  }
  ApResult result;
  result.num_gt = gts.size();
  if (gts.empty()) {
    result.empty_gt = true;
    result.false_positives = dets.size();
    return result;
  }

  std::map<FrameKey, std::vector<std::size_t>> gt_by_frame;
  for (std::size_t i = 0; i < gts.size(); ++i) {
    box_of(gts[i]);
    gt_by_frame[key_of(gts[i])].push_back(i);
  }
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dets[a].score > dets[b].score;
  });

  std::vector<char> gt_used(gts.size(), 0);
  std::vector<double> recall, precision;
  recall.reserve(dets.size());
  precision.reserve(dets.size());
  std::size_t tp = 0, fp = 0;
  for (std::size_t idx : order) {
    const BoundingBox2D& box = box_of(dets[idx]);
    double best_iou = -1.0;
    std::size_t best_gt = 0;
    if (const auto it = gt_by_frame.find(key_of(dets[idx])); it != gt_by_frame.end()) {
      for (std::size_t g : it->second) {
        if (gt_used[g]) continue;
        const double iou = iou_2d(box, *gts[g].bbox2d);
        if (iou >= iou_threshold && iou > best_iou) {
          best_iou = iou;
          best_gt = g;
        }
      }
    }
    if (best_iou >= 0.0) {
      gt_used[best_gt] = 1;
      ++tp;
    } else {
      ++fp;
    }
    recall.push_back(static_cast<double>(tp) / static_cast<double>(gts.size()));
    precision.push_back(static_cast<double>(tp) / static_cast<double>(tp + fp));
  }

  result.true_positives = tp;
  result.false_positives = fp;
  result.recall = static_cast<double>(tp) / static_cast<double>(gts.size());
  result.precision = dets.empty() ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  result.ap = interpolation == ApInterpolation::AllPoints ? area_all_points(recall, precision)
                                                          : area_101(recall, precision);
  return result;
}

std::vector<double> default_iou_thresholds() {
  std::vector<double> out;
  for (int k = 50; k <= 95; k += 5) out.push_back(k / 100.0);
  return out;
}

double ap_range(std::span<const DetectionRecord> dets, std::span<const DetectionRecord> gts,
                std::span<const double> thresholds, ApInterpolation interpolation) {
  if (thresholds.empty()) {
    throw Error(ErrorCode::InvalidArgument, "AP range needs at least one threshold");
  }
  double sum = 0.0;
  for (double t : thresholds) sum += average_precision(dets, gts, t, interpolation).ap;
  return sum / static_cast<double>(thresholds.size());
}

double ap_range(std::span<const DetectionRecord> dets, std::span<const DetectionRecord> gts,
                ApInterpolation interpolation) {
  const auto thresholds = default_iou_thresholds();
  return ap_range(dets, gts, thresholds, interpolation);
}

ClassGrouping default_class_grouping() {
  return {{ObjectClass::Bus, "Veh"},
          {ObjectClass::Car, "Veh"},
          {ObjectClass::Other, "Veh"},
          {ObjectClass::Cyclist, "Cyc"},
          {ObjectClass::Pedestrian, "Ped"}};
}

GroupAp average_precision_by_group(std::span<const DetectionRecord> dets,
                                   std::span<const DetectionRecord> gts,
                                   const ClassGrouping& grouping, ApInterpolation interpolation) {
  std::map<std::string, std::vector<DetectionRecord>> det_groups, gt_groups;
  for (const auto& d : dets) {
    if (auto it = grouping.find(d.class_name); it != grouping.end()) {
      det_groups[it->second].push_back(d);
    }
  }
  for (const auto& g : gts) {
    if (auto it = grouping.find(g.class_name); it != grouping.end()) {
      gt_groups[it->second].push_back(g);
    }
  }
  GroupAp out;
  for (const auto& [name, group_gt] : gt_groups) {
    const auto& group_det = det_groups[name];
    out.ap50[name] = average_precision(group_det, group_gt, 0.5, interpolation).ap;
    out.ap50_95[name] = ap_range(group_det, group_gt, interpolation);
  }
  if (!out.ap50.empty()) {
    for (const auto& [name, ap] : out.ap50) out.macro_ap50 += ap;
    for (const auto& [name, ap] : out.ap50_95) out.macro_ap50_95 += ap;
    out.macro_ap50 /= static_cast<double>(out.ap50.size());
    out.macro_ap50_95 /= static_cast<double>(out.ap50_95.size());
  }
  return out;
}

}  // namespace curb
