#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "curb/error.hpp"
#include "curb/metrics.hpp"

namespace curb {

namespace {

std::int64_t track_of(const DetectionRecord& r) {
  if (!r.track_id) throw Error(ErrorCode::InvalidArgument, "tracking records need a track_id");
  return *r.track_id;
}

struct PairScore {
  bool within_gate = false;
  double cost = 0.0;     // minimized by the assignment
  double overlap = 0.0;  // accumulated into MOTP
};

PairScore score_pair(const DetectionRecord& gt, const DetectionRecord& pred, const MotGate& gate) {
  PairScore s;
  if (gate.kind == MotGate::Kind::Iou2D) {
    if (!gt.bbox2d || !pred.bbox2d) {
      throw Error(ErrorCode::InvalidArgument, "IoU gating needs 2D boxes");
    }
    s.overlap = iou_2d(*gt.bbox2d, *pred.bbox2d);
    s.within_gate = s.overlap >= gate.value;
    s.cost = 1.0 - s.overlap;
  } else {
    if (!gt.box3d || !pred.box3d) {
      throw Error(ErrorCode::InvalidArgument, "distance gating needs 3D boxes");
    }
    const Vector2 a(gt.box3d->center.x(), gt.box3d->center.y());
    const Vector2 b(pred.box3d->center.x(), pred.box3d->center.y());
    const double dist = (a - b).norm();
    s.within_gate = dist <= gate.value;
    s.cost = dist;
    s.overlap = iou_bev(*gt.box3d, *pred.box3d);
  }
  return s;
}

}  // namespace

std::pair<Frames, Frames> align_frames(std::span<const DetectionRecord> pred,
                                       std::span<const DetectionRecord> gt) {
  auto check_sorted = [](std::span<const DetectionRecord> records, const char* what) {
    for (std::size_t i = 1; i < records.size(); ++i) {
      if (records[i].frame_id < records[i - 1].frame_id) {
        throw Error(ErrorCode::FrameIndexing,
                    std::string(what) + " records are not sorted by frame_id");
      }
    }
  };
  check_sorted(pred, "predicted");
  check_sorted(gt, "ground-truth");
  std::map<std::int64_t, std::size_t> slot;
  for (const auto& r : gt) slot.emplace(r.frame_id, 0);
  for (const auto& r : pred) slot.emplace(r.frame_id, 0);
  std::size_t k = 0;
  for (auto& [frame, index] : slot) index = k++;
  Frames p(slot.size()), g(slot.size());
  for (const auto& r : pred) p[slot.at(r.frame_id)].push_back(r);
  for (const auto& r : gt) g[slot.at(r.frame_id)].push_back(r);
  return {std::move(p), std::move(g)};
}

MotResult clear_mot(const Frames& pred, const Frames& gt, const MotGate& gate) {
  if (pred.size() != gt.size()) {
    throw Error(ErrorCode::FrameIndexing, "prediction and ground-truth sequences differ in length");
  }
  MotResult result;
  std::map<std::int64_t, std::int64_t> last_match;  // gt track -> pred track
  double overlap_sum = 0.0;

  for (std::size_t f = 0; f < gt.size(); ++f) {
    const auto& gts = gt[f];
    const auto& preds = pred[f];
    if (!gts.empty() && !preds.empty() && gts.front().frame_id != preds.front().frame_id) {
      throw Error(ErrorCode::FrameIndexing, "frame " + std::to_string(f) +
                                                " pairs different frame ids");
    }
    for (const auto* list : {&gts, &preds}) {
      for (const auto& r : *list) {
        if (r.frame_id != list->front().frame_id) {
          throw Error(ErrorCode::FrameIndexing, "frame " + std::to_string(f) +
                                                    " mixes several frame ids");
        }
      }
    }
    result.gt_total += gts.size();

    std::vector<int> gt_to_pred(gts.size(), -1);
    std::vector<char> pred_used(preds.size(), 0);

    // Keep last frame's correspondences that are still valid.
    for (std::size_t i = 0; i < gts.size(); ++i) {
      const auto it = last_match.find(track_of(gts[i]));
      if (it == last_match.end()) continue;
      for (std::size_t j = 0; j < preds.size(); ++j) {
        if (pred_used[j] || track_of(preds[j]) != it->second) continue;
        const PairScore s = score_pair(gts[i], preds[j], gate);
        if (s.within_gate) {
          gt_to_pred[i] = static_cast<int>(j);
          pred_used[j] = 1;
          overlap_sum += s.overlap;
        }
        break;
      }
    }

    // Optimal assignment over everything else.
    std::vector<std::size_t> free_gt, free_pred;
    for (std::size_t i = 0; i < gts.size(); ++i) {
      if (gt_to_pred[i] < 0) free_gt.push_back(i);
    }
    for (std::size_t j = 0; j < preds.size(); ++j) {
      if (!pred_used[j]) free_pred.push_back(j);
    }
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> cost(free_gt.size() * free_pred.size(), inf);
    std::vector<PairScore> scores(cost.size());
    for (std::size_t a = 0; a < free_gt.size(); ++a) {
      for (std::size_t b = 0; b < free_pred.size(); ++b) {
        const PairScore s = score_pair(gts[free_gt[a]], preds[free_pred[b]], gate);
        scores[a * free_pred.size() + b] = s;
        if (s.within_gate) cost[a * free_pred.size() + b] = s.cost;
      }
    }
    const auto assigned = solve_assignment(cost, free_gt.size(), free_pred.size());
    for (std::size_t a = 0; a < free_gt.size(); ++a) {
      if (assigned[a] < 0) continue;
      const std::size_t i = free_gt[a];
      const std::size_t j = free_pred[static_cast<std::size_t>(assigned[a])];
      const std::int64_t gt_track = track_of(gts[i]);
      const std::int64_t pred_track = track_of(preds[j]);
      if (const auto it = last_match.find(gt_track);
          it != last_match.end() && it->second != pred_track) {
        ++result.idsw;
      }
      gt_to_pred[i] = static_cast<int>(j);
      pred_used[j] = 1;
      overlap_sum += scores[a * free_pred.size() + static_cast<std::size_t>(assigned[a])].overlap;
    }

    for (std::size_t i = 0; i < gts.size(); ++i) {
      if (gt_to_pred[i] < 0) {
        ++result.fn;
      } else {
        ++result.matches;
        last_match[track_of(gts[i])] = track_of(preds[static_cast<std::size_t>(gt_to_pred[i])]);
      }
    }
    for (std::size_t j = 0; j < preds.size(); ++j) {
      if (!pred_used[j]) ++result.fp;
    }
  }

  const double errors = static_cast<double>(result.fn + result.fp + result.idsw);
  // An empty ground truth normalizes by one so MOTA stays finite.
  result.mota = 1.0 - errors / static_cast<double>(std::max<std::size_t>(result.gt_total, 1));
  result.motp = result.matches > 0 ? overlap_sum / static_cast<double>(result.matches) : 0.0;
  return result;
}

}  // namespace curb
