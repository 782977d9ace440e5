#include "curb/error.hpp"
#include "curb/metrics.hpp"

namespace curb {

MaskScores mask_prf(const BinaryRaster& pred, const BinaryRaster& gt) {
  if (pred.width != gt.width || pred.height != gt.height ||
      pred.pixels.size() != gt.pixels.size()) {
    throw Error(ErrorCode::DimensionMismatch, "mask rasters differ in size");
  }
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < pred.pixels.size(); ++i) {
    const bool p = pred.pixels[i] != 0, g = gt.pixels[i] != 0;
    tp += p && g;
    fp += p && !g;
    fn += !p && g;
  }
  MaskScores s;
  if (tp + fp + fn == 0) {
    s.iou = s.precision = s.recall = s.f_measure = 1.0;
    s.both_empty = true;
    return s;
  }
  const auto d = [](std::size_t x) { return static_cast<double>(x); };
  s.iou = d(tp) / d(tp + fp + fn);
  s.precision = tp + fp > 0 ? d(tp) / d(tp + fp) : 0.0;
  s.recall = tp + fn > 0 ? d(tp) / d(tp + fn) : 0.0;
  s.f_measure = s.precision + s.recall > 0.0
                    ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
                    : 0.0;
  return s;
}

}  // namespace curb
