#include <algorithm>
#include <cmath>

#include "curb/error.hpp"
#include "curb/metrics.hpp"

namespace curb {

std::string_view to_string(FlatnessLabel label) {
  switch (label) {
    case FlatnessLabel::Even: return "even";
    case FlatnessLabel::PartiallyEven: return "partially-even";
    case FlatnessLabel::Uneven: return "uneven";
  }
  return "even";
}

FlatnessProfile flatness_profile(std::span<const TrajectorySample> samples,
                                 const FlatnessThresholds& thresholds) {
  if (samples.size() < 3) {
    throw Error(ErrorCode::InsufficientData, "flatness profile needs at least three samples");
  }
  FlatnessProfile profile;
  profile.samples.reserve(samples.size());
  double s = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (i > 0) s += std::hypot(samples[i].x - samples[i - 1].x, samples[i].y - samples[i - 1].y);
    profile.samples.emplace_back(s, samples[i].z);
  }
  if (!(s > 1.0)) {
    throw Error(ErrorCode::InsufficientData, "trajectory spans 1 m or less");
  }

  const auto n = static_cast<double>(samples.size());
  double mean_s = 0.0, mean_z = 0.0;
  for (const auto& [si, zi] : profile.samples) {
    mean_s += si;
    mean_z += zi;
  }
  mean_s /= n;
  mean_z /= n;
  double sss = 0.0, ssz = 0.0, szz = 0.0;
  for (const auto& [si, zi] : profile.samples) {
    sss += (si - mean_s) * (si - mean_s);
    ssz += (si - mean_s) * (zi - mean_z);
    szz += (zi - mean_z) * (zi - mean_z);
  }
  profile.slope = ssz / sss;
  profile.intercept = mean_z - profile.slope * mean_s;
  double ss_res = 0.0;
  for (const auto& [si, zi] : profile.samples) {
    const double r = zi - (profile.slope * si + profile.intercept);
    ss_res += r * r;
  }
  if (szz == 0.0) {
    profile.zero_variance = true;
    profile.r_squared = 1.0;
  } else {
    profile.r_squared = std::clamp(1.0 - ss_res / szz, 0.0, 1.0);
  }
  if (profile.r_squared >= thresholds.even) {
    profile.label = FlatnessLabel::Even;
  } else if (profile.r_squared >= thresholds.uneven) {
    profile.label = FlatnessLabel::PartiallyEven;
  } else {
    profile.label = FlatnessLabel::Uneven;
  }
  return profile;
}

}  // namespace curb
