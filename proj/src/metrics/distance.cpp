#include <cmath>

#include "curb/error.hpp"
#include "curb/metrics.hpp"

namespace curb {

std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::Even: return "even";
    case Scenario::PartiallyEven: return "partially-even";
    case Scenario::Uneven: return "uneven";
  }
  return "even";
}

Scenario parse_scenario(std::string_view text) {
  if (text == "even" || text == "easy") return Scenario::Even;
  if (text == "partially-even" || text == "medium") return Scenario::PartiallyEven;
  if (text == "uneven" || text == "hard") return Scenario::Uneven;
  throw Error(ErrorCode::InvalidArgument, "unknown scenario '" + std::string(text) + "'");
}

std::size_t DistanceErrorProfile::total_count() const {
  std::size_t n = 0;
  for (const auto& b : bins) n += b.count;
  return n;
}

std::optional<double> DistanceErrorProfile::overall_mae() const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& b : bins) {
    if (b.count > 0) {
      sum += *b.mean_abs_error * static_cast<double>(b.count);
      n += b.count;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

DistanceErrorProfile distance_error_profile(std::span<const DistancePair> pairs, double bin_width,
                                            std::string method_name, Scenario scenario) {
  if (!(bin_width > 0.0) || !std::isfinite(bin_width)) {
    throw Error(ErrorCode::InvalidArgument, "bin width must be positive");
  }
  DistanceErrorProfile profile;
  profile.method_name = std::move(method_name);
  profile.scenario = scenario;

  std::size_t num_bins = 0;
  for (const auto& p : pairs) {
    if (!(p.gt > 0.0) || !std::isfinite(p.gt) || !std::isfinite(p.pred)) {
      throw Error(ErrorCode::InvalidArgument, "ground-truth distances must be positive and finite");
    }
    num_bins = std::max(num_bins, static_cast<std::size_t>(std::floor(p.gt / bin_width)) + 1);
  }
  std::vector<double> sums(num_bins, 0.0);
  profile.bins.resize(num_bins);
  for (std::size_t i = 0; i < num_bins; ++i) {
    profile.bins[i].range_lo = static_cast<double>(i) * bin_width;
    profile.bins[i].range_hi = static_cast<double>(i + 1) * bin_width;
  }
  for (const auto& p : pairs) {
    const auto i = static_cast<std::size_t>(std::floor(p.gt / bin_width));
    sums[i] += std::abs(p.pred - p.gt);
    ++profile.bins[i].count;
  }
  for (std::size_t i = 0; i < num_bins; ++i) {
    if (profile.bins[i].count > 0) {
      profile.bins[i].mean_abs_error = sums[i] / static_cast<double>(profile.bins[i].count);
    }
  }
  return profile;
}

}  // namespace curb
