#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>

#include <doctest.h>

#include "curb/error.hpp"
#include "curb/metrics.hpp"
#include "oracles.hpp"

using namespace curb;

namespace {

DetectionRecord box(std::int64_t frame, BoundingBox2D b, double score = 1.0,
                    std::optional<std::int64_t> track = std::nullopt,
                    ObjectClass cls = ObjectClass::Car) {
  DetectionRecord r;
  r.frame_id = frame;
  r.sensor_id = "cam0";
  r.class_name = cls;
  r.bbox2d = b;
  r.score = score;
  r.track_id = track;
  return r;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Io;
}

// --- independent oracles ---------------------------------------------------

double iou_oracle(const BoundingBox2D& a, const BoundingBox2D& b) {
  const double w = std::max(0.0, std::min(a.u2, b.u2) - std::max(a.u1, b.u1));
  const double h = std::max(0.0, std::min(a.v2, b.v2) - std::max(a.v1, b.v1));
  const double i = w * h;
  return i / ((a.u2 - a.u1) * (a.v2 - a.v1) + (b.u2 - b.u1) * (b.v2 - b.v1) - i);
}

// Minimum cost over every injective row→column map; +inf pairs are left
// unassigned. Maximizes the number of assigned pairs first.
double brute_force_assignment(const std::vector<double>& c, std::size_t rows, std::size_t cols,
                              std::size_t& pairs) {
  std::vector<int> choice(rows, -1);
  std::vector<char> used(cols, 0);
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_pairs = 0;
  std::function<void(std::size_t, double, std::size_t)> rec = [&](std::size_t r, double sum,
                                                                  std::size_t n) {
    if (r == rows) {
      if (n > best_pairs || (n == best_pairs && sum < best)) {
        best = sum;
        best_pairs = n;
      }
      return;
    }
    rec(r + 1, sum, n);
    for (std::size_t k = 0; k < cols; ++k) {
      if (used[k] || !std::isfinite(c[r * cols + k])) continue;
      used[k] = 1;
      rec(r + 1, sum + c[r * cols + k], n + 1);
      used[k] = 0;
    }
  };
  rec(0, 0.0, 0);
  pairs = best_pairs;
  return best_pairs == 0 ? 0.0 : best;
}

// All-point interpolated AP, class-agnostic, single frame list per frame_id.
double ap_oracle(std::vector<DetectionRecord> dets, const std::vector<DetectionRecord>& gts,
                 double thr) {
  if (gts.empty()) return 0.0;
  std::stable_sort(dets.begin(), dets.end(),
                   [](const auto& a, const auto& b) { return a.score > b.score; });
  std::vector<char> taken(gts.size(), 0);
  std::vector<int> tp;
  for (const auto& d : dets) {
    int best = -1;
    double best_iou = -1;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (taken[g] || gts[g].frame_id != d.frame_id) continue;
      const double o = iou_oracle(*d.bbox2d, *gts[g].bbox2d);
      if (o >= thr && o > best_iou) {
        best_iou = o;
        best = static_cast<int>(g);
      }
    }
    if (best >= 0) taken[best] = 1;
    tp.push_back(best >= 0);
  }
  std::vector<double> prec, rec;
  double ctp = 0;
  for (std::size_t i = 0; i < tp.size(); ++i) {
    ctp += tp[i];
    prec.push_back(ctp / (i + 1));
    rec.push_back(ctp / gts.size());
  }
  double ap = 0, prev_r = 0;
  for (std::size_t i = 0; i < tp.size(); ++i) {
    if (!tp[i]) continue;
    const double env = *std::max_element(prec.begin() + i, prec.end());
    ap += (rec[i] - prev_r) * env;
    prev_r = rec[i];
  }
  return ap;
}

}  // namespace

// ---------------------------------------------------------------------------

TEST_CASE("record validation and enums") {
  DetectionRecord r = box(0, {0, 0, 10, 10});
  CHECK_NOTHROW(r.validate());
  r.score = 1.5;
  CHECK_THROWS_AS(r.validate(), Error);
  r = box(0, {10, 0, 10, 10});
  CHECK_THROWS_AS(r.validate(), Error);
  r.bbox2d.reset();
  CHECK_THROWS_AS(r.validate(), Error);
  r.box3d = Box3D{Vector3::Zero(), 4, 2, 1.5, 0};
  CHECK_NOTHROW(r.validate());
  r.box3d->w = 0;
  CHECK_THROWS_AS(r.validate(), Error);

  for (auto c : {ObjectClass::Bus, ObjectClass::Car, ObjectClass::Cyclist, ObjectClass::Pedestrian,
                 ObjectClass::Other}) {
    CHECK(parse_object_class(to_string(c)) == c);
  }
  CHECK(parse_motion_state("moving") == MotionState::Moving);
  CHECK(parse_motion_state("static") == MotionState::Static);
  CHECK_THROWS_AS(parse_object_class("Truck"), Error);
  CHECK(parse_scenario("hard") == Scenario::Uneven);
  CHECK(parse_scenario("partially-even") == Scenario::PartiallyEven);
}

TEST_CASE("2D IoU") {
  CHECK(iou_2d({0, 0, 10, 10}, {0, 0, 10, 6}) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(iou_2d({0, 0, 1, 1}, {2, 2, 3, 3}) == 0.0);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> x(0, 100), s(1, 50);
  for (int i = 0; i < 10000; ++i) {
    const double a0 = x(rng), a1 = x(rng), b0 = x(rng), b1 = x(rng);
    const BoundingBox2D a{a0, a1, a0 + s(rng), a1 + s(rng)}, b{b0, b1, b0 + s(rng), b1 + s(rng)};
    REQUIRE(std::abs(iou_2d(a, b) - iou_oracle(a, b)) < 1e-12);
    REQUIRE(iou_2d(a, b) == iou_2d(b, a));
  }
}

TEST_CASE("BEV and 3D IoU") {
  const Box3D a{Vector3(0, 0, 1), 4, 2, 2, 0};
  CHECK(iou_bev(a, a) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(iou_3d(a, a) == doctest::Approx(1.0).epsilon(1e-12));
  Box3D b = a;
  b.center.x() = 2;  // half overlap along length
  CHECK(iou_bev(a, b) == doctest::Approx(4.0 / 12.0).epsilon(1e-12));
  b = a;
  b.center.z() = 2;  // half overlap in height
  CHECK(iou_3d(a, b) == doctest::Approx(8.0 / 24.0).epsilon(1e-12));
  b = a;
  b.yaw = std::acos(-1.0);  // same footprint
  CHECK(iou_bev(a, b) == doctest::Approx(1.0).epsilon(1e-12));

  // rotated footprints against a fine sampling grid
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> pos(-1.5, 1.5), yaw(-3, 3), dim(1, 4);
  auto inside = [](const Box3D& q, double x, double y) {
    const double c = std::cos(q.yaw), s = std::sin(q.yaw);
    const double lx = c * (x - q.center.x()) + s * (y - q.center.y());
    const double ly = -s * (x - q.center.x()) + c * (y - q.center.y());
    return std::abs(lx) <= q.l / 2 && std::abs(ly) <= q.w / 2;
  };
  for (int t = 0; t < 20; ++t) {
    const Box3D p{Vector3(pos(rng), pos(rng), 0), dim(rng), dim(rng), 1, yaw(rng)};
    const Box3D q{Vector3(pos(rng), pos(rng), 0), dim(rng), dim(rng), 1, yaw(rng)};
    double inter = 0, uni = 0;
    const double step = 0.01;
    for (double x = -5; x < 5; x += step) {
      for (double y = -5; y < 5; y += step) {
        const bool ip = inside(p, x, y), iq = inside(q, x, y);
        inter += ip && iq;
        uni += ip || iq;
      }
    }
    CHECK(std::abs(iou_bev(p, q) - inter / uni) < 5e-3);
  }
}

TEST_CASE("assignment against brute force") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> cost(0, 10), unit(0, 1);
  std::uniform_int_distribution<int> size(0, 5);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t rows = size(rng), cols = size(rng);
    std::vector<double> c(rows * cols);
    for (auto& v : c) v = unit(rng) < 0.25 ? std::numeric_limits<double>::infinity() : cost(rng);
    const auto a = solve_assignment(c, rows, cols);
    REQUIRE(a.size() == rows);
    double sum = 0;
    std::size_t n = 0;
    std::vector<char> used(cols, 0);
    for (std::size_t r = 0; r < rows; ++r) {
      if (a[r] < 0) continue;
      REQUIRE(!used[a[r]]);
      used[a[r]] = 1;
      REQUIRE(std::isfinite(c[r * cols + a[r]]));
      sum += c[r * cols + a[r]];
      ++n;
    }
    std::size_t oracle_pairs = 0;
    const double oracle_sum = brute_force_assignment(c, rows, cols, oracle_pairs);
    REQUIRE(n == oracle_pairs);
    REQUIRE(std::abs(sum - oracle_sum) < 1e-9);
  }
}

TEST_CASE("distance error profile") {
  const std::vector<DistancePair> pairs = {{20, 21}, {20, 19}};
  const DistanceErrorProfile p = distance_error_profile(pairs, 10, "p3d", Scenario::Even);
  REQUIRE(p.bins.size() == 3);
  CHECK(p.bins[2].range_lo == 20);
  CHECK(p.bins[2].range_hi == 30);
  CHECK(p.bins[2].count == 2);
  CHECK(*p.bins[2].mean_abs_error == 1.0);
  CHECK_FALSE(p.bins[0].mean_abs_error.has_value());
  CHECK(p.bins[0].count == 0);
  CHECK(*p.overall_mae() == 1.0);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> d(0.1, 120);
  std::vector<DistancePair> many;
  for (int i = 0; i < 1000; ++i) {
    const double g = d(rng);
    many.push_back({g, g});
  }
  const auto perfect = distance_error_profile(many, 7.5);
  CHECK(perfect.total_count() == 1000);
  for (std::size_t i = 0; i < perfect.bins.size(); ++i) {
    const auto& b = perfect.bins[i];
    if (b.mean_abs_error) CHECK(*b.mean_abs_error == 0.0);
    if (i > 0) CHECK(b.range_lo == perfect.bins[i - 1].range_hi);
  }
  CHECK_THROWS_AS(distance_error_profile(pairs, 0.0), Error);
  const std::vector<DistancePair> bad = {{0.0, 1.0}};
  CHECK_THROWS_AS(distance_error_profile(bad, 10), Error);
}

TEST_CASE("average precision hand cases") {
  const std::vector<DetectionRecord> gt1 = {box(0, {0, 0, 10, 10})};
  const std::vector<DetectionRecord> det1 = {box(0, {0, 0, 10, 6}, 0.9)};
  CHECK(average_precision(det1, gt1, 0.5).ap == 1.0);

  // two GT, one TP and one lower-scored FP
  const std::vector<DetectionRecord> gt2 = {box(0, {0, 0, 10, 10}), box(0, {100, 100, 110, 110})};
  const std::vector<DetectionRecord> det2 = {box(0, {0, 0, 10, 7}, 0.9),
                                             box(0, {50, 50, 60, 60}, 0.8)};
  const ApResult r = average_precision(det2, gt2, 0.5);
  CHECK(std::abs(r.ap - 0.5) < 1e-12);
  CHECK(r.true_positives == 1);
  CHECK(r.false_positives == 1);
  CHECK(r.precision == 0.5);
  CHECK(r.recall == 0.5);
  CHECK(std::abs(r.ap - ap_oracle(det2, gt2, 0.5)) < 1e-12);
  // COCO-style sampling of the same curve: recall 0..0.5 at precision 1
  CHECK(std::abs(average_precision(det2, gt2, 0.5, ApInterpolation::Points101).ap - 51.0 / 101) <
        1e-12);

  CHECK(std::abs(ap_range(det1, gt1) - 0.3) < 1e-12);
  CHECK(ap_range(gt2, gt2) == 1.0);
  CHECK(ap_range({}, gt2) == 0.0);
  for (double t : default_iou_thresholds()) CHECK(average_precision(gt2, gt2, t).ap == 1.0);

  const ApResult empty = average_precision(det1, {}, 0.5);
  CHECK(empty.ap == 0.0);
  CHECK(empty.empty_gt);
}

TEST_CASE("thresholds are exact hundredths") {
  const auto t = default_iou_thresholds();
  REQUIRE(t.size() == 10);
  CHECK(t.front() == 0.5);
  CHECK(t[2] == 0.6);
  CHECK(t.back() == 0.95);
}

TEST_CASE("average precision properties") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pos(0, 200), size(5, 40), jitter(-6, 6), score(0, 1);
  std::uniform_int_distribution<int> count(0, 8), frames(0, 2);
  for (int t = 0; t < 300; ++t) {
    std::vector<DetectionRecord> gts, dets;
    const int ng = count(rng);
    for (int i = 0; i < ng; ++i) {
      const double u = pos(rng), v = pos(rng);
      gts.push_back(box(frames(rng), {u, v, u + size(rng), v + size(rng)}));
      if (score(rng) < 0.8) {
        const auto& g = *gts.back().bbox2d;
        dets.push_back(box(gts.back().frame_id,
                           {g.u1 + jitter(rng), g.v1 + jitter(rng), g.u2 + jitter(rng) + 7,
                            g.v2 + jitter(rng) + 7},
                           score(rng)));
      }
    }
    for (int i = count(rng) / 2; i > 0; --i) {
      const double u = pos(rng), v = pos(rng);
      dets.push_back(box(frames(rng), {u, v, u + size(rng), v + size(rng)}, score(rng)));
    }
    std::sort(gts.begin(), gts.end(), [](auto& a, auto& b) { return a.frame_id < b.frame_id; });

    const double ap = average_precision(dets, gts, 0.5).ap;
    REQUIRE(std::abs(ap - ap_oracle(dets, gts, 0.5)) < 1e-12);

    // rank-only dependence
    auto warped = dets;
    for (auto& d : warped) d.score = std::pow(d.score, 3.0) * 0.5;
    REQUIRE(average_precision(warped, gts, 0.5).ap == ap);

    double mean = 0;
    const auto th = default_iou_thresholds();
    for (double x : th) mean += average_precision(dets, gts, x).ap;
    mean /= static_cast<double>(th.size());
    REQUIRE(ap_range(dets, gts) == mean);
  }
}

TEST_CASE("grouped AP") {
  const std::vector<DetectionRecord> gts = {
      box(0, {0, 0, 10, 10}, 1, {}, ObjectClass::Bus), box(0, {20, 0, 30, 10}, 1, {}, ObjectClass::Car),
      box(0, {40, 0, 50, 10}, 1, {}, ObjectClass::Pedestrian)};
  std::vector<DetectionRecord> dets = gts;
  dets.pop_back();
  const GroupAp g = average_precision_by_group(dets, gts);
  CHECK(g.ap50.at("Veh") == 1.0);
  CHECK(g.ap50.at("Ped") == 0.0);
  CHECK(g.ap50.count("Cyc") == 0);
  CHECK(g.macro_ap50 == 0.5);
}

TEST_CASE("CLEAR-MOT identical tracks") {
  Frames seq(5);
  for (int f = 0; f < 5; ++f) {
    for (int k = 0; k < 3; ++k) seq[f].push_back(box(f, {k * 50.0 + f, 0, k * 50.0 + 30 + f, 30}, 1, k));
  }
  const MotResult r = clear_mot(seq, seq, MotGate::iou());
  CHECK(r.mota == 1.0);
  CHECK(r.motp == 1.0);
  CHECK(r.fn + r.fp + r.idsw == 0);

  const MotResult none = clear_mot(Frames(5), seq, MotGate::iou());
  CHECK(none.mota == 0.0);
  CHECK(none.fn == 15);
}

TEST_CASE("CLEAR-MOT hand-built sequence") {
  Frames gt(10), pred(10);
  for (int f = 0; f < 10; ++f) {
    for (int k = 0; k < 3; ++k) {
      const BoundingBox2D b{k * 100.0 + 2 * f, 10, k * 100.0 + 40 + 2 * f, 60};
      gt[f].push_back(box(f, b, 1, k));
      if (f == 3 && k == 1) continue;  // one miss
      const std::int64_t id = (k == 2 && f >= 6) ? 7 : k;  // one identity switch
      pred[f].push_back(box(f, {b.u1 + 1, b.v1, b.u2 + 1, b.v2}, 0.9, id));
    }
  }
  pred[5].push_back(box(5, {600, 600, 640, 650}, 0.5, 42));  // one false alarm
  const MotResult r = clear_mot(pred, gt, MotGate::iou());
  CHECK(r.gt_total == 30);
  CHECK(r.fn == 1);
  CHECK(r.fp == 1);
  CHECK(r.idsw == 1);
  CHECK(std::abs(r.mota - 0.9) < 1e-12);
  CHECK(std::abs(r.motp - 39.0 / 41.0) < 1e-12);
}

TEST_CASE("CLEAR-MOT against a brute-force tracker") {
  // Reference: keep valid previous pairs, then exhaustive best assignment.
  auto reference = [](const Frames& pred, const Frames& gt, double gate) {
    std::map<std::int64_t, std::int64_t> last;
    std::size_t fn = 0, fp = 0, sw = 0, total = 0;
    for (std::size_t f = 0; f < gt.size(); ++f) {
      const auto& g = gt[f];
      const auto& p = pred[f];
      total += g.size();
      std::vector<int> m(g.size(), -1);
      std::vector<char> used(p.size(), 0);
      for (std::size_t i = 0; i < g.size(); ++i) {
        auto it = last.find(*g[i].track_id);
        if (it == last.end()) continue;
        for (std::size_t j = 0; j < p.size(); ++j) {
          if (!used[j] && *p[j].track_id == it->second) {
            if (iou_oracle(*g[i].bbox2d, *p[j].bbox2d) >= gate) {
              m[i] = static_cast<int>(j);
              used[j] = 1;
            }
            break;
          }
        }
      }
      std::vector<std::size_t> fg, fpr;
      for (std::size_t i = 0; i < g.size(); ++i) if (m[i] < 0) fg.push_back(i);
      for (std::size_t j = 0; j < p.size(); ++j) if (!used[j]) fpr.push_back(j);
      // exhaustive search
      std::vector<int> best(fg.size(), -1), cur(fg.size(), -1);
      std::vector<char> taken(fpr.size(), 0);
      std::size_t best_n = 0;
      double best_c = INFINITY;
      std::function<void(std::size_t, std::size_t, double)> rec = [&](std::size_t a, std::size_t n,
                                                                      double c) {
        if (a == fg.size()) {
          if (n > best_n || (n == best_n && c < best_c)) {
            best_n = n;
            best_c = c;
            best = cur;
          }
          return;
        }
        cur[a] = -1;
        rec(a + 1, n, c);
        for (std::size_t b = 0; b < fpr.size(); ++b) {
          if (taken[b]) continue;
          const double o = iou_oracle(*g[fg[a]].bbox2d, *p[fpr[b]].bbox2d);
          if (o < gate) continue;
          taken[b] = 1;
          cur[a] = static_cast<int>(b);
          rec(a + 1, n + 1, c + 1 - o);
          taken[b] = 0;
        }
        cur[a] = -1;
      };
      rec(0, 0, 0.0);
      for (std::size_t a = 0; a < fg.size(); ++a) {
        if (best[a] < 0) continue;
        const auto j = fpr[best[a]];
        auto it = last.find(*g[fg[a]].track_id);
        if (it != last.end() && it->second != *p[j].track_id) ++sw;
        m[fg[a]] = static_cast<int>(j);
        used[j] = 1;
      }
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (m[i] < 0) ++fn;
        else last[*g[i].track_id] = *p[m[i]].track_id;
      }
      for (std::size_t j = 0; j < p.size(); ++j) fp += !used[j];
    }
    return std::array<std::size_t, 4>{fn, fp, sw, total};
  };

  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> drift(-4, 4), unit(0, 1);
  std::uniform_int_distribution<int> ids(0, 4);
  for (int t = 0; t < 300; ++t) {
    const int n = 1 + t % 4, frames = 6;
    std::vector<Vector2> pos(n);
    for (int k = 0; k < n; ++k) pos[k] = Vector2(k * 25.0 + unit(rng) * 10, unit(rng) * 10);
    Frames gt(frames), pred(frames);
    for (int f = 0; f < frames; ++f) {
      for (int k = 0; k < n; ++k) {
        pos[k] += Vector2(drift(rng), drift(rng));
        const BoundingBox2D b{pos[k].x(), pos[k].y(), pos[k].x() + 30, pos[k].y() + 30};
        gt[f].push_back(box(f, b, 1, k));
        if (unit(rng) < 0.15) continue;
        const std::int64_t id = unit(rng) < 0.2 ? ids(rng) : k;
        pred[f].push_back(box(f, {b.u1 + drift(rng), b.v1 + drift(rng), b.u2 + drift(rng),
                                  b.v2 + drift(rng)}, 1, id));
      }
    }
    const MotResult r = clear_mot(pred, gt, MotGate::iou(0.4));
    const auto o = reference(pred, gt, 0.4);
    REQUIRE(r.fn == o[0]);
    REQUIRE(r.fp == o[1]);
    REQUIRE(r.idsw == o[2]);
    REQUIRE(r.gt_total == o[3]);
    REQUIRE(r.mota <= 1.0);
    REQUIRE((r.mota == 1.0) == (r.fn + r.fp + r.idsw == 0));
  }
}

TEST_CASE("CLEAR-MOT with the BEV distance gate") {
  auto rec3 = [](std::int64_t f, double x, double y, std::int64_t id) {
    DetectionRecord r;
    r.frame_id = f;
    r.sensor_id = "lidar0";
    r.box3d = Box3D{Vector3(x, y, 0.75), 4.5, 1.8, 1.5, 0.0};
    r.track_id = id;
    return r;
  };
  Frames gt = {{rec3(0, 0, 0, 1)}, {rec3(1, 1, 0, 1)}};
  Frames near = {{rec3(0, 0.5, 0, 9)}, {rec3(1, 1.5, 0, 9)}};
  Frames far = {{rec3(0, 3, 0, 9)}, {rec3(1, 4, 0, 9)}};
  const MotResult a = clear_mot(near, gt, MotGate::bev_distance());
  CHECK(a.mota == 1.0);
  CHECK(std::abs(a.motp - 4.0 / 5.0) < 1e-9);  // 0.5 m shift along a 4.5 m box
  const MotResult b = clear_mot(far, gt, MotGate::bev_distance());
  CHECK(b.fn == 2);
  CHECK(b.fp == 2);
}

TEST_CASE("frame alignment") {
  const std::vector<DetectionRecord> p = {box(1, {0, 0, 1, 1}, 1, 1), box(3, {0, 0, 1, 1}, 1, 1)};
  const std::vector<DetectionRecord> g = {box(2, {0, 0, 1, 1}, 1, 1)};
  const auto [pf, gf] = align_frames(p, g);
  CHECK(pf.size() == 3);
  CHECK(gf[1].size() == 1);
  CHECK(pf[1].empty());
  const std::vector<DetectionRecord> unsorted = {box(3, {0, 0, 1, 1}), box(1, {0, 0, 1, 1})};
  CHECK(code_of([&] { align_frames(unsorted, g); }) == ErrorCode::FrameIndexing);
  CHECK(code_of([&] { clear_mot(Frames(2), Frames(3), MotGate::iou()); }) ==
        ErrorCode::FrameIndexing);
}

TEST_CASE("mask scores") {
  BinaryRaster gt(10, 4), pred(10, 4);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 10; ++x) {
      gt.at(x, y) = 1;
      if (x < 5) pred.at(x, y) = 1;
    }
  }
  const MaskScores m = mask_prf(pred, gt);
  CHECK(std::abs(m.precision - 1.0) < 1e-12);
  CHECK(std::abs(m.recall - 0.5) < 1e-12);
  CHECK(std::abs(m.f_measure - 2.0 / 3.0) < 1e-12);
  CHECK(std::abs(m.iou - 0.5) < 1e-12);

  const MaskScores same = mask_prf(gt, gt);
  CHECK(same.iou == 1.0);
  CHECK(same.f_measure == 1.0);
  BinaryRaster other(10, 4);
  other.at(0, 0) = 1;
  BinaryRaster rest = gt;
  rest.at(0, 0) = 0;
  const MaskScores disjoint = mask_prf(other, rest);
  CHECK(disjoint.iou == 0.0);
  CHECK(disjoint.precision == 0.0);
  CHECK(disjoint.recall == 0.0);
  CHECK(disjoint.f_measure == 0.0);
  const MaskScores empty = mask_prf(BinaryRaster(3, 3), BinaryRaster(3, 3));
  CHECK(empty.both_empty);
  CHECK(empty.iou == 1.0);
  CHECK_THROWS_AS(mask_prf(BinaryRaster(3, 3), BinaryRaster(3, 4)), Error);

  std::mt19937_64 rng(7);
  std::bernoulli_distribution bit(0.4);
  for (int t = 0; t < 10000; ++t) {
    BinaryRaster a(6, 5), b(6, 5);
    for (auto& p : a.pixels) p = bit(rng);
    for (auto& p : b.pixels) p = bit(rng);
    a.pixels[t % 30] = 1;
    b.pixels[(t * 7) % 30] = 1;
    const MaskScores s = mask_prf(a, b);
    REQUIRE(s.iou <= std::min(s.precision, s.recall) + 1e-15);
    REQUIRE(s.f_measure >= s.iou - 1e-15);
    REQUIRE(s.f_measure <= std::max(s.precision, s.recall) + 1e-15);
  }
}

TEST_CASE("flatness") {
  std::vector<TrajectorySample> line, flat, step;
  for (int i = 0; i <= 200; ++i) {
    const double s = 0.5 * i;
    line.push_back({0.1 * i, 0.0, s, 0.001 * s});
    flat.push_back({0.1 * i, s, 0.0, 12.0});
    step.push_back({0.1 * i, 0.0, s, s < 50 ? 0.0 : 0.3});
  }
  const FlatnessProfile a = flatness_profile(line);
  CHECK(std::abs(a.r_squared - 1.0) < 1e-12);
  CHECK(a.label == FlatnessLabel::Even);
  CHECK(std::abs(a.slope - 0.001) < 1e-12);

  const FlatnessProfile b = flatness_profile(flat);
  CHECK(b.zero_variance);
  CHECK(b.r_squared == 1.0);
  CHECK(b.label == FlatnessLabel::Even);

  const FlatnessProfile c = flatness_profile(step);
  std::vector<double> xs, zs;
  for (const auto& s : step) {
    xs.push_back(s.y);
    zs.push_back(s.z);
  }
  const oracle::Ols o = oracle::ols(xs, zs);
  CHECK(std::abs(c.r_squared - o.r2) < 1e-12);
  CHECK(std::abs(c.slope - o.slope) < 1e-12);
  CHECK(std::abs(c.intercept - o.intercept) < 1e-9);
  const FlatnessLabel expect = o.r2 >= 0.9 ? FlatnessLabel::Even
                               : o.r2 >= 0.6 ? FlatnessLabel::PartiallyEven
                                             : FlatnessLabel::Uneven;
  CHECK(c.label == expect);

  // arc length follows the driven path, not the straight-line span
  std::vector<TrajectorySample> bend;
  for (int i = 0; i <= 10; ++i) bend.push_back({double(i), double(std::min(i, 5)), double(std::max(0, i - 5)), 0.1 * i});
  const FlatnessProfile d = flatness_profile(bend);
  CHECK(d.samples.back().first == doctest::Approx(10.0));

  const std::vector<TrajectorySample> two = {{0, 0, 0, 0}, {1, 0, 5, 0}};
  CHECK_THROWS_AS(flatness_profile(two), Error);
  const std::vector<TrajectorySample> short_span = {{0, 0, 0, 0}, {1, 0, 0.2, 0}, {2, 0, 0.4, 0}};
  CHECK_THROWS_AS(flatness_profile(short_span), Error);
}
