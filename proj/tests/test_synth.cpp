#include <cmath>
#include <numbers>

#include <doctest.h>

#include "curb/error.hpp"
#include "curb/synth.hpp"

using namespace curb;

namespace {

double deg(double d) { return d * std::numbers::pi / 180.0; }

SceneOptions flat_options(std::uint64_t seed) {
  SceneOptions o;
  o.camera = SceneOptions::default_camera();
  o.camera.k1 = -0.05;
  o.camera.k2 = 0.01;
  o.height = 4.0;
  o.alpha = -deg(9.0);
  o.seed = seed;
  o.n_targets = 300;
  return o;
}

}  // namespace

TEST_CASE("same seed, same scene") {
  for (auto preset : {Preset::Even, Preset::PartiallyEven, Preset::Uneven}) {
    const SyntheticScene a = make_scene(preset_options(preset, 11));
    const SyntheticScene b = make_scene(preset_options(preset, 11));
    REQUIRE(a.targets.size() == b.targets.size());
    for (std::size_t i = 0; i < a.targets.size(); ++i) {
      CHECK(a.targets[i].ground == b.targets[i].ground);
      CHECK(a.targets[i].class_name == b.targets[i].class_name);
    }
    const auto ra = render_contacts(a), rb = render_contacts(b);
    REQUIRE(ra.contacts.size() == rb.contacts.size());
    for (std::size_t i = 0; i < ra.contacts.size(); ++i) {
      CHECK(ra.contacts[i].contact.pixel.u == rb.contacts[i].contact.pixel.u);
      CHECK(ra.contacts[i].contact.pixel.v == rb.contacts[i].contact.pixel.v);
    }
    const auto ca = render_ground_cloud(a, 500, 0.02, 0.1), cb = render_ground_cloud(b, 500, 0.02, 0.1);
    for (std::size_t i = 0; i < ca.points.size(); ++i) CHECK(ca.points[i] == cb.points[i]);
  }
  const SyntheticScene c = make_scene(preset_options(Preset::Even, 12));
  const SyntheticScene d = make_scene(preset_options(Preset::Even, 11));
  CHECK(c.targets[0].ground != d.targets[0].ground);
  CHECK(c.height != d.height);
}

TEST_CASE("drawn heights stay in range") {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    SceneOptions o = flat_options(seed);
    o.height.reset();
    const double h = make_scene(o).height;
    REQUIRE(h >= 2.5);
    REQUIRE(h <= 6.5);
    const double hp = *preset_options(Preset::Uneven, seed).height;
    REQUIRE(hp >= 2.5);
    REQUIRE(hp <= 6.5);
  }
}

TEST_CASE("invalid options") {
  SceneOptions o = flat_options(0);
  o.height = -1.0;
  CHECK_THROWS_AS(make_scene(o), Error);
  o = flat_options(0);
  o.plane_breaks = {{20, 0.1}, {10, 0.1}};
  CHECK_THROWS_AS(make_scene(o), Error);
  o = flat_options(0);
  o.range_min = 50;
  o.range_max = 40;
  CHECK_THROWS_AS(make_scene(o), Error);
  CHECK_THROWS_AS(parse_preset("hilly"), Error);
  CHECK(parse_preset("partially-even") == Preset::PartiallyEven);
}

TEST_CASE("road profile") {
  RoadProfile p{{{10, 0.5}, {20, -0.25}}};
  CHECK(p.altitude(5) == 0.0);
  CHECK(p.altitude(10) == 0.0);
  CHECK(p.altitude(14) == doctest::Approx(2.0));
  CHECK(p.altitude(30) == doctest::Approx(5.0 - 2.5));
  CHECK(p.segment(9.99) == 0);
  CHECK(p.segment(10) == 1);
  CHECK(p.segment(25) == 2);
  CHECK(p.grade(25) == -0.25);
}

TEST_CASE("a target lifted to camera height is omitted at the horizon") {
  // ground climbs 5 m between z' = 20 and 30, reaching the camera's height
  SyntheticScene s = make_scene(5.0, 0.0, 0.0, {{20.0, 0.5}}, 0, 1);
  s.targets = {{Vector2(0.0, 30.0), ObjectClass::Car}, {Vector2(0.0, 15.0), ObjectClass::Car},
               {Vector2(0.0, 40.0), ObjectClass::Car}};
  const RenderedContacts r = render_contacts(s);
  REQUIRE(r.contacts.size() == 1);
  CHECK(r.contacts[0].target_index == 1);
  REQUIRE(r.omitted.size() == 2);
  for (const auto& o : r.omitted) CHECK(o.reason == OmitReason::AtOrAboveHorizon);

  s.targets = {{Vector2(0.0, -5.0), ObjectClass::Car}, {Vector2(400.0, 12.0), ObjectClass::Car}};
  const RenderedContacts q = render_contacts(s);
  REQUIRE(q.omitted.size() == 2);
  CHECK(q.omitted[0].reason == OmitReason::BehindCamera);
  CHECK(q.omitted[1].reason == OmitReason::OutOfImage);
}

TEST_CASE("contact noise statistics") {
  SceneOptions o = flat_options(21);
  o.n_targets = 10000;
  o.range_min = 8;
  o.range_max = 40;
  o.lateral_half_width = 3;
  o.noise.pixel_sigma = 0.5;
  const auto r = render_contacts(make_scene(o));
  REQUIRE(r.contacts.size() == 10000);
  double su = 0, sv = 0, suu = 0, svv = 0, suv = 0;
  for (const auto& c : r.contacts) {
    const double du = c.contact.pixel.u - c.exact_pixel.u;
    const double dv = c.contact.pixel.v - c.exact_pixel.v;
    su += du;
    sv += dv;
    suu += du * du;
    svv += dv * dv;
    suv += du * dv;
  }
  const double n = 10000;
  // mean within 4 standard errors, spread within 4%
  CHECK(std::abs(su / n) < 4 * 0.5 / 100);
  CHECK(std::abs(sv / n) < 4 * 0.5 / 100);
  CHECK(std::abs(std::sqrt(suu / n) / 0.5 - 1) < 0.04);
  CHECK(std::abs(std::sqrt(svv / n) / 0.5 - 1) < 0.04);
  CHECK(std::abs(suv / n) / 0.25 < 0.05);
}

TEST_CASE("noiseless contacts invert exactly") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SceneOptions o = flat_options(seed);
    o.height.reset();
    o.alpha = -deg(4.0 + seed % 7);
    SyntheticScene s = make_scene(o);
    const auto r = render_contacts(s);
    REQUIRE(r.contacts.size() > 50);
    std::vector<ContactPoint> ideal;
    for (const auto& c : r.contacts) {
      CHECK(c.contact.pixel.u == c.exact_pixel.u);
      ideal.push_back({undistort(s.camera, c.contact.pixel), c.bbox_id});
    }
    const P3DBatchResult b = p3d_batch(s.p3d_config(), ideal);
    // barrel distortion can push an in-image contact outside once undone
    for (const auto& k : b.skipped) {
      REQUIRE(k.reason == SkipReason::OutOfBounds);
      REQUIRE_FALSE(s.camera.contains(ideal[k.index].pixel));
    }
    REQUIRE(b.skipped.size() < r.contacts.size() / 10);
    for (std::size_t i = 0; i < b.estimates.size(); ++i) {
      const auto& c = r.contacts[b.estimates[i].index];
      REQUIRE((b.estimates[i].point - c.gt_point).norm() <= 1e-9 * c.gt_distance);
      REQUIRE(std::abs(c.gt_distance - c.gt_point.norm()) == 0.0);
    }

    // box geometry: the contact is the lower-edge midpoint
    for (const auto& c : r.contacts) {
      const ContactPoint cp = contact_point(c.bbox);
      REQUIRE(std::abs(cp.pixel.u - c.contact.pixel.u) < 1e-9);
      REQUIRE(cp.pixel.v == c.contact.pixel.v);
    }
  }
}

TEST_CASE("contacts on broken ground match the segment planes") {
  for (auto preset : {Preset::PartiallyEven, Preset::Uneven}) {
    SceneOptions o = preset_options(preset, 4);
    o.noise = {};
    o.gamma = deg(1.0);
    const SyntheticScene s = make_scene(o);
    REQUIRE(s.ground.size() == s.profile.breaks.size() + 1);
    for (const auto& c : render_contacts(s).contacts) {
      const GroundPlane& plane = s.ground[s.profile.segment(c.gt_ground.y())];
      const Vector3 x = exact_ground_intersection(s.camera, plane, undistort(s.camera, c.exact_pixel));
      REQUIRE((x - c.gt_point).norm() <= 1e-8 * c.gt_distance);
    }
  }
}

TEST_CASE("ground cloud") {
  SceneOptions o = flat_options(5);
  o.lidar_pitch = deg(1.5);
  o.lidar_roll = -deg(0.7);
  const SyntheticScene s = make_scene(o);
  const GroundPlane plane = s.lidar_ground_plane();
  CHECK(plane.d == doctest::Approx(4.3));
  const PointCloud exact = render_ground_cloud(s, 2000, 0.0, 0.0);
  for (const auto& p : exact.points) REQUIRE(std::abs(plane.signed_distance(p)) < 1e-12);

  const PointCloud noisy = render_ground_cloud(s, 20000, 0.02, 0.1);
  RansacOptions ro;
  ro.seed = 3;
  const PlaneFit fit = fit_ground_plane(noisy, ro);
  CHECK(fit.inlier_ratio() >= 0.88);
  CHECK(fit.plane.normal.dot(plane.normal) > std::cos(deg(0.2)));
  CHECK(std::abs(fit.plane.d - plane.d) < 0.01);
}

TEST_CASE("control points and lane lines are consistent with the pose") {
  SceneOptions o = flat_options(8);
  o.alpha = -deg(7.0);
  const SyntheticScene s = make_scene(o);
  const auto cps = render_control_points(s, 8);
  REQUIRE(cps.size() == 8);
  std::vector<GroundCorrespondence> ideal;
  for (const auto& c : cps) {
    CHECK(c.ground.y() >= 8.0);
    CHECK(c.ground.y() <= 30.0);
    ideal.push_back({undistort(s.camera, c.pixel), c.ground});
  }
  const IpmFit fit = ipm_fit(ideal);
  CHECK(fit.max_residual_m < 1e-8);

  const auto lines = render_lane_lines(s);
  std::vector<ImageLine> straight;
  for (const auto& l : lines) straight.push_back({undistort(s.camera, l.p), undistort(s.camera, l.q)});
  const double alpha = pitch_from_vanishing(s.camera, vanishing_point(straight));
  CHECK(std::abs(alpha - s.alpha) < 1e-10);
}

TEST_CASE("preset trajectories carry their flatness label") {
  const std::pair<Preset, FlatnessLabel> cases[] = {
      {Preset::Even, FlatnessLabel::Even},
      {Preset::PartiallyEven, FlatnessLabel::PartiallyEven},
      {Preset::Uneven, FlatnessLabel::Uneven}};
  for (const auto& [preset, label] : cases) {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      const SyntheticScene s = make_scene(preset_options(preset, seed));
      const FlatnessProfile f = flatness_profile(render_trajectory(s));
      INFO(to_string(preset), " seed ", seed, " r2 ", f.r_squared);
      CHECK(f.label == label);
    }
  }
}

TEST_CASE("detections built from contacts") {
  SceneOptions o = flat_options(9);
  o.noise.pixel_sigma = 0.5;
  const SyntheticScene s = make_scene(o);
  const auto r = render_contacts(s);
  const auto noisy = contacts_to_detections(s, r.contacts, false);
  const auto exact = contacts_to_detections(s, r.contacts, true);
  REQUIRE(noisy.size() == r.contacts.size());
  for (std::size_t i = 0; i < noisy.size(); ++i) {
    CHECK_NOTHROW(noisy[i].validate());
    const ContactPoint ce = contact_point(*exact[i].bbox2d);
    CHECK(std::abs(ce.pixel.u - r.contacts[i].exact_pixel.u) < 1e-9);
    CHECK(std::abs(ce.pixel.v - r.contacts[i].exact_pixel.v) < 1e-9);
    CHECK(noisy[i].bbox_id == r.contacts[i].bbox_id);
  }
}
