#include <map>
#include <vector>

#include "doctest.h"
#include "jhtrack/tracker.hpp"

using namespace jhtrack;

namespace {

Homography scene_homography() {
  Eigen::Matrix3d m;
  m << 50.0, 0.0, 640.0, 0.0, 25.0, 120.0, 0.0, 0.002, 1.0;
  return Homography(m);
}

// Box of an agent walking at constant ground velocity, projected each frame.
BBox agent_box(long frame, const GroundPoint& start, const Eigen::Vector2d& vel,
               double dt) {
  const GroundPoint g = start + vel * (static_cast<double>(frame - 1) * dt);
  const ImagePoint bc = project(scene_homography(), g);
  return BBox{bc.x() - 10.0, bc.y() - 40.0, bc.x() + 10.0, bc.y()};
}

}  // namespace

TEST_CASE("detection confidence split") {
  std::vector<int> high, low;
  split_detections({{BBox{}, 0.9}, {BBox{}, 0.55}, {BBox{}, 0.3}}, 0.6, 0.5,
                   high, low);
  CHECK(high == std::vector<int>{0});
  CHECK(low == std::vector<int>{1});

  CHECK_THROWS_AS(split_detections({}, 0.4, 0.5, high, low), InvalidThresholds);
}

TEST_CASE("single agent is confirmed on the second frame") {
  TrackerConfig cfg;
  Tracker tracker(scene_homography(), cfg);
  const GroundPoint start(-2.0, 8.0);
  const Eigen::Vector2d vel(1.0, 0.0);

  const FrameResult r1 =
      tracker.step(1, {{agent_box(1, start, vel, cfg.dt), 0.9}});
  CHECK(r1.rows.empty());  // tentative tracks are not reported
  REQUIRE(r1.diags.size() == 1);
  CHECK_FALSE(r1.diags.empty());

  const BBox b2 = agent_box(2, start, vel, cfg.dt);
  const FrameResult r2 = tracker.step(2, {{b2, 0.85}});
  REQUIRE(r2.rows.size() == 1);
  CHECK(r2.rows[0].id == 1);
  CHECK(r2.rows[0].box.l == doctest::Approx(b2.l));
  CHECK(r2.rows[0].box.b == doctest::Approx(b2.b));
  CHECK(r2.rows[0].conf == doctest::Approx(0.85));

  for (long f = 3; f <= 10; ++f) {
    const FrameResult r =
        tracker.step(f, {{agent_box(f, start, vel, cfg.dt), 0.9}});
    REQUIRE(r.rows.size() == 1);
    CHECK(r.rows[0].id == 1);
  }
}

TEST_CASE("confirmed track coasts through a gap and keeps its id") {
  TrackerConfig cfg;
  Tracker tracker(scene_homography(), cfg);
  const GroundPoint start(-2.0, 8.0);
  const Eigen::Vector2d vel(1.0, 0.2);

  for (long f = 1; f <= 5; ++f) {
    tracker.step(f, {{agent_box(f, start, vel, cfg.dt), 0.9}});
  }
  // Three missed frames.
  for (long f = 6; f <= 8; ++f) {
    const FrameResult r = tracker.step(f, {});
    CHECK(r.rows.empty());
    REQUIRE(r.diags.size() == 1);
    CHECK_FALSE(r.diags[0].updated);
  }
  const FrameResult r = tracker.step(9, {{agent_box(9, start, vel, cfg.dt), 0.9}});
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].id == 1);
}

TEST_CASE("coasted tracks die after the age limit") {
  TrackerConfig cfg;
  cfg.omega = 3;
  Tracker tracker(scene_homography(), cfg);
  const GroundPoint start(-2.0, 8.0);
  const Eigen::Vector2d vel(0.5, 0.0);

  for (long f = 1; f <= 3; ++f) {
    tracker.step(f, {{agent_box(f, start, vel, cfg.dt), 0.9}});
  }
  CHECK(tracker.tracks().size() == 1);
  for (long f = 4; f <= 6; ++f) {
    tracker.step(f, {});
    CHECK(tracker.tracks().size() == 1);  // within the coasting budget
  }
  tracker.step(7, {});
  CHECK(tracker.tracks().empty());
}

TEST_CASE("a tentative track dies on its first miss") {
  TrackerConfig cfg;
  Tracker tracker(scene_homography(), cfg);
  tracker.step(1, {{agent_box(1, {-2.0, 8.0}, {0, 0}, cfg.dt), 0.9}});
  CHECK(tracker.tracks().size() == 1);
  tracker.step(2, {});
  CHECK(tracker.tracks().empty());

  // A later birth takes a fresh id.
  tracker.step(3, {{agent_box(3, {3.0, 12.0}, {0, 0}, cfg.dt), 0.9}});
  REQUIRE(tracker.tracks().size() == 1);
  CHECK(tracker.tracks()[0].id == 2);
}

TEST_CASE("low-confidence detections never start tracks") {
  TrackerConfig cfg;
  Tracker tracker(scene_homography(), cfg);
  const FrameResult r =
      tracker.step(1, {{agent_box(1, {-2.0, 8.0}, {0, 0}, cfg.dt), 0.55}});
  CHECK(r.rows.empty());
  CHECK(tracker.tracks().empty());
}

TEST_CASE("low-confidence detections continue confirmed tracks") {
  TrackerConfig cfg;
  Tracker tracker(scene_homography(), cfg);
  const GroundPoint start(-2.0, 8.0);
  const Eigen::Vector2d vel(1.0, 0.0);
  for (long f = 1; f <= 4; ++f) {
    tracker.step(f, {{agent_box(f, start, vel, cfg.dt), 0.9}});
  }
  const BBox b5 = agent_box(5, start, vel, cfg.dt);
  const FrameResult r = tracker.step(5, {{b5, 0.55}});
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].id == 1);
  CHECK(r.rows[0].conf == doctest::Approx(0.55));
  CHECK(r.rows[0].box.l == doctest::Approx(b5.l));
}

TEST_CASE("frames must advance strictly") {
  TrackerConfig cfg;
  Tracker tracker(scene_homography(), cfg);
  tracker.step(5, {});
  CHECK_THROWS_AS(tracker.step(5, {}), NonMonotonicFrame);
  CHECK_THROWS_AS(tracker.step(4, {}), NonMonotonicFrame);
  tracker.step(6, {});
}

TEST_CASE("two well-separated agents keep distinct ascending ids") {
  TrackerConfig cfg;
  Tracker tracker(scene_homography(), cfg);
  const GroundPoint s1(-6.0, 6.0), s2(6.0, 14.0);
  const Eigen::Vector2d v1(1.0, 0.3), v2(-1.0, -0.3);

  for (long f = 1; f <= 10; ++f) {
    const FrameResult r = tracker.step(
        f, {{agent_box(f, s1, v1, cfg.dt), 0.9},
            {agent_box(f, s2, v2, cfg.dt), 0.9}});
    if (f >= 2) {
      REQUIRE(r.rows.size() == 2);
      CHECK(r.rows[0].id == 1);
      CHECK(r.rows[1].id == 2);
      CHECK(r.rows[0].id < r.rows[1].id);
    }
  }
}

TEST_CASE("run_sequence fills detection gaps with coasting frames") {
  TrackerConfig cfg;
  std::map<long, std::vector<Detection>> dets;
  const GroundPoint start(-2.0, 8.0);
  const Eigen::Vector2d vel(1.0, 0.0);
  for (long f : {1L, 2L, 4L, 5L}) {
    dets[f] = {{agent_box(f, start, vel, cfg.dt), 0.9}};
  }
  const std::vector<FrameResult> results =
      run_sequence(dets, scene_homography(), {}, cfg);
  REQUIRE(results.size() == 5);
  CHECK(results[0].frame == 1);
  CHECK(results[2].frame == 3);
  CHECK(results[2].rows.empty());     // coasted through the hole
  CHECK(results[3].rows.size() == 1);  // re-associated afterwards
  CHECK(results[3].rows[0].id == 1);
}
