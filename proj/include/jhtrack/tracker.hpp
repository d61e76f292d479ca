#pragma once

#include <map>
#include <vector>

#include "jhtrack/association.hpp"
#include "jhtrack/config.hpp"
#include "jhtrack/geometry.hpp"
#include "jhtrack/ground_imm.hpp"
#include "jhtrack/image_filter.hpp"

namespace jhtrack {

struct Detection {
  BBox box;
  double conf = 1.0;
};

enum class TrackState { kTentative, kConfirmed, kCoasted };

struct Track {
  int id = 0;
  TrackState state = TrackState::kTentative;
  ImmState filter;
  BoxBuffer boxes;
  AssocModelProbs assoc_mu;
  Eigen::Matrix2d last_r = Eigen::Matrix2d::Identity();
  // Last associated box size, propagated through camera motion while
  // coasting.
  double w = 0.0;
  double h = 0.0;
  double last_conf = 1.0;
  int consecutive_hits = 0;
  int frames_since_update = 0;
};

struct OutputRow {
  int id = 0;
  BBox box;
  double conf = 1.0;
};

struct TrackDiag {
  int id = 0;
  TrackState state = TrackState::kTentative;
  double mu_static = 0.5;
  double mu_dynamic = 0.5;
  double mu_image = 0.5;
  double mu_ground = 0.5;
  Eigen::Matrix2d r_estimate = Eigen::Matrix2d::Zero();
  GroundPoint position = GroundPoint::Zero();
  bool updated = false;
};

struct FrameResult {
  long frame = 0;
  // Confirmed, measurement-updated tracks, ids ascending.
  std::vector<OutputRow> rows;
  // All tracks alive at the end of the step.
  std::vector<TrackDiag> diags;
};

// Online three-stage tracker joining the per-track ground/homography filters
// with image-plane box prediction.
class Tracker {
 public:
  Tracker(const Homography& h0, const TrackerConfig& cfg);

  // Advances to `frame` (strictly increasing across calls; throws
  // NonMonotonicFrame otherwise) with the frame's detections and camera
  // motion.
  FrameResult step(long frame, const std::vector<Detection>& detections,
                   const AffineMotion& affine = AffineMotion{});

  const std::vector<Track>& tracks() const { return tracks_; }

 private:
  TrackerConfig cfg_;
  Eigen::Matrix4d q_ground_;
  // Dead-reckoned sequence homography used to seed tracks born mid-sequence.
  Homography h_current_;
  std::vector<Track> tracks_;
  int next_id_ = 1;
  long last_frame_ = 0;
  bool started_ = false;
};

// Splits detections by confidence: index lists of the high set
// (conf >= d_high) and the low set (d_low <= conf < d_high).
void split_detections(const std::vector<Detection>& detections, double d_high,
                      double d_low, std::vector<int>& high,
                      std::vector<int>& low);

// Runs a tracker over a frame-indexed detection map, coasting through
// frames with no detections. Affines default to identity when absent.
std::vector<FrameResult> run_sequence(
    const std::map<long, std::vector<Detection>>& detections,
    const Homography& h0, const std::map<long, AffineMotion>& affines,
    const TrackerConfig& cfg);

}  // namespace jhtrack
