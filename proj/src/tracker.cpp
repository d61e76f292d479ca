#include "jhtrack/tracker.hpp"

#include <algorithm>

namespace jhtrack {

namespace {

// Per-frame working data of one track.
struct TrackWork {
  Prediction pred;
  AssocModelProbs mu_pred;
  BBox box_pred;
  Eigen::Matrix2d s_assoc = Eigen::Matrix2d::Zero();  // J P J^T + last R
  ImagePoint meas_pred = ImagePoint::Zero();
  bool matched = false;
};

}  // namespace

void split_detections(const std::vector<Detection>& detections, double d_high,
                      double d_low, std::vector<int>& high,
                      std::vector<int>& low) {
  if (!(d_low >= 0.0 && d_low <= d_high && d_high <= 1.0)) {
    throw InvalidThresholds("confidence thresholds need 0 <= d_low <= d_high <= 1");
  }
  high.clear();
  low.clear();
  for (int i = 0; i < static_cast<int>(detections.size()); ++i) {
    const double c = detections[i].conf;
    if (c >= d_high) {
      high.push_back(i);
    } else if (c >= d_low) {
      low.push_back(i);
    }
  }
}

Tracker::Tracker(const Homography& h0, const TrackerConfig& cfg)
    : cfg_(cfg), h_current_(h0) {
  cfg_.validate();
  q_ground_ = ground_process_q(cfg_.sigma_x, cfg_.sigma_y, cfg_.dt);
}

FrameResult Tracker::step(long frame, const std::vector<Detection>& detections,
                          const AffineMotion& affine) {
  if (started_ && frame <= last_frame_) {
    throw NonMonotonicFrame("frame indices must be strictly increasing");
  }
  started_ = true;
  last_frame_ = frame;
  h_current_ = apply_affine(affine, h_current_);

  std::vector<int> high, low;
  split_detections(detections, cfg_.d_high, cfg_.d_low, high, low);

  // Predict every track: camera-model filters, association-model prior and
  // the image-plane box.
  std::vector<TrackWork> work(tracks_.size());
  for (std::size_t ti = 0; ti < tracks_.size(); ++ti) {
    Track& trk = tracks_[ti];
    TrackWork& tw = work[ti];
    tw.pred = predict(trk.filter, affine, q_ground_,
                      homography_q(trk.filter.models[kStaticModel]),
                      homography_q(trk.filter.models[kDynamicModel]), cfg_.dt);
    tw.mu_pred = predict_assoc_probs(trk.assoc_mu, cfg_.p_ii, cfg_.p_ww);

    tw.meas_pred = project_state(tw.pred.combined.x);
    const MeasJacobian j = measurement_jacobian(tw.pred.combined.x);
    Eigen::Matrix2d jpj = j * tw.pred.combined.p * j.transpose();
    tw.s_assoc = 0.5 * (jpj + jpj.transpose()).eval() + trk.last_r;

    if (trk.state == TrackState::kCoasted) {
      const Eigen::Vector2d wh = apply_affine_wh(affine, trk.w, trk.h);
      trk.w = wh.x();
      trk.h = wh.y();
      tw.box_pred = cfg_.coast_coupling ? coast_box(tw.meas_pred, trk.w, trk.h)
                                        : trk.boxes.back();
    } else {
      tw.box_pred = trk.boxes.predict();
    }
  }

  const auto ground_score = [&](std::size_t ti, const Detection& det) {
    const Eigen::Vector2d d = bottom_centre(det.box) - work[ti].meas_pred;
    return p_of_d(mahalanobis_d(d, work[ti].s_assoc), cfg_.chi2_dof);
  };
  const auto image_score = [&](std::size_t ti, const Detection& det) {
    return biou(det.box, work[ti].box_pred, cfg_.b);
  };

  const auto apply_update = [&](std::size_t ti, const Detection& det) {
    Track& trk = tracks_[ti];
    TrackWork& tw = work[ti];
    const UpdateStats stats =
        update(trk.filter, bottom_centre(det.box), tw.pred);
    trk.assoc_mu =
        update_assoc_probs(tw.mu_pred, image_score(ti, det), ground_score(ti, det));
    trk.last_r = stats.r_estimate;
    if (trk.state == TrackState::kCoasted) {
      trk.boxes.clear_and_seed(det.box);
    } else {
      trk.boxes.push(det.box);
    }
    trk.state = TrackState::kConfirmed;
    trk.w = det.box.width();
    trk.h = det.box.height();
    trk.last_conf = det.conf;
    trk.consecutive_hits += 1;
    trk.frames_since_update = 0;
    tw.matched = true;
  };

  // Stage 1: confirmed and coasted tracks against high-confidence
  // detections, multiplicative score.
  std::vector<int> stage1_tracks;
  for (std::size_t ti = 0; ti < tracks_.size(); ++ti) {
    if (tracks_[ti].state != TrackState::kTentative) {
      stage1_tracks.push_back(static_cast<int>(ti));
    }
  }
  std::vector<int> det_pool_high = high;
  std::vector<std::pair<int, int>> matched_pairs;

  if (!stage1_tracks.empty() && !det_pool_high.empty()) {
    ScoreMatrix sm;
    sm.gate = cfg_.alpha1;
    sm.scores.resize(stage1_tracks.size(), det_pool_high.size());
    for (std::size_t r = 0; r < stage1_tracks.size(); ++r) {
      for (std::size_t c = 0; c < det_pool_high.size(); ++c) {
        const std::size_t ti = stage1_tracks[r];
        const Detection& det = detections[det_pool_high[c]];
        sm.scores(r, c) = stage1_score(ground_score(ti, det),
                                       image_score(ti, det), det.conf);
      }
    }
    const Assignment as = solve_assignment(sm);
    std::vector<int> remaining_tracks, remaining_dets;
    for (const auto& [r, c] : as.matches) {
      matched_pairs.emplace_back(stage1_tracks[r], det_pool_high[c]);
    }
    for (int r : as.unmatched_rows) remaining_tracks.push_back(stage1_tracks[r]);
    for (int c : as.unmatched_cols) remaining_dets.push_back(det_pool_high[c]);
    stage1_tracks = std::move(remaining_tracks);
    det_pool_high = std::move(remaining_dets);
  }

  // Stage 2: remaining confirmed/coasted tracks against low-confidence plus
  // unmatched high-confidence detections, model-probability mixed score.
  std::vector<int> stage2_dets = low;
  stage2_dets.insert(stage2_dets.end(), det_pool_high.begin(),
                     det_pool_high.end());
  std::sort(stage2_dets.begin(), stage2_dets.end());
  const auto stage2_like_score = [&](std::size_t ti, const Detection& det) {
    if (cfg_.stage2_ground_only) {
      return ground_score(ti, det) * det.conf;
    }
    return stage2_score(work[ti].mu_pred.mu_image, work[ti].mu_pred.mu_ground,
                        ground_score(ti, det), image_score(ti, det), det.conf);
  };

  if (!stage1_tracks.empty() && !stage2_dets.empty()) {
    ScoreMatrix sm;
    sm.gate = cfg_.alpha2;
    sm.scores.resize(stage1_tracks.size(), stage2_dets.size());
    for (std::size_t r = 0; r < stage1_tracks.size(); ++r) {
      for (std::size_t c = 0; c < stage2_dets.size(); ++c) {
        sm.scores(r, c) = stage2_like_score(stage1_tracks[r],
                                            detections[stage2_dets[c]]);
      }
    }
    const Assignment as = solve_assignment(sm);
    std::vector<int> leftover_high;
    for (const auto& [r, c] : as.matches) {
      matched_pairs.emplace_back(stage1_tracks[r], stage2_dets[c]);
    }
    std::vector<bool> det_matched(stage2_dets.size(), false);
    for (const auto& [r, c] : as.matches) det_matched[c] = true;
    for (std::size_t c = 0; c < stage2_dets.size(); ++c) {
      const int di = stage2_dets[c];
      const bool is_high = detections[di].conf >= cfg_.d_high;
      if (!det_matched[c] && is_high) {
        leftover_high.push_back(di);
      }
    }
    det_pool_high = std::move(leftover_high);
  }

  for (const auto& [ti, di] : matched_pairs) {
    apply_update(static_cast<std::size_t>(ti), detections[di]);
  }

  // Unmatched confirmed/coasted tracks coast.
  for (std::size_t ti = 0; ti < tracks_.size(); ++ti) {
    Track& trk = tracks_[ti];
    if (trk.state == TrackState::kTentative || work[ti].matched) {
      continue;
    }
    for (int i = 0; i < 2; ++i) {
      trk.filter.models[i].state = work[ti].pred.per_model[i];
    }
    trk.filter.mu = work[ti].pred.mu_pred;
    trk.assoc_mu = work[ti].mu_pred;
    trk.state = TrackState::kCoasted;
    trk.consecutive_hits = 0;
    trk.frames_since_update += 1;
  }

  // Stage 3: leftover high-confidence detections against tentative tracks.
  std::vector<int> stage3_tracks;
  for (std::size_t ti = 0; ti < tracks_.size(); ++ti) {
    if (tracks_[ti].state == TrackState::kTentative) {
      stage3_tracks.push_back(static_cast<int>(ti));
    }
  }
  if (!stage3_tracks.empty() && !det_pool_high.empty()) {
    ScoreMatrix sm;
    sm.gate = cfg_.alpha3;
    sm.scores.resize(stage3_tracks.size(), det_pool_high.size());
    for (std::size_t r = 0; r < stage3_tracks.size(); ++r) {
      for (std::size_t c = 0; c < det_pool_high.size(); ++c) {
        sm.scores(r, c) = stage2_like_score(stage3_tracks[r],
                                            detections[det_pool_high[c]]);
      }
    }
    const Assignment as = solve_assignment(sm);
    std::vector<int> leftover;
    for (const auto& [r, c] : as.matches) {
      apply_update(static_cast<std::size_t>(stage3_tracks[r]),
                   detections[det_pool_high[c]]);
    }
    for (int c : as.unmatched_cols) leftover.push_back(det_pool_high[c]);
    det_pool_high = std::move(leftover);
  }

  // Tentative tracks missed right after birth are dropped; coasted tracks
  // beyond the coasting budget as well.
  std::vector<Track> survivors;
  std::vector<TrackWork> survivor_work;
  survivors.reserve(tracks_.size());
  for (std::size_t ti = 0; ti < tracks_.size(); ++ti) {
    Track& trk = tracks_[ti];
    const bool drop_tentative =
        trk.state == TrackState::kTentative && !work[ti].matched;
    const bool drop_coasted = trk.state == TrackState::kCoasted &&
                              trk.frames_since_update > cfg_.omega;
    if (drop_tentative || drop_coasted) {
      continue;
    }
    survivors.push_back(std::move(trk));
    survivor_work.push_back(std::move(work[ti]));
  }
  tracks_ = std::move(survivors);
  work = std::move(survivor_work);

  // Leftover high-confidence detections become new tentative tracks.
  for (int di : det_pool_high) {
    const Detection& det = detections[di];
    Track trk;
    trk.id = next_id_++;
    trk.state = TrackState::kTentative;
    trk.filter = init_track_filter(det.box, h_current_, cfg_);
    trk.boxes = BoxBuffer(static_cast<std::size_t>(cfg_.n));
    trk.boxes.push(det.box);
    trk.last_r = trk.filter.r0;
    trk.w = det.box.width();
    trk.h = det.box.height();
    trk.last_conf = det.conf;
    trk.consecutive_hits = 1;
    trk.frames_since_update = 0;
    tracks_.push_back(std::move(trk));
    work.push_back(TrackWork{});
  }

  FrameResult result;
  result.frame = frame;
  for (std::size_t ti = 0; ti < tracks_.size(); ++ti) {
    Track& trk = tracks_[ti];
    const bool updated = ti < work.size() && work[ti].matched;
    if (trk.state == TrackState::kConfirmed && updated) {
      result.rows.push_back(OutputRow{trk.id, trk.boxes.back(), trk.last_conf});
    }
    const GroundState combined =
        combine({trk.filter.models[0].state, trk.filter.models[1].state},
                trk.filter.mu);
    TrackDiag diag;
    diag.id = trk.id;
    diag.state = trk.state;
    diag.mu_static = trk.filter.mu(kStaticModel);
    diag.mu_dynamic = trk.filter.mu(kDynamicModel);
    diag.mu_image = trk.assoc_mu.mu_image;
    diag.mu_ground = trk.assoc_mu.mu_ground;
    diag.r_estimate = trk.last_r;
    diag.position = GroundPoint(combined.x(0), combined.x(2));
    diag.updated = updated;
    result.diags.push_back(diag);
  }
  std::sort(result.rows.begin(), result.rows.end(),
            [](const OutputRow& a, const OutputRow& b) { return a.id < b.id; });
  return result;
}

std::vector<FrameResult> run_sequence(
    const std::map<long, std::vector<Detection>>& detections,
    const Homography& h0, const std::map<long, AffineMotion>& affines,
    const TrackerConfig& cfg) {
  std::vector<FrameResult> out;
  if (detections.empty()) {
    return out;
  }
  Tracker tracker(h0, cfg);
  const long first = detections.begin()->first;
  const long last = detections.rbegin()->first;
  static const std::vector<Detection> kNoDetections;
  for (long frame = first; frame <= last; ++frame) {
    const auto dit = detections.find(frame);
    const auto ait = affines.find(frame);
    out.push_back(tracker.step(
        frame, dit == detections.end() ? kNoDetections : dit->second,
        ait == affines.end() ? AffineMotion{} : ait->second));
  }
  return out;
}

}  // namespace jhtrack
