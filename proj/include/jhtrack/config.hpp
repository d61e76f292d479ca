#pragma once

#include "jhtrack/errors.hpp"

namespace jhtrack {

// Tunable tracker parameters. Defaults are the pattern-search starting
// point; probabilities live in [0, 1] and d_low <= d_high.
struct TrackerConfig {
  // Ground-plane process noise intensities.
  double sigma_x = 5.0;
  double sigma_y = 5.0;
  // Association score gates for the three stages.
  double alpha1 = 0.5;
  double alpha2 = 0.5;
  double alpha3 = 0.5;
  // Maximum number of coasted frames before a track is dropped.
  int omega = 30;
  // BIoU expansion buffer.
  double b = 0.0;
  // Detection confidence split thresholds.
  double d_high = 0.6;
  double d_low = 0.5;
  // Camera-motion model transition probabilities (static/dynamic).
  double p_ss = 0.9;
  double p_dd = 0.9;
  // Association-model transition probabilities (ground/image).
  double p_ww = 0.9;
  double p_ii = 0.9;
  // Initial velocity variance of new tracks.
  double v = 0.5;
  // Relative detection-noise scale of the initial measurement noise.
  double sigma_m = 0.05;
  // Box buffer length and noise window length.
  int n = 5;
  int m = 5;
  // Degrees of freedom of the ground-distance chi-square mapping.
  int chi2_dof = 24;
  // Frame interval in seconds.
  double dt = 1.0 / 20.0;
  // Ablation switches: replace the stage-2/3 score by P(D) * conf, and
  // freeze coasted boxes instead of coupling them to the ground projection.
  bool stage2_ground_only = false;
  bool coast_coupling = true;

  // Throws InvalidThresholds on out-of-range values.
  void validate() const;
};

}  // namespace jhtrack
