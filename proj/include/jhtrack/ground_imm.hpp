#pragma once

#include <Eigen/Dense>
#include <array>

#include "jhtrack/config.hpp"
#include "jhtrack/geometry.hpp"
#include "jhtrack/noise.hpp"

namespace jhtrack {

// Joint state vector: (x, xdot, y, ydot) followed by the column-stacked
// homography (h1, h4, h7, h2, h5, h8, h3, h6, h9). The last entry is the
// fixed normalization h9 = 1, whose covariance row/column stays zero.
inline constexpr int kStateDim = 13;
using StateVector = Eigen::Matrix<double, kStateDim, 1>;
using StateMatrix = Eigen::Matrix<double, kStateDim, kStateDim>;
using MeasJacobian = Eigen::Matrix<double, 2, kStateDim>;

struct GroundState {
  StateVector x = StateVector::Zero();
  StateMatrix p = StateMatrix::Zero();
};

// Homography stored in a state vector.
Homography state_homography(const StateVector& x);
void set_state_homography(StateVector& x, const Homography& h);

// Predicted bottom-centre measurement of a state.
ImagePoint project_state(const StateVector& x);

// 2x13 measurement Jacobian at the given state (velocity columns zero).
MeasJacobian measurement_jacobian(const StateVector& x);

// One motion model of the interacting pair: its filter state plus the
// per-model adaptive noise windows.
struct ModelFilter {
  GroundState state;
  NoiseWindow r_window;  // 2x2 measurement-noise samples
  NoiseWindow q_window;  // 9x9 homography process-noise samples
};

// Camera-motion model indices.
inline constexpr int kStaticModel = 0;
inline constexpr int kDynamicModel = 1;

struct ImmState {
  std::array<ModelFilter, 2> models;
  Eigen::Vector2d mu{0.5, 0.5};
  Eigen::Matrix2d trans = Eigen::Matrix2d::Identity();  // (from, to)
  Eigen::Matrix2d r0 = Eigen::Matrix2d::Identity();
};

struct Prediction {
  std::array<GroundState, 2> per_model;
  Eigen::Vector2d mu_pred{0.5, 0.5};
  GroundState combined;
};

struct UpdateStats {
  Eigen::Vector2d likelihoods{0.0, 0.0};
  // Innovation against the combined predicted state.
  Eigen::Vector2d innovation{0.0, 0.0};
  // Model-probability weighted measurement-noise estimate after the update.
  Eigen::Matrix2d r_estimate = Eigen::Matrix2d::Zero();
};

// New track filter seeded from a detection box and the sequence homography:
// ground position from unprojecting the box bottom-centre, zero velocity,
// position covariance from propagating R0 through the unprojection, velocity
// variance v, zero homography covariance, equal model probabilities.
ImmState init_track_filter(const BBox& det_box, const Homography& h0,
                           const TrackerConfig& cfg);

// Interaction step: per-model mixed initial conditions. A model whose
// predicted probability underflows keeps its own state; throws
// DegenerateMixing when the whole probability mass underflows.
std::array<GroundState, 2> mix(const ImmState& s);

// Time update of both models. The static model keeps its homography, the
// dynamic model left-multiplies it by the camera motion. q_h_* are the
// current windowed homography process-noise estimates.
Prediction predict(const ImmState& s, const AffineMotion& affine,
                   const Eigen::Matrix4d& q_ground,
                   const Eigen::Matrix<double, 9, 9>& q_h_static,
                   const Eigen::Matrix<double, 9, 9>& q_h_dynamic, double dt);

// Measurement update of both models with the windowed-noise protocol:
// a dummy update under the previous noise estimate supplies the residual of
// the new measurement-noise sample, the real update then runs under the
// refreshed window mean, and its gain feeds the process-noise window.
// Updates model probabilities from the innovation likelihoods.
UpdateStats update(ImmState& s, const ImagePoint& meas, const Prediction& pred);

// Probability-weighted combination of the per-model estimates.
GroundState combine(const std::array<GroundState, 2>& states,
                    const Eigen::Vector2d& mu);

// Windowed homography process noise of one model; zero until the window has
// a sample.
Eigen::Matrix<double, 9, 9> homography_q(const ModelFilter& model);

}  // namespace jhtrack
