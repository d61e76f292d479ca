#include "jhtrack/ground_imm.hpp"

#include <cmath>

#include "jhtrack/association.hpp"

namespace jhtrack {

namespace {

constexpr double kProbFloor = 1e-15;

// Enforces the normalization conventions of the joint state: h9 = 1 with a
// zero covariance row/column.
void enforce_norm(GroundState& s) {
  const double h9 = s.x(12);
  if (h9 != 1.0 && std::abs(h9) > 1e-12) {
    s.x.segment<9>(4) /= h9;
  }
  s.x(12) = 1.0;
  s.p = 0.5 * (s.p + s.p.transpose()).eval();
  s.p.row(12).setZero();
  s.p.col(12).setZero();
}

Eigen::Matrix2d invert_2x2(const Eigen::Matrix2d& s) {
  Eigen::Matrix2d sym = 0.5 * (s + s.transpose());
  const double det = sym(0, 0) * sym(1, 1) - sym(0, 1) * sym(1, 0);
  if (!(sym(0, 0) > 0.0) || !(det > 0.0)) {
    throw SingularInnovation("innovation covariance is not positive definite");
  }
  Eigen::Matrix2d inv;
  inv << sym(1, 1), -sym(0, 1), -sym(1, 0), sym(0, 0);
  return inv / det;
}

Eigen::Matrix<double, 4, 4> cv_transition(double dt) {
  Eigen::Matrix4d f = Eigen::Matrix4d::Identity();
  f(0, 1) = dt;
  f(2, 3) = dt;
  return f;
}

// Full 13x13 transition of one model: constant-velocity ground block plus
// the homography map (identity, or I3 kron the embedded camera motion).
StateMatrix model_transition(const AffineMotion& affine, bool dynamic,
                             double dt) {
  StateMatrix f = StateMatrix::Identity();
  f.block<4, 4>(0, 0) = cv_transition(dt);
  if (dynamic) {
    const Eigen::Matrix3d e = affine.embed();
    for (int k = 0; k < 3; ++k) {
      f.block<3, 3>(4 + 3 * k, 4 + 3 * k) = e;
    }
  }
  return f;
}

}  // namespace

Homography state_homography(const StateVector& x) {
  Homography h;
  h.m = Eigen::Map<const Eigen::Matrix3d>(x.data() + 4);
  return h;
}

void set_state_homography(StateVector& x, const Homography& h) {
  Eigen::Map<Eigen::Matrix3d>(x.data() + 4) = h.m;
}

ImagePoint project_state(const StateVector& x) {
  return project(state_homography(x), GroundPoint(x(0), x(2)));
}

MeasJacobian measurement_jacobian(const StateVector& x) {
  const Homography h = state_homography(x);
  const GroundPoint g(x(0), x(2));
  const Eigen::Matrix2d jg = jacobian_ground(h, g);
  MeasJacobian j = MeasJacobian::Zero();
  j.col(0) = jg.col(0);
  j.col(2) = jg.col(1);
  j.block<2, 9>(0, 4) = jacobian_homography(h, g);
  return j;
}

ImmState init_track_filter(const BBox& det_box, const Homography& h0,
                           const TrackerConfig& cfg) {
  const ImagePoint bc = bottom_centre(det_box);
  const GroundPoint pos = unproject(h0, bc);
  const Eigen::Matrix2d r0 =
      initial_r(det_box.width(), det_box.height(), cfg.sigma_m);

  GroundState s;
  s.x(0) = pos.x();
  s.x(2) = pos.y();
  set_state_homography(s.x, h0);

  // Image noise propagated through the unprojection: the Jacobian of the
  // ground position with respect to the measurement is the inverse of the
  // projection Jacobian.
  const Eigen::Matrix2d jg_inv = jacobian_ground(h0, pos).inverse();
  const Eigen::Matrix2d c = jg_inv * r0 * jg_inv.transpose();
  s.p(0, 0) = c(0, 0);
  s.p(0, 2) = c(0, 1);
  s.p(2, 0) = c(1, 0);
  s.p(2, 2) = c(1, 1);
  s.p(1, 1) = cfg.v;
  s.p(3, 3) = cfg.v;
  enforce_norm(s);

  ImmState imm;
  for (auto& model : imm.models) {
    model.state = s;
    model.r_window = NoiseWindow(static_cast<std::size_t>(cfg.m));
    model.q_window = NoiseWindow(static_cast<std::size_t>(cfg.m));
  }
  imm.mu = Eigen::Vector2d(0.5, 0.5);
  imm.trans << cfg.p_ss, 1.0 - cfg.p_ss, 1.0 - cfg.p_dd, cfg.p_dd;
  imm.r0 = r0;
  return imm;
}

std::array<GroundState, 2> mix(const ImmState& s) {
  const Eigen::Vector2d c = s.trans.transpose() * s.mu;
  if (c.sum() <= kProbFloor) {
    throw DegenerateMixing("model probability mass underflowed");
  }
  std::array<GroundState, 2> mixed;
  for (int i = 0; i < 2; ++i) {
    if (c(i) <= kProbFloor) {
      // Unreachable model: keep its own state.
      mixed[i] = s.models[i].state;
      continue;
    }
    Eigen::Vector2d w;
    for (int j = 0; j < 2; ++j) {
      w(j) = s.trans(j, i) * s.mu(j) / c(i);
    }
    GroundState out;
    out.x = w(0) * s.models[0].state.x + w(1) * s.models[1].state.x;
    for (int j = 0; j < 2; ++j) {
      const StateVector dev = s.models[j].state.x - out.x;
      out.p += w(j) * (s.models[j].state.p + dev * dev.transpose());
    }
    enforce_norm(out);
    mixed[i] = out;
  }
  return mixed;
}

Prediction predict(const ImmState& s, const AffineMotion& affine,
                   const Eigen::Matrix4d& q_ground,
                   const Eigen::Matrix<double, 9, 9>& q_h_static,
                   const Eigen::Matrix<double, 9, 9>& q_h_dynamic, double dt) {
  const std::array<GroundState, 2> mixed = mix(s);
  Eigen::Vector2d mu_pred = s.trans.transpose() * s.mu;
  mu_pred /= mu_pred.sum();

  Prediction pred;
  pred.mu_pred = mu_pred;
  for (int i = 0; i < 2; ++i) {
    const bool dynamic = (i == kDynamicModel);
    const StateMatrix f = model_transition(affine, dynamic, dt);
    GroundState out;
    out.x = f * mixed[i].x;
    if (dynamic) {
      // The embedded affine keeps the last homography row, so this only
      // renormalizes against numerical drift.
      set_state_homography(out.x,
                           apply_affine(affine, state_homography(mixed[i].x)));
    }
    out.p = f * mixed[i].p * f.transpose();
    out.p.block<4, 4>(0, 0) += q_ground;
    out.p.block<9, 9>(4, 4) += dynamic ? q_h_dynamic : q_h_static;
    enforce_norm(out);
    pred.per_model[i] = out;
  }
  pred.combined = combine(pred.per_model, mu_pred);
  return pred;
}

UpdateStats update(ImmState& s, const ImagePoint& meas, const Prediction& pred) {
  UpdateStats stats;
  stats.innovation = meas - project_state(pred.combined.x);

  Eigen::Vector2d likelihoods;
  std::array<Eigen::Matrix2d, 2> r_now;
  for (int i = 0; i < 2; ++i) {
    ModelFilter& model = s.models[i];
    const StateVector& xp = pred.per_model[i].x;
    const StateMatrix& pp = pred.per_model[i].p;

    const MeasJacobian j = measurement_jacobian(xp);
    Eigen::Matrix2d jpj = j * pp * j.transpose();
    jpj = 0.5 * (jpj + jpj.transpose()).eval();
    const Eigen::Vector2d innov = meas - project_state(xp);

    // Dummy update under the previous noise estimate; its residual feeds
    // the new measurement-noise sample.
    const Eigen::Matrix2d r_prev =
        model.r_window.empty() ? s.r0 : Eigen::Matrix2d(model.r_window.mean());
    const Eigen::Matrix2d k_dummy_s_inv = invert_2x2(jpj + r_prev);
    const Eigen::Matrix<double, 13, 2> k_dummy =
        pp * j.transpose() * k_dummy_s_inv;
    StateVector x_dummy = xp + k_dummy * innov;
    {
      const double h9 = x_dummy(12);
      if (h9 != 1.0 && std::abs(h9) > 1e-12) x_dummy.segment<9>(4) /= h9;
      x_dummy(12) = 1.0;
    }
    const Eigen::Vector2d residual = meas - project_state(x_dummy);
    model.r_window.push(measurement_noise_sample(residual, j, pp));

    // Real update with the refreshed window mean.
    const Eigen::Matrix2d r_t = model.r_window.mean();
    const Eigen::Matrix2d s_mat = jpj + r_t;
    const Eigen::Matrix2d s_inv = invert_2x2(s_mat);
    const Eigen::Matrix<double, 13, 2> k = pp * j.transpose() * s_inv;

    GroundState post;
    post.x = xp + k * innov;
    const StateMatrix a = StateMatrix::Identity() - k * j;
    post.p = a * pp * a.transpose() + k * r_t * k.transpose();
    enforce_norm(post);
    model.state = post;

    model.q_window.push(extract_homography_block(process_noise_sample(k, innov)));

    likelihoods(i) = gaussian_likelihood(innov, s_mat);
    r_now[i] = r_t;
  }

  Eigen::Vector2d mu = pred.mu_pred.cwiseProduct(likelihoods);
  const double total = mu.sum();
  if (total > kProbFloor) {
    s.mu = mu / total;
  } else {
    // Both likelihoods vanished: keep the predicted probabilities.
    s.mu = pred.mu_pred;
  }

  stats.likelihoods = likelihoods;
  stats.r_estimate = s.mu(0) * r_now[0] + s.mu(1) * r_now[1];
  return stats;
}

GroundState combine(const std::array<GroundState, 2>& states,
                    const Eigen::Vector2d& mu) {
  GroundState out;
  out.x = mu(0) * states[0].x + mu(1) * states[1].x;
  for (int i = 0; i < 2; ++i) {
    const StateVector dev = states[i].x - out.x;
    out.p += mu(i) * (states[i].p + dev * dev.transpose());
  }
  enforce_norm(out);
  return out;
}

Eigen::Matrix<double, 9, 9> homography_q(const ModelFilter& model) {
  if (model.q_window.empty()) {
    return Eigen::Matrix<double, 9, 9>::Zero();
  }
  return model.q_window.mean();
}

}  // namespace jhtrack
