#include "jhtrack/noise.hpp"

namespace jhtrack {

void NoiseWindow::push(const Eigen::MatrixXd& sample) {
  Eigen::MatrixXd sym = 0.5 * (sample + sample.transpose());
  if (capacity_ > 0 && samples_.size() == capacity_) {
    samples_.pop_front();
  }
  samples_.push_back(std::move(sym));
}

Eigen::MatrixXd NoiseWindow::mean() const {
  if (samples_.empty()) {
    throw EmptyWindow("noise window holds no samples");
  }
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(samples_.front().rows(),
                                              samples_.front().cols());
  for (const auto& s : samples_) {
    acc += s;
  }
  return acc / static_cast<double>(samples_.size());
}

Eigen::Matrix2d initial_r(double w, double h, double sigma_m) {
  if (w <= 0.0 || h <= 0.0) {
    throw InvalidBox("detection box has non-positive size");
  }
  Eigen::Matrix2d r = Eigen::Matrix2d::Zero();
  r(0, 0) = (sigma_m * w) * (sigma_m * w);
  r(1, 1) = (sigma_m * h) * (sigma_m * h);
  return r;
}

Eigen::Matrix4d ground_process_q(double sigma_x, double sigma_y, double dt) {
  Eigen::Matrix<double, 4, 2> gamma = Eigen::Matrix<double, 4, 2>::Zero();
  gamma(0, 0) = 0.5 * dt * dt;
  gamma(1, 0) = dt;
  gamma(2, 1) = 0.5 * dt * dt;
  gamma(3, 1) = dt;
  return gamma * Eigen::Vector2d(sigma_x, sigma_y).asDiagonal() *
         gamma.transpose();
}

Eigen::Matrix2d measurement_noise_sample(
    const Eigen::Vector2d& residual, const Eigen::Matrix<double, 2, 13>& j,
    const Eigen::Matrix<double, 13, 13>& p_prior) {
  return residual * residual.transpose() + j * p_prior * j.transpose();
}

Eigen::Matrix<double, 13, 13> process_noise_sample(
    const Eigen::Matrix<double, 13, 2>& k, const Eigen::Vector2d& innovation) {
  return k * (innovation * innovation.transpose()) * k.transpose();
}

Eigen::Matrix<double, 9, 9> extract_homography_block(
    const Eigen::Matrix<double, 13, 13>& q) {
  Eigen::Matrix<double, 9, 9> block = q.block<9, 9>(4, 4);
  block.row(8).setZero();
  block.col(8).setZero();
  return block;
}

Eigen::MatrixXd psd_repair(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace jhtrack
