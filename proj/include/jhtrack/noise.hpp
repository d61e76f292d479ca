#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <deque>

#include "jhtrack/errors.hpp"

namespace jhtrack {

// Fixed-capacity sliding window of symmetric noise-sample matrices. The
// oldest sample is evicted once the capacity is reached.
class NoiseWindow {
 public:
  NoiseWindow() = default;
  explicit NoiseWindow(std::size_t capacity) : capacity_(capacity) {}

  // Stores a symmetrized copy of the sample.
  void push(const Eigen::MatrixXd& sample);

  bool empty() const { return samples_.empty(); }
  std::size_t size() const { return samples_.size(); }
  std::size_t capacity() const { return capacity_; }

  // Arithmetic mean of the stored samples; throws EmptyWindow when none.
  Eigen::MatrixXd mean() const;

 private:
  std::size_t capacity_ = 5;
  std::deque<Eigen::MatrixXd> samples_;
};

// Initial measurement noise for a detection of the given pixel size:
// diag((sigma_m * w)^2, (sigma_m * h)^2). Throws InvalidBox on w <= 0 or
// h <= 0.
Eigen::Matrix2d initial_r(double w, double h, double sigma_m);

// Process noise of the constant-velocity ground block,
// Gamma * diag(sigma_x, sigma_y) * Gamma^T with
// Gamma = [[dt^2/2, 0], [dt, 0], [0, dt^2/2], [0, dt]].
Eigen::Matrix4d ground_process_q(double sigma_x, double sigma_y, double dt);

// Windowed measurement-noise sample: residual * residual^T + J * P * J^T,
// where the residual is taken after a dummy measurement update.
Eigen::Matrix2d measurement_noise_sample(const Eigen::Vector2d& residual,
                                         const Eigen::Matrix<double, 2, 13>& j,
                                         const Eigen::Matrix<double, 13, 13>& p_prior);

// Windowed process-noise sample: K * (d * d^T) * K^T for innovation d and
// Kalman gain K of the real measurement update.
Eigen::Matrix<double, 13, 13> process_noise_sample(
    const Eigen::Matrix<double, 13, 2>& k, const Eigen::Vector2d& innovation);

// Extracts the homography rows/columns (indices 4..12) of a 13x13 process
// noise matrix and zeroes the row/column of the fixed h9 entry.
Eigen::Matrix<double, 9, 9> extract_homography_block(
    const Eigen::Matrix<double, 13, 13>& q);

// Symmetrizes a matrix and clamps negative eigenvalues to zero.
Eigen::MatrixXd psd_repair(const Eigen::MatrixXd& m);

}  // namespace jhtrack
