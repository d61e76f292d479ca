#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "jhtrack/errors.hpp"

namespace jhtrack {

// Regularized lower incomplete gamma based chi-square CDF with k degrees of
// freedom, evaluated at x (0 for x <= 0).
double chi2_cdf(double x, int k);

// Right-tail probability used as the ground-plane association score:
// 1 - chi2_cdf(max(d, 0), dof).
double p_of_d(double d, int dof);

// Mahalanobis-style distance with a log-determinant penalty:
// d^T S^-1 d + ln|S|. S is symmetrized first; throws SingularInnovation if
// it is not positive definite.
double mahalanobis_d(const Eigen::Vector2d& d, const Eigen::Matrix2d& s);

// Gaussian density of a residual d under covariance S (used for model
// likelihoods). Throws SingularInnovation on a non positive definite S.
double gaussian_likelihood(const Eigen::Vector2d& d, const Eigen::Matrix2d& s);

// First-stage score: P(D) * BIoU * confidence.
double stage1_score(double p_d, double biou, double conf);

// Second-stage score mixing the image and ground association models:
// (mu_image * BIoU + mu_ground * P(D)) * confidence.
double stage2_score(double mu_image, double mu_ground, double p_d, double biou,
                    double conf);

// Two-element association-model probabilities (image- and ground-plane
// model) with their Markov transition step and Bayesian update.
struct AssocModelProbs {
  double mu_image = 0.5;
  double mu_ground = 0.5;
};

// Prior step: mu' = trans^T * mu with rows (p_ii, 1 - p_ii) and
// (1 - p_ww, p_ww).
AssocModelProbs predict_assoc_probs(const AssocModelProbs& mu, double p_ii,
                                    double p_ww);

// Posterior step: mu_i proportional to mu_i * lambda_i. Falls back to the
// prior when both likelihoods vanish.
AssocModelProbs update_assoc_probs(const AssocModelProbs& mu,
                                   double lambda_image, double lambda_ground);

struct ScoreMatrix {
  Eigen::MatrixXd scores;  // rows: tracks, cols: detections, entries in [0,1]
  double gate = 0.0;       // pairs scoring below the gate are forbidden
};

struct Assignment {
  std::vector<std::pair<int, int>> matches;  // (row, col), sorted by row
  std::vector<int> unmatched_rows;
  std::vector<int> unmatched_cols;
};

// Maximum-total-score one-to-one matching over the pairs at or above the
// gate. Among maximum-score matchings, ties prefer matching the lowest row
// index to the lowest column index (pairs scanned in ascending row-major
// order).
Assignment solve_assignment(const ScoreMatrix& m);

namespace detail {

// Exact maximum-total-weight bipartite matching; forbidden pairs are marked
// false in `allowed`. Rows/columns may be left unmatched. Deterministic but
// without tie-breaking guarantees.
std::vector<std::pair<int, int>> max_weight_matching(
    const Eigen::MatrixXd& weights,
    const std::vector<std::vector<bool>>& allowed);

// Total weight of the optimal matching.
double max_weight_value(const Eigen::MatrixXd& weights,
                        const std::vector<std::vector<bool>>& allowed);

}  // namespace detail

}  // namespace jhtrack
