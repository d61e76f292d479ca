#include "jhtrack/association.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace jhtrack {

namespace {

// Regularized lower incomplete gamma function P(a, x) via the power series
// (x < a + 1) or the Lentz continued fraction for the complement.
double lower_gamma_regularized(double a, double x) {
  if (x <= 0.0) {
    return 0.0;
  }
  const double log_prefactor = a * std::log(x) - x - std::lgamma(a);
  if (x < a + 1.0) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 500; ++n) {
      term *= x / (a + n);
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-16) {
        break;
      }
    }
    return sum * std::exp(log_prefactor);
  }
  const double tiny = std::numeric_limits<double>::min() / 1e-30;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) {
      break;
    }
  }
  return 1.0 - std::exp(log_prefactor) * h;
}

}  // namespace

double chi2_cdf(double x, int k) {
  if (x <= 0.0) {
    return 0.0;
  }
  return std::clamp(lower_gamma_regularized(0.5 * k, 0.5 * x), 0.0, 1.0);
}

double p_of_d(double d, int dof) {
  return 1.0 - chi2_cdf(std::max(d, 0.0), dof);
}

namespace {

// Positive-definite check and inverse of a symmetrized 2x2 covariance.
struct Inverse2 {
  Eigen::Matrix2d inv;
  double det = 0.0;
};

Inverse2 invert_covariance(const Eigen::Matrix2d& s) {
  Eigen::Matrix2d sym = 0.5 * (s + s.transpose());
  const double det = sym(0, 0) * sym(1, 1) - sym(0, 1) * sym(1, 0);
  if (!(sym(0, 0) > 0.0) || !(det > 0.0)) {
    throw SingularInnovation("innovation covariance is not positive definite");
  }
  Inverse2 out;
  out.det = det;
  out.inv << sym(1, 1), -sym(0, 1), -sym(1, 0), sym(0, 0);
  out.inv /= det;
  return out;
}

}  // namespace

double mahalanobis_d(const Eigen::Vector2d& d, const Eigen::Matrix2d& s) {
  const Inverse2 si = invert_covariance(s);
  return d.dot(si.inv * d) + std::log(si.det);
}

double gaussian_likelihood(const Eigen::Vector2d& d, const Eigen::Matrix2d& s) {
  const Inverse2 si = invert_covariance(s);
  const double q = d.dot(si.inv * d);
  return std::exp(-0.5 * q) / (2.0 * std::numbers::pi * std::sqrt(si.det));
}

double stage1_score(double p_d, double biou, double conf) {
  return p_d * biou * conf;
}

double stage2_score(double mu_image, double mu_ground, double p_d, double biou,
                    double conf) {
  return (mu_image * biou + mu_ground * p_d) * conf;
}

AssocModelProbs predict_assoc_probs(const AssocModelProbs& mu, double p_ii,
                                    double p_ww) {
  AssocModelProbs out;
  out.mu_image = p_ii * mu.mu_image + (1.0 - p_ww) * mu.mu_ground;
  out.mu_ground = (1.0 - p_ii) * mu.mu_image + p_ww * mu.mu_ground;
  return out;
}

AssocModelProbs update_assoc_probs(const AssocModelProbs& mu,
                                   double lambda_image, double lambda_ground) {
  const double wi = mu.mu_image * lambda_image;
  const double wg = mu.mu_ground * lambda_ground;
  const double total = wi + wg;
  if (!(total > 1e-300)) {
    return mu;
  }
  return AssocModelProbs{wi / total, wg / total};
}

namespace detail {

namespace {

constexpr double kForbidden = 1e9;

// Classical O(n^3) shortest-augmenting-path assignment on a square cost
// matrix; returns the column assigned to each row.
std::vector<int> solve_square_min_cost(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      int j1 = -1;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (p[j] > 0) {
      row_to_col[p[j] - 1] = j - 1;
    }
  }
  return row_to_col;
}

}  // namespace

std::vector<std::pair<int, int>> max_weight_matching(
    const Eigen::MatrixXd& weights,
    const std::vector<std::vector<bool>>& allowed) {
  const int nr = static_cast<int>(weights.rows());
  const int nc = static_cast<int>(weights.cols());
  if (nr == 0 || nc == 0) {
    return {};
  }
  // Pad to a square problem where every row and column owns a zero-cost
  // dummy slot, so leaving entries unmatched is always feasible.
  const int n = nr + nc;
  Eigen::MatrixXd cost = Eigen::MatrixXd::Constant(n, n, kForbidden);
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < nc; ++j) {
      cost(i, j) = allowed[i][j] ? -weights(i, j) : kForbidden;
    }
    cost(i, nc + i) = 0.0;
  }
  for (int j = 0; j < nc; ++j) {
    cost(nr + j, j) = 0.0;
  }
  cost.block(nr, nc, nc, nr).setZero();
  const std::vector<int> row_to_col = solve_square_min_cost(cost);
  std::vector<std::pair<int, int>> matches;
  for (int i = 0; i < nr; ++i) {
    const int j = row_to_col[i];
    if (j >= 0 && j < nc && allowed[i][j]) {
      matches.emplace_back(i, j);
    }
  }
  return matches;
}

double max_weight_value(const Eigen::MatrixXd& weights,
                        const std::vector<std::vector<bool>>& allowed) {
  double total = 0.0;
  for (const auto& [i, j] : max_weight_matching(weights, allowed)) {
    total += weights(i, j);
  }
  return total;
}

}  // namespace detail

namespace {

// Optimal value over the still-active rows/columns.
double active_value(const Eigen::MatrixXd& scores,
                    const std::vector<std::vector<bool>>& allowed,
                    const std::vector<int>& rows, const std::vector<int>& cols) {
  Eigen::MatrixXd w(rows.size(), cols.size());
  std::vector<std::vector<bool>> a(rows.size(),
                                   std::vector<bool>(cols.size(), false));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      w(i, j) = scores(rows[i], cols[j]);
      a[i][j] = allowed[rows[i]][cols[j]];
    }
  }
  return detail::max_weight_value(w, a);
}

}  // namespace

Assignment solve_assignment(const ScoreMatrix& m) {
  const int nr = static_cast<int>(m.scores.rows());
  const int nc = static_cast<int>(m.scores.cols());
  std::vector<std::vector<bool>> allowed(nr, std::vector<bool>(nc, false));
  bool any = false;
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < nc; ++j) {
      allowed[i][j] = m.scores(i, j) >= m.gate;
      any = any || allowed[i][j];
    }
  }

  Assignment out;
  std::vector<bool> col_taken(nc, false);
  if (!any) {
    for (int i = 0; i < nr; ++i) out.unmatched_rows.push_back(i);
    for (int j = 0; j < nc; ++j) out.unmatched_cols.push_back(j);
    return out;
  }

  // Lock pairs row by row: a pair is kept when fixing it still attains the
  // optimal total score. This realizes the documented deterministic
  // tie-break (lowest row, then lowest column).
  std::vector<int> rows, cols;
  for (int i = 0; i < nr; ++i) rows.push_back(i);
  for (int j = 0; j < nc; ++j) cols.push_back(j);
  double best = active_value(m.scores, allowed, rows, cols);

  for (int i = 0; i < nr; ++i) {
    rows.erase(rows.begin());
    int locked = -1;
    for (std::size_t cj = 0; cj < cols.size(); ++cj) {
      const int j = cols[cj];
      if (!allowed[i][j]) continue;
      std::vector<int> rest_cols = cols;
      rest_cols.erase(rest_cols.begin() + static_cast<long>(cj));
      const double fixed =
          m.scores(i, j) + active_value(m.scores, allowed, rows, rest_cols);
      const double tol = 1e-9 * std::max(1.0, std::abs(best));
      if (fixed >= best - tol) {
        locked = j;
        best = fixed - m.scores(i, j);
        cols = std::move(rest_cols);
        break;
      }
    }
    if (locked >= 0) {
      out.matches.emplace_back(i, locked);
      col_taken[locked] = true;
    } else {
      out.unmatched_rows.push_back(i);
      best = active_value(m.scores, allowed, rows, cols);
    }
  }
  for (int j = 0; j < nc; ++j) {
    if (!col_taken[j]) {
      out.unmatched_cols.push_back(j);
    }
  }
  return out;
}

}  // namespace jhtrack
