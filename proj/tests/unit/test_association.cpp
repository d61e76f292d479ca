#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "jhtrack/association.hpp"
#include "jhtrack/synth.hpp"

using namespace jhtrack;

namespace {

// Erlang closed form of the chi-square CDF for even degrees of freedom:
// F(x; 2m) = 1 - exp(-x/2) * sum_{j<m} (x/2)^j / j!.
double chi2_even_dof(double x, int m) {
  double term = 1.0;
  double sum = 1.0;
  for (int j = 1; j < m; ++j) {
    term *= (x / 2.0) / j;
    sum += term;
  }
  return 1.0 - std::exp(-x / 2.0) * sum;
}

// Exhaustive assignment oracle with the production tie-break: maximum total
// score; equal totals prefer the matching whose pair-inclusion mask,
// scanned in ascending row-major order, is lexicographically greatest.
struct BruteForce {
  const Eigen::MatrixXd& s;
  double gate;
  double tol;
  std::vector<std::pair<int, int>> best;
  double best_total = -1.0;
  std::vector<std::uint8_t> best_mask;
  std::vector<bool> col_used;

  explicit BruteForce(const Eigen::MatrixXd& scores, double g)
      : s(scores), gate(g), col_used(scores.cols(), false) {
    std::vector<std::pair<int, int>> cur;
    tol = 0.0;
    recurse(0, 0.0, cur);
  }

  void recurse(int row, double total, std::vector<std::pair<int, int>>& cur) {
    if (row == s.rows()) {
      std::vector<std::uint8_t> mask(s.rows() * s.cols(), 0);
      for (const auto& [r, c] : cur) mask[r * s.cols() + c] = 1;
      const double t = 1e-9 * std::max(1.0, std::abs(total));
      if (best_total < -0.5 || total > best_total + t ||
          (total >= best_total - t && mask > best_mask)) {
        best_total = std::max(best_total, total);
        best = cur;
        best_mask = mask;
      }
      return;
    }
    recurse(row + 1, total, cur);  // row left unmatched
    for (int c = 0; c < s.cols(); ++c) {
      if (col_used[c] || s(row, c) < gate) continue;
      col_used[c] = true;
      cur.emplace_back(row, c);
      recurse(row + 1, total + s(row, c), cur);
      cur.pop_back();
      col_used[c] = false;
    }
  }
};

}  // namespace

TEST_CASE("chi-square cdf closed form for two degrees of freedom") {
  CHECK(chi2_cdf(2.0, 2) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-13));
  for (double x : {0.1, 0.5, 1.0, 3.0, 7.0, 20.0, 50.0}) {
    CHECK(chi2_cdf(x, 2) ==
          doctest::Approx(1.0 - std::exp(-x / 2.0)).epsilon(1e-12));
  }
}

TEST_CASE("chi-square cdf against the Erlang series for even dof") {
  for (const int k : {4, 10, 24}) {
    for (double x = 0.5; x <= 60.0; x += 0.5) {
      const double expected = chi2_even_dof(x, k / 2);
      CHECK(std::abs(chi2_cdf(x, k) - expected) < 1e-12);
    }
  }
}

TEST_CASE("chi-square cdf for one degree of freedom matches erf") {
  for (double x : {0.2, 1.0, 2.5, 9.0}) {
    CHECK(chi2_cdf(x, 1) ==
          doctest::Approx(std::erf(std::sqrt(x / 2.0))).epsilon(1e-12));
  }
}

TEST_CASE("chi-square cdf boundary and monotonicity") {
  CHECK(chi2_cdf(0.0, 24) == 0.0);
  CHECK(chi2_cdf(-3.0, 24) == 0.0);
  double prev = 0.0;
  for (double x = 0.25; x < 80.0; x += 0.25) {
    const double v = chi2_cdf(x, 24);
    CHECK(v >= prev);
    CHECK(v <= 1.0);
    prev = v;
  }
}

TEST_CASE("right tail probability of the ground distance") {
  CHECK(p_of_d(-5.0, 24) == 1.0);
  CHECK(p_of_d(0.0, 24) == 1.0);
  CHECK(p_of_d(2.0, 2) == doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
  CHECK(p_of_d(500.0, 24) < 1e-12);
}

TEST_CASE("mahalanobis distance with the log determinant penalty") {
  CHECK(mahalanobis_d(Eigen::Vector2d(3.0, 4.0), Eigen::Matrix2d::Identity()) ==
        doctest::Approx(25.0));
  Eigen::Matrix2d s;
  s << 4, 0, 0, 1;
  CHECK(mahalanobis_d(Eigen::Vector2d(2.0, 0.0), s) ==
        doctest::Approx(1.0 + std::log(4.0)));

  Eigen::Matrix2d indefinite;
  indefinite << 1, 2, 2, 1;
  CHECK_THROWS_AS(mahalanobis_d(Eigen::Vector2d(1.0, 1.0), indefinite),
                  SingularInnovation);
}

TEST_CASE("gaussian innovation likelihood") {
  const double at_zero =
      gaussian_likelihood(Eigen::Vector2d::Zero(), Eigen::Matrix2d::Identity());
  CHECK(at_zero == doctest::Approx(1.0 / (2.0 * std::acos(-1.0))).epsilon(1e-13));
  const double off = gaussian_likelihood(Eigen::Vector2d(1.0, 1.0),
                                         Eigen::Matrix2d::Identity());
  CHECK(off == doctest::Approx(at_zero * std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("stage scores") {
  CHECK(stage1_score(0.5, 0.8, 0.9) == doctest::Approx(0.36));
  CHECK(stage2_score(0.25, 0.75, 0.4, 0.8, 0.9) ==
        doctest::Approx((0.25 * 0.8 + 0.75 * 0.4) * 0.9));
}

TEST_CASE("association model probability prediction") {
  const AssocModelProbs mu{1.0, 0.0};
  const AssocModelProbs out = predict_assoc_probs(mu, 0.9, 0.8);
  CHECK(out.mu_image == doctest::Approx(0.9));
  CHECK(out.mu_ground == doctest::Approx(0.1));

  // A stationary distribution of the symmetric chain stays put.
  const AssocModelProbs even{0.5, 0.5};
  const AssocModelProbs kept = predict_assoc_probs(even, 0.9, 0.9);
  CHECK(kept.mu_image == doctest::Approx(0.5));
  CHECK(kept.mu_ground == doctest::Approx(0.5));
}

TEST_CASE("association model probability update") {
  const AssocModelProbs out = update_assoc_probs({0.5, 0.5}, 0.8, 0.2);
  CHECK(out.mu_image == doctest::Approx(0.8));
  CHECK(out.mu_ground == doctest::Approx(0.2));

  // Vanishing likelihoods keep the prior.
  const AssocModelProbs kept = update_assoc_probs({0.7, 0.3}, 0.0, 0.0);
  CHECK(kept.mu_image == doctest::Approx(0.7));
  CHECK(kept.mu_ground == doctest::Approx(0.3));
}

TEST_CASE("assignment on small hand cases") {
  Eigen::MatrixXd s(2, 2);
  s << 0.9, 0.1, 0.2, 0.8;
  Assignment a = solve_assignment({s, 0.0});
  REQUIRE(a.matches.size() == 2);
  CHECK(a.matches[0] == std::pair<int, int>(0, 0));
  CHECK(a.matches[1] == std::pair<int, int>(1, 1));
  CHECK(a.unmatched_rows.empty());
  CHECK(a.unmatched_cols.empty());

  // Gate removes the weak pairs.
  a = solve_assignment({s, 0.85});
  REQUIRE(a.matches.size() == 1);
  CHECK(a.matches[0] == std::pair<int, int>(0, 0));
  REQUIRE(a.unmatched_rows.size() == 1);
  CHECK(a.unmatched_rows[0] == 1);
  REQUIRE(a.unmatched_cols.size() == 1);
  CHECK(a.unmatched_cols[0] == 1);
}

TEST_CASE("assignment prefers the earliest pairs on ties") {
  Eigen::MatrixXd s(2, 2);
  s << 0.5, 0.5, 0.5, 0.5;
  const Assignment a = solve_assignment({s, 0.0});
  REQUIRE(a.matches.size() == 2);
  CHECK(a.matches[0] == std::pair<int, int>(0, 0));
  CHECK(a.matches[1] == std::pair<int, int>(1, 1));
}

TEST_CASE("assignment handles rectangular and empty inputs") {
  Eigen::MatrixXd wide(1, 3);
  wide << 0.2, 0.9, 0.4;
  Assignment a = solve_assignment({wide, 0.1});
  REQUIRE(a.matches.size() == 1);
  CHECK(a.matches[0] == std::pair<int, int>(0, 1));
  CHECK(a.unmatched_cols == std::vector<int>{0, 2});

  Eigen::MatrixXd tall(3, 1);
  tall << 0.2, 0.9, 0.4;
  a = solve_assignment({tall, 0.1});
  REQUIRE(a.matches.size() == 1);
  CHECK(a.matches[0] == std::pair<int, int>(1, 0));
  CHECK(a.unmatched_rows == std::vector<int>{0, 2});

  a = solve_assignment({Eigen::MatrixXd(0, 4), 0.0});
  CHECK(a.matches.empty());
  CHECK(a.unmatched_cols == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("assignment matches an exhaustive oracle on tie-heavy matrices") {
  // Discrete score levels force frequent exact ties.
  const double levels[5] = {0.0, 0.25, 0.5, 0.75, 1.0};
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const int rows = 1 + static_cast<int>(rng.next() % 4);
    const int cols = 1 + static_cast<int>(rng.next() % 5);
    Eigen::MatrixXd s(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c)
        s(r, c) = levels[rng.next() % 5];
    const double gate = (trial % 2 == 0) ? 0.25 : 0.0;

    const Assignment got = solve_assignment({s, gate});
    const BruteForce want(s, gate);
    CAPTURE(trial);
    REQUIRE(got.matches == want.best);
  }
}

TEST_CASE("maximum weight matching value matches the oracle") {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const int rows = 1 + static_cast<int>(rng.next() % 4);
    const int cols = 1 + static_cast<int>(rng.next() % 4);
    Eigen::MatrixXd s(rows, cols);
    std::vector<std::vector<bool>> allowed(rows, std::vector<bool>(cols));
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) {
        s(r, c) = rng.uniform();
        allowed[r][c] = rng.uniform() < 0.8;
      }
    const double got = detail::max_weight_value(s, allowed);

    // Oracle: brute force with an effective gate via a masked copy.
    Eigen::MatrixXd masked = s;
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c)
        if (!allowed[r][c]) masked(r, c) = -1.0;
    const BruteForce want(masked, 0.0);
    CHECK(got == doctest::Approx(want.best_total).epsilon(1e-9));
  }
}
