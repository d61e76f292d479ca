#include "jhtrack/config.hpp"

namespace jhtrack {

namespace {

bool in_unit(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

void TrackerConfig::validate() const {
  if (!in_unit(alpha1) || !in_unit(alpha2) || !in_unit(alpha3)) {
    throw InvalidThresholds("association gates must lie in [0, 1]");
  }
  if (!in_unit(d_low) || !in_unit(d_high) || d_low > d_high) {
    throw InvalidThresholds("confidence thresholds need 0 <= d_low <= d_high <= 1");
  }
  if (!in_unit(p_ss) || !in_unit(p_dd) || !in_unit(p_ww) || !in_unit(p_ii)) {
    throw InvalidThresholds("transition probabilities must lie in [0, 1]");
  }
  if (omega < 1) {
    throw InvalidThresholds("omega must be at least 1");
  }
  if (b < 0.0) {
    throw InvalidThresholds("BIoU buffer must be non-negative");
  }
  if (sigma_x < 0.0 || sigma_y < 0.0 || v < 0.0 || sigma_m <= 0.0) {
    throw InvalidThresholds("noise parameters must be non-negative");
  }
  if (n < 1 || m < 1) {
    throw InvalidThresholds("window lengths must be at least 1");
  }
  if (chi2_dof < 1) {
    throw InvalidThresholds("chi-square degrees of freedom must be positive");
  }
  if (dt <= 0.0) {
    throw InvalidThresholds("frame interval must be positive");
  }
}

}  // namespace jhtrack
