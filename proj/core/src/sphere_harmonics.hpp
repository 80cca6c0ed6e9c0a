#pragma once

#include <Eigen/Core>

namespace vectorheat::models::detail {

/// Fully normalized real spherical harmonics on the unit sphere
/// (int_{S^2} Y_lm Y_l'm' dOmega = delta) evaluated with their angular
/// derivatives.  dphi_over_sin is (dY/dphi)/sin(theta), regular for m != 0
/// away from the poles.
struct HarmonicRow {
  double y = 0.0;
  double dtheta = 0.0;
  double dphi_over_sin = 0.0;
};

/// Evaluates Y_lm for all l <= lmax, m in [-l, l] at (theta, phi).
/// Output rows are indexed by (l, m) -> l*l + (m + l).
Eigen::Matrix<double, Eigen::Dynamic, 3> eval_harmonics(int lmax, double theta,
                                                        double phi);

inline int harmonic_index(int l, int m) { return l * l + m + l; }

}  // namespace vectorheat::models::detail
