#include "sphere_harmonics.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "vectorheat/errors.hpp"

namespace vectorheat::models::detail {

// Fully normalized associated Legendre recurrences (stable to high degree):
//   Pbar_0^0 = 1/sqrt(4 pi)
//   Pbar_m^m = sqrt((2m+1)/(2m)) sin(theta) Pbar_{m-1}^{m-1}
//   Pbar_l^m = a_l^m (cos(theta) Pbar_{l-1}^m - Pbar_{l-2}^m / a_{l-1}^m),
//     a_l^m = sqrt((4l^2-1)/(l^2-m^2))
// and the derivative identity
//   d/dtheta Pbar_l^m = (l cos(theta) Pbar_l^m - b_l^m Pbar_{l-1}^m)/sin(theta),
//     b_l^m = sqrt((2l+1)(l^2-m^2)/(2l-1)).
Eigen::Matrix<double, Eigen::Dynamic, 3> eval_harmonics(int lmax, double theta,
                                                        double phi) {
  if (lmax < 0) throw invalid_parameter("eval_harmonics needs lmax >= 0");
  if (lmax > 256) throw unsupported_error("spherical harmonics implemented for l <= 256");
  const double st = std::sin(theta);
  const double ct = std::cos(theta);
  if (!(st > 1e-9))
    throw precondition_error("harmonic evaluation too close to a pole");

  const int rows = (lmax + 1) * (lmax + 1);
  Eigen::Matrix<double, Eigen::Dynamic, 3> out(rows, 3);

  std::vector<double> pbar(lmax + 1), dpbar(lmax + 1);
  double pmm = 1.0 / std::sqrt(4.0 * std::numbers::pi);
  for (int m = 0; m <= lmax; ++m) {
    if (m > 0) pmm *= std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * st;
    pbar[m] = pmm;
    dpbar[m] = m * ct * pmm / st;
    double prev = pmm;   // Pbar_{l-1}^m
    double prev2 = 0.0;  // Pbar_{l-2}^m
    double a_prev = 1.0;
    for (int l = m + 1; l <= lmax; ++l) {
      double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
      double cur = a * (ct * prev - prev2 / a_prev);
      double b = std::sqrt((2.0 * l + 1.0) * (double(l) * l - double(m) * m) /
                           (2.0 * l - 1.0));
      pbar[l] = cur;
      dpbar[l] = (l * ct * cur - b * prev) / st;
      prev2 = prev;
      prev = cur;
      a_prev = a;
    }
    const double sq2 = std::numbers::sqrt2;
    for (int l = m; l <= lmax; ++l) {
      if (m == 0) {
        out(harmonic_index(l, 0), 0) = pbar[l];
        out(harmonic_index(l, 0), 1) = dpbar[l];
        out(harmonic_index(l, 0), 2) = 0.0;
      } else {
        double c = std::cos(m * phi), s = std::sin(m * phi);
        double p_over_sin = pbar[l] / st;
        out(harmonic_index(l, m), 0) = sq2 * pbar[l] * c;
        out(harmonic_index(l, m), 1) = sq2 * dpbar[l] * c;
        out(harmonic_index(l, m), 2) = -sq2 * m * p_over_sin * s;
        out(harmonic_index(l, -m), 0) = sq2 * pbar[l] * s;
        out(harmonic_index(l, -m), 1) = sq2 * dpbar[l] * s;
        out(harmonic_index(l, -m), 2) = sq2 * m * p_over_sin * c;
      }
    }
  }
  return out;
}

}  // namespace vectorheat::models::detail
