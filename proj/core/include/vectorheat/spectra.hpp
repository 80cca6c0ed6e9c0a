#pragma once

#include <Eigen/Core>
#include <limits>
#include <utility>
#include <vector>

#include "vectorheat/models.hpp"

namespace vectorheat {

/// Truncated eigen-data of the connection Laplacian: ascending eigenvalues
/// grouped into eigenspaces, and eigen-vector-field samples expressed as d
/// coefficients in each point's orthonormal frame.
struct TangentSpectrum {
  models::ManifoldModel model;
  std::vector<double> eigenvalues;       // N, ascending, with multiplicity
  std::vector<int> multiplicities;       // per eigenspace, sums to N
  std::vector<int> offsets;              // eigenspace starts, size spaces()+1
  std::vector<Eigen::MatrixXd> values;   // per point: N x d frame coefficients
  models::PointCloud cloud;
  double volume = 0.0;

  // Weighted-Gram deviation from identity, measured at build time; the
  // declared tolerance depends on the source (exact grids vs discrete vs
  // evaluation-only clouds, where it is +inf).
  double gram_residual = 0.0;
  double gram_tolerance = std::numeric_limits<double>::infinity();

  int n_fields() const { return static_cast<int>(eigenvalues.size()); }
  int n_points() const { return static_cast<int>(values.size()); }
  int spaces() const { return static_cast<int>(multiplicities.size()); }
  int dim() const { return model.dim; }
  double max_eigenvalue() const { return eigenvalues.empty() ? 0.0 : eigenvalues.back(); }
  /// Distinct eigenvalue of eigenspace k (value at its first index).
  double space_eigenvalue(int k) const { return eigenvalues[offsets[k]]; }

  void validate() const;
};

/// Truncated Laplace-Beltrami eigen-data (mu_k, phi_k samples).
struct ScalarSpectrum {
  models::ManifoldModel model;
  std::vector<double> eigenvalues;
  std::vector<int> multiplicities;
  std::vector<int> offsets;
  Eigen::MatrixXd values;  // n_points x N
  models::PointCloud cloud;
  double volume = 0.0;
  double gram_residual = 0.0;
  double gram_tolerance = std::numeric_limits<double>::infinity();

  int n_fields() const { return static_cast<int>(eigenvalues.size()); }
  int n_points() const { return static_cast<int>(values.rows()); }
  int spaces() const { return static_cast<int>(multiplicities.size()); }
  double max_eigenvalue() const { return eigenvalues.empty() ? 0.0 : eigenvalues.back(); }

  void validate() const;
};

namespace models {

/// First >= count eigenvalues (count is rounded up to the next eigenspace
/// boundary so truncations stay basis-invariant), with eigenfield and
/// eigenfunction samples on `cloud` (default: a grid fine enough for
/// near-exact orthonormality).  Circle/torus: the tangent bundle is trivial,
/// so the connection spectrum is the scalar spectrum repeated d times with
/// constant frames.  Sphere2: tangent eigenvalues (l(l+1)-1)/r^2 with
/// multiplicity 2(2l+1), l >= 1, realized by normalized gradient and rotated
/// gradient fields of the spherical harmonics.
std::pair<TangentSpectrum, ScalarSpectrum> analytic_spectra(
    const ManifoldModel& model, int count, const PointCloud* cloud = nullptr);

/// Smallest count so that the spectrum reaches eigenvalues >= lambda_cutoff.
int count_for_cutoff(const ManifoldModel& model, double lambda_cutoff);

}  // namespace models

}  // namespace vectorheat
