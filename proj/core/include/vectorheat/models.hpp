#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "vectorheat/errors.hpp"

namespace vectorheat::models {

enum class Kind { circle, flat_torus, sphere2 };

std::string kind_name(Kind kind);
Kind kind_from_name(const std::string& name);

/// Analytic description of a closed Riemannian manifold.  Dimension, volume,
/// diameter and the Ricci lower bound k (Ric >= (d-1) k g) are exact closed
/// forms of the kind.
struct ManifoldModel {
  Kind kind = Kind::circle;
  std::string name;
  int dim = 1;
  double volume = 0.0;
  double diameter = 0.0;
  double ricci_lower = 0.0;
  std::vector<double> parameters;  // circle/sphere2: {radius}; flat_torus: periods

  /// r_min(M) = inf Ric(v,v) over unit v; constant for these models.
  double ricci_min() const { return (dim - 1) * ricci_lower; }

  bool same_manifold(const ManifoldModel& other) const;
};

ManifoldModel make_model(Kind kind, const std::vector<double>& parameters);
ManifoldModel make_circle(double radius);
ManifoldModel make_flat_torus(const std::vector<double>& periods);
ManifoldModel make_sphere2(double radius);

/// Finite sample of a model: intrinsic coordinates, cached ambient positions,
/// per-point orthonormal tangent frames (ambient columns) and quadrature
/// weights that sum to the volume.
struct PointCloud {
  ManifoldModel model;
  Eigen::MatrixXd points;                // n x intrinsic_dim
  Eigen::MatrixXd ambient;               // n x ambient_dim
  std::vector<Eigen::MatrixXd> frames;   // per point: ambient_dim x d, orthonormal
  Eigen::VectorXd weights;               // n, sum = volume
  bool spiral_fallback = false;          // sphere grid fell back to the spiral rule

  int n() const { return static_cast<int>(points.rows()); }
  int ambient_dim() const { return static_cast<int>(ambient.cols()); }
  void validate() const;  // frame orthonormality 1e-12, weight sum 1e-10
};

enum class Strategy { grid, uniform_random };

/// Deterministic grid sampling or seed-deterministic uniform sampling.
/// Grids: circle = equispaced angles; torus = m^d lattice (n must be a d-th
/// power); sphere = m x m area-exact latitude bands when n = m^2, otherwise
/// the equal-area Fibonacci spiral (flagged via spiral_fallback).
PointCloud sample(const ManifoldModel& model, int n, Strategy strategy,
                  std::uint64_t seed = 0);

/// Evaluation cloud at caller-chosen intrinsic coordinates (weight volume/n
/// each).  Meant for pointwise kernel evaluation, not quadrature.
PointCloud sample_at(const ManifoldModel& model, const Eigen::MatrixXd& coords);

double geodesic(const ManifoldModel& model, const Eigen::VectorXd& x,
                const Eigen::VectorXd& y);

Eigen::VectorXd ambient_position(const ManifoldModel& model,
                                 const Eigen::VectorXd& coord);
Eigen::MatrixXd tangent_frame(const ManifoldModel& model,
                              const Eigen::VectorXd& coord);

/// Multiplicity of the l-th Laplace-Beltrami eigenvalue l(l+d-1) on S^d.
double sphere_eigen_multiplicity(int l, int d);

/// Z_{S^d(1)}(t) = sum_l mult(l,d) e^{-l(l+d-1) t}, truncated once the tail
/// bound drops below 1e-14.
double sphere_partition(int d, double t);

/// Vol(S^d)/Vol(S^{d-1}).
double sphere_volume_ratio(int d);
double sphere_volume(int d);

/// a(d, eps, alpha); for eps = -1 solves z * int_0^alpha (cosh t + z sinh t)^{d-1} dt
/// = omega_d by bracketing + bisection to 1e-12.
double shape_constant_a(int d, int eps, double alpha = 0.0);

/// The theorem statement reads R = D(M)/a(d,eps,alpha) while the proof uses
/// the reciprocal convention R = a(d,eps,alpha) D(M); both are exposed.
enum class RadiusConvention { theorem_statement, proof_side };

double comparison_radius(const ManifoldModel& model, int eps, double alpha = 0.0,
                         RadiusConvention convention = RadiusConvention::theorem_statement);

}  // namespace vectorheat::models
