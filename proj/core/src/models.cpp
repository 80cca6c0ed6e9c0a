#include "vectorheat/models.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

namespace vectorheat::models {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(const std::vector<double>& params, const char* what) {
  for (double p : params) {
    if (!(p > 0.0) || !std::isfinite(p)) {
      std::ostringstream os;
      os << "non-positive " << what << " " << p;
      throw invalid_parameter(os.str());
    }
  }
}

double wrap_period(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0.0) r += period;
  return r;
}

}  // namespace

std::string kind_name(Kind kind) {
  switch (kind) {
    case Kind::circle: return "circle";
    case Kind::flat_torus: return "flat_torus";
    case Kind::sphere2: return "sphere2";
  }
  return "unknown";
}

Kind kind_from_name(const std::string& name) {
  if (name == "circle") return Kind::circle;
  if (name == "flat_torus" || name == "torus") return Kind::flat_torus;
  if (name == "sphere2" || name == "sphere") return Kind::sphere2;
  throw invalid_parameter("unknown model kind '" + name + "'");
}

bool ManifoldModel::same_manifold(const ManifoldModel& other) const {
  if (kind != other.kind || dim != other.dim) return false;
  if (parameters.size() != other.parameters.size()) return false;
  for (std::size_t i = 0; i < parameters.size(); ++i) {
    if (std::abs(parameters[i] - other.parameters[i]) > 1e-12) return false;
  }
  return true;
}

ManifoldModel make_circle(double radius) {
  require_positive({radius}, "radius");
  ManifoldModel m;
  m.kind = Kind::circle;
  m.name = "circle";
  m.dim = 1;
  m.volume = 2.0 * kPi * radius;
  m.diameter = kPi * radius;
  m.ricci_lower = 0.0;
  m.parameters = {radius};
  return m;
}

ManifoldModel make_flat_torus(const std::vector<double>& periods) {
  if (periods.empty()) throw invalid_parameter("flat_torus needs at least one period");
  require_positive(periods, "period");
  ManifoldModel m;
  m.kind = Kind::flat_torus;
  m.name = "flat_torus";
  m.dim = static_cast<int>(periods.size());
  m.volume = 1.0;
  double diag2 = 0.0;
  for (double L : periods) {
    m.volume *= L;
    diag2 += 0.25 * L * L;
  }
  m.diameter = std::sqrt(diag2);
  m.ricci_lower = 0.0;
  m.parameters = periods;
  return m;
}

ManifoldModel make_sphere2(double radius) {
  require_positive({radius}, "radius");
  ManifoldModel m;
  m.kind = Kind::sphere2;
  m.name = "sphere2";
  m.dim = 2;
  m.volume = 4.0 * kPi * radius * radius;
  m.diameter = kPi * radius;
  m.ricci_lower = 1.0 / (radius * radius);
  m.parameters = {radius};
  return m;
}

ManifoldModel make_model(Kind kind, const std::vector<double>& parameters) {
  switch (kind) {
    case Kind::circle:
      if (parameters.size() != 1) throw invalid_parameter("circle takes one radius");
      return make_circle(parameters[0]);
    case Kind::flat_torus:
      return make_flat_torus(parameters);
    case Kind::sphere2:
      if (parameters.size() != 1) throw invalid_parameter("sphere2 takes one radius");
      return make_sphere2(parameters[0]);
  }
  throw invalid_parameter("unknown model kind");
}

Eigen::VectorXd ambient_position(const ManifoldModel& model,
                                 const Eigen::VectorXd& coord) {
  switch (model.kind) {
    case Kind::circle: {
      double r = model.parameters[0];
      Eigen::VectorXd p(2);
      p << r * std::cos(coord[0]), r * std::sin(coord[0]);
      return p;
    }
    case Kind::flat_torus: {
      int d = model.dim;
      Eigen::VectorXd p(2 * d);
      for (int k = 0; k < d; ++k) {
        double L = model.parameters[k];
        double rho = L / (2.0 * kPi);
        double ang = 2.0 * kPi * coord[k] / L;
        p[2 * k] = rho * std::cos(ang);
        p[2 * k + 1] = rho * std::sin(ang);
      }
      return p;
    }
    case Kind::sphere2: {
      double r = model.parameters[0];
      double theta = coord[0], phi = coord[1];
      Eigen::VectorXd p(3);
      p << r * std::sin(theta) * std::cos(phi), r * std::sin(theta) * std::sin(phi),
          r * std::cos(theta);
      return p;
    }
  }
  throw invalid_parameter("unknown model kind");
}

Eigen::MatrixXd tangent_frame(const ManifoldModel& model,
                              const Eigen::VectorXd& coord) {
  switch (model.kind) {
    case Kind::circle: {
      Eigen::MatrixXd f(2, 1);
      f << -std::sin(coord[0]), std::cos(coord[0]);
      return f;
    }
    case Kind::flat_torus: {
      int d = model.dim;
      Eigen::MatrixXd f = Eigen::MatrixXd::Zero(2 * d, d);
      for (int k = 0; k < d; ++k) {
        double L = model.parameters[k];
        double ang = 2.0 * kPi * coord[k] / L;
        f(2 * k, k) = -std::sin(ang);
        f(2 * k + 1, k) = std::cos(ang);
      }
      return f;
    }
    case Kind::sphere2: {
      double theta = coord[0], phi = coord[1];
      Eigen::MatrixXd f(3, 2);
      // columns: e_theta, e_phi
      f << std::cos(theta) * std::cos(phi), -std::sin(phi),
          std::cos(theta) * std::sin(phi), std::cos(phi),
          -std::sin(theta), 0.0;
      return f;
    }
  }
  throw invalid_parameter("unknown model kind");
}

void PointCloud::validate() const {
  const int npts = n();
  if (npts == 0) throw input_error("empty point cloud");
  if (static_cast<int>(frames.size()) != npts || weights.size() != npts)
    throw input_error("point cloud arrays have inconsistent sizes");
  for (int i = 0; i < npts; ++i) {
    Eigen::MatrixXd g = frames[i].transpose() * frames[i];
    double dev = (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
    if (dev > 1e-12) {
      std::ostringstream os;
      os << "frame " << i << " not orthonormal (deviation " << dev << ")";
      throw input_error(os.str());
    }
  }
  double dev = std::abs(weights.sum() - model.volume);
  if (dev > 1e-10 * std::max(1.0, model.volume)) {
    std::ostringstream os;
    os << "weights sum to " << weights.sum() << ", expected volume " << model.volume;
    throw input_error(os.str());
  }
}

namespace {

PointCloud finish_cloud(const ManifoldModel& model, const Eigen::MatrixXd& coords,
                        const Eigen::VectorXd& weights, bool spiral = false) {
  PointCloud cloud;
  cloud.model = model;
  cloud.points = coords;
  cloud.weights = weights;
  cloud.spiral_fallback = spiral;
  const int n = static_cast<int>(coords.rows());
  int adim = model.kind == Kind::sphere2 ? 3 : (model.kind == Kind::circle ? 2 : 2 * model.dim);
  cloud.ambient.resize(n, adim);
  cloud.frames.reserve(n);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd c = coords.row(i);
    cloud.ambient.row(i) = ambient_position(model, c);
    cloud.frames.push_back(tangent_frame(model, c));
  }
  return cloud;
}

PointCloud sample_circle(const ManifoldModel& model, int n, Strategy strategy,
                         std::uint64_t seed) {
  Eigen::MatrixXd coords(n, 1);
  if (strategy == Strategy::grid) {
    for (int i = 0; i < n; ++i) coords(i, 0) = 2.0 * kPi * i / n;
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 2.0 * kPi);
    for (int i = 0; i < n; ++i) coords(i, 0) = uni(rng);
  }
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, model.volume / n);
  return finish_cloud(model, coords, w);
}

PointCloud sample_torus(const ManifoldModel& model, int n, Strategy strategy,
                        std::uint64_t seed) {
  const int d = model.dim;
  Eigen::MatrixXd coords(n, d);
  if (strategy == Strategy::grid) {
    int m = static_cast<int>(std::llround(std::pow(double(n), 1.0 / d)));
    // accept m within rounding noise only
    long long total = 1;
    for (int k = 0; k < d; ++k) total *= m;
    if (total != n) {
      std::ostringstream os;
      os << "torus grid needs n to be a perfect " << d << "-th power, got " << n;
      throw invalid_parameter(os.str());
    }
    for (int i = 0; i < n; ++i) {
      int idx = i;
      for (int k = 0; k < d; ++k) {
        coords(i, k) = model.parameters[k] * (idx % m) / m;
        idx /= m;
      }
    }
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < d; ++k) coords(i, k) = model.parameters[k] * uni(rng);
  }
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, model.volume / n);
  return finish_cloud(model, coords, w);
}

PointCloud sample_sphere(const ManifoldModel& model, int n, Strategy strategy,
                         std::uint64_t seed) {
  Eigen::MatrixXd coords(n, 2);
  bool spiral = false;
  if (strategy == Strategy::grid) {
    int m = static_cast<int>(std::llround(std::sqrt(double(n))));
    if (m * m == n) {
      // m x m area-exact latitude bands: band midpoints in u = cos(theta),
      // uniform longitudes; every weight is exactly volume/n.
      for (int j = 0; j < m; ++j) {
        double u = 1.0 - (2.0 * j + 1.0) / m;
        double theta = std::acos(u);
        for (int k = 0; k < m; ++k) {
          int i = j * m + k;
          coords(i, 0) = theta;
          coords(i, 1) = 2.0 * kPi * k / m;
        }
      }
    } else {
      // Equal-area Fibonacci spiral fallback for non-square n.
      spiral = true;
      const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
      for (int i = 0; i < n; ++i) {
        double u = 1.0 - (2.0 * i + 1.0) / n;
        coords(i, 0) = std::acos(u);
        coords(i, 1) = wrap_period(2.0 * kPi * i / golden, 2.0 * kPi);
      }
    }
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni01(0.0, 1.0);
    for (int i = 0; i < n; ++i) {
      double u = 2.0 * uni01(rng) - 1.0;
      u = std::clamp(u, -1.0 + 1e-12, 1.0 - 1e-12);
      coords(i, 0) = std::acos(u);
      coords(i, 1) = 2.0 * kPi * uni01(rng);
    }
  }
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, model.volume / n);
  return finish_cloud(model, coords, w, spiral);
}

}  // namespace

PointCloud sample(const ManifoldModel& model, int n, Strategy strategy,
                  std::uint64_t seed) {
  if (n < model.dim + 2) {
    std::ostringstream os;
    os << "need at least dim+2 = " << model.dim + 2 << " points, got " << n;
    throw invalid_parameter(os.str());
  }
  switch (model.kind) {
    case Kind::circle: return sample_circle(model, n, strategy, seed);
    case Kind::flat_torus: return sample_torus(model, n, strategy, seed);
    case Kind::sphere2: return sample_sphere(model, n, strategy, seed);
  }
  throw invalid_parameter("unknown model kind");
}

PointCloud sample_at(const ManifoldModel& model, const Eigen::MatrixXd& coords) {
  if (coords.rows() == 0) throw invalid_parameter("sample_at needs at least one point");
  int want = model.kind == Kind::sphere2 ? 2 : model.dim;
  if (coords.cols() != want) {
    std::ostringstream os;
    os << "expected " << want << " intrinsic coordinates, got " << coords.cols();
    throw invalid_parameter(os.str());
  }
  Eigen::VectorXd w =
      Eigen::VectorXd::Constant(coords.rows(), model.volume / double(coords.rows()));
  return finish_cloud(model, coords, w);
}

double geodesic(const ManifoldModel& model, const Eigen::VectorXd& x,
                const Eigen::VectorXd& y) {
  switch (model.kind) {
    case Kind::circle: {
      double r = model.parameters[0];
      double dtheta = std::abs(wrap_period(x[0] - y[0], 2.0 * kPi));
      dtheta = std::min(dtheta, 2.0 * kPi - dtheta);
      return r * dtheta;
    }
    case Kind::flat_torus: {
      // minimal lattice-shifted Euclidean distance
      double s = 0.0;
      for (int k = 0; k < model.dim; ++k) {
        double L = model.parameters[k];
        double dk = std::abs(wrap_period(x[k] - y[k], L));
        dk = std::min(dk, L - dk);
        s += dk * dk;
      }
      return std::sqrt(s);
    }
    case Kind::sphere2: {
      double r = model.parameters[0];
      Eigen::VectorXd u = ambient_position(model, x) / r;
      Eigen::VectorXd v = ambient_position(model, y) / r;
      double c = std::clamp(u.dot(v), -1.0, 1.0);
      return r * std::acos(c);
    }
  }
  throw invalid_parameter("unknown model kind");
}

double sphere_volume(int d) {
  // Vol(S^d) = 2 pi^{(d+1)/2} / Gamma((d+1)/2)
  return 2.0 * std::pow(kPi, 0.5 * (d + 1)) / std::tgamma(0.5 * (d + 1));
}

double sphere_volume_ratio(int d) {
  if (d < 1) throw invalid_parameter("sphere_volume_ratio needs d >= 1");
  return sphere_volume(d) / sphere_volume(d - 1);
}

double sphere_eigen_multiplicity(int l, int d) {
  if (l == 0) return 1.0;
  // (2l+d-1) (l+d-2)! / (l! (d-1)!)
  double lg = std::lgamma(double(l + d - 1)) - std::lgamma(double(l + 1)) -
              std::lgamma(double(d));
  return (2.0 * l + d - 1.0) * std::exp(lg);
}

double sphere_partition(int d, double t) {
  if (d < 1) throw invalid_parameter("sphere_partition needs d >= 1");
  if (!(t > 0.0)) throw invalid_parameter("sphere_partition needs t > 0");
  double sum = 0.0;
  double prev_term = 0.0;
  for (int l = 0;; ++l) {
    double lam = double(l) * (l + d - 1.0);
    double term = sphere_eigen_multiplicity(l, d) * std::exp(-lam * t);
    sum += term;
    // once terms decay geometrically, bound the tail by the ratio test
    if (l >= 1 && term < prev_term) {
      double ratio = term / prev_term;
      double tail = term * ratio / (1.0 - ratio);
      if (tail < 1e-14 * std::max(1.0, sum)) break;
    }
    prev_term = term;
    if (l > 100000) throw numeric_failure("sphere_partition did not converge");
  }
  return sum;
}

namespace {

// Composite Gauss-Legendre on [0, alpha] (enough nodes for the analytic
// integrands of shape_constant_a).
double integrate_0_alpha(double alpha, const std::function<double(double)>& f) {
  static const double nodes[8] = {-0.9602898564975362, -0.7966664774136267,
                                  -0.5255324099163290, -0.1834346424956498,
                                  0.1834346424956498,  0.5255324099163290,
                                  0.7966664774136267,  0.9602898564975362};
  static const double wts[8] = {0.1012285362903763, 0.2223810344533745,
                                0.3137066458778873, 0.3626837833783620,
                                0.3626837833783620, 0.3137066458778873,
                                0.2223810344533745, 0.1012285362903763};
  int panels = std::max(8, int(std::ceil(alpha * 4)));
  double h = alpha / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    double a = p * h, mid = a + 0.5 * h;
    for (int q = 0; q < 8; ++q) total += wts[q] * f(mid + 0.5 * h * nodes[q]);
  }
  return total * 0.5 * h;
}

}  // namespace

double shape_constant_a(int d, int eps, double alpha) {
  if (d < 1) throw invalid_parameter("shape_constant_a needs d >= 1");
  if (eps != -1 && eps != 0 && eps != 1)
    throw invalid_parameter("eps must be -1, 0 or 1");
  double omega = sphere_volume_ratio(d);
  if (eps == 0) return std::pow(1.0 + d * omega, 1.0 / d) - 1.0;
  if (!(alpha > 0.0)) throw invalid_parameter("alpha must be positive when eps != 0");
  if (eps == 1) {
    double integral = 2.0 * integrate_0_alpha(alpha / 2.0, [&](double t) {
      return std::pow(std::cos(t), d - 1);
    });
    if (!(integral > 0.0))
      throw numeric_failure("shape_constant_a: degenerate cosine integral");
    return alpha * std::pow(omega, 1.0 / d) * std::pow(integral, -1.0 / d);
  }
  // eps == -1: unique positive root z of z * int_0^alpha (cosh t + z sinh t)^{d-1} dt = omega
  auto lhs = [&](double z) {
    double integral = integrate_0_alpha(alpha, [&](double t) {
      return std::pow(std::cosh(t) + z * std::sinh(t), d - 1);
    });
    return z * integral - omega;
  };
  double lo = 1e-12, hi = 1e-12;
  while (lhs(hi) < 0.0) {
    hi *= 2.0;
    if (hi > 1e12) throw numeric_failure("shape_constant_a: root bracket not found");
  }
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (lhs(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-12 * std::max(1.0, hi)) break;
  }
  double z = 0.5 * (lo + hi);
  return alpha * z;
}

double comparison_radius(const ManifoldModel& model, int eps, double alpha,
                         RadiusConvention convention) {
  double lhs = model.ricci_min() * model.diameter * model.diameter;
  double rhs = (model.dim - 1) * double(eps) * alpha * alpha;
  if (lhs < rhs - 1e-12) {
    std::ostringstream os;
    os << "condition r_min D^2 >= (d-1) eps alpha^2 violated: " << lhs << " < " << rhs;
    throw precondition_error(os.str());
  }
  double a = shape_constant_a(model.dim, eps, alpha);
  return convention == RadiusConvention::theorem_statement ? model.diameter / a
                                                           : a * model.diameter;
}

}  // namespace vectorheat::models
