#include "vectorheat/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "sphere_harmonics.hpp"

namespace vectorheat {

namespace {

constexpr double kPi = std::numbers::pi;

void validate_partition(const std::vector<double>& eigenvalues,
                        const std::vector<int>& multiplicities,
                        const std::vector<int>& offsets) {
  const int n = static_cast<int>(eigenvalues.size());
  if (n == 0) throw input_error("empty spectrum");
  for (int i = 1; i < n; ++i)
    if (eigenvalues[i] < eigenvalues[i - 1] - 1e-12)
      throw input_error("eigenvalues not ascending");
  if (eigenvalues.front() < -1e-9)
    throw input_error("negative eigenvalue in spectrum");
  int total = 0;
  for (int m : multiplicities) {
    if (m <= 0) throw input_error("non-positive eigenspace multiplicity");
    total += m;
  }
  if (total != n) throw input_error("eigenspace multiplicities do not sum to N");
  if (static_cast<int>(offsets.size()) != static_cast<int>(multiplicities.size()) + 1 ||
      offsets.front() != 0 || offsets.back() != n)
    throw input_error("inconsistent eigenspace offsets");
  for (std::size_t k = 0; k < multiplicities.size(); ++k) {
    if (offsets[k + 1] - offsets[k] != multiplicities[k])
      throw input_error("offsets do not match multiplicities");
    // values inside one eigenspace must agree
    double v0 = eigenvalues[offsets[k]];
    double vend = eigenvalues[offsets[k + 1] - 1];
    if (std::abs(vend - v0) > 1e-9 * std::max(1.0, std::abs(v0)))
      throw input_error("eigenspace spans distinct eigenvalues");
  }
}

std::vector<int> offsets_from_multiplicities(const std::vector<int>& mult) {
  std::vector<int> off(mult.size() + 1, 0);
  for (std::size_t k = 0; k < mult.size(); ++k) off[k + 1] = off[k] + mult[k];
  return off;
}

// Group ascending eigenvalues into eigenspaces by relative closeness.
std::vector<int> group_multiplicities(const std::vector<double>& ev) {
  std::vector<int> mult;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    if (i > 0 && std::abs(ev[i] - ev[i - 1]) <= 1e-9 * std::max(1.0, std::abs(ev[i])))
      ++mult.back();
    else
      mult.push_back(1);
  }
  return mult;
}

double tangent_gram_residual_impl(const TangentSpectrum& s) {
  const int n = s.n_points(), N = s.n_fields(), d = s.dim();
  Eigen::MatrixXd B(n * d, N);
  for (int i = 0; i < n; ++i) {
    double sw = std::sqrt(s.cloud.weights[i]);
    B.middleRows(i * d, d) = sw * s.values[i].transpose();
  }
  Eigen::MatrixXd G = B.transpose() * B;
  G.diagonal().array() -= 1.0;
  return G.cwiseAbs().maxCoeff();
}

double scalar_gram_residual_impl(const ScalarSpectrum& s) {
  Eigen::MatrixXd W = s.cloud.weights.asDiagonal();
  Eigen::MatrixXd G = s.values.transpose() * W * s.values;
  G.diagonal().array() -= 1.0;
  return G.cwiseAbs().maxCoeff();
}

// Scalar mode enumerations.  Each mode evaluates one eigenfunction on a row
// of intrinsic coordinates.

struct CircleModes {
  double radius;
  int m_max;  // modes: constant, then (cos, sin) for m = 1..m_max
  int count() const { return 2 * m_max + 1; }
  double eigenvalue(int idx) const {
    int m = (idx + 1) / 2;
    return double(m) * m / (radius * radius);
  }
  double value(int idx, double theta) const {
    if (idx == 0) return 1.0 / std::sqrt(2.0 * kPi * radius);
    int m = (idx + 1) / 2;
    double norm = 1.0 / std::sqrt(kPi * radius);
    return (idx % 2 == 1) ? norm * std::cos(m * theta) : norm * std::sin(m * theta);
  }
};

struct TorusMode {
  double mu;
  std::vector<double> kvec;  // 2 pi m_i / L_i; empty for the constant mode
  bool is_sin = false;
};

// Enumerate the first >= target scalar modes of the flat torus, complete up
// to an eigenvalue cutoff (half-lattice m with the first nonzero coordinate
// positive; each contributes a cos and a sin mode).
std::vector<TorusMode> torus_modes(const std::vector<double>& periods, int target) {
  const int d = static_cast<int>(periods.size());
  double Lmax = *std::max_element(periods.begin(), periods.end());
  for (int M = 1; M <= 4096; M = M * 2) {
    double cutoff = std::pow(2.0 * kPi * (M + 1) / Lmax, 2) * (1.0 - 1e-12);
    std::vector<std::vector<int>> half;
    std::vector<int> idx(d, -M);
    // enumerate the box |m_i| <= M
    while (true) {
      int first_nonzero = 0;
      for (int k = 0; k < d; ++k) {
        if (idx[k] != 0) {
          first_nonzero = idx[k] > 0 ? 1 : -1;
          break;
        }
      }
      if (first_nonzero == 1) half.push_back(idx);
      int k = 0;
      for (; k < d; ++k) {
        if (idx[k] < M) {
          ++idx[k];
          break;
        }
        idx[k] = -M;
      }
      if (k == d) break;
    }
    std::vector<TorusMode> modes;
    modes.push_back({0.0, {}, false});
    for (const auto& m : half) {
      double mu = 0.0;
      std::vector<double> kvec(d);
      for (int k = 0; k < d; ++k) {
        kvec[k] = 2.0 * kPi * m[k] / periods[k];
        mu += kvec[k] * kvec[k];
      }
      if (mu <= cutoff) {
        modes.push_back({mu, kvec, false});
        modes.push_back({mu, kvec, true});
      }
    }
    std::stable_sort(modes.begin(), modes.end(),
                     [](const TorusMode& a, const TorusMode& b) { return a.mu < b.mu; });
    if (static_cast<int>(modes.size()) >= target) return modes;
  }
  throw unsupported_error("flat torus mode enumeration exceeded the implemented range");
}

double torus_mode_value(const TorusMode& mode, double volume,
                        const Eigen::VectorXd& x) {
  if (mode.kvec.empty()) return 1.0 / std::sqrt(volume);
  double phase = 0.0;
  for (std::size_t k = 0; k < mode.kvec.size(); ++k) phase += mode.kvec[k] * x[k];
  double norm = std::sqrt(2.0 / volume);
  return mode.is_sin ? norm * std::sin(phase) : norm * std::cos(phase);
}

// Round a requested mode count up to the next eigenspace boundary.
int round_to_boundary(const std::vector<double>& sorted_values, int want) {
  int n = static_cast<int>(sorted_values.size());
  want = std::min(want, n);
  int cut = want;
  while (cut < n && std::abs(sorted_values[cut] - sorted_values[cut - 1]) <=
                        1e-9 * std::max(1.0, std::abs(sorted_values[cut])))
    ++cut;
  return cut;
}

models::PointCloud default_cloud(const models::ManifoldModel& model, int max_freq) {
  using namespace models;
  switch (model.kind) {
    case Kind::circle: {
      int n = std::max(128, 2 * max_freq + 8);
      return sample(model, n, Strategy::grid);
    }
    case Kind::flat_torus: {
      int per_dim = std::max(16, 2 * max_freq + 4);
      long long n = 1;
      for (int k = 0; k < model.dim; ++k) n *= per_dim;
      if (n > 2'000'000)
        throw unsupported_error(
            "default torus grid too large; supply an evaluation cloud");
      return sample(model, static_cast<int>(n), Strategy::grid);
    }
    case Kind::sphere2: {
      int m = std::max(64, 8 * max_freq);
      return sample(model, m * m, Strategy::grid);
    }
  }
  throw invalid_parameter("unknown model kind");
}

}  // namespace

void TangentSpectrum::validate() const {
  validate_partition(eigenvalues, multiplicities, offsets);
  if (n_points() == 0) throw input_error("tangent spectrum has no sample points");
  for (const auto& v : values)
    if (v.rows() != n_fields() || v.cols() != dim())
      throw input_error("field sample block has wrong shape");
  if (std::isfinite(gram_tolerance) && gram_residual > gram_tolerance) {
    std::ostringstream os;
    os << "tangent spectrum Gram residual " << gram_residual
       << " exceeds declared tolerance " << gram_tolerance;
    throw input_error(os.str());
  }
}

void ScalarSpectrum::validate() const {
  validate_partition(eigenvalues, multiplicities, offsets);
  if (eigenvalues.front() > 1e-12)
    throw input_error("scalar spectrum must contain mu_0 = 0");
  if (values.cols() != n_fields())
    throw input_error("eigenfunction sample block has wrong shape");
  if (std::isfinite(gram_tolerance) && gram_residual > gram_tolerance) {
    std::ostringstream os;
    os << "scalar spectrum Gram residual " << gram_residual
       << " exceeds declared tolerance " << gram_tolerance;
    throw input_error(os.str());
  }
}

namespace models {

namespace {

std::pair<TangentSpectrum, ScalarSpectrum> flat_spectra(const ManifoldModel& model,
                                                        int count,
                                                        const PointCloud* cloud_in) {
  const int d = model.dim;
  const int scalar_target = (count + d - 1) / d;

  // Collect scalar modes: (eigenvalue, evaluator index) in ascending order.
  std::vector<double> mu;
  std::vector<TorusMode> tmodes;
  CircleModes cmodes{model.parameters[0], 0};
  int max_freq = 0;
  if (model.kind == Kind::circle) {
    cmodes.m_max = std::max(1, (scalar_target + 1) / 2);
    if (cmodes.m_max > 200000) throw unsupported_error("circle mode range too large");
    for (int i = 0; i < cmodes.count(); ++i) mu.push_back(cmodes.eigenvalue(i));
    max_freq = cmodes.m_max;
  } else {
    tmodes = torus_modes(model.parameters, scalar_target);
    for (const auto& m : tmodes) mu.push_back(m.mu);
    for (const auto& m : tmodes)
      for (std::size_t k = 0; k < m.kvec.size(); ++k)
        max_freq = std::max(max_freq,
                            int(std::lround(std::abs(m.kvec[k]) * model.parameters[k] /
                                            (2.0 * kPi))));
  }
  int n_scalar = round_to_boundary(mu, scalar_target);
  mu.resize(n_scalar);

  PointCloud cloud = cloud_in ? *cloud_in : default_cloud(model, max_freq);
  const int n = cloud.n();

  ScalarSpectrum scal;
  scal.model = model;
  scal.cloud = cloud;
  scal.volume = model.volume;
  scal.eigenvalues = mu;
  scal.multiplicities = group_multiplicities(mu);
  scal.offsets = offsets_from_multiplicities(scal.multiplicities);
  scal.values.resize(n, n_scalar);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd x = cloud.points.row(i);
    for (int s = 0; s < n_scalar; ++s)
      scal.values(i, s) = model.kind == Kind::circle
                              ? cmodes.value(s, x[0])
                              : torus_mode_value(tmodes[s], model.volume, x);
  }

  // Tangent spectrum: each scalar mode times each constant frame direction.
  // Fields are ordered per eigenspace as (mode, axis) pairs.
  TangentSpectrum tan;
  tan.model = model;
  tan.cloud = cloud;
  tan.volume = model.volume;
  for (std::size_t k = 0; k < scal.multiplicities.size(); ++k) {
    tan.multiplicities.push_back(scal.multiplicities[k] * d);
    for (int j = 0; j < scal.multiplicities[k] * d; ++j)
      tan.eigenvalues.push_back(scal.eigenvalues[scal.offsets[k]]);
  }
  tan.offsets = offsets_from_multiplicities(tan.multiplicities);
  const int N = tan.n_fields();
  tan.values.assign(n, Eigen::MatrixXd::Zero(N, d));
  for (int i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < scal.multiplicities.size(); ++k) {
      int row = tan.offsets[k];
      for (int s = scal.offsets[k]; s < scal.offsets[k + 1]; ++s)
        for (int a = 0; a < d; ++a, ++row) tan.values[i](row, a) = scal.values(i, s);
    }
  }
  return {std::move(tan), std::move(scal)};
}

std::pair<TangentSpectrum, ScalarSpectrum> sphere_spectra(const ManifoldModel& model,
                                                          int count,
                                                          const PointCloud* cloud_in) {
  const double r = model.parameters[0];
  int l_scalar = 0, cum = 1;
  while (cum < count) cum += 2 * (++l_scalar) + 1;
  int l_tangent = 1, cum_t = 6;
  while (cum_t < count) cum_t += 2 * (2 * (++l_tangent) + 1);
  const int lmax = std::max(l_scalar, l_tangent);
  if (lmax > 256) throw unsupported_error("sphere spectra implemented for l <= 256");

  PointCloud cloud = cloud_in ? *cloud_in : default_cloud(model, lmax);
  const int n = cloud.n();

  ScalarSpectrum scal;
  scal.model = model;
  scal.cloud = cloud;
  scal.volume = model.volume;
  for (int l = 0; l <= l_scalar; ++l) {
    scal.multiplicities.push_back(2 * l + 1);
    for (int m = -l; m <= l; ++m)
      scal.eigenvalues.push_back(double(l) * (l + 1) / (r * r));
  }
  scal.offsets = offsets_from_multiplicities(scal.multiplicities);

  TangentSpectrum tan;
  tan.model = model;
  tan.cloud = cloud;
  tan.volume = model.volume;
  for (int l = 1; l <= l_tangent; ++l) {
    tan.multiplicities.push_back(2 * (2 * l + 1));
    for (int j = 0; j < 2 * (2 * l + 1); ++j)
      tan.eigenvalues.push_back((double(l) * (l + 1) - 1.0) / (r * r));
  }
  tan.offsets = offsets_from_multiplicities(tan.multiplicities);

  scal.values.resize(n, scal.n_fields());
  tan.values.assign(n, Eigen::MatrixXd::Zero(tan.n_fields(), 2));
  for (int i = 0; i < n; ++i) {
    double theta = cloud.points(i, 0), phi = cloud.points(i, 1);
    auto H = detail::eval_harmonics(lmax, theta, phi);
    for (int l = 0; l <= l_scalar; ++l)
      for (int m = -l; m <= l; ++m)
        scal.values(i, scal.offsets[l] + m + l) = H(detail::harmonic_index(l, m), 0) / r;
    for (int l = 1; l <= l_tangent; ++l) {
      double scale = 1.0 / (r * std::sqrt(double(l) * (l + 1)));
      int base = tan.offsets[l - 1];
      for (int m = -l; m <= l; ++m) {
        auto row = H.row(detail::harmonic_index(l, m));
        double gtheta = row[1] * scale;          // d/dtheta component
        double gphi = row[2] * scale;            // (d/dphi)/sin component
        tan.values[i](base + m + l, 0) = gtheta;  // gradient family
        tan.values[i](base + m + l, 1) = gphi;
        int coff = base + (2 * l + 1) + m + l;    // rotated-gradient family
        tan.values[i](coff, 0) = -gphi;
        tan.values[i](coff, 1) = gtheta;
      }
    }
  }
  return {std::move(tan), std::move(scal)};
}

}  // namespace

std::pair<TangentSpectrum, ScalarSpectrum> analytic_spectra(const ManifoldModel& model,
                                                            int count,
                                                            const PointCloud* cloud) {
  if (count < 1) throw invalid_parameter("analytic_spectra needs count >= 1");
  auto pair = model.kind == Kind::sphere2 ? sphere_spectra(model, count, cloud)
                                          : flat_spectra(model, count, cloud);
  auto& [tan, scal] = pair;

  const bool supplied = cloud != nullptr;
  // Gram measurement is skipped for evaluation clouds and very large builds;
  // such spectra carry an infinite declared tolerance.
  double cost = double(tan.n_fields()) * tan.n_fields() * tan.n_points() * tan.dim();
  if (!supplied && cost < 2e9) {
    tan.gram_residual = tangent_gram_residual_impl(tan);
    scal.gram_residual = scalar_gram_residual_impl(scal);
    tan.gram_tolerance = model.kind == Kind::sphere2 ? 2e-3 : 1e-10;
    scal.gram_tolerance = tan.gram_tolerance;
  }
  tan.validate();
  scal.validate();
  return pair;
}

int count_for_cutoff(const ManifoldModel& model, double lambda_cutoff) {
  if (!(lambda_cutoff >= 0.0)) throw invalid_parameter("cutoff must be nonnegative");
  switch (model.kind) {
    case Kind::circle: {
      double r = model.parameters[0];
      int m = static_cast<int>(std::ceil(r * std::sqrt(lambda_cutoff))) + 1;
      return 2 * m + 1;
    }
    case Kind::flat_torus: {
      int cnt = 1;
      auto modes = torus_modes(model.parameters, 4);
      // re-enumerate with a target large enough to pass the cutoff
      int target = 8;
      while (true) {
        modes = torus_modes(model.parameters, target);
        if (modes.back().mu > lambda_cutoff) break;
        target *= 2;
        if (target > 4'000'000)
          throw unsupported_error("cutoff beyond implemented torus range");
      }
      cnt = 0;
      for (const auto& m : modes)
        if (m.mu <= lambda_cutoff) ++cnt;
      return model.dim * (cnt + 1);
    }
    case Kind::sphere2: {
      double r = model.parameters[0];
      int count = 0;
      for (int l = 1; l <= 256; ++l) {
        count += 2 * (2 * l + 1);
        if ((double(l) * (l + 1) - 1.0) / (r * r) >= lambda_cutoff) return count;
      }
      throw unsupported_error("cutoff beyond implemented sphere range");
    }
  }
  throw invalid_parameter("unknown model kind");
}

}  // namespace models

}  // namespace vectorheat
