#include "rpent/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "rpent/bessel.hpp"
#include "rpent/nnls.hpp"

namespace rpent::spectral {

void SpectralDensity::validate() const {
  if (grid.size() != weights.size()) throw InvalidInput("spectral density: grid and weights differ in length");
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (!(grid[j] >= 0.0)) throw InvalidInput("spectral density: p^2 must be nonnegative");
    if (j > 0 && !(grid[j] > grid[j - 1])) throw InvalidInput("spectral density: grid must be strictly increasing");
    if (!(weights[j] >= 0.0)) throw InvalidInput("spectral density: weights must be nonnegative");
    if (grid[j] == 0.0 && weights[j] > 0.0) {
      throw InvalidInput("spectral density: weight at p^2 = 0 diverges; use the point mass at p_0 > 0");
    }
  }
  if (delta_mass < 0.0) throw InvalidInput("spectral density: point mass must be nonnegative");
  if (delta_mass > 0.0 && !(delta_momentum > 0.0)) {
    throw InvalidInput("spectral density: point mass needs a momentum p_0 > 0");
  }
}

std::vector<double> log_momentum_grid(double p_min, double p_max, std::size_t count) {
  if (!(p_min > 0.0) || !(p_max > p_min) || count < 2) throw InvalidInput("log_momentum_grid: bad range");
  std::vector<double> out(count);
  const double step = std::log(p_max / p_min) / static_cast<double>(count - 1);
  for (std::size_t j = 0; j < count; ++j) {
    const double p = p_min * std::exp(step * static_cast<double>(j));
    out[j] = p * p;
  }
  return out;
}

double log_forward(const SpectralDensity& g, double x) {
  if (!(x > 0.0)) throw InvalidInput("forward: x must be positive");
  g.validate();
  std::vector<double> logs;
  for (std::size_t j = 0; j < g.grid.size(); ++j) {
    if (g.weights[j] > 0.0) logs.push_back(std::log(g.weights[j]) + bessel::log_k0(std::sqrt(g.grid[j]) * x));
  }
  if (g.delta_mass > 0.0) logs.push_back(std::log(g.delta_mass) + bessel::log_k0(g.delta_momentum * x));
  if (logs.empty()) return -std::numeric_limits<double>::infinity();
  const double top = *std::max_element(logs.begin(), logs.end());
  double acc = 0.0;
  for (double l : logs) acc += std::exp(l - top);
  return top + std::log(acc);
}

double forward(const SpectralDensity& g, double x) { return std::exp(log_forward(g, x)); }

void EntropyCurve::validate() const {
  if (x.size() != entropy.size()) throw InvalidInput("entropy curve: x and S differ in length");
  if (x.empty()) throw InvalidInput("entropy curve: no samples");
  if (!(lambda > 0.0)) throw InvalidInput("entropy curve: lambda must be positive");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0)) throw InvalidInput("entropy curve: x must be positive");
    if (!std::isfinite(entropy[i])) throw InvalidInput("entropy curve: S must be finite");
  }
  std::vector<double> sorted = x;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidInput("entropy curve: x values must be distinct");
  }
}

std::vector<double> EntropyCurve::transformed() const {
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::exp(-lambda * entropy[i]);
  return y;
}

EntropyCurve curve_from_function(const std::vector<double>& x, double lambda, double (*s)(double)) {
  EntropyCurve c{x, {}, lambda};
  for (double xi : x) c.entropy.push_back(s(xi));
  return c;
}

namespace {

RMatrix kernel_matrix(const std::vector<double>& x, const std::vector<double>& p2) {
  RMatrix k(static_cast<Eigen::Index>(x.size()), static_cast<Eigen::Index>(p2.size()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < p2.size(); ++j) {
      k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = bessel::k0(std::sqrt(p2[j]) * x[i]);
    }
  }
  return k;
}

struct RawFit {
  RVector weights;
  double rms = 0.0;
  double max_rel = 0.0;
  bool converged = true;
};

RawFit solve(const RMatrix& kernel, const RVector& y, const FitOptions& opt) {
  RMatrix a = kernel;
  RVector b = y;
  if (opt.relative) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      a.row(i) /= y(i);
      b(i) = 1.0;
    }
  }
  // Column equilibration; positive scaling keeps the sign constraint.
  RVector scale = a.cwiseAbs().colwise().maxCoeff().transpose();
  for (Eigen::Index j = 0; j < scale.size(); ++j) {
    if (!(scale(j) > 0.0)) scale(j) = 1.0;
    a.col(j) /= scale(j);
  }
  const NnlsResult r = nnls(a, b, opt.ridge);
  RawFit out;
  out.weights = r.solution.cwiseQuotient(scale);
  out.converged = r.converged;
  const RVector rel = (kernel * out.weights - y).cwiseQuotient(y);
  out.rms = std::sqrt(rel.squaredNorm() / static_cast<double>(rel.size()));
  out.max_rel = rel.cwiseAbs().maxCoeff();
  return out;
}

}  // namespace

FitResult fit_spectral(const EntropyCurve& curve, const std::vector<double>& p2_grid, const FitOptions& options) {
  curve.validate();
  if (p2_grid.empty()) throw InvalidInput("fit_spectral: empty grid");
  for (std::size_t j = 0; j < p2_grid.size(); ++j) {
    if (!(p2_grid[j] > 0.0) || (j > 0 && !(p2_grid[j] > p2_grid[j - 1]))) {
      throw InvalidInput("fit_spectral: grid must be positive and strictly increasing");
    }
  }
  const std::vector<double> yv = curve.transformed();
  const RVector y = Eigen::Map<const RVector>(yv.data(), static_cast<Eigen::Index>(yv.size()));
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (!(y(i) > 0.0) || !std::isfinite(y(i))) throw InvalidInput("fit_spectral: exp(-lambda S) out of range");
  }
  const RMatrix kernel = kernel_matrix(curve.x, p2_grid);
  const RawFit base = solve(kernel, y, options);

  // Conditioning probe: alternating-sign relative perturbation of the data.
  RVector y_pert = y;
  for (Eigen::Index i = 0; i < y.size(); ++i) y_pert(i) *= 1.0 + ((i % 2 == 0) ? 1.0 : -1.0) * options.perturbation;
  const RawFit pert = solve(kernel, y_pert, options);

  FitResult out;
  out.density.grid = p2_grid;
  out.density.weights.assign(base.weights.data(), base.weights.data() + base.weights.size());
  out.relative_residual = base.rms;
  out.max_relative_error = base.max_rel;
  out.perturbed_residual = (kernel * pert.weights - y).cwiseQuotient(y).norm() / std::sqrt(static_cast<double>(y.size()));
  const double wnorm = base.weights.norm();
  out.weight_amplification = wnorm > 0.0 ? (pert.weights - base.weights).norm() / wnorm / options.perturbation : 0.0;
  out.ill_conditioned = out.weight_amplification > 1e6;
  out.converged = base.converged;
  out.active_weights = static_cast<int>((base.weights.array() > 0.0).count());
  return out;
}

std::vector<ResolutionPoint> residual_vs_resolution(const EntropyCurve& curve, double p_min, double p_max,
                                                    const std::vector<std::size_t>& sizes,
                                                    const FitOptions& options) {
  std::vector<ResolutionPoint> out;
  for (std::size_t n : sizes) {
    const FitResult r = fit_spectral(curve, log_momentum_grid(p_min, p_max, n), options);
    out.push_back({n, r.relative_residual});
  }
  return out;
}

double data_space_error(const SpectralDensity& g, const std::vector<double>& x, const std::vector<double>& target) {
  if (x.size() != target.size()) throw InvalidInput("data_space_error: size mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    worst = std::max(worst, std::abs(forward(g, x[i]) - target[i]) / std::abs(target[i]));
  }
  return worst;
}

double decay_rate(const SpectralDensity& g, double x_lo, double x_hi, std::size_t samples) {
  if (!(x_lo > 0.0) || !(x_hi > x_lo) || samples < 2) throw InvalidInput("decay_rate: bad window");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = x_lo + (x_hi - x_lo) * static_cast<double>(i) / static_cast<double>(samples - 1);
    const double y = -log_forward(g, x);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(samples);
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double power_law_exponent(const SpectralDensity& g, double p_lo, double p_hi) {
  g.validate();
  double cumulative = 0.0;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t j = 0; j < g.grid.size(); ++j) {
    cumulative += g.weights[j];
    const double p = std::sqrt(g.grid[j]);
    if (p >= p_lo && p <= p_hi && cumulative > 0.0) pts.emplace_back(std::log(p), std::log(cumulative));
  }
  if (pts.size() < 2) throw InvalidInput("power_law_exponent: fewer than two populated grid points in range");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [u, v] : pts) {
    sx += u;
    sy += v;
    sxx += u * u;
    sxy += u * v;
  }
  const double n = static_cast<double>(pts.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx) - 2.0;
}

DerivativeReport derivative_checks(const EntropyCurve& curve, double rel_tol) {
  curve.validate();
  const auto& x = curve.x;
  const auto& s = curve.entropy;
  if (x.size() < 5) throw InvalidInput("derivative_checks: at least 5 samples required");
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) throw InvalidInput("derivative_checks: x grid must be strictly increasing");
  }
  double s_scale = 1.0;
  for (double v : s) s_scale = std::max(s_scale, std::abs(v));
  const double eps = std::numeric_limits<double>::epsilon();

  DerivativeReport rep;
  rep.relative_tolerance = rel_tol;
  bool first = true;
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    const double h1 = x[i] - x[i - 1];
    const double h2 = x[i + 1] - x[i];
    const double d1 = -h2 / (h1 * (h1 + h2)) * s[i - 1] + (h2 - h1) / (h1 * h2) * s[i] +
                      h1 / (h2 * (h1 + h2)) * s[i + 1];
    const double d2 = 2.0 * (s[i - 1] / (h1 * (h1 + h2)) - s[i] / (h1 * h2) + s[i + 1] / (h2 * (h1 + h2)));
    const double c = x[i] * d2 + d1;
    const double h = std::min(h1, h2);
    const double floor1 = 1e3 * eps * s_scale / h;
    const double floor2 = 1e3 * eps * s_scale / (h * h);
    const double scale = std::abs(d1) + std::abs(x[i] * d2);
    const double tol1 = rel_tol * scale + floor1;
    const double tol2 = rel_tol * scale / x[i] + floor2;
    const double tolc = rel_tol * scale + x[i] * floor2 + floor1;

    rep.x.push_back(x[i]);
    rep.first.push_back(d1);
    rep.second.push_back(d2);
    rep.c_function.push_back(c);
    if (d1 < -tol1) rep.monotone = false;
    if (d2 > tol2) rep.concave = false;
    if (c > tolc) rep.c_theorem = false;
    if (first) {
      rep.min_first = d1;
      rep.max_second = d2;
      rep.max_c_function = rep.min_c_function = c;
      first = false;
    }
    rep.min_first = std::min(rep.min_first, d1);
    rep.max_second = std::max(rep.max_second, d2);
    rep.max_c_function = std::max(rep.max_c_function, c);
    rep.min_c_function = std::min(rep.min_c_function, c);
  }
  return rep;
}

EntropyCurve load_curve_csv(const std::string& path, double lambda) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open curve file '" + path + "'");
  EntropyCurve curve;
  curve.lambda = lambda;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double xv = 0.0, sv = 0.0;
    if (!(row >> xv)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos || curve.x.empty()) continue;
      throw InvalidInput(path + ":" + std::to_string(line_no) + ": expected 'x, S'");
    }
    if (!(row >> sv)) throw InvalidInput(path + ":" + std::to_string(line_no) + ": expected 'x, S'");
    curve.x.push_back(xv);
    curve.entropy.push_back(sv);
  }
  curve.validate();
  return curve;
}

}  // namespace rpent::spectral
