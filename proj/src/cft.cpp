#include "rpent/cft.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

// pchip.hpp in Boost 1.74 calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>

namespace rpent::cft {

void TwoIntervalConfig::validate() const {
  if (!(a1 < b1 && b1 < a2 && a2 < b2)) throw InvalidInput("two-interval config needs a1 < b1 < a2 < b2");
  if (!(central_charge > 0.0)) throw InvalidInput("central charge must be positive");
  if (n < 2) throw InvalidInput("Renyi index must be an integer >= 2");
  if (!(k_constant > 0.0)) throw InvalidInput("k must be positive");
}

double exponent_q(double central_charge, int n) {
  const double nn = static_cast<double>(n);
  return central_charge / 6.0 * (nn - 1.0 / nn);
}

double TwoIntervalConfig::q() const { return exponent_q(central_charge, n); }

CrossRatioFunction::CrossRatioFunction(std::string name, std::function<double(double)> f)
    : name_(std::move(name)), f_(std::move(f)) {}

CrossRatioFunction CrossRatioFunction::constant_one() {
  return CrossRatioFunction("one", [](double) { return 1.0; });
}

CrossRatioFunction CrossRatioFunction::power_of_complement(double power) {
  std::ostringstream name;
  name << "(1-x)^" << power;
  return CrossRatioFunction(name.str(), [power](double x) { return std::pow(1.0 - x, power); });
}

CrossRatioFunction CrossRatioFunction::tabulated(std::string name, std::vector<double> x, std::vector<double> f) {
  if (x.size() != f.size() || x.size() < 4) throw InvalidInput("F table needs at least 4 (x, F) pairs");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= 0.0 && x[i] <= 1.0)) throw InvalidInput("F table: x must lie in [0, 1]");
    if (i > 0 && !(x[i] > x[i - 1])) throw InvalidInput("F table: x must be strictly increasing");
  }
  const double lo = x.front();
  const double hi = x.back();
  auto spline = std::make_shared<boost::math::interpolators::pchip<std::vector<double>>>(std::move(x), std::move(f));
  return CrossRatioFunction(std::move(name), [spline, lo, hi](double u) {
    if (u < lo || u > hi) throw InvalidInput("F table evaluated outside its range");
    return (*spline)(u);
  });
}

CrossRatioFunction CrossRatioFunction::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open F table '" + path + "'");
  std::vector<double> xs, fs;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double xv = 0.0, fv = 0.0;
    if (!(row >> xv)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos || xs.empty()) continue;
      throw InvalidInput(path + ":" + std::to_string(line_no) + ": expected 'x, F'");
    }
    if (!(row >> fv)) throw InvalidInput(path + ":" + std::to_string(line_no) + ": expected 'x, F'");
    xs.push_back(xv);
    fs.push_back(fv);
  }
  return tabulated(path, std::move(xs), std::move(fs));
}

double CrossRatioFunction::operator()(double x) const {
  const double v = f_(x);
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream msg;
    msg << "F '" << name_ << "' is not positive at x = " << x;
    throw InvalidInput(msg.str());
  }
  return v;
}

double CrossRatioFunction::symmetry_defect(std::size_t points) const {
  double worst = 0.0;
  for (double x : uniform_open_grid(points)) worst = std::max(worst, std::abs((*this)(x) - (*this)(1.0 - x)));
  return worst;
}

double cross_ratio(const TwoIntervalConfig& cfg) {
  if (!(cfg.a1 < cfg.b1 && cfg.b1 < cfg.a2 && cfg.a2 < cfg.b2)) {
    throw InvalidInput("cross_ratio: endpoints must satisfy a1 < b1 < a2 < b2");
  }
  return (cfg.b1 - cfg.a1) * (cfg.b2 - cfg.a2) / ((cfg.a2 - cfg.a1) * (cfg.b2 - cfg.b1));
}

double renyi_two_interval(const TwoIntervalConfig& cfg, const CrossRatioFunction& f) {
  cfg.validate();
  const double x = cross_ratio(cfg);
  const double arg = x * (cfg.a2 - cfg.b1) * (cfg.b2 - cfg.a1);
  const double inner = 2.0 * std::log(cfg.k_constant) - cfg.q() * std::log(arg) + std::log(f(x));
  return -inner / static_cast<double>(cfg.n - 1);
}

double reduced_function(const CrossRatioFunction& f, double q, double u) {
  return f(u) / std::pow(1.0 - u, q);
}

namespace {

void require_open_unit(double x, const char* what) {
  if (!(x > 0.0 && x < 1.0)) {
    std::ostringstream msg;
    msg << what << ": " << x << " is outside (0, 1)";
    throw InvalidInput(msg.str());
  }
}

double central_difference(const CrossRatioFunction& f, double q, double x, double h) {
  return (reduced_function(f, q, x + h) - reduced_function(f, q, x - h)) / (2.0 * h);
}

}  // namespace

DerivativeInequalityReport check_derivative_inequality(const CrossRatioFunction& f, double q,
                                                       const std::vector<double>& grid, double tolerance) {
  if (grid.empty()) throw InvalidInput("derivative inequality: empty grid");
  DerivativeInequalityReport rep;
  rep.tolerance = tolerance;
  bool first = true;
  for (double x : grid) {
    require_open_unit(x, "derivative inequality grid point");
    const double h = 1e-5 * std::min(x, 1.0 - x);
    const double d_h = central_difference(f, q, x, h);
    const double d_half = central_difference(f, q, x, 0.5 * h);
    DerivativePoint pt{x, d_h, (4.0 * d_half - d_h) / 3.0};
    rep.points.push_back(pt);
    if (first || pt.richardson < rep.min_slack) rep.min_slack = pt.richardson;
    first = false;
  }
  rep.pass = rep.min_slack >= -tolerance;
  return rep;
}

double z_point(double x, double y) {
  require_open_unit(x, "z_point x");
  require_open_unit(y, "z_point y");
  if (x == y) return x;
  const double r = std::sqrt(x * y);
  return 2.0 * r / (1.0 + std::sqrt(1.0 - x) * std::sqrt(1.0 - y) + r);
}

MidpointInequalityReport check_midpoint_inequality(const CrossRatioFunction& f, double q,
                                                   const std::vector<std::pair<double, double>>& pairs,
                                                   double tolerance) {
  if (pairs.empty()) throw InvalidInput("midpoint inequality: no pairs");
  MidpointInequalityReport rep;
  rep.tolerance = tolerance;
  bool first = true;
  for (const auto& [x, y] : pairs) {
    const double z = z_point(x, y);
    const double lo = std::min(x, y);
    const double hi = std::max(x, y);
    if (z < lo * (1.0 - 1e-14) || z > hi * (1.0 + 1e-14)) rep.z_in_range = false;
    const double gz = reduced_function(f, q, z);
    MidpointSample s{x, y, z, reduced_function(f, q, x) * reduced_function(f, q, y) - gz * gz};
    rep.samples.push_back(s);
    if (first || s.slack < rep.min_slack) rep.min_slack = s.slack;
    first = false;
  }
  rep.pass = rep.z_in_range && rep.min_slack >= -tolerance;
  return rep;
}

std::vector<double> uniform_open_grid(std::size_t points) {
  if (points < 1) throw InvalidInput("grid needs at least one point");
  std::vector<double> out(points);
  for (std::size_t i = 0; i < points; ++i) {
    out[i] = static_cast<double>(i + 1) / static_cast<double>(points + 1);
  }
  return out;
}

}  // namespace rpent::cft
