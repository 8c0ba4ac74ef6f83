#pragma once

// Two-interval Renyi entropies in a 1+1 dimensional CFT,
//   exp(-(n-1) S_n) = k^2 (x (a2 - b1)(b2 - a1))^(-q) F_n(x),  q = (C/6)(n - 1/n),
// and the two constraints reflection positivity puts on F_n.

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "rpent/types.hpp"

namespace rpent::cft {

struct TwoIntervalConfig {
  double a1 = 0.0, b1 = 1.0, a2 = 2.0, b2 = 3.0;
  double central_charge = 1.0;
  int n = 2;
  double k_constant = 1.0;

  void validate() const;
  double q() const;
};

double exponent_q(double central_charge, int n);

// Positive function on (0, 1), F(x) = F(1 - x), F(0+) = 1.
class CrossRatioFunction {
 public:
  CrossRatioFunction(std::string name, std::function<double(double)> f);

  static CrossRatioFunction constant_one();
  // (1 - x)^power; not symmetric, used as a synthetic violator.
  static CrossRatioFunction power_of_complement(double power);
  // Monotone cubic (PCHIP) through tabulated points.
  static CrossRatioFunction tabulated(std::string name, std::vector<double> x, std::vector<double> f);
  // CSV of (x, F) pairs.
  static CrossRatioFunction load_csv(const std::string& path);

  const std::string& name() const { return name_; }
  double operator()(double x) const;

  // max |F(x) - F(1 - x)| over a symmetric grid of `points` interior points.
  double symmetry_defect(std::size_t points = 99) const;

 private:
  std::string name_;
  std::function<double(double)> f_;
};

double cross_ratio(const TwoIntervalConfig& cfg);

// -(1/(n-1)) [2 log k - q log(x (a2 - b1)(b2 - a1)) + log F(x)]
double renyi_two_interval(const TwoIntervalConfig& cfg, const CrossRatioFunction& f);

// G(u) = F(u) / (1 - u)^q
double reduced_function(const CrossRatioFunction& f, double q, double u);

struct DerivativePoint {
  double x = 0.0;
  double derivative = 0.0;   // central difference with step h
  double richardson = 0.0;   // (4 D(h/2) - D(h)) / 3
};

struct DerivativeInequalityReport {
  std::vector<DerivativePoint> points;
  double min_slack = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

// d/dx [F(x)/(1-x)^q] >= -tolerance on every grid point, step 1e-5 * x.
DerivativeInequalityReport check_derivative_inequality(const CrossRatioFunction& f, double q,
                                                       const std::vector<double>& grid,
                                                       double tolerance = 1e-10);

// z = 2 sqrt(xy) / (1 + sqrt(1-x) sqrt(1-y) + sqrt(xy))
double z_point(double x, double y);

struct MidpointSample {
  double x = 0.0, y = 0.0, z = 0.0;
  double slack = 0.0;  // G(x) G(y) - G(z)^2
};

struct MidpointInequalityReport {
  std::vector<MidpointSample> samples;
  double min_slack = 0.0;
  double tolerance = 0.0;
  bool z_in_range = true;
  bool pass = true;
};

MidpointInequalityReport check_midpoint_inequality(const CrossRatioFunction& f, double q,
                                                   const std::vector<std::pair<double, double>>& pairs,
                                                   double tolerance = 1e-10);

std::vector<double> uniform_open_grid(std::size_t points);

}  // namespace rpent::cft
