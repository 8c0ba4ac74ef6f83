#pragma once

// Kallen-Lehmann representation of a single-interval entropy:
//   exp(-lambda S(x)) = int dp^2 g(p^2) K_0(p x),   g >= 0.

#include <string>
#include <utility>
#include <vector>

#include "rpent/types.hpp"

namespace rpent::spectral {

// Discretized spectral measure: weights(j) = quadrature weight times
// g(grid(j)). An optional point mass at a small momentum stands in for the
// delta(p^2) term of a massive theory, since K_0(0 * x) diverges.
struct SpectralDensity {
  std::vector<double> grid;     // p^2, strictly increasing, >= 0
  std::vector<double> weights;  // >= 0
  double delta_mass = 0.0;
  double delta_momentum = 0.0;  // p_0 > 0 when delta_mass > 0

  void validate() const;
};

// Log-spaced grid in p from p_min to p_max, returned as p^2 values.
std::vector<double> log_momentum_grid(double p_min, double p_max, std::size_t count);

// sum_j w_j K_0(p_j x) (+ the point mass).
double forward(const SpectralDensity& g, double x);
// log of forward(), by log-sum-exp; usable where forward() underflows.
double log_forward(const SpectralDensity& g, double x);

struct EntropyCurve {
  std::vector<double> x;
  std::vector<double> entropy;
  double lambda = 1.0;

  void validate() const;
  // y = exp(-lambda S).
  std::vector<double> transformed() const;
};

EntropyCurve curve_from_function(const std::vector<double>& x, double lambda, double (*s)(double));

struct FitOptions {
  bool relative = true;    // minimize the residual of (K w - y) / y
  double ridge = 0.0;
  double perturbation = 1e-9;  // relative size of the conditioning probe
};

struct FitResult {
  SpectralDensity density;
  double relative_residual = 0.0;  // rms of (K w - y) / y
  double max_relative_error = 0.0;
  double perturbed_residual = 0.0;
  // ||w' - w|| / ||w|| divided by the relative data perturbation.
  double weight_amplification = 0.0;
  bool ill_conditioned = false;
  bool converged = true;
  int active_weights = 0;
};

// Nonnegative least-squares fit of y = exp(-lambda S) on K_ij = K_0(p_j x_i).
FitResult fit_spectral(const EntropyCurve& curve, const std::vector<double>& p2_grid,
                       const FitOptions& options = {});

struct ResolutionPoint {
  std::size_t grid_size = 0;
  double relative_residual = 0.0;
};
std::vector<ResolutionPoint> residual_vs_resolution(const EntropyCurve& curve, double p_min, double p_max,
                                                    const std::vector<std::size_t>& sizes,
                                                    const FitOptions& options = {});

// Max relative error of forward() against target values at the given x.
double data_space_error(const SpectralDensity& g, const std::vector<double>& x,
                        const std::vector<double>& target);

// Least-squares slope of -log forward(x) over `samples` points in [x_lo, x_hi].
double decay_rate(const SpectralDensity& g, double x_lo, double x_hi, std::size_t samples = 64);

// gamma in g(p^2) ~ p^gamma from the cumulative weight W(P) ~ P^(gamma + 2),
// regressed over grid points with p in [p_lo, p_hi].
double power_law_exponent(const SpectralDensity& g, double p_lo, double p_hi);

struct DerivativeReport {
  std::vector<double> x;           // interior points
  std::vector<double> first;       // S'
  std::vector<double> second;      // S''
  std::vector<double> c_function;  // x S'' + S'
  double min_first = 0.0;
  double max_second = 0.0;
  double max_c_function = 0.0;
  double min_c_function = 0.0;
  bool monotone = true;    // S' >= 0
  bool concave = true;     // S'' <= 0
  bool c_theorem = true;   // x S'' + S' <= 0
  double relative_tolerance = 0.0;

  // The two conditions implied by a nonnegative spectral density.
  bool rp_compatible() const { return monotone && concave; }
};

// Three-point finite differences on an arbitrary increasing grid (exact for
// quadratics). A sign test at point i uses the tolerance
// rel_tol * (|S'| + |x S''|) plus a roundoff floor.
DerivativeReport derivative_checks(const EntropyCurve& curve, double rel_tol = 1e-3);

// (x, S) pairs, one per line, comma or whitespace separated; '#' comments
// and a non-numeric header line are skipped.
EntropyCurve load_curve_csv(const std::string& path, double lambda);

}  // namespace rpent::spectral
