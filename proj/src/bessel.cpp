#include "rpent/bessel.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "rpent/types.hpp"

namespace rpent::bessel {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// K_0(x) = -(log(x/2) + gamma) I_0(x) + sum_{k>=1} (x^2/4)^k / (k!)^2 H_k
double k0_series(double x) {
  const double y = 0.25 * x * x;
  double term = 1.0;  // (x^2/4)^k / (k!)^2
  double i0 = 1.0;
  double harmonic = 0.0;
  double tail = 0.0;
  for (int k = 1; k < 200; ++k) {
    term *= y / (static_cast<double>(k) * static_cast<double>(k));
    harmonic += 1.0 / static_cast<double>(k);
    i0 += term;
    tail += term * harmonic;
    if (term * harmonic < kEps * std::abs(tail) && term < kEps * i0) break;
  }
  return -(std::log(0.5 * x) + std::numbers::egamma) * i0 + tail;
}

// Steed's method for exp(x) K_0(x), x >= 2.
double k0_scaled_cf(double x) {
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 2; i < 10000; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) break;
  }
  return std::sqrt(std::numbers::pi / (2.0 * x)) / s;
}

// sqrt(pi / 2x) sum_k (-1)^k [(2k-1)!!]^2 / (k! 8^k x^k)
double k0_scaled_asymptotic(double x) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double next = -term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * x);
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < kEps * std::abs(sum)) break;
  }
  return std::sqrt(std::numbers::pi / (2.0 * x)) * sum;
}

void require_positive(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw InvalidInput("K_0 requires a finite x > 0");
}

}  // namespace

double k0_scaled(double x) {
  require_positive(x);
  if (x <= kSeriesLimit) return std::exp(x) * k0_series(x);
  if (x <= kAsymptoticLimit) return k0_scaled_cf(x);
  return k0_scaled_asymptotic(x);
}

double k0(double x) {
  require_positive(x);
  if (x <= kSeriesLimit) return k0_series(x);
  return std::exp(-x) * k0_scaled(x);
}

double log_k0(double x) {
  require_positive(x);
  if (x <= kSeriesLimit) return std::log(k0_series(x));
  return std::log(k0_scaled(x)) - x;
}

double k0_quadrature(double x) {
  require_positive(x);
  // The integrand is analytic and decays doubly exponentially, so the
  // trapezoidal rule converges geometrically in 1/h.
  const double h = 1.0 / 64.0;
  double sum = 0.5 * std::exp(-x);
  for (int k = 1;; ++k) {
    const double t = k * h;
    const double v = std::exp(-x * std::cosh(t));
    sum += v;
    if (v < 1e-18 * sum || t > 60.0) break;
  }
  return h * sum;
}

}  // namespace rpent::bessel
