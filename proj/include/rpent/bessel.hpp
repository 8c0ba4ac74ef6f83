#pragma once

namespace rpent::bessel {

// Modified Bessel function of the second kind, order zero, for x > 0.
//   x <= 2       power series
//   2 < x <= 25  Steed's continued fraction (Temme's CF2 for nu = 0)
//   x > 25       Hankel asymptotic expansion, truncated at its smallest term
double k0(double x);

// exp(x) K_0(x); finite for every x > 0.
double k0_scaled(double x);

// log K_0(x), valid where K_0 itself underflows.
double log_k0(double x);

// K_0(x) = int_0^inf exp(-x cosh t) dt by the trapezoidal rule. Slow
// reference used to validate the branch crossovers.
double k0_quadrature(double x);

inline constexpr double kSeriesLimit = 2.0;
inline constexpr double kAsymptoticLimit = 25.0;

}  // namespace rpent::bessel
