#pragma once

// Exact entropies and correlators of the free massless chiral fermion in one
// spatial dimension, and their vertex-operator representation.

#include <utility>
#include <vector>

#include "rpent/positivity.hpp"
#include "rpent/random.hpp"

namespace rpent::fermion {

inline constexpr double kMinSeparation = 1e-9;

// Disjoint intervals a_1 < b_1 < a_2 < ... < b_p with UV cutoff epsilon.
class IntervalSet {
 public:
  IntervalSet(std::vector<std::pair<double, double>> intervals, double cutoff = 1.0);

  std::size_t size() const { return intervals_.size(); }
  const std::vector<std::pair<double, double>>& intervals() const { return intervals_; }
  double cutoff() const { return cutoff_; }
  // c = 1 / (2 pi epsilon)
  double normalization() const;

  // x -> -x on every endpoint, re-sorted.
  IntervalSet reflected() const;
  // Disjoint union; throws if the pieces overlap or touch.
  IntervalSet united(const IntervalSet& other) const;

 private:
  std::vector<std::pair<double, double>> intervals_;
  double cutoff_;
};

// p intervals from 2p sorted uniform points in [lo, hi]; draws are repeated
// until every gap is at least min_gap.
IntervalSet random_interval_set(std::size_t p, Rng& rng, double lo, double hi, double min_gap = 1e-3,
                                double cutoff = 1.0);

// S = (1/6)(sum_ij log|a_i - b_j| - sum_{i<j} log|a_i - a_j| - sum_{i<j} log|b_i - b_j| - p log eps).
double entropy(const IntervalSet& set);

// S_n = (1 + n)/(2n) S; any real n > 0.
double renyi(const IntervalSet& set, double n);

// log of prod|a_i - a_j| prod|b_i - b_j| / prod|a_i - b_j| / (2 pi)^p.
double log_correlator_cauchy(const IntervalSet& set);
double correlator_cauchy(const IntervalSet& set);

// (-1)^p/(2 pi)^p sum_P sign(P) prod_i 1/(a_i - b_{P(i)}); p <= 8.
double correlator_wick(const IntervalSet& set);

// log(c^p) - 6 S, which equals log_correlator_cauchy identically.
double log_correlator_from_entropy(const IntervalSet& set);

struct ChargeConfiguration {
  std::vector<double> points;
  std::vector<double> charges;
  double lambda = 1.0;

  void validate() const;
};

// Charges +sqrt(2 pi lambda / 3) at every a_i and the opposite charge at b_i.
ChargeConfiguration vertex_charges(const IntervalSet& set, double lambda);

// (1/(8 pi)) sum_{i != j} q_i q_j log|x_i - x_j|: the log of the Gaussian
// expectation with self-energies absorbed into the normalization.
double gaussian_vertex_correlator(const ChargeConfiguration& cfg);

// exp(-lambda S(A_i Abar_j)) with Abar the reflection x -> -x.
GramRecord divisibility_witness(const std::vector<IntervalSet>& sets, double lambda);

// S(A_i Abar_j) table for the same sets.
RMatrix reflected_entropy_table(const std::vector<IntervalSet>& sets);

}  // namespace rpent::fermion
