#include "rpent/fermion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace rpent::fermion {

namespace {

std::vector<double> left_ends(const IntervalSet& s) {
  std::vector<double> out;
  for (const auto& iv : s.intervals()) out.push_back(iv.first);
  return out;
}

std::vector<double> right_ends(const IntervalSet& s) {
  std::vector<double> out;
  for (const auto& iv : s.intervals()) out.push_back(iv.second);
  return out;
}

double log_dist(double x, double y) {
  const double d = std::abs(x - y);
  if (d < kMinSeparation) {
    std::ostringstream msg;
    msg << "coincident points " << x << " and " << y;
    throw InvalidInput(msg.str());
  }
  return std::log(d);
}

// sum_ij log|a_i - b_j| - sum_{i<j} log|a_i - a_j| - sum_{i<j} log|b_i - b_j|
double log_combination(const IntervalSet& set) {
  const auto a = left_ends(set);
  const auto b = right_ends(set);
  double acc = 0.0;
  for (double ai : a) {
    for (double bj : b) acc += log_dist(ai, bj);
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      acc -= log_dist(a[i], a[j]);
      acc -= log_dist(b[i], b[j]);
    }
  }
  return acc;
}

}  // namespace

IntervalSet::IntervalSet(std::vector<std::pair<double, double>> intervals, double cutoff)
    : intervals_(std::move(intervals)), cutoff_(cutoff) {
  if (intervals_.empty()) throw InvalidInput("interval set is empty");
  if (!(cutoff_ > 0.0)) throw InvalidInput("cutoff must be positive");
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    const auto [a, b] = intervals_[i];
    if (!std::isfinite(a) || !std::isfinite(b)) throw InvalidInput("interval endpoints must be finite");
    if (!(b - a >= kMinSeparation)) throw InvalidInput("interval endpoints must satisfy a_i < b_i");
    if (i + 1 < intervals_.size() && !(intervals_[i + 1].first - b >= kMinSeparation)) {
      throw InvalidInput("intervals must be disjoint and ordered (b_i < a_{i+1})");
    }
  }
}

double IntervalSet::normalization() const { return 1.0 / (2.0 * std::numbers::pi * cutoff_); }

IntervalSet IntervalSet::reflected() const {
  std::vector<std::pair<double, double>> out;
  for (auto it = intervals_.rbegin(); it != intervals_.rend(); ++it) out.emplace_back(-it->second, -it->first);
  return IntervalSet(std::move(out), cutoff_);
}

IntervalSet IntervalSet::united(const IntervalSet& other) const {
  std::vector<std::pair<double, double>> all = intervals_;
  all.insert(all.end(), other.intervals_.begin(), other.intervals_.end());
  std::sort(all.begin(), all.end());
  return IntervalSet(std::move(all), cutoff_);
}

IntervalSet random_interval_set(std::size_t p, Rng& rng, double lo, double hi, double min_gap, double cutoff) {
  if (p == 0) throw InvalidInput("random_interval_set: p must be >= 1");
  if (!(hi > lo) || !(min_gap > 0.0) || min_gap * static_cast<double>(2 * p) >= hi - lo) {
    throw InvalidInput("random_interval_set: range too small for the requested gap");
  }
  std::uniform_real_distribution<double> unif(lo, hi);
  std::vector<double> pts(2 * p);
  for (;;) {
    for (auto& x : pts) x = unif(rng);
    std::sort(pts.begin(), pts.end());
    bool ok = true;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) ok = ok && pts[i + 1] - pts[i] >= min_gap;
    if (ok) break;
  }
  std::vector<std::pair<double, double>> intervals;
  for (std::size_t i = 0; i < p; ++i) intervals.emplace_back(pts[2 * i], pts[2 * i + 1]);
  return IntervalSet(std::move(intervals), cutoff);
}

double entropy(const IntervalSet& set) {
  const double p = static_cast<double>(set.size());
  return (log_combination(set) - p * std::log(set.cutoff())) / 6.0;
}

double renyi(const IntervalSet& set, double n) {
  if (!(n > 0.0)) throw InvalidInput("Renyi index must be positive");
  return (1.0 + n) / (2.0 * n) * entropy(set);
}

double log_correlator_cauchy(const IntervalSet& set) {
  const double p = static_cast<double>(set.size());
  return -log_combination(set) - p * std::log(2.0 * std::numbers::pi);
}

double correlator_cauchy(const IntervalSet& set) { return std::exp(log_correlator_cauchy(set)); }

double log_correlator_from_entropy(const IntervalSet& set) {
  const double p = static_cast<double>(set.size());
  return p * std::log(set.normalization()) - 6.0 * entropy(set);
}

double correlator_wick(const IntervalSet& set) {
  const std::size_t p = set.size();
  if (p > 8) throw InvalidInput("correlator_wick: permutation sum limited to p <= 8");
  const auto a = left_ends(set);
  const auto b = right_ends(set);
  for (double ai : a) {
    for (double bj : b) log_dist(ai, bj);
  }
  std::vector<std::size_t> perm(p);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double sum = 0.0;
  do {
    // Signature from the cycle decomposition.
    std::vector<bool> seen(p, false);
    int transpositions = 0;
    for (std::size_t i = 0; i < p; ++i) {
      if (seen[i]) continue;
      std::size_t len = 0;
      for (std::size_t j = i; !seen[j]; j = perm[j]) {
        seen[j] = true;
        ++len;
      }
      transpositions += static_cast<int>(len) - 1;
    }
    double term = transpositions % 2 == 0 ? 1.0 : -1.0;
    for (std::size_t i = 0; i < p; ++i) term /= (a[i] - b[perm[i]]);
    sum += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  const double sign = p % 2 == 0 ? 1.0 : -1.0;
  return sign * sum / std::pow(2.0 * std::numbers::pi, static_cast<double>(p));
}

void ChargeConfiguration::validate() const {
  if (points.size() != charges.size()) throw InvalidInput("charges and points differ in length");
  if (points.empty()) throw InvalidInput("empty charge configuration");
  if (!(lambda > 0.0)) throw InvalidInput("lambda must be positive");
  const double total = std::accumulate(charges.begin(), charges.end(), 0.0);
  double scale = 0.0;
  for (double q : charges) scale = std::max(scale, std::abs(q));
  if (std::abs(total) > 1e-12 * std::max(1.0, scale) * static_cast<double>(charges.size())) {
    throw InvalidInput("charge configuration is not neutral");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) log_dist(points[i], points[j]);
  }
}

ChargeConfiguration vertex_charges(const IntervalSet& set, double lambda) {
  if (!(lambda > 0.0)) throw InvalidInput("lambda must be positive");
  const double q = std::sqrt(2.0 * std::numbers::pi * lambda / 3.0);
  ChargeConfiguration cfg;
  cfg.lambda = lambda;
  for (const auto& [a, b] : set.intervals()) {
    cfg.points.push_back(a);
    cfg.charges.push_back(q);
    cfg.points.push_back(b);
    cfg.charges.push_back(-q);
  }
  return cfg;
}

double gaussian_vertex_correlator(const ChargeConfiguration& cfg) {
  cfg.validate();
  double acc = 0.0;
  for (std::size_t i = 0; i < cfg.points.size(); ++i) {
    for (std::size_t j = i + 1; j < cfg.points.size(); ++j) {
      acc += 2.0 * cfg.charges[i] * cfg.charges[j] * log_dist(cfg.points[i], cfg.points[j]);
    }
  }
  return acc / (8.0 * std::numbers::pi);
}

RMatrix reflected_entropy_table(const std::vector<IntervalSet>& sets) {
  if (sets.empty()) throw InvalidInput("divisibility_witness: no sets");
  for (const auto& s : sets) {
    if (!(s.intervals().front().first >= kMinSeparation)) {
      throw InvalidInput("divisibility_witness: sets must lie strictly inside x > 0");
    }
  }
  const auto size = static_cast<Eigen::Index>(sets.size());
  RMatrix table(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    for (Eigen::Index j = 0; j < size; ++j) {
      const auto& a = sets[static_cast<std::size_t>(i)];
      const auto& b = sets[static_cast<std::size_t>(j)];
      table(i, j) = entropy(a.united(b.reflected()));
    }
  }
  return table;
}

GramRecord divisibility_witness(const std::vector<IntervalSet>& sets, double lambda) {
  if (!(lambda > 0.0)) throw InvalidInput("lambda must be positive");
  const RMatrix table = reflected_entropy_table(sets);
  RMatrix entries = (-lambda * table).array().exp().matrix();
  return make_gram_record(std::move(entries), 1.0, lambda);
}

}  // namespace rpent::fermion
