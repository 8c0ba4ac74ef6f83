#include "rpent/positivity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "rpent/parallel.hpp"

namespace rpent {

namespace {

RVector fix_sign(RVector v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12) {
      if (v(i) < 0.0) v = -v;
      break;
    }
  }
  return v;
}

double max_abs(const RMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

std::vector<EntropyTable> entropy_tables(const PurifiedState& psi,
                                         const std::vector<SubsystemSplit>& splits,
                                         const std::vector<double>& n_values) {
  if (splits.empty()) throw InvalidInput("entropy_tables: at least one subsystem required");
  const auto count = static_cast<Eigen::Index>(splits.size());
  std::vector<TwistOperatorSet> twists;
  twists.reserve(splits.size());
  for (const auto& s : splits) twists.push_back(twist_operators(psi, s));

  std::vector<EntropyTable> tables;
  for (double n : n_values) {
    tables.push_back(EntropyTable{n, RMatrix(count, count), RVector(count)});
  }
  for (Eigen::Index i = 0; i < count; ++i) {
    const RVector marginal = density_spectrum(reduced_subsystem(psi, splits[static_cast<std::size_t>(i)]));
    for (auto& t : tables) t.marginals(i) = renyi_from_spectrum(marginal, t.n);
    for (Eigen::Index j = 0; j < count; ++j) {
      const ReflectedDensity rho = reflected_density(twists[static_cast<std::size_t>(i)],
                                                     twists[static_cast<std::size_t>(j)],
                                                     static_cast<int>(i), static_cast<int>(j));
      rho.validate();
      const RVector spectrum = density_spectrum(rho.rho);
      for (auto& t : tables) t.values(i, j) = renyi_from_spectrum(spectrum, t.n);
    }
  }
  return tables;
}

GramRecord make_gram_record(RMatrix entries, double n, double lambda) {
  if (entries.rows() != entries.cols() || entries.rows() == 0) {
    throw InvalidInput("Gram matrix must be square and nonempty");
  }
  const double asym = max_abs(entries - entries.transpose());
  if (asym > 1e-9 * std::max(1.0, max_abs(entries))) {
    std::ostringstream msg;
    msg << "Gram matrix is not symmetric (max asymmetry " << asym << ")";
    throw InvalidInput(msg.str());
  }
  GramRecord g;
  g.n = n;
  g.lambda = lambda;
  g.entries = std::move(entries);
  const RMatrix sym = 0.5 * (g.entries + g.entries.transpose());
  Eigen::SelfAdjointEigenSolver<RMatrix> solver(sym, Eigen::EigenvaluesOnly);
  g.min_eigenvalue = solver.eigenvalues()(0);
  g.spectral_norm = solver.eigenvalues().cwiseAbs().maxCoeff();
  g.leading_minors.resize(sym.rows());
  for (Eigen::Index k = 1; k <= sym.rows(); ++k) {
    g.leading_minors(k - 1) = sym.topLeftCorner(k, k).determinant();
  }
  return g;
}

GramRecord gram_from_table(const EntropyTable& table, std::optional<double> lambda) {
  const double lam = lambda.value_or(table.n == 1.0 ? 1.0 : table.n - 1.0);
  RMatrix entries = (-lam * table.values).array().exp().matrix();
  return make_gram_record(std::move(entries), table.n, lam);
}

GramRecord gram_matrix(const PurifiedState& psi, const std::vector<SubsystemSplit>& splits, int n,
                       std::optional<double> lambda) {
  if (n < 1) throw InvalidInput("gram_matrix: n must be a positive integer");
  const auto tables = entropy_tables(psi, splits, {static_cast<double>(n)});
  return gram_from_table(tables.front(), lambda);
}

PsdVerdict check_psd(const RMatrix& gram, double tol) {
  if (gram.rows() != gram.cols() || gram.rows() == 0) throw InvalidInput("check_psd: square matrix expected");
  const double asym = max_abs(gram - gram.transpose());
  if (asym > 1e-9 * std::max(1.0, max_abs(gram))) {
    std::ostringstream msg;
    msg << "check_psd: matrix is not symmetric (max asymmetry " << asym << ")";
    throw InvalidInput(msg.str());
  }
  const RMatrix sym = 0.5 * (gram + gram.transpose());
  Eigen::SelfAdjointEigenSolver<RMatrix> solver(sym);
  PsdVerdict v;
  v.tolerance = tol;
  v.min_eigenvalue = solver.eigenvalues()(0);
  v.spectral_norm = solver.eigenvalues().cwiseAbs().maxCoeff();
  const double norm = v.spectral_norm > 0.0 ? v.spectral_norm : 1.0;
  v.relative_min_eigenvalue = v.min_eigenvalue / norm;
  v.witness = fix_sign(solver.eigenvectors().col(0));
  for (Eigen::Index k = 1; k <= sym.rows(); ++k) {
    const double minor = sym.topLeftCorner(k, k).determinant();
    if (minor < -tol * std::pow(norm, static_cast<double>(k))) v.minors_ok = false;
  }
  v.pass = v.min_eigenvalue >= -tol * norm && v.minors_ok;
  return v;
}

PsdVerdict check_psd(const GramRecord& gram, double tol) { return check_psd(gram.entries, tol); }

GramRecord schur_power(const GramRecord& gram, int s) {
  if (s < 1) throw InvalidInput("schur_power: s must be a positive integer");
  if (s == 1) return gram;
  return schur_power_real(gram, static_cast<double>(s));
}

GramRecord schur_power_real(const GramRecord& gram, double s) {
  if (!(s > 0.0)) throw InvalidInput("schur_power: s must be positive");
  if (gram.entries.minCoeff() < 0.0 && std::floor(s) != s) {
    throw InvalidInput("schur_power: fractional power of a negative entry");
  }
  RMatrix entries = gram.entries.array().pow(s).matrix();
  return make_gram_record(std::move(entries), gram.n, gram.lambda * s);
}

DivisibilityRecord divisibility_matrix(const RMatrix& entropies, const std::optional<RVector>& marginals) {
  const Eigen::Index size = entropies.rows();
  if (size != entropies.cols() || size < 2) {
    throw InvalidInput("divisibility_matrix: square table with at least two subsystems expected");
  }
  const double asym = max_abs(entropies - entropies.transpose());
  if (asym > 1e-9 * std::max(1.0, max_abs(entropies))) {
    std::ostringstream msg;
    msg << "divisibility_matrix: entropy table is not symmetric (max asymmetry " << asym << ")";
    throw InvalidInput(msg.str());
  }
  const RVector single = marginals.value_or(RVector::Zero(size));
  if (single.size() != size) throw InvalidInput("divisibility_matrix: marginals size mismatch");

  const Eigen::Index m = size - 1;
  const RMatrix& s = entropies;
  auto mi = [&](Eigen::Index i, Eigen::Index j) { return single(i) + single(j) - s(i, j); };

  DivisibilityRecord rec;
  rec.b_matrix.resize(m, m);
  rec.b_from_mutual_information.resize(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      rec.b_matrix(i, j) = s(i, j + 1) + s(i + 1, j) - s(i, j) - s(i + 1, j + 1);
      rec.b_from_mutual_information(i, j) = mi(i, j) + mi(i + 1, j + 1) - mi(i, j + 1) - mi(i + 1, j);
    }
  }
  rec.det_b = rec.b_matrix.determinant();
  const RMatrix sym = 0.5 * (rec.b_matrix + rec.b_matrix.transpose());
  rec.min_eigenvalue = Eigen::SelfAdjointEigenSolver<RMatrix>(sym, Eigen::EigenvaluesOnly).eigenvalues()(0);
  rec.mutual_information_mismatch = max_abs(rec.b_matrix - rec.b_from_mutual_information);
  return rec;
}

OrderingScan scan_orderings(const RMatrix& entropies) {
  const Eigen::Index size = entropies.rows();
  if (size > 4) throw InvalidInput("scan_orderings: at most four subsystems");
  std::vector<int> order(static_cast<std::size_t>(size));
  std::iota(order.begin(), order.end(), 0);
  OrderingScan scan;
  bool first = true;
  do {
    RMatrix permuted(size, size);
    for (Eigen::Index i = 0; i < size; ++i) {
      for (Eigen::Index j = 0; j < size; ++j) {
        permuted(i, j) = entropies(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
      }
    }
    const double det = divisibility_matrix(permuted).det_b;
    if (first) {
      scan.fixed_order_det = det;
      scan.min_det = scan.max_det = det;
      scan.best_order = scan.worst_order = order;
      first = false;
    }
    if (det > scan.max_det) {
      scan.max_det = det;
      scan.best_order = order;
    }
    if (det < scan.min_det) {
      scan.min_det = det;
      scan.worst_order = order;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return scan;
}

double three_set_inequality(double s_ab, double s_ac, double s_bc, double s_aa, double s_bb,
                            double s_cc) {
  const double lhs = 2.0 * s_ab * s_ac + 2.0 * s_ab * s_bc + 2.0 * s_bc * s_ac + s_aa * s_bb +
                     s_aa * s_cc + s_bb * s_cc;
  const double rhs = s_ab * s_ab + s_ac * s_ac + s_bc * s_bc + 2.0 * s_ab * s_cc + 2.0 * s_ac * s_bb +
                     2.0 * s_bc * s_aa;
  return lhs - rhs;
}

// ---------------------------------------------------------------------------

PurifiedState Instance::purified() const {
  const Eigen::Index d = eigenvalues.size();
  return PurifiedState{eigenvalues, eigenvectors, CMatrix::Identity(d, d)};
}

Instance draw_instance(const std::vector<std::pair<Eigen::Index, Eigen::Index>>& dims, Rng& rng,
                       double concentration, double min_eigenvalue) {
  if (dims.empty()) throw InvalidInput("draw_instance: no subsystems");
  const Eigen::Index d = dims.front().first * dims.front().second;
  for (const auto& [a, b] : dims) {
    if (a < 1 || b < 1 || a * b != d) throw InvalidInput("draw_instance: inconsistent subsystem dimensions");
  }
  Instance inst;
  RVector p;
  do {
    p = dirichlet(d, concentration, rng);
  } while (p.minCoeff() < min_eigenvalue);
  const CMatrix u = haar_unitary(d, rng);
  CMatrix rho = u * p.cast<Complex>().asDiagonal() * u.adjoint();
  rho = 0.5 * (rho + rho.adjoint());
  const DensityMatrix state(rho);
  inst.eigenvalues = state.eigenvalues();
  inst.eigenvectors = state.eigenvectors();
  int index = 0;
  for (const auto& [a, b] : dims) {
    inst.splits.push_back(haar_split(a, b, rng, "A" + std::to_string(++index)));
  }
  return inst;
}

std::string to_string(SearchTarget target) {
  switch (target) {
    case SearchTarget::IntegerN: return "integer_n";
    case SearchTarget::EntropyN1: return "entropy_n1";
    case SearchTarget::SchurFraction: return "schur_s_fraction";
  }
  return "unknown";
}

SearchTarget parse_search_target(const std::string& name) {
  if (name == "integer_n") return SearchTarget::IntegerN;
  if (name == "entropy_n1") return SearchTarget::EntropyN1;
  if (name == "schur_s_fraction") return SearchTarget::SchurFraction;
  throw InvalidInput("unknown search target '" + name + "'");
}

void SearchConfig::validate() const {
  if (trials < 1) throw InvalidInput("search: trials must be >= 1");
  if (dims.size() < 2) throw InvalidInput("search: at least two subsystems required");
  const Eigen::Index d = dims.front().first * dims.front().second;
  for (const auto& [a, b] : dims) {
    if (a < 1 || b < 1 || a * b != d) throw InvalidInput("search: subsystem dimensions must multiply to the same d");
  }
  if (!(tolerance > 0.0) || !(violation_threshold > 0.0)) throw InvalidInput("search: tolerances must be positive");
  if (!(lambda > 0.0)) throw InvalidInput("search: lambda must be positive");
  if (!(concentration > 0.0)) throw InvalidInput("search: concentration must be positive");
  if (literal_s < 0.0) throw InvalidInput("search: literal_s must be nonnegative");
  for (int n : n_values) {
    if (n < 2) throw InvalidInput("search: integer-n control needs n >= 2");
  }
  if (target == SearchTarget::IntegerN && n_values.empty()) throw InvalidInput("search: empty n list");
}

namespace {

// Evaluates one instance for the configured target; returns the candidate
// with the smallest normalized slack.
Violation evaluate(const Instance& inst, const SearchConfig& cfg) {
  const PurifiedState psi = inst.purified();
  Violation out;
  out.instance = inst;
  bool have = false;
  auto consider = [&](Violation v) {
    if (!have || v.normalized_slack < out.normalized_slack) {
      v.instance = inst;
      out = std::move(v);
      have = true;
    }
  };

  if (cfg.target == SearchTarget::IntegerN) {
    std::vector<double> ns(cfg.n_values.begin(), cfg.n_values.end());
    for (const auto& table : entropy_tables(psi, inst.splits, ns)) {
      const GramRecord g = gram_from_table(table);
      const PsdVerdict verdict = check_psd(g, cfg.tolerance);
      Violation v;
      v.n = table.n;
      v.entropies = table.values;
      v.tested_matrix = g.entries;
      v.min_eigenvalue = verdict.min_eigenvalue;
      v.scale = verdict.spectral_norm;
      v.normalized_slack = verdict.relative_min_eigenvalue;
      v.witness = verdict.witness;
      consider(std::move(v));
    }
    return out;
  }

  const EntropyTable table = entropy_tables(psi, inst.splits, {1.0}).front();
  Violation v;
  v.n = 1.0;
  v.entropies = table.values;
  if (cfg.target == SearchTarget::EntropyN1 ||
      (cfg.target == SearchTarget::SchurFraction && cfg.literal_s > 0.0)) {
    GramRecord g = gram_from_table(table, cfg.lambda);
    if (cfg.target == SearchTarget::SchurFraction) g = schur_power_real(g, cfg.literal_s);
    const PsdVerdict verdict = check_psd(g, cfg.tolerance);
    v.tested_matrix = g.entries;
    v.min_eigenvalue = verdict.min_eigenvalue;
    v.scale = verdict.spectral_norm;
    v.normalized_slack = verdict.relative_min_eigenvalue;
    v.witness = verdict.witness;
  } else {
    const DivisibilityRecord rec = divisibility_matrix(table.values, table.marginals);
    const PsdVerdict verdict = check_psd(rec.b_matrix, cfg.tolerance);
    v.tested_matrix = rec.b_matrix;
    v.min_eigenvalue = verdict.min_eigenvalue;
    // B is a difference of entropies; its natural scale is the table itself.
    v.scale = std::max(max_abs(table.values), 1e-300);
    v.normalized_slack = v.min_eigenvalue / v.scale;
    v.witness = verdict.witness;
  }
  consider(std::move(v));
  return out;
}

}  // namespace

SearchReport counterexample_search(const SearchConfig& config) {
  config.validate();
  std::vector<Violation> per_trial(static_cast<std::size_t>(config.trials));
  parallel_for(per_trial.size(), config.jobs, [&](std::size_t t) {
    Rng rng = trial_stream(config.master_seed, t);
    Instance inst = draw_instance(config.dims, rng, config.concentration, config.min_eigenvalue);
    inst.trial = t;
    per_trial[t] = evaluate(inst, config);
  });

  SearchReport report;
  report.config = config;
  report.trials_run = config.trials;
  report.instances_checked = config.trials;
  const double threshold =
      config.target == SearchTarget::IntegerN ? config.tolerance : config.violation_threshold;
  double sum = 0.0;
  report.min_normalized_slack = per_trial.front().normalized_slack;
  for (auto& v : per_trial) {
    sum += v.normalized_slack;
    report.min_normalized_slack = std::min(report.min_normalized_slack, v.normalized_slack);
    if (v.normalized_slack < -threshold) report.violations.push_back(std::move(v));
  }
  report.mean_normalized_slack = sum / static_cast<double>(per_trial.size());
  return report;
}

Violation reverify(const Violation& stored, const SearchConfig& config) {
  return evaluate(stored.instance, config);
}

// ---------------------------------------------------------------------------

void SweepConfig::validate() const {
  if (trials < 1) throw InvalidInput("sweep: trials must be >= 1");
  if (dims.empty() && fixed_dims.empty()) throw InvalidInput("sweep: dimension list is empty");
  for (auto d : dims) {
    if (d < 2) throw InvalidInput("sweep: dimensions must be >= 2");
  }
  if (!fixed_dims.empty()) {
    if (fixed_dims.size() < 2) throw InvalidInput("sweep: at least two subsystems required");
    const Eigen::Index d = fixed_dims.front().first * fixed_dims.front().second;
    for (const auto& [a, b] : fixed_dims) {
      if (a < 1 || b < 1 || a * b != d) throw InvalidInput("sweep: subsystem dimensions must multiply to the same d");
    }
  }
  if (min_subsystems < 2 || max_subsystems < min_subsystems) {
    throw InvalidInput("sweep: need 2 <= min_subsystems <= max_subsystems");
  }
  if (n_values.empty()) throw InvalidInput("sweep: empty n list");
  for (int n : n_values) {
    if (n < 2) throw InvalidInput("sweep: n must be >= 2");
  }
  if (!(tolerance > 0.0)) throw InvalidInput("sweep: tolerance must be positive");
}

namespace {

std::vector<Eigen::Index> proper_divisors(Eigen::Index d) {
  std::vector<Eigen::Index> out;
  for (Eigen::Index a = 2; a < d; ++a) {
    if (d % a == 0) out.push_back(a);
  }
  if (out.empty()) out = {1, d};
  return out;
}

}  // namespace

SweepReport theorem_sweep(const SweepConfig& config) {
  config.validate();
  struct TrialResult {
    Eigen::Index dim = 0;
    std::vector<Eigen::Index> dim_a;
    std::vector<double> relative_min;  // per n
    std::vector<bool> pass;
  };
  std::vector<TrialResult> results(static_cast<std::size_t>(config.trials));
  std::vector<double> ns(config.n_values.begin(), config.n_values.end());

  parallel_for(results.size(), config.jobs, [&](std::size_t t) {
    Rng rng = trial_stream(config.master_seed, t);
    std::vector<std::pair<Eigen::Index, Eigen::Index>> dims = config.fixed_dims;
    if (dims.empty()) {
      std::uniform_int_distribution<std::size_t> pick_dim(0, config.dims.size() - 1);
      const Eigen::Index d = config.dims[pick_dim(rng)];
      std::uniform_int_distribution<int> pick_count(config.min_subsystems, config.max_subsystems);
      const int count = pick_count(rng);
      const auto divisors = proper_divisors(d);
      std::uniform_int_distribution<std::size_t> pick_div(0, divisors.size() - 1);
      for (int k = 0; k < count; ++k) {
        const Eigen::Index a = divisors[pick_div(rng)];
        dims.emplace_back(a, d / a);
      }
    }
    TrialResult r;
    r.dim = dims.front().first * dims.front().second;
    for (const auto& [a, b] : dims) r.dim_a.push_back(a);
    const Instance inst = draw_instance(dims, rng, config.concentration, config.min_eigenvalue);
    for (const auto& table : entropy_tables(inst.purified(), inst.splits, ns)) {
      const PsdVerdict verdict = check_psd(gram_from_table(table), config.tolerance);
      r.relative_min.push_back(verdict.relative_min_eigenvalue);
      r.pass.push_back(verdict.pass);
    }
    results[t] = std::move(r);
  });

  SweepReport report;
  report.config = config;
  report.trials_run = config.trials;
  std::size_t largest = static_cast<std::size_t>(config.max_subsystems);
  for (const auto& r : results) largest = std::max(largest, r.dim_a.size());
  report.checks_by_size.assign(largest + 1, 0);
  report.worst_relative_min_eigenvalue = results.front().relative_min.front();
  for (std::size_t t = 0; t < results.size(); ++t) {
    const auto& r = results[t];
    for (std::size_t k = 0; k < r.relative_min.size(); ++k) {
      ++report.gram_checks;
      ++report.checks_by_size[r.dim_a.size()];
      report.worst_relative_min_eigenvalue = std::min(report.worst_relative_min_eigenvalue, r.relative_min[k]);
      if (!r.pass[k]) {
        report.failures.push_back(SweepFailure{t, config.n_values[k], r.dim, r.dim_a, r.relative_min[k]});
      }
    }
  }
  return report;
}

}  // namespace rpent
