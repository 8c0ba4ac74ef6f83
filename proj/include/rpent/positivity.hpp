#pragma once

// Gram matrices of reflected trace powers and the inequalities that follow
// from their positivity.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rpent/reflected.hpp"

namespace rpent {

// S_n(A_i Abar_j) for a family of splits over one state.
struct EntropyTable {
  double n = 2.0;      // 1 means von Neumann
  RMatrix values;      // (m+1) x (m+1)
  RVector marginals;   // S_n(A_i); S_n(Abar_i) is the same number
};

// Every reflected density is built once, validated, and reused for all n.
std::vector<EntropyTable> entropy_tables(const PurifiedState& psi,
                                         const std::vector<SubsystemSplit>& splits,
                                         const std::vector<double>& n_values);

struct GramRecord {
  double n = 2.0;
  double lambda = 1.0;         // entries are exp(-lambda * S_n)
  RMatrix entries;
  double min_eigenvalue = 0.0;
  double spectral_norm = 0.0;
  RVector leading_minors;      // det of the leading k x k blocks, k = 1..m+1

  Eigen::Index size() const { return entries.rows(); }
};

// Fills in the spectral diagnostics. Throws InvalidInput if entries are not
// symmetric to 1e-9.
GramRecord make_gram_record(RMatrix entries, double n, double lambda);

// exp(-lambda S_n(A_i Abar_j)); lambda defaults to n - 1 (n >= 2), for which
// the entries are tr rho^n, and to 1 for the entropy (n = 1).
GramRecord gram_from_table(const EntropyTable& table, std::optional<double> lambda = std::nullopt);
GramRecord gram_matrix(const PurifiedState& psi, const std::vector<SubsystemSplit>& splits, int n,
                       std::optional<double> lambda = std::nullopt);

struct PsdVerdict {
  bool pass = true;
  double min_eigenvalue = 0.0;
  double spectral_norm = 0.0;
  double relative_min_eigenvalue = 0.0;  // min_eigenvalue / spectral_norm
  double tolerance = 0.0;
  bool minors_ok = true;
  // Eigenvector of the smallest eigenvalue, first nonzero entry positive:
  // the coefficients alpha_i of the combination sum_i alpha_i O_{A_i} with
  // negative norm when the verdict fails.
  RVector witness;
};

// PASS iff min eigenvalue >= -tol * ||G||_2 and every leading minor of size k
// is >= -tol * ||G||_2^k.
PsdVerdict check_psd(const RMatrix& gram, double tol = 1e-10);
PsdVerdict check_psd(const GramRecord& gram, double tol = 1e-10);

// Entrywise power; integer s keeps PSD matrices PSD.
GramRecord schur_power(const GramRecord& gram, int s);
// Literal entrywise power for real s > 0 (no positivity guarantee).
GramRecord schur_power_real(const GramRecord& gram, double s);

struct DivisibilityRecord {
  RMatrix b_matrix;                 // m x m
  double det_b = 0.0;
  double min_eigenvalue = 0.0;
  RMatrix b_from_mutual_information;
  double mutual_information_mismatch = 0.0;
};

// B_ij = S(A_i Abar_{j+1}) + S(A_{i+1} Abar_j) - S(A_i Abar_j) - S(A_{i+1} Abar_{j+1}),
// cross-checked against the mutual-information form. Marginals enter only
// the cross-check; they default to zero.
DivisibilityRecord divisibility_matrix(const RMatrix& entropies,
                                       const std::optional<RVector>& marginals = std::nullopt);

// det B for every ordering of the subsystems (m + 1 <= 4).
struct OrderingScan {
  double fixed_order_det = 0.0;
  double min_det = 0.0;
  double max_det = 0.0;
  std::vector<int> best_order;
  std::vector<int> worst_order;
};
OrderingScan scan_orderings(const RMatrix& entropies);

// LHS - RHS of the explicit degree-2 inequality for three subsystems A, B, C.
double three_set_inequality(double s_ab, double s_ac, double s_bc, double s_aa, double s_bb,
                            double s_cc);

// ---------------------------------------------------------------------------
// Random instances

struct Instance {
  std::uint64_t trial = 0;
  RVector eigenvalues;
  CMatrix eigenvectors;
  std::vector<SubsystemSplit> splits;

  PurifiedState purified() const;
};

// Dirichlet(concentration) spectrum (re-drawn until min >= min_eigenvalue),
// Haar eigenvectors, one Haar beta per subsystem.
Instance draw_instance(const std::vector<std::pair<Eigen::Index, Eigen::Index>>& dims, Rng& rng,
                       double concentration = 1.0, double min_eigenvalue = 1e-6);

enum class SearchTarget { IntegerN, EntropyN1, SchurFraction };
std::string to_string(SearchTarget target);
SearchTarget parse_search_target(const std::string& name);

struct SearchConfig {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> dims;  // (d_A, d_B) per subsystem
  int trials = 1000;
  std::uint64_t master_seed = 42;
  SearchTarget target = SearchTarget::EntropyN1;
  // PSD tolerance relative to the spectral norm (integer-n control).
  double tolerance = 1e-10;
  // A candidate counts as a counterexample only below -threshold * scale.
  double violation_threshold = 1e-6;
  double lambda = 1.0;                 // entropy mode: entries exp(-lambda S)
  std::vector<int> n_values = {2};     // integer-n control
  double literal_s = 0.0;              // > 0: Schur mode uses G^{o s} instead of B
  double concentration = 1.0;
  double min_eigenvalue = 1e-6;
  int jobs = 1;

  void validate() const;
};

struct Violation {
  Instance instance;
  double n = 1.0;
  RMatrix entropies;
  RMatrix tested_matrix;        // Gram entries, or B in Schur mode
  double min_eigenvalue = 0.0;
  double scale = 0.0;
  double normalized_slack = 0.0;  // min_eigenvalue / scale
  RVector witness;
};

struct SearchReport {
  SearchConfig config;
  int trials_run = 0;
  int instances_checked = 0;
  std::vector<Violation> violations;
  double min_normalized_slack = 0.0;
  double mean_normalized_slack = 0.0;
};

SearchReport counterexample_search(const SearchConfig& config);

// Re-evaluates a stored violation from its serialized data alone.
Violation reverify(const Violation& stored, const SearchConfig& config);

// ---------------------------------------------------------------------------
// Theorem sweep over mixed dimensions

struct SweepConfig {
  int trials = 10000;
  std::uint64_t master_seed = 42;
  std::vector<Eigen::Index> dims = {4, 6, 8, 9, 16};
  // When set, every trial uses exactly these (d_A, d_B) subsystems and the
  // dims / subsystem-count draws are skipped.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> fixed_dims;
  int min_subsystems = 2;
  int max_subsystems = 4;
  std::vector<int> n_values = {2, 3, 4, 5};
  double tolerance = 1e-10;
  double concentration = 1.0;
  double min_eigenvalue = 1e-6;
  int jobs = 1;

  void validate() const;
};

struct SweepFailure {
  std::uint64_t trial = 0;
  int n = 0;
  Eigen::Index dim = 0;
  std::vector<Eigen::Index> dim_a;
  double relative_min_eigenvalue = 0.0;
};

struct SweepReport {
  SweepConfig config;
  int trials_run = 0;
  int gram_checks = 0;
  std::vector<SweepFailure> failures;
  double worst_relative_min_eigenvalue = 0.0;
  std::vector<int> checks_by_size;  // index m+1
};

SweepReport theorem_sweep(const SweepConfig& config);

}  // namespace rpent
