#pragma once

// Finite-dimensional modular theory for a faithful state on H1 purified into
// H1 (x) H2, with H2 a copy of H1.
//
// Vectors on H1 (x) H2 use the standard product basis with flat index
// i * d + j (i on H1, j on H2). Internally they are handled as d x d
// coefficient matrices X(i, j).

#include <optional>
#include <random>

#include "rpent/random.hpp"
#include "rpent/types.hpp"

namespace rpent {

// Hermitian, unit trace, invertible. Construction validates and caches the
// spectral decomposition (eigenvalues descending, each eigenvector's first
// nonzero component real and positive).
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix entries);

  Eigen::Index dim() const { return entries_.rows(); }
  const CMatrix& entries() const { return entries_; }
  const RVector& eigenvalues() const { return eigenvalues_; }
  const CMatrix& eigenvectors() const { return eigenvectors_; }

 private:
  CMatrix entries_;
  RVector eigenvalues_;
  CMatrix eigenvectors_;
};

// Canonical eigendecomposition of a Hermitian matrix: eigenvalues descending,
// eigenvectors phase-fixed. Throws InvalidInput if not Hermitian.
std::pair<RVector, CMatrix> canonical_eigensystem(const CMatrix& hermitian);

// |0> = sum_p sqrt(lambda_p) |p> (x) |p~>.
struct PurifiedState {
  RVector schmidt_values;  // lambda_p, descending, sum 1
  CMatrix eigenbasis;      // columns |p> in H1
  CMatrix partner_basis;   // columns |p~> in H2; identity is the canonical copy

  Eigen::Index dim() const { return schmidt_values.size(); }
  // Coefficient matrix X(i, j) = <i j|0>.
  CMatrix coefficients() const;
  // Flat d^2 vector in the standard product basis.
  CVector vector() const;
  // tr_{H2} |0><0|.
  CMatrix reduced_first() const;
};

PurifiedState purify(const DensityMatrix& rho);
// Same Schmidt data with a caller-chosen orthonormal basis for H2.
PurifiedState purify(const DensityMatrix& rho, const CMatrix& partner_basis);

// Delta = sum lambda_p / lambda_q |p q~><p q~|, and J = sum |p q~><q p~| *.
// Both are stored in the {|p q~>} frame; J acts there as transposition of
// the coefficient matrix followed by complex conjugation.
class ModularData {
 public:
  explicit ModularData(const PurifiedState& psi);

  Eigen::Index dim() const { return ratios_.rows(); }
  // ratios(p, q) = lambda_p / lambda_q.
  const RMatrix& ratios() const { return ratios_; }

  // Delta^power applied to a vector on H1 (x) H2.
  CVector apply_delta(const CVector& x, double power = 1.0) const;
  // Antilinear conjugation J.
  CVector apply_j(const CVector& x) const;
  // J Delta^{1/2}, the Tomita operator.
  CVector apply_tomita(const CVector& x) const;

  // Dense d^2 x d^2 matrix of Delta^power in the standard basis.
  CMatrix delta_matrix(double power = 1.0) const;
  // All d^2 eigenvalues of Delta, ascending.
  RVector delta_spectrum() const;

  // Coordinates in the {|p q~>} frame and back.
  CMatrix to_frame(const CVector& x) const;
  CVector from_frame(const CMatrix& c) const;

 private:
  RMatrix ratios_;
  CMatrix eigenbasis_;
  CMatrix partner_basis_;
};

ModularData modular_operators(const PurifiedState& psi);

// (O (x) 1) x for an operator O on H1.
CVector apply_first(const CMatrix& op, const CVector& x);
// (1 (x) O) x for an operator O on H2.
CVector apply_second(const CMatrix& op, const CVector& x);

struct TomitaReport {
  int trials = 0;
  double max_residual = 0.0;
  bool passed = true;
  double tolerance = 0.0;
  // Operator with the largest residual.
  std::optional<CMatrix> worst_operator;
};

// || J Delta^{1/2} (O (x) 1)|0> - (O^dagger (x) 1)|0> || for one operator.
double tomita_residual(const PurifiedState& psi, const ModularData& md, const CMatrix& op);

// Runs tomita_residual on `trials` Ginibre operators scaled to unit Frobenius
// norm.
TomitaReport check_tomita_relation(const PurifiedState& psi, const ModularData& md, int trials,
                                   Rng& rng, double tolerance = 1e-10);

// J (O (x) 1) J as a full operator on H1 (x) H2.
CMatrix reflect_operator_full(const ModularData& md, const CMatrix& op);
// The H2 factor X of J (O (x) 1) J = 1 (x) X. Throws NumericalError if the
// reflected operator is not supported on H2 to 1e-9.
CMatrix reflect_operator(const ModularData& md, const CMatrix& op);

// <0| O (J O J) |0>, evaluated with the reflected operator.
Complex reflection_value(const PurifiedState& psi, const ModularData& md, const CMatrix& op);
// <0| O Delta^{1/2} O^dagger |0>, the same scalar through the modular operator.
Complex reflection_value_via_delta(const PurifiedState& psi, const ModularData& md,
                                   const CMatrix& op);

}  // namespace rpent
