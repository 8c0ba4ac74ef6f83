#include "rpent/modular.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace rpent {

namespace {

CMatrix as_matrix(const CVector& x, Eigen::Index d) {
  if (x.size() != d * d) throw InvalidInput("vector length does not match d^2");
  // Flat index i*d + j is row-major in (i, j).
  return Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      x.data(), d, d);
}

CVector as_vector(const CMatrix& m) {
  CVector x(m.size());
  Eigen::Map<Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      x.data(), m.rows(), m.cols()) = m;
  return x;
}

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

std::pair<RVector, CMatrix> canonical_eigensystem(const CMatrix& hermitian) {
  if (hermitian.rows() != hermitian.cols() || hermitian.rows() == 0) {
    throw InvalidInput("expected a nonempty square matrix");
  }
  const double asym = max_abs(hermitian - hermitian.adjoint());
  if (asym > tol::kHermiticity) {
    std::ostringstream msg;
    msg << "matrix is not Hermitian (max |A - A^dagger| = " << asym << ")";
    throw InvalidInput(msg.str());
  }
  const CMatrix sym = 0.5 * (hermitian + hermitian.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
  if (solver.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");

  const Eigen::Index d = sym.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  // Descending; ties keep the solver's order.
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return solver.eigenvalues()(a) > solver.eigenvalues()(b);
  });

  RVector values(d);
  CMatrix vectors(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    values(k) = solver.eigenvalues()(order[static_cast<std::size_t>(k)]);
    CVector v = solver.eigenvectors().col(order[static_cast<std::size_t>(k)]);
    for (Eigen::Index i = 0; i < d; ++i) {
      const double mag = std::abs(v(i));
      if (mag > 1e-10) {
        v *= std::conj(v(i)) / mag;
        v(i) = Complex(mag, 0.0);
        break;
      }
    }
    vectors.col(k) = v;
  }
  return {values, vectors};
}

DensityMatrix::DensityMatrix(CMatrix entries) : entries_(std::move(entries)) {
  auto [values, vectors] = canonical_eigensystem(entries_);
  const Complex trace = entries_.trace();
  if (std::abs(trace - Complex(1.0, 0.0)) > tol::kTrace) {
    std::ostringstream msg;
    msg << "density matrix trace " << trace.real() << " differs from 1";
    throw InvalidInput(msg.str());
  }
  if (values(values.size() - 1) < tol::kRankFloor) {
    std::ostringstream msg;
    msg << "state not invertible (smallest eigenvalue " << values(values.size() - 1) << ")";
    throw InvalidInput(msg.str());
  }
  eigenvalues_ = std::move(values);
  eigenvectors_ = std::move(vectors);
}

CMatrix PurifiedState::coefficients() const {
  // X = sum_p sqrt(lambda_p) |p> |p~>^T  in coordinates.
  const CVector roots = schmidt_values.cwiseSqrt().cast<Complex>();
  return eigenbasis * roots.asDiagonal() * partner_basis.transpose();
}

CVector PurifiedState::vector() const { return as_vector(coefficients()); }

CMatrix PurifiedState::reduced_first() const {
  const CMatrix x = coefficients();
  return x * x.adjoint();
}

PurifiedState purify(const DensityMatrix& rho) {
  return purify(rho, CMatrix::Identity(rho.dim(), rho.dim()));
}

PurifiedState purify(const DensityMatrix& rho, const CMatrix& partner_basis) {
  const Eigen::Index d = rho.dim();
  if (partner_basis.rows() != d || partner_basis.cols() != d) {
    throw InvalidInput("purify: partner basis must be d x d");
  }
  if (max_abs(partner_basis.adjoint() * partner_basis - CMatrix::Identity(d, d)) > 1e-10) {
    throw InvalidInput("purify: partner basis is not orthonormal");
  }
  return PurifiedState{rho.eigenvalues(), rho.eigenvectors(), partner_basis};
}

ModularData::ModularData(const PurifiedState& psi)
    : ratios_(psi.dim(), psi.dim()),
      eigenbasis_(psi.eigenbasis),
      partner_basis_(psi.partner_basis) {
  const RVector& lam = psi.schmidt_values;
  if (lam.minCoeff() < tol::kRankFloor) throw InvalidInput("state not invertible");
  for (Eigen::Index p = 0; p < lam.size(); ++p) {
    for (Eigen::Index q = 0; q < lam.size(); ++q) ratios_(p, q) = lam(p) / lam(q);
  }
}

CMatrix ModularData::to_frame(const CVector& x) const {
  return eigenbasis_.adjoint() * as_matrix(x, dim()) * partner_basis_.conjugate();
}

CVector ModularData::from_frame(const CMatrix& c) const {
  return as_vector(eigenbasis_ * c * partner_basis_.transpose());
}

CVector ModularData::apply_delta(const CVector& x, double power) const {
  CMatrix c = to_frame(x);
  c.array() *= ratios_.array().pow(power).cast<Complex>();
  return from_frame(c);
}

CVector ModularData::apply_j(const CVector& x) const {
  // Components c(p, q) -> conj(c(q, p)).
  return from_frame(to_frame(x).adjoint());
}

CVector ModularData::apply_tomita(const CVector& x) const { return apply_j(apply_delta(x, 0.5)); }

CMatrix ModularData::delta_matrix(double power) const {
  const Eigen::Index n = dim() * dim();
  CMatrix out(n, n);
  for (Eigen::Index k = 0; k < n; ++k) out.col(k) = apply_delta(CVector::Unit(n, k), power);
  return out;
}

RVector ModularData::delta_spectrum() const {
  RVector values = Eigen::Map<const RVector>(ratios_.data(), ratios_.size());
  std::sort(values.data(), values.data() + values.size());
  return values;
}

ModularData modular_operators(const PurifiedState& psi) { return ModularData(psi); }

CVector apply_first(const CMatrix& op, const CVector& x) {
  return as_vector(op * as_matrix(x, op.rows()));
}

CVector apply_second(const CMatrix& op, const CVector& x) {
  return as_vector(as_matrix(x, op.rows()) * op.transpose());
}

double tomita_residual(const PurifiedState& psi, const ModularData& md, const CMatrix& op) {
  const CVector vac = psi.vector();
  const CVector lhs = md.apply_tomita(apply_first(op, vac));
  const CVector rhs = apply_first(op.adjoint(), vac);
  return (lhs - rhs).norm();
}

TomitaReport check_tomita_relation(const PurifiedState& psi, const ModularData& md, int trials,
                                   Rng& rng, double tolerance) {
  if (trials < 0) throw InvalidInput("check_tomita_relation: trials must be nonnegative");
  TomitaReport report;
  report.trials = trials;
  report.tolerance = tolerance;
  for (int t = 0; t < trials; ++t) {
    CMatrix op = ginibre(psi.dim(), psi.dim(), rng);
    op /= op.norm();
    const double r = tomita_residual(psi, md, op);
    if (!report.worst_operator || r > report.max_residual) {
      report.max_residual = r;
      report.worst_operator = op;
    }
  }
  report.passed = report.max_residual <= tolerance;
  return report;
}

CMatrix reflect_operator_full(const ModularData& md, const CMatrix& op) {
  if (op.rows() != md.dim() || op.cols() != md.dim()) {
    throw InvalidInput("reflect_operator: operator must act on the first factor (d x d)");
  }
  // J O J is linear, so its matrix is built column by column.
  const Eigen::Index n = md.dim() * md.dim();
  CMatrix out(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.col(k) = md.apply_j(apply_first(op, md.apply_j(CVector::Unit(n, k))));
  }
  return out;
}

CMatrix reflect_operator(const ModularData& md, const CMatrix& op) {
  const Eigen::Index d = md.dim();
  const CMatrix full = reflect_operator_full(md, op);
  CMatrix second = CMatrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) second += full.block(i * d, i * d, d, d);
  second /= static_cast<double>(d);
  CMatrix embedded(d * d, d * d);
  embedded.setZero();
  for (Eigen::Index i = 0; i < d; ++i) embedded.block(i * d, i * d, d, d) = second;
  const double leak = max_abs(full - embedded);
  if (leak > 1e-9 * std::max(1.0, max_abs(full))) {
    std::ostringstream msg;
    msg << "reflected operator is not supported on the second factor (residual " << leak << ")";
    throw NumericalError(msg.str());
  }
  return second;
}

Complex reflection_value(const PurifiedState& psi, const ModularData& md, const CMatrix& op) {
  const CVector vac = psi.vector();
  const CMatrix reflected = reflect_operator(md, op);
  return vac.dot(apply_first(op, apply_second(reflected, vac)));
}

Complex reflection_value_via_delta(const PurifiedState& psi, const ModularData& md,
                                   const CMatrix& op) {
  const CVector vac = psi.vector();
  const CVector v = apply_first(op.adjoint(), vac);
  return v.dot(md.apply_delta(v, 0.5));
}

}  // namespace rpent
