#include "rpent/reflected.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <limits>
#include <sstream>

namespace rpent {

void SubsystemSplit::validate() const {
  if (dim_a < 1 || dim_b < 1) throw InvalidInput("split '" + label + "': dimensions must be positive");
  if (beta.rows() != dim() || beta.cols() != dim()) {
    throw InvalidInput("split '" + label + "': beta must be (d_A d_B) x (d_A d_B)");
  }
  const double err =
      (beta * beta.adjoint() - CMatrix::Identity(dim(), dim())).cwiseAbs().maxCoeff();
  if (err > 1e-10) {
    std::ostringstream msg;
    msg << "split '" << label << "': beta is not unitary (residual " << err << ")";
    throw InvalidInput(msg.str());
  }
}

CMatrix SubsystemSplit::block(Eigen::Index p) const {
  CMatrix out(dim_a, dim_b);
  for (Eigen::Index k = 0; k < dim_a; ++k) {
    for (Eigen::Index l = 0; l < dim_b; ++l) out(k, l) = beta(p, k * dim_b + l);
  }
  return out;
}

SubsystemSplit identity_split(Eigen::Index dim_a, Eigen::Index dim_b, std::string label) {
  return SubsystemSplit{std::move(label), dim_a, dim_b, CMatrix::Identity(dim_a * dim_b, dim_a * dim_b)};
}

SubsystemSplit haar_split(Eigen::Index dim_a, Eigen::Index dim_b, Rng& rng, std::string label) {
  return SubsystemSplit{std::move(label), dim_a, dim_b, haar_unitary(dim_a * dim_b, rng)};
}

namespace {

void check_compatible(const PurifiedState& psi, const SubsystemSplit& split) {
  split.validate();
  if (split.dim() != psi.dim()) {
    std::ostringstream msg;
    msg << "split '" << split.label << "' has dimension " << split.dim() << " but the state has "
        << psi.dim();
    throw InvalidInput(msg.str());
  }
}

}  // namespace

TwistOperatorSet twist_operators(const PurifiedState& psi, const SubsystemSplit& split) {
  check_compatible(psi, split);
  const Eigen::Index d = psi.dim();
  std::vector<CMatrix> blocks;
  blocks.reserve(static_cast<std::size_t>(d));
  for (Eigen::Index p = 0; p < d; ++p) {
    blocks.push_back(std::pow(psi.schmidt_values(p), 0.25) * split.block(p));
  }
  TwistOperatorSet set{d, split.dim_a, {}};
  set.operators.reserve(static_cast<std::size_t>(d * d));
  // O^{pq} = (lambda_p lambda_q)^{1/4} sum_l beta^p_{kl} conj(beta^q_{k'l}) |k><k'|
  for (Eigen::Index p = 0; p < d; ++p) {
    for (Eigen::Index q = 0; q < d; ++q) {
      set.operators.push_back(blocks[static_cast<std::size_t>(p)] *
                              blocks[static_cast<std::size_t>(q)].adjoint());
    }
  }
  return set;
}

ReflectedDensity reflected_density(const TwistOperatorSet& ops_i, const TwistOperatorSet& ops_j,
                                   int i, int j) {
  if (ops_i.dim != ops_j.dim) throw InvalidInput("reflected_density: twist sets from different states");
  const Eigen::Index pairs = ops_i.dim * ops_i.dim;
  const Eigen::Index da = ops_i.dim_a;
  const Eigen::Index db = ops_j.dim_a;

  // The sum over (p, q) of Kronecker products is one matrix product:
  // C[(k_i k_i'), (k_j k_j')] = sum_pq O_i^{pq}[k_i, k_i'] Obar_j^{pq}[k_j, k_j'].
  CMatrix left(da * da, pairs);
  CMatrix right(pairs, db * db);
  for (Eigen::Index pq = 0; pq < pairs; ++pq) {
    const CMatrix& oi = ops_i.operators[static_cast<std::size_t>(pq)];
    const CMatrix& oj = ops_j.operators[static_cast<std::size_t>(pq)];
    for (Eigen::Index k = 0; k < da; ++k) {
      for (Eigen::Index kp = 0; kp < da; ++kp) left(k * da + kp, pq) = oi(k, kp);
    }
    for (Eigen::Index k = 0; k < db; ++k) {
      for (Eigen::Index kp = 0; kp < db; ++kp) right(pq, k * db + kp) = std::conj(oj(k, kp));
    }
  }
  const CMatrix c = left * right;

  CMatrix rho(da * db, da * db);
  for (Eigen::Index ki = 0; ki < da; ++ki) {
    for (Eigen::Index kip = 0; kip < da; ++kip) {
      for (Eigen::Index kj = 0; kj < db; ++kj) {
        for (Eigen::Index kjp = 0; kjp < db; ++kjp) {
          rho(ki * db + kj, kip * db + kjp) = c(ki * da + kip, kj * db + kjp);
        }
      }
    }
  }
  return ReflectedDensity{std::move(rho), i, j};
}

ReflectedDensity reflected_density(const PurifiedState& psi, const SubsystemSplit& split_i,
                                   const SubsystemSplit& split_j, int i, int j) {
  return reflected_density(twist_operators(psi, split_i), twist_operators(psi, split_j), i, j);
}

ReflectedDensity brute_force_reflected(const PurifiedState& psi, const SubsystemSplit& split_i,
                                       const SubsystemSplit& split_j, int i, int j) {
  check_compatible(psi, split_i);
  check_compatible(psi, split_j);
  const Eigen::Index d = psi.dim();

  // Columns |k l> of H1 and |k l (underlined)> of H2 in standard coordinates.
  const CMatrix first_basis = psi.eigenbasis * split_i.beta.conjugate();
  const CMatrix second_basis = psi.partner_basis * split_j.beta;
  const CMatrix mixed = Eigen::kroneckerProduct(first_basis, second_basis).eval();
  const CVector amplitudes = mixed.adjoint() * psi.vector();
  const CMatrix projector = amplitudes * amplitudes.adjoint();

  const Eigen::Index ai = split_i.dim_a, bi = split_i.dim_b;
  const Eigen::Index aj = split_j.dim_a, bj = split_j.dim_b;
  auto flat = [&](Eigen::Index ki, Eigen::Index li, Eigen::Index kj, Eigen::Index lj) {
    return (ki * bi + li) * d + (kj * bj + lj);
  };
  CMatrix rho = CMatrix::Zero(ai * aj, ai * aj);
  for (Eigen::Index ki = 0; ki < ai; ++ki) {
    for (Eigen::Index kj = 0; kj < aj; ++kj) {
      for (Eigen::Index kip = 0; kip < ai; ++kip) {
        for (Eigen::Index kjp = 0; kjp < aj; ++kjp) {
          Complex sum(0.0, 0.0);
          for (Eigen::Index li = 0; li < bi; ++li) {
            for (Eigen::Index lj = 0; lj < bj; ++lj) {
              sum += projector(flat(ki, li, kj, lj), flat(kip, li, kjp, lj));
            }
          }
          rho(ki * aj + kj, kip * aj + kjp) = sum;
        }
      }
    }
  }
  return ReflectedDensity{std::move(rho), i, j};
}

void ReflectedDensity::validate() const {
  const double asym = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol::kHermiticity) {
    std::ostringstream msg;
    msg << "reflected density (" << source_i << "," << source_j << ") not Hermitian: " << asym;
    throw NumericalError(msg.str());
  }
  const double trace_err = std::abs(rho.trace() - Complex(1.0, 0.0));
  if (trace_err > tol::kTrace) {
    std::ostringstream msg;
    msg << "reflected density (" << source_i << "," << source_j << ") trace error " << trace_err;
    throw NumericalError(msg.str());
  }
  density_spectrum(rho);
}

RVector density_spectrum(const CMatrix& rho) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) throw InvalidInput("expected a square matrix");
  const double asym = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol::kHermiticity) throw InvalidInput("density matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  RVector values = solver.eigenvalues();
  if (values(0) < -tol::kNegativeEigenvalue) {
    std::ostringstream msg;
    msg << "negative eigenvalue " << values(0) << " in a density matrix";
    throw NumericalError(msg.str());
  }
  values = values.cwiseMax(0.0);
  return values;
}

double log_trace_power(const RVector& spectrum, double n) {
  double top = -std::numeric_limits<double>::infinity();
  for (double v : spectrum) {
    if (v < -tol::kNegativeEigenvalue) throw NumericalError("negative eigenvalue in trace power");
    if (v > 0.0) top = std::max(top, n * std::log(v));
  }
  if (!std::isfinite(top)) throw NumericalError("trace power is not positive");
  double acc = 0.0;
  for (double v : spectrum) {
    if (v > 0.0) acc += std::exp(n * std::log(v) - top);
  }
  return top + std::log(acc);
}

double von_neumann_from_spectrum(const RVector& spectrum) {
  double s = 0.0;
  for (double v : spectrum) {
    if (v < -tol::kNegativeEigenvalue) throw NumericalError("negative eigenvalue in entropy");
    if (v > 0.0) s -= v * std::log(v);
  }
  return s;
}

double renyi_from_spectrum(const RVector& spectrum, double n) {
  if (!(n > 0.0)) throw InvalidInput("Renyi index must be positive");
  if (n == 1.0) return von_neumann_from_spectrum(spectrum);
  return -log_trace_power(spectrum, n) / (n - 1.0);
}

double renyi_entropy(const CMatrix& rho, int n) {
  if (n < 1) throw InvalidInput("Renyi index must be a positive integer");
  return renyi_from_spectrum(density_spectrum(rho), static_cast<double>(n));
}

double renyi_entropy(const ReflectedDensity& rho, int n) { return renyi_entropy(rho.rho, n); }
double renyi_entropy(const DensityMatrix& rho, int n) {
  if (n < 1) throw InvalidInput("Renyi index must be a positive integer");
  return renyi_from_spectrum(rho.eigenvalues(), static_cast<double>(n));
}

double von_neumann(const CMatrix& rho) { return von_neumann_from_spectrum(density_spectrum(rho)); }
double von_neumann(const ReflectedDensity& rho) { return von_neumann(rho.rho); }
double von_neumann(const DensityMatrix& rho) { return von_neumann_from_spectrum(rho.eigenvalues()); }

CMatrix reduced_subsystem(const PurifiedState& psi, const SubsystemSplit& split) {
  check_compatible(psi, split);
  CMatrix out = CMatrix::Zero(split.dim_a, split.dim_a);
  for (Eigen::Index p = 0; p < psi.dim(); ++p) {
    const CMatrix b = split.block(p);
    out += psi.schmidt_values(p) * (b * b.adjoint());
  }
  return out;
}

}  // namespace rpent
