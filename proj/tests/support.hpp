#pragma once

#include <cmath>

#include "rpent/positivity.hpp"

namespace testing_support {

using namespace rpent;

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// tr over the second factor of a (d1 d2) x (d1 d2) operator, by index sums.
inline CMatrix trace_second(const CMatrix& m, Eigen::Index d1, Eigen::Index d2) {
  CMatrix out = CMatrix::Zero(d1, d1);
  for (Eigen::Index i = 0; i < d1; ++i)
    for (Eigen::Index j = 0; j < d1; ++j)
      for (Eigen::Index k = 0; k < d2; ++k) out(i, j) += m(i * d2 + k, j * d2 + k);
  return out;
}

inline CMatrix trace_first(const CMatrix& m, Eigen::Index d1, Eigen::Index d2) {
  CMatrix out = CMatrix::Zero(d2, d2);
  for (Eigen::Index i = 0; i < d2; ++i)
    for (Eigen::Index j = 0; j < d2; ++j)
      for (Eigen::Index k = 0; k < d1; ++k) out(i, j) += m(k * d2 + i, k * d2 + j);
  return out;
}

inline DensityMatrix random_state(Eigen::Index d, Rng& rng) {
  return DensityMatrix(random_density_matrix(d, rng));
}

inline CMatrix diag(std::initializer_list<double> v) {
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) m(i, i) = x, ++i;
  return m;
}

inline double frob(const CMatrix& m) { return m.norm(); }

// Eigenvalues by a route independent of canonical_eigensystem.
inline RVector eigenvalues_of(const CMatrix& h) {
  Eigen::ComplexEigenSolver<CMatrix> es(h);
  RVector v = es.eigenvalues().real();
  std::sort(v.data(), v.data() + v.size());
  return v;
}

inline double renyi_oracle(const CMatrix& rho, int n) {
  CMatrix p = CMatrix::Identity(rho.rows(), rho.cols());
  for (int k = 0; k < n; ++k) p = p * rho;
  return -std::log(p.trace().real()) / (n - 1);
}

// Expands |0> in A_i B_i (x) Abar_j Bbar_j and sums out B_i, Bbar_j.
inline CMatrix reflected_oracle(const PurifiedState& psi, const SubsystemSplit& si, const SubsystemSplit& sj) {
  const Eigen::Index d = psi.dim();
  const CMatrix v1 = si.beta.transpose() * psi.eigenbasis.adjoint();
  const CMatrix v2 = sj.beta.adjoint() * psi.partner_basis.adjoint();
  const CVector w = kron(v1, v2) * psi.vector();
  const Eigen::Index a1 = si.dim_a, b1 = si.dim_b, a2 = sj.dim_a, b2 = sj.dim_b;
  CMatrix rho = CMatrix::Zero(a1 * a2, a1 * a2);
  auto amp = [&](Eigen::Index k1, Eigen::Index l1, Eigen::Index k2, Eigen::Index l2) {
    return w((k1 * b1 + l1) * d + (k2 * b2 + l2));
  };
  for (Eigen::Index k1 = 0; k1 < a1; ++k1)
    for (Eigen::Index k2 = 0; k2 < a2; ++k2)
      for (Eigen::Index m1 = 0; m1 < a1; ++m1)
        for (Eigen::Index m2 = 0; m2 < a2; ++m2) {
          Complex acc = 0.0;
          for (Eigen::Index l1 = 0; l1 < b1; ++l1)
            for (Eigen::Index l2 = 0; l2 < b2; ++l2) acc += amp(k1, l1, k2, l2) * std::conj(amp(m1, l1, m2, l2));
          rho(k1 * a2 + k2, m1 * a2 + m2) = acc;
        }
  return rho;
}

}  // namespace testing_support
