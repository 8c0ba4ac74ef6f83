#include "rpent/random.hpp"

namespace rpent {

Rng trial_stream(std::uint64_t master_seed, std::uint64_t trial_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(trial_index),
                    static_cast<std::uint32_t>(trial_index >> 32)};
  return Rng(seq);
}

CMatrix ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix z(rows, cols);
  // Column-major fill order is part of the reproducibility contract.
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(i, j) = Complex(re, im);
    }
  }
  return z;
}

CMatrix haar_unitary(Eigen::Index dim, Rng& rng) {
  if (dim < 1) throw InvalidInput("haar_unitary: dimension must be positive");
  const CMatrix z = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const double mag = std::abs(r(j, j));
    const Complex phase = mag > 0.0 ? r(j, j) / mag : Complex(1.0, 0.0);
    q.col(j) *= phase;
  }
  return q;
}

RVector dirichlet(Eigen::Index dim, double concentration, Rng& rng) {
  if (dim < 1) throw InvalidInput("dirichlet: dimension must be positive");
  if (!(concentration > 0.0)) throw InvalidInput("dirichlet: concentration must be positive");
  std::gamma_distribution<double> gamma(concentration, 1.0);
  RVector p(dim);
  double total = 0.0;
  do {
    for (Eigen::Index i = 0; i < dim; ++i) p(i) = gamma(rng);
    total = p.sum();
  } while (!(total > 0.0));
  return p / total;
}

CMatrix random_density_matrix(Eigen::Index dim, Rng& rng, double concentration,
                              double min_eigenvalue) {
  RVector p;
  do {
    p = dirichlet(dim, concentration, rng);
  } while (p.minCoeff() < min_eigenvalue);
  const CMatrix u = haar_unitary(dim, rng);
  CMatrix rho = u * p.cast<Complex>().asDiagonal() * u.adjoint();
  return 0.5 * (rho + rho.adjoint());
}

}  // namespace rpent
