#include "rpent/nnls.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace rpent {

namespace {

RVector solve_passive(const RMatrix& a, const RVector& b, const std::vector<bool>& passive) {
  std::vector<Eigen::Index> cols;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    if (passive[static_cast<std::size_t>(j)]) cols.push_back(j);
  }
  RVector z = RVector::Zero(a.cols());
  if (cols.empty()) return z;
  RMatrix sub(a.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = a.col(cols[k]);
  const RVector zs = sub.colPivHouseholderQr().solve(b);
  for (std::size_t k = 0; k < cols.size(); ++k) z(cols[k]) = zs(static_cast<Eigen::Index>(k));
  return z;
}

}  // namespace

NnlsResult nnls(const RMatrix& a_in, const RVector& b_in, double ridge, int max_iterations) {
  if (a_in.rows() != b_in.size()) throw InvalidInput("nnls: row count mismatch");
  if (ridge < 0.0) throw InvalidInput("nnls: ridge must be nonnegative");
  RMatrix a = a_in;
  RVector b = b_in;
  if (ridge > 0.0) {
    const Eigen::Index n = a_in.cols();
    a.conservativeResize(a_in.rows() + n, n);
    a.bottomRows(n) = std::sqrt(ridge) * RMatrix::Identity(n, n);
    b.conservativeResize(b_in.size() + n);
    b.tail(n).setZero();
  }

  const Eigen::Index n = a.cols();
  const int limit = max_iterations > 0 ? max_iterations : static_cast<int>(3 * n + 50);
  const double tol = 10.0 * std::numeric_limits<double>::epsilon() *
                     a.cwiseAbs().colwise().sum().maxCoeff() * static_cast<double>(std::max(a.rows(), n));

  NnlsResult out;
  RVector w = RVector::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  RVector grad = a.transpose() * (b - a * w);

  int iter = 0;
  while (true) {
    Eigen::Index best = -1;
    double best_grad = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && grad(j) > best_grad) {
        best_grad = grad(j);
        best = j;
      }
    }
    if (best < 0) break;
    if (++iter > limit) {
      out.converged = false;
      break;
    }
    passive[static_cast<std::size_t>(best)] = true;

    while (true) {
      RVector z = solve_passive(a, b, passive);
      bool feasible = true;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) feasible = false;
      }
      if (feasible) {
        w = z;
        break;
      }
      double alpha = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) {
          alpha = std::min(alpha, w(j) / (w(j) - z(j)));
        }
      }
      w += alpha * (z - w);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && w(j) <= tol) {
          passive[static_cast<std::size_t>(j)] = false;
          w(j) = 0.0;
        }
      }
    }
    grad = a.transpose() * (b - a * w);
  }
  out.solution = w;
  out.residual_norm = (a_in * w - b_in).norm();
  out.iterations = iter;
  return out;
}

}  // namespace rpent
