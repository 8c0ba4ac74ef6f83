#pragma once

#include "rpent/types.hpp"

namespace rpent {

struct NnlsResult {
  RVector solution;
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = true;
};

// min ||A w - b||_2 subject to w >= 0, by the Lawson-Hanson active-set
// method. An optional ridge term adds ||sqrt(ridge) w||^2 to the objective.
NnlsResult nnls(const RMatrix& a, const RVector& b, double ridge = 0.0, int max_iterations = -1);

}  // namespace rpent
