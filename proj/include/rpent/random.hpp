#pragma once

#include <cstdint>
#include <random>

#include "rpent/types.hpp"

namespace rpent {

using Rng = std::mt19937_64;

// Independent stream for one trial. Any schedule of trials reproduces the
// same draws as long as (master_seed, trial_index) is the same.
Rng trial_stream(std::uint64_t master_seed, std::uint64_t trial_index);

// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
// of diag(R) moved into Q.
CMatrix haar_unitary(Eigen::Index dim, Rng& rng);

// Dirichlet(concentration, ..., concentration) sample. concentration = 1 is
// the flat measure on the simplex.
RVector dirichlet(Eigen::Index dim, double concentration, Rng& rng);

// Full-rank density matrix U diag(p) U^dagger with Dirichlet spectrum and
// Haar eigenvectors. Draws are repeated until min(p) >= min_eigenvalue; the
// spectrum is never clamped.
CMatrix random_density_matrix(Eigen::Index dim, Rng& rng, double concentration = 1.0,
                              double min_eigenvalue = 1e-6);

CMatrix ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng);

}  // namespace rpent
