#pragma once

// Reduced density matrices of a subsystem A_i of H1 joined with the
// reflected image of a subsystem A_j, living in H2.

#include <string>
#include <vector>

#include "rpent/modular.hpp"

namespace rpent {

// H1 = H_A (x) H_B through the unitary beta: |p> = sum_{k,l} beta(p, k*dim_b + l) |k l>.
struct SubsystemSplit {
  std::string label;
  Eigen::Index dim_a = 0;
  Eigen::Index dim_b = 0;
  CMatrix beta;

  Eigen::Index dim() const { return dim_a * dim_b; }
  // Throws InvalidInput on inconsistent dimensions or a non-unitary beta.
  void validate() const;
  // The d_A x d_B block beta(p, (k, l)).
  CMatrix block(Eigen::Index p) const;
};

SubsystemSplit identity_split(Eigen::Index dim_a, Eigen::Index dim_b, std::string label = "");
SubsystemSplit haar_split(Eigen::Index dim_a, Eigen::Index dim_b, Rng& rng, std::string label = "");

// O^{pq}_A for all (p, q), stored at index p * d + q.
struct TwistOperatorSet {
  Eigen::Index dim = 0;    // d
  Eigen::Index dim_a = 0;  // d_A
  std::vector<CMatrix> operators;

  const CMatrix& at(Eigen::Index p, Eigen::Index q) const {
    return operators[static_cast<std::size_t>(p * dim + q)];
  }
  // Obar^{pq} = J O^{pq} J written in the |k> basis of the reflected factor.
  CMatrix reflected(Eigen::Index p, Eigen::Index q) const { return at(p, q).conjugate(); }
};

TwistOperatorSet twist_operators(const PurifiedState& psi, const SubsystemSplit& split);

// rho_{A_i Abar_j} on H_{A_i} (x) H_{Abar_j}, flat index k_i * d_{A_j} + k_j.
struct ReflectedDensity {
  CMatrix rho;
  int source_i = 0;
  int source_j = 0;

  // Throws NumericalError unless Hermitian, PSD (>= -1e-12) and unit trace.
  void validate() const;
};

// sum_{p,q} O^{pq}_{A_i} (x) Obar^{pq}_{A_j}.
ReflectedDensity reflected_density(const PurifiedState& psi, const SubsystemSplit& split_i,
                                   const SubsystemSplit& split_j, int i = 0, int j = 0);
ReflectedDensity reflected_density(const TwistOperatorSet& ops_i, const TwistOperatorSet& ops_j,
                                   int i = 0, int j = 0);

// Independent construction: |0> is expanded in the mixed product basis
// |k_i l_i> (x) |k_j l_j (underlined)>, |0><0| is formed explicitly and the
// B_i, Bbar_j indices are summed out.
ReflectedDensity brute_force_reflected(const PurifiedState& psi, const SubsystemSplit& split_i,
                                       const SubsystemSplit& split_j, int i = 0, int j = 0);

// Eigenvalues of a Hermitian PSD matrix, ascending. Eigenvalues in
// [-1e-12, 0) are set to zero; anything more negative is a NumericalError.
RVector density_spectrum(const CMatrix& rho);

// log tr rho^n from a spectrum, by log-sum-exp over n log(lambda).
double log_trace_power(const RVector& spectrum, double n);

// -log(tr rho^n) / (n - 1); n == 1 gives the von Neumann entropy.
double renyi_from_spectrum(const RVector& spectrum, double n);
double von_neumann_from_spectrum(const RVector& spectrum);

double renyi_entropy(const CMatrix& rho, int n);
double renyi_entropy(const ReflectedDensity& rho, int n);
double renyi_entropy(const DensityMatrix& rho, int n);

double von_neumann(const CMatrix& rho);
double von_neumann(const ReflectedDensity& rho);
double von_neumann(const DensityMatrix& rho);

inline double mutual_information(double s_a, double s_b, double s_ab) { return s_a + s_b - s_ab; }

// Reduced state of a single subsystem A of H1 (partial trace over B).
CMatrix reduced_subsystem(const PurifiedState& psi, const SubsystemSplit& split);

}  // namespace rpent
