#include <doctest.h>

#include "support.hpp"

using namespace rpent;

TEST_CASE("trial streams are reproducible and distinct") {
  Rng a = trial_stream(42, 7);
  Rng b = trial_stream(42, 7);
  Rng c = trial_stream(42, 8);
  Rng d = trial_stream(43, 7);
  const auto x = a();
  CHECK(x == b());
  CHECK(x != c());
  CHECK(x != d());
}

TEST_CASE("Haar unitaries are unitary") {
  Rng rng = trial_stream(1, 0);
  for (Eigen::Index n : {1, 2, 5, 12}) {
    const CMatrix u = haar_unitary(n, rng);
    CHECK((u.adjoint() * u - CMatrix::Identity(n, n)).norm() < 1e-13);
  }
}

TEST_CASE("Haar phases are unbiased") {
  // E|U_00|^2 = 1/n and E U_00 = 0 for Haar measure.
  Rng rng = trial_stream(2, 0);
  const int samples = 4000;
  double mean_abs2 = 0.0;
  Complex mean = 0.0;
  for (int k = 0; k < samples; ++k) {
    const CMatrix u = haar_unitary(3, rng);
    mean_abs2 += std::norm(u(0, 0)) / samples;
    mean += u(0, 0) / static_cast<double>(samples);
  }
  CHECK(mean_abs2 == doctest::Approx(1.0 / 3.0).epsilon(0.05));
  CHECK(std::abs(mean) < 0.05);
}

TEST_CASE("Dirichlet and random density matrices") {
  Rng rng = trial_stream(3, 0);
  for (double alpha : {0.3, 1.0, 5.0}) {
    const RVector p = dirichlet(6, alpha, rng);
    CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK((p.array() >= 0.0).all());
  }
  for (int k = 0; k < 50; ++k) {
    const CMatrix rho = random_density_matrix(4, rng, 0.3, 1e-6);
    CHECK((rho - rho.adjoint()).norm() < 1e-14);
    CHECK(std::abs(rho.trace() - Complex(1.0)) < 1e-13);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
    CHECK(es.eigenvalues().minCoeff() >= 1e-6 * (1 - 1e-9));
  }
  CHECK_THROWS_AS(dirichlet(3, 0.0, rng), InvalidInput);
}
