#include <doctest.h>

#include <numbers>

#include "support.hpp"

using namespace rpent;
using namespace testing_support;

TEST_CASE("twist operators, trivial split") {
  Rng rng = trial_stream(1, 0);
  const PurifiedState psi = purify(random_state(3, rng));
  const TwistOperatorSet ops = twist_operators(psi, identity_split(3, 1));
  for (Eigen::Index p = 0; p < 3; ++p)
    for (Eigen::Index q = 0; q < 3; ++q) {
      CMatrix expected = CMatrix::Zero(3, 3);
      expected(p, q) = std::pow(psi.schmidt_values(p) * psi.schmidt_values(q), 0.25);
      CHECK(frob(ops.at(p, q) - expected) < 1e-15);
    }
}

TEST_CASE("twist operators, maximally mixed d = 4") {
  const PurifiedState psi = purify(DensityMatrix(diag({0.25, 0.25, 0.25, 0.25})));
  const SubsystemSplit s = identity_split(2, 2);
  const TwistOperatorSet ops = twist_operators(psi, s);
  for (Eigen::Index p = 0; p < 4; ++p)
    for (Eigen::Index q = 0; q < 4; ++q) {
      const CMatrix expected = 0.5 * s.block(p) * s.block(q).adjoint();
      CHECK(frob(ops.at(p, q) - expected) < 1e-15);
    }
}

TEST_CASE("split validation") {
  Rng rng = trial_stream(1, 1);
  SubsystemSplit s = haar_split(2, 3, rng);
  CHECK_NOTHROW(s.validate());
  s.beta(0, 0) += 0.01;
  CHECK_THROWS_AS(s.validate(), InvalidInput);
  const PurifiedState psi = purify(random_state(4, rng));
  CHECK_THROWS_AS(twist_operators(psi, identity_split(2, 3)), InvalidInput);
}

TEST_CASE("maximally mixed d = 4") {
  // |0> = Phi_{A Abar} (x) Phi_{B Bbar}: A Abar is pure, A_1 Abar_2 across
  // the two factors is maximally mixed.
  const PurifiedState psi = purify(DensityMatrix(diag({0.25, 0.25, 0.25, 0.25})));
  const SubsystemSplit first = identity_split(2, 2);
  SubsystemSplit second = identity_split(2, 2);
  second.beta = CMatrix::Zero(4, 4);
  for (Eigen::Index k = 0; k < 2; ++k)
    for (Eigen::Index l = 0; l < 2; ++l) second.beta(k * 2 + l, l * 2 + k) = 1.0;
  const ReflectedDensity same = reflected_density(psi, first, first);
  CVector phi = CVector::Zero(4);
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  CHECK(frob(same.rho - phi * phi.adjoint()) < 1e-14);
  const ReflectedDensity cross = reflected_density(psi, first, second);
  CHECK(frob(cross.rho - 0.25 * CMatrix::Identity(4, 4)) < 1e-14);
  for (int n = 2; n <= 5; ++n) {
    CHECK(std::abs(renyi_entropy(same, n)) < 1e-12);
    CHECK(renyi_entropy(cross, n) == doctest::Approx(2.0 * std::log(2.0)));
  }
}

TEST_CASE("reflected density matches oracles on random instances") {
  for (std::uint64_t t = 0; t < 40; ++t) {
    Rng rng = trial_stream(99, t);
    const Eigen::Index dims[][2] = {{2, 2}, {2, 3}, {3, 2}, {3, 3}, {2, 4}, {4, 3}, {2, 6}};
    const auto& di = dims[t % 7];
    const Eigen::Index d = di[0] * di[1];
    const PurifiedState psi = purify(random_state(d, rng));
    const SubsystemSplit si = haar_split(di[0], di[1], rng);
    const SubsystemSplit sj = haar_split(di[1], di[0], rng);
    const ReflectedDensity fast = reflected_density(psi, si, sj);
    const ReflectedDensity brute = brute_force_reflected(psi, si, sj);
    const CMatrix oracle = reflected_oracle(psi, si, sj);
    CHECK(frob(fast.rho - brute.rho) <= 1e-10);
    CHECK(frob(fast.rho - oracle) <= 1e-10);
    CHECK_NOTHROW(fast.validate());
  }
}

TEST_CASE("reduced subsystem is the partial trace of rho") {
  Rng rng = trial_stream(4, 0);
  const DensityMatrix rho = random_state(6, rng);
  const PurifiedState psi = purify(rho);
  const SubsystemSplit s = haar_split(2, 3, rng);
  const CMatrix v1 = s.beta.transpose() * psi.eigenbasis.adjoint();
  const CMatrix in_ab = v1 * rho.entries() * v1.adjoint();
  CHECK(frob(reduced_subsystem(psi, s) - trace_second(in_ab, 2, 3)) < 1e-13);
}

TEST_CASE("Renyi and von Neumann examples") {
  CHECK(renyi_entropy(diag({0.5, 0.5}), 2) == doctest::Approx(std::log(2.0)));
  CHECK(renyi_entropy(diag({2.0 / 3.0, 1.0 / 3.0}), 3) == doctest::Approx(std::log(3.0) / 2.0).epsilon(1e-14));
  for (int n = 2; n <= 6; ++n) CHECK(std::abs(renyi_entropy(diag({1.0, 0.0, 0.0}), n)) < 1e-15);
  CHECK(von_neumann(diag({0.5, 0.5})) == doctest::Approx(std::log(2.0)));
  CHECK(von_neumann(diag({2.0 / 3.0, 1.0 / 3.0})) ==
        doctest::Approx(2.0 / 3.0 * std::log(1.5) + std::log(3.0) / 3.0).epsilon(1e-14));
  CHECK(von_neumann(diag({1.0, 0.0})) == 0.0);
  CHECK_THROWS_AS(renyi_from_spectrum((RVector(2) << 1.1, -0.1).finished(), 2.0), NumericalError);
  RVector tiny(2);
  tiny << 1.0, -1e-13;
  CHECK_NOTHROW(density_spectrum(tiny.cast<Complex>().asDiagonal().toDenseMatrix()));
}

TEST_CASE("Renyi against matrix powers") {
  Rng rng = trial_stream(8, 0);
  const CMatrix rho = random_density_matrix(5, rng);
  for (int n = 2; n <= 6; ++n) CHECK(renyi_entropy(rho, n) == doctest::Approx(renyi_oracle(rho, n)).epsilon(1e-12));
}

TEST_CASE("log-sum-exp trace power survives underflow") {
  RVector s(3);
  s << 1.0 - 2e-200, 1e-200, 1e-200;
  CHECK(std::isfinite(log_trace_power(s, 50.0)));
  CHECK(std::abs(renyi_from_spectrum(s, 50.0)) < 1e-12);
}

TEST_CASE("mutual information of a product state vanishes") {
  Rng rng = trial_stream(6, 0);
  const CMatrix a = random_density_matrix(2, rng);
  const CMatrix b = random_density_matrix(3, rng);
  const double i = mutual_information(von_neumann(a), von_neumann(b), von_neumann(kron(a, b)));
  CHECK(std::abs(i) < 1e-10);
}

TEST_CASE("entropy symmetry and purification independence") {
  for (std::uint64_t t = 0; t < 20; ++t) {
    Rng rng = trial_stream(12, t);
    const DensityMatrix rho = random_state(6, rng);
    const PurifiedState psi = purify(rho);
    const PurifiedState rotated = purify(rho, haar_unitary(6, rng));
    const SubsystemSplit s1 = haar_split(2, 3, rng);
    const SubsystemSplit s2 = haar_split(3, 2, rng);
    for (int n = 2; n <= 4; ++n) {
      const double s12 = renyi_entropy(reflected_density(psi, s1, s2), n);
      const double s21 = renyi_entropy(reflected_density(psi, s2, s1), n);
      CHECK(std::abs(s12 - s21) <= 1e-9);
      CHECK(std::abs(s12 - renyi_entropy(reflected_density(rotated, s1, s2), n)) <= 1e-9);
    }
    CHECK(std::abs(von_neumann(reflected_density(psi, s1, s2)) - von_neumann(reflected_density(rotated, s1, s2))) <=
          1e-9);
  }
}
