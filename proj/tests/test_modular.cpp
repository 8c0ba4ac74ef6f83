#include <doctest.h>

#include "support.hpp"

using namespace rpent;
using namespace testing_support;

TEST_CASE("purify maximally mixed qubit") {
  const PurifiedState psi = purify(DensityMatrix(diag({0.5, 0.5})));
  CHECK(psi.schmidt_values(0) == doctest::Approx(0.5));
  CHECK(psi.schmidt_values(1) == doctest::Approx(0.5));
  CHECK(frob(psi.eigenbasis - CMatrix::Identity(2, 2)) < 1e-14);
  CHECK(psi.vector().norm() == doctest::Approx(1.0));
}

TEST_CASE("purify diag(2/3, 1/3)") {
  const PurifiedState psi = purify(DensityMatrix(diag({1.0 / 3.0, 2.0 / 3.0})));
  CHECK(std::abs(psi.schmidt_values(0) - 2.0 / 3.0) < 1e-15);
  CHECK(std::abs(psi.schmidt_values(1) - 1.0 / 3.0) < 1e-15);
}

TEST_CASE("singular state rejected") {
  CHECK_THROWS_WITH_AS(DensityMatrix(diag({1.0, 0.0})), doctest::Contains("state not invertible"), InvalidInput);
  CMatrix bad = diag({0.5, 0.5});
  bad(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityMatrix{bad}, InvalidInput);
  CHECK_THROWS_AS(DensityMatrix(diag({0.5, 0.6})), InvalidInput);
}

TEST_CASE("canonical eigensystem is deterministic and phase fixed") {
  Rng rng = trial_stream(3, 0);
  const CMatrix rho = random_density_matrix(5, rng);
  const auto [vals, vecs] = canonical_eigensystem(rho);
  for (Eigen::Index i = 1; i < vals.size(); ++i) CHECK(vals(i - 1) >= vals(i));
  for (Eigen::Index c = 0; c < vecs.cols(); ++c) {
    Eigen::Index k = 0;
    while (std::abs(vecs(k, c)) <= 1e-10) ++k;
    CHECK(vecs(k, c).real() > 0.0);
    CHECK(std::abs(vecs(k, c).imag()) < 1e-14);
  }
  CHECK(frob(vecs * vals.cast<Complex>().asDiagonal() * vecs.adjoint() - rho) < 1e-13);
}

TEST_CASE("purification round trip") {
  for (std::uint64_t t = 0; t < 20; ++t) {
    Rng rng = trial_stream(11, t);
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(t % 7);
    const DensityMatrix rho = random_state(d, rng);
    const PurifiedState psi = purify(rho);
    const CVector v = psi.vector();
    const CMatrix full = v * v.adjoint();
    CHECK(frob(trace_second(full, d, d) - rho.entries()) <= 1e-12 * frob(rho.entries()));
    CHECK(frob(psi.reduced_first() - rho.entries()) <= 1e-12 * frob(rho.entries()));
  }
}

TEST_CASE("Delta spectrum examples") {
  const ModularData flat(purify(DensityMatrix(diag({0.5, 0.5}))));
  CHECK(frob(flat.delta_matrix() - CMatrix::Identity(4, 4)) < 1e-14);

  const ModularData md(purify(DensityMatrix(diag({2.0 / 3.0, 1.0 / 3.0}))));
  const RVector spec = md.delta_spectrum();
  const double expected[] = {0.5, 1.0, 1.0, 2.0};
  for (int i = 0; i < 4; ++i) CHECK(spec(i) == doctest::Approx(expected[i]).epsilon(1e-14));
}

TEST_CASE("Delta equals rho tensor inverse partner marginal") {
  Rng rng = trial_stream(5, 1);
  const Eigen::Index d = 4;
  const PurifiedState psi = purify(random_state(d, rng));
  const CVector v = psi.vector();
  const CMatrix full = v * v.adjoint();
  const CMatrix rho1 = trace_second(full, d, d);
  const CMatrix rho2 = trace_first(full, d, d);
  const CMatrix oracle = kron(rho1, rho2.inverse());
  const ModularData md(psi);
  CHECK(frob(md.delta_matrix() - oracle) < 1e-10 * frob(oracle));
  CHECK(frob(md.delta_matrix(-1.0) - kron(rho1.inverse(), rho2)) < 1e-10 * frob(oracle));
}

TEST_CASE("modular identities on random states") {
  for (std::uint64_t t = 0; t < 10; ++t) {
    Rng rng = trial_stream(17, t);
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(t % 4);
    const PurifiedState psi = purify(random_state(d, rng));
    const ModularData md = modular_operators(psi);
    const CVector zero = psi.vector();
    CHECK((md.apply_delta(zero) - zero).norm() < 1e-12);
    CHECK((md.apply_j(zero) - zero).norm() < 1e-12);

    const CVector x = ginibre(d * d, 1, rng).col(0);
    const CVector y = ginibre(d * d, 1, rng).col(0);
    CHECK((md.apply_j(md.apply_j(x)) - x).norm() < 1e-12 * x.norm());
    const Complex lhs = md.apply_j(x).dot(md.apply_j(y));
    CHECK(std::abs(lhs - std::conj(x.dot(y))) < 1e-12 * x.norm() * y.norm());
    // J Delta J = Delta^{-1}
    const CVector jdj = md.apply_j(md.apply_delta(md.apply_j(x)));
    const CVector inv = md.apply_delta(x, -1.0);
    CHECK((jdj - inv).norm() < 1e-10 * inv.norm());
  }
}

TEST_CASE("Tomita relation") {
  Rng rng = trial_stream(23, 0);
  const PurifiedState psi = purify(random_state(4, rng));
  const ModularData md(psi);
  CHECK(tomita_residual(psi, md, CMatrix::Identity(4, 4)) < 1e-14);
  const TomitaReport rep = check_tomita_relation(psi, md, 100, rng);
  CHECK(rep.trials == 100);
  CHECK(rep.passed);
  CHECK(rep.max_residual <= 1e-10);

  const PurifiedState flat = purify(DensityMatrix(diag({0.25, 0.25, 0.25, 0.25})));
  const ModularData mf(flat);
  const CVector u = ginibre(4, 1, rng).col(0).normalized();
  CHECK(tomita_residual(flat, mf, u * u.adjoint()) <= 1e-12);
}

TEST_CASE("reflected operators") {
  Rng rng = trial_stream(29, 0);
  const PurifiedState psi = purify(random_state(3, rng));
  const ModularData md(psi);
  CHECK(frob(reflect_operator(md, CMatrix::Identity(3, 3)) - CMatrix::Identity(3, 3)) < 1e-12);
  for (int k = 0; k < 50; ++k) {
    const CMatrix op = ginibre(3, 3, rng);
    const Complex a = reflection_value(psi, md, op);
    const Complex b = reflection_value_via_delta(psi, md, op);
    CHECK(a.real() >= -1e-12);
    CHECK(std::abs(a.imag()) <= 1e-12);
    CHECK(std::abs(a - b) <= 1e-10);
    // J (O x 1) J = 1 x X
    const CMatrix x = reflect_operator(md, op);
    CHECK(frob(reflect_operator_full(md, op) - kron(CMatrix::Identity(3, 3), x)) < 1e-10);
  }
}
