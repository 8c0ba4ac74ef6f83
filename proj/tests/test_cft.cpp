#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "rpent/cft.hpp"
#include "rpent/random.hpp"

using namespace rpent;
using namespace rpent::cft;

TEST_CASE("cross ratio") {
  const TwoIntervalConfig c{0.0, 1.0, 2.0, 3.0, 1.0, 2, 1.0};
  CHECK(cross_ratio(c) == doctest::Approx(0.25));
  CHECK(cross_ratio({0.0, 1e-9, 2.0, 3.0, 1.0, 2, 1.0}) < 1e-9);
  CHECK(cross_ratio({0.0, 1.0, 1.0 + 1e-9, 2.0 + 1e-9, 1.0, 2, 1.0}) > 1.0 - 1e-8);
  CHECK_THROWS_AS(cross_ratio({0.0, 2.0, 1.0, 3.0, 1.0, 2, 1.0}), InvalidInput);
  Rng rng = trial_stream(1, 0);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int k = 0; k < 50; ++k) {
    const double shift = u(rng), scale = std::exp(u(rng) / 2.0);
    const TwoIntervalConfig m{shift, shift + scale, shift + 2.0 * scale, shift + 3.0 * scale, 1.0, 2, 1.0};
    CHECK(std::abs(cross_ratio(m) - 0.25) <= 1e-12);
  }
}

TEST_CASE("two-interval Renyi entropy") {
  const TwoIntervalConfig c{0.0, 1.0, 2.0, 3.0, 1.0, 2, 1.0};
  CHECK(c.q() == doctest::Approx(0.25));
  const auto one = CrossRatioFunction::constant_one();
  CHECK(renyi_two_interval(c, one) == doctest::Approx(0.25 * std::log(0.75)));
  for (double sigma : {0.5, 2.0, 7.0}) {
    const TwoIntervalConfig s{0.0, sigma, 2.0 * sigma, 3.0 * sigma, 1.0, 2, 1.0};
    const double shift = (2 - 1) * (renyi_two_interval(s, one) - renyi_two_interval(c, one));
    CHECK(shift == doctest::Approx(2.0 * c.q() * std::log(sigma)));
  }
  CHECK_THROWS_AS(renyi_two_interval(c, CrossRatioFunction("neg", [](double) { return -1.0; })), InvalidInput);
  CHECK_THROWS_AS(TwoIntervalConfig({0.0, 1.0, 2.0, 3.0, 1.0, 1, 1.0}).validate(), InvalidInput);
}

TEST_CASE("z point") {
  CHECK(z_point(0.25, 0.25) == 0.25);
  for (double x : uniform_open_grid(999)) CHECK(z_point(x, x) == x);
  Rng rng = trial_stream(2, 0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double x = u(rng), y = u(rng);
    if (x == 0.0 || y == 0.0) continue;
    const double z = z_point(x, y);
    CHECK(z >= std::min(x, y) - 1e-15);
    CHECK(z <= std::max(x, y) + 1e-15);
  }
  CHECK_THROWS_AS(z_point(0.0, 0.5), InvalidInput);
}

TEST_CASE("inequalities for F = 1 and the synthetic violator") {
  const double q = 0.25;
  const auto grid = uniform_open_grid(1000);
  const auto one = CrossRatioFunction::constant_one();
  const auto d = check_derivative_inequality(one, q, grid);
  CHECK(d.pass);
  CHECK(d.min_slack > 0.0);
  for (const auto& p : d.points) CHECK(p.derivative == doctest::Approx(q * std::pow(1.0 - p.x, -q - 1.0)).epsilon(1e-6));

  Rng rng = trial_stream(3, 0);
  std::uniform_real_distribution<double> u(0.001, 0.999);
  std::vector<std::pair<double, double>> pairs;
  for (int k = 0; k < 1000; ++k) pairs.emplace_back(u(rng), u(rng));
  const auto m = check_midpoint_inequality(one, q, pairs);
  CHECK(m.pass);
  CHECK(m.z_in_range);
  CHECK(m.min_slack >= -1e-10);

  const auto sat = check_midpoint_inequality(one, q, {{0.3, 0.3}, {0.6, 0.6}});
  for (const auto& s : sat.samples) CHECK(std::abs(s.slack) <= 1e-15);
  const auto near = check_midpoint_inequality(one, q, {{0.3, 0.3 + 1e-4}});
  CHECK(std::abs(near.samples[0].slack) < 1e-7);

  const auto bad = CrossRatioFunction::power_of_complement(2.0 * q);
  CHECK_FALSE(check_derivative_inequality(bad, q, grid).pass);
  CHECK(bad.symmetry_defect() > 0.1);
  CHECK(one.symmetry_defect() == 0.0);
  CHECK_THROWS_AS(check_derivative_inequality(one, q, {0.0, 0.5}), InvalidInput);
}

TEST_CASE("tabulated F") {
  const auto path = std::filesystem::temp_directory_path() / "rpent_f_table.csv";
  {
    std::ofstream f(path);
    f << "x,F\n";
    for (int i = 0; i <= 20; ++i) {
      const double x = i / 20.0;
      f << x << "," << 1.0 + 0.1 * x * (1.0 - x) << "\n";
    }
  }
  const auto f = CrossRatioFunction::load_csv(path.string());
  CHECK(f(0.5) == doctest::Approx(1.025));
  CHECK(f(0.37) == doctest::Approx(1.0 + 0.1 * 0.37 * 0.63).epsilon(1e-3));
  CHECK(f.symmetry_defect() <= 1e-9);
  CHECK(check_derivative_inequality(f, 0.25, uniform_open_grid(200)).pass);
  std::filesystem::remove(path);
}
