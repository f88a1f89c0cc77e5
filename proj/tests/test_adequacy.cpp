#include <doctest.h>

#include <cmath>
#include <vector>

#include "qtomo/adequacy.hpp"
#include "qtomo/numerics.hpp"
#include "qtomo/rng.hpp"

using namespace qtomo;

TEST_CASE("chi2_statistic: hand-checked values and sentinel rows") {
  CountRecord rec;
  rec.times = RealVector::Constant(2, 10.0);
  rec.counts = CountVector(2);
  rec.counts << 12, 8;
  RealVector lam(2);
  lam << 1.0, 1.0;
  // (12-10)^2/10 + (8-10)^2/10 = 0.8
  CHECK(chi2_statistic(rec, lam) == doctest::Approx(0.8).epsilon(1e-12));

  // Exact agreement scores zero.
  rec.counts << 10, 10;
  CHECK(chi2_statistic(rec, lam) == 0.0);

  // Vanishing fitted mean: silent when no clicks, infinite when clicked.
  lam << 1.0, 0.0;
  rec.counts << 10, 0;
  CHECK(chi2_statistic(rec, lam) == 0.0);
  rec.counts << 10, 1;
  CHECK(std::isinf(chi2_statistic(rec, lam)));

  CHECK_THROWS_AS(chi2_statistic(rec, RealVector::Ones(3)), std::invalid_argument);
}

TEST_CASE("adequacy_test: exact data is maximally adequate") {
  const DensityMatrix truth = random_pure(2, 5);
  const InstrumentalMatrix p =
      set_times_for_sample(single_qubit_protocol(Polyhedron::octahedron), truth, 1e5);
  const RealVector mu = expected_counts(p, truth);
  const ReconstructionResult fit = mle(p, mu, p.times, 1);
  CountRecord rec;
  rec.label = p.label;
  rec.times = p.times;
  rec.counts = mu.array().round().cast<std::int64_t>();
  const AdequacyReport report = adequacy_test(p, rec, fit);
  CHECK(report.dof == 5);
  CHECK(report.statistic < 1.0);
  CHECK(report.p_value > 0.9);
  CHECK(report.adequate);
  CHECK(report.low_expectation_rows == 0);
}

TEST_CASE("adequacy_test: throws without redundancy") {
  const DensityMatrix truth = random_mixed(2, 2, 6);
  const InstrumentalMatrix p =
      set_times_for_sample(single_qubit_protocol(Polyhedron::tetrahedron), truth, 1e4);
  const CountRecord rec = simulate_counts(p, truth, 7);
  const ReconstructionResult fit = mle(p, rec, 2);
  CHECK_THROWS_AS(adequacy_test(p, rec, fit), NotTestableError);
}

TEST_CASE("adequacy_test: statistic follows chi-squared under the true model") {
  // Two-qubit tetrahedron protocol at rank 1 leaves 9 degrees of freedom.
  const DensityMatrix truth = random_pure(4, 8);
  const InstrumentalMatrix p = set_times_for_sample(
      tensor_power(single_qubit_protocol(Polyhedron::tetrahedron), 2), truth, 1e5);
  std::vector<double> stats;
  int adequate = 0;
  const int runs = 250;
  for (int i = 0; i < runs; ++i) {
    const CountRecord rec = simulate_counts(p, truth, child_seed(1234, i));
    const ReconstructionResult fit = mle(p, rec, 1);
    REQUIRE(fit.converged);
    const AdequacyReport report = adequacy_test(p, rec, fit);
    CHECK(report.dof == 9);
    stats.push_back(report.statistic);
    if (report.adequate) ++adequate;
  }
  const double p_ks =
      ks_test_p(stats, [](double x) { return chi2_cdf(x, 9.0); });
  CHECK(p_ks > 0.005);
  // The 5% test should accept roughly 95% of true-model fits.
  CHECK(adequate > runs * 0.85);
}

TEST_CASE("adequacy_test: detects a rank-deficient model") {
  const DensityMatrix truth = random_mixed(4, 2, 9);
  const InstrumentalMatrix p = set_times_for_sample(
      tensor_power(single_qubit_protocol(Polyhedron::tetrahedron), 2), truth, 1e6);
  int rejected = 0;
  const int runs = 50;
  for (int i = 0; i < runs; ++i) {
    const CountRecord rec = simulate_counts(p, truth, child_seed(4321, i));
    const ReconstructionResult fit = mle(p, rec, 1);
    const AdequacyReport report = adequacy_test(p, rec, fit);
    if (!report.adequate) ++rejected;
  }
  CHECK(rejected == runs);
}
