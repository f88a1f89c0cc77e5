#include <doctest.h>

#include <cmath>
#include <vector>

#include "qtomo/adequacy.hpp"
#include "qtomo/reconstruct.hpp"
#include "qtomo/rng.hpp"

using namespace qtomo;

TEST_CASE("pseudo_inverse_estimate: exact and noisy inputs") {
  const DensityMatrix mixed(Matrix::Identity(2, 2) / 2.0);
  const InstrumentalMatrix p =
      set_times_for_sample(single_qubit_protocol(Polyhedron::tetrahedron), mixed, 1e6);

  // Exact expected counts invert to the exact state.
  const RealVector mu = expected_counts(p, mixed);
  CHECK((pseudo_inverse_estimate(p, mu, p.times).matrix() - mixed.matrix()).norm() < 1e-10);

  const DensityMatrix pure = random_pure(2, 21);
  const InstrumentalMatrix q = set_times_for_sample(p, pure, 1e6);
  const DensityMatrix recovered = pseudo_inverse_estimate(q, expected_counts(q, pure), q.times);
  CHECK(fidelity(recovered, pure) > 1.0 - 1e-9);

  // Noisy counts still yield a valid state.
  const CountRecord rec = simulate_counts(q, pure, 3);
  const DensityMatrix noisy = pseudo_inverse_estimate(q, rec);
  CHECK(std::abs(noisy.matrix().trace().real() - 1.0) < 1e-10);
  CHECK(fidelity(noisy, pure) > 0.99);

  InstrumentalMatrix basis;
  basis.label = "z-basis";
  basis.rows = Matrix::Zero(2, 2);
  basis.rows(0, 0) = 1.0;
  basis.rows(1, 1) = 1.0;
  basis.times = RealVector::Constant(2, 100.0);
  CHECK_THROWS_AS(pseudo_inverse_estimate(basis, RealVector::Constant(2, 50.0), basis.times),
                  IncompleteProtocolError);
}

TEST_CASE("mle: noiseless counts recover the truth") {
  for (const Polyhedron kind : {Polyhedron::tetrahedron, Polyhedron::icosahedron}) {
    const DensityMatrix truth = random_pure(2, 31);
    const InstrumentalMatrix p =
        set_times_for_sample(single_qubit_protocol(kind), truth, 1e5);
    const ReconstructionResult res = mle(p, expected_counts(p, truth), p.times, 1);
    CHECK(res.converged);
    CHECK(fidelity(res.rho_hat, truth) > 1.0 - 1e-9);
  }

  // Full-rank fit of the maximally mixed state.
  const DensityMatrix mixed(Matrix::Identity(4, 4) / 4.0);
  const InstrumentalMatrix p2 = set_times_for_sample(
      tensor_power(single_qubit_protocol(Polyhedron::tetrahedron), 2), mixed, 1e6);
  const ReconstructionResult res = mle(p2, expected_counts(p2, mixed), p2.times, 4);
  CHECK(res.converged);
  CHECK((res.rho_hat.matrix() - mixed.matrix()).norm() < 1e-8);
}

TEST_CASE("mle: output contract on noisy data") {
  const DensityMatrix truth = random_mixed(4, 2, 41);
  const InstrumentalMatrix p = set_times_for_sample(
      tensor_power(single_qubit_protocol(Polyhedron::octahedron), 2), truth, 1e5);
  const CountRecord rec = simulate_counts(p, truth, 9);
  const ReconstructionResult res = mle(p, rec, 2);
  CHECK(res.converged);
  CHECK(res.rank == 2);
  CHECK(res.c_hat.c.cols() == 2);
  CHECK(std::abs(res.rho_hat.matrix().trace().real() - 1.0) < 1e-10);
  CHECK((res.rho_hat.matrix() - res.c_hat.c * res.c_hat.c.adjoint()).norm() < 1e-10);
  CHECK(fidelity(res.rho_hat, truth) > 0.99);
}

TEST_CASE("mle: gauge freedom of the starting point does not move rho_hat") {
  const DensityMatrix truth = random_mixed(2, 2, 51);
  const InstrumentalMatrix p =
      set_times_for_sample(single_qubit_protocol(Polyhedron::icosahedron), truth, 1e5);
  const CountRecord rec = simulate_counts(p, truth, 13);

  const ReconstructionResult base = mle(p, rec, 2);

  // Rotate the default start by a right unitary; the estimate is unchanged.
  Matrix u(2, 2);
  const double c = std::cos(0.7), s = std::sin(0.7);
  u << Complex(c, 0.0), Complex(0.0, s), Complex(0.0, s), Complex(c, 0.0);
  const Matrix start = purify(truth, 2).c * u;
  const ReconstructionResult rotated = mle(p, rec, 2, {}, start);
  CHECK((base.rho_hat.matrix() - rotated.rho_hat.matrix()).norm() < 1e-8);
}

TEST_CASE("mle: likelihood never drops from start to solution") {
  for (int trial = 0; trial < 50; ++trial) {
    const int s = (trial % 2 == 0) ? 2 : 4;
    const int l = (s == 2) ? 1 : 2;
    const int r = 1 + trial % s;
    const DensityMatrix truth = random_mixed(s, 1 + (trial % s), 600 + trial);
    const Polyhedron kind = kAllPolyhedra[trial % kAllPolyhedra.size()];
    const InstrumentalMatrix p =
        set_times_for_sample(tensor_power(single_qubit_protocol(kind), l), truth, 1e4);
    const CountRecord rec = simulate_counts(p, truth, 700 + trial);

    const ReconstructionResult one_step = mle(p, rec, r, MleOptions{1, 0.0, 0.0, 0.5});
    const ReconstructionResult full = mle(p, rec, r);
    CHECK(full.loglik >= one_step.loglik - 1e-6 * std::abs(full.loglik));
  }
}

TEST_CASE("mle: loss scales as 1/n") {
  // Mean loss ratio between sample sizes n and 4n concentrates near 4.
  const DensityMatrix truth = random_pure(2, 61);
  const InstrumentalMatrix p = single_qubit_protocol(Polyhedron::tetrahedron);
  const auto lo = run_batch(p, truth, 1, 2.5e4, 500, 1000);
  const auto hi = run_batch(p, truth, 1, 1e5, 500, 2000);
  double lo_mean = 0.0, hi_mean = 0.0;
  for (const BatchRun& run : lo) {
    REQUIRE(run.error.empty());
    lo_mean += run.loss / lo.size();
  }
  for (const BatchRun& run : hi) {
    REQUIRE(run.error.empty());
    hi_mean += run.loss / hi.size();
  }
  const double ratio = lo_mean / hi_mean;
  CHECK(ratio > 3.2);
  CHECK(ratio < 4.8);
}

TEST_CASE("reconstruct_auto: rank selection") {
  // A pure truth is already explained at rank 1.
  const DensityMatrix pure = random_pure(2, 71);
  const InstrumentalMatrix p =
      set_times_for_sample(single_qubit_protocol(Polyhedron::icosahedron), pure, 1e5);
  const AutoReconstruction sel = reconstruct_auto(p, simulate_counts(p, pure, 17));
  CHECK(sel.adequate);
  CHECK(sel.selected().r == 1);
  CHECK(sel.selected().testable);
  CHECK(sel.selected().p_value >= 0.05);

  // Restricting the candidate list is honored.
  AutoOptions opts;
  opts.ranks = {2};
  const AutoReconstruction only2 = reconstruct_auto(p, simulate_counts(p, pure, 18), opts);
  CHECK(only2.candidates.size() == 1);
  CHECK(only2.selected().r == 2);

  // A full-rank truth walks through rejected low ranks to r = s; the tetrahedron
  // square cannot test rank 4, so the fit is returned flagged inadequate.
  const DensityMatrix noisy = white_noise_mix(ghz_vector(2), 0.5);
  const InstrumentalMatrix p2 = set_times_for_sample(
      tensor_power(single_qubit_protocol(Polyhedron::tetrahedron), 2), noisy, 1e6);
  const AutoReconstruction full = reconstruct_auto(p2, simulate_counts(p2, noisy, 19));
  CHECK(full.selected().r == 4);
  CHECK_FALSE(full.adequate);
  CHECK_FALSE(full.selected().testable);
  for (const RankCandidate& cand : full.candidates)
    if (cand.testable) CHECK_FALSE(cand.adequate);
}

TEST_CASE("run_batch: worker count does not change results") {
  const DensityMatrix truth = random_pure(2, 81);
  const InstrumentalMatrix p = single_qubit_protocol(Polyhedron::cube);
  const auto seq = run_batch(p, truth, 1, 1e4, 6, 99, 1);
  const auto par = run_batch(p, truth, 1, 1e4, 6, 99, 3);
  REQUIRE(seq.size() == 6);
  REQUIRE(par.size() == 6);
  for (int i = 0; i < 6; ++i) {
    CHECK(seq[i].record.counts == par[i].record.counts);
    CHECK(seq[i].loss == par[i].loss);
    CHECK(seq[i].error == par[i].error);
    CHECK(seq[i].error.empty());
    CHECK(std::isfinite(seq[i].loss));
  }
}
