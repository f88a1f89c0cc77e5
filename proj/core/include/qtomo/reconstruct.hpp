#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qtomo/simulate.hpp"

namespace qtomo {

struct MleOptions {
  int max_iter = 10000;
  double stationarity_tol = 1e-8;  // relative residual of I c = J(c) c
  double step_tol = 1e-10;         // relative parameter change
  double initial_damping = 0.5;
};

struct ReconstructionResult {
  Purification c_hat;  // unit trace; rho_hat = c c^dag
  DensityMatrix rho_hat;
  int rank = 1;
  double loglik = 0.0;
  int iterations = 0;
  bool converged = false;
  double gradient_norm = 0.0;  // relative stationarity residual at exit
};

struct RankCandidate {
  int r = 1;
  ReconstructionResult result;
  bool testable = false;
  double statistic = 0.0;
  int dof = 0;
  double p_value = 0.0;
  bool adequate = false;
};

struct AutoReconstruction {
  int selected_index = 0;  // into candidates
  bool adequate = false;   // false when no rank passed and the full-rank fit was returned
  std::vector<RankCandidate> candidates;

  const RankCandidate& selected() const { return candidates.at(selected_index); }
};

struct AutoOptions {
  MleOptions mle{};
  double alpha = 0.05;
  std::vector<int> ranks{};  // empty means 1..s
};

struct BatchRun {
  CountRecord record;
  std::optional<ReconstructionResult> result;
  double loss = 0.0;  // 1 - F(truth, estimate), NaN on failure
  std::string error;  // empty on success
};

// Linear inversion of the count record through the measurement matrix,
// projected back to a valid density matrix.
DensityMatrix pseudo_inverse_estimate(const InstrumentalMatrix& p, const RealVector& k,
                                      const RealVector& times);
DensityMatrix pseudo_inverse_estimate(const InstrumentalMatrix& p, const CountRecord& rec);

// Maximum-likelihood purification of rank r. Real-valued counts are allowed
// so that exact expected counts can be fed through the same path. `start`
// overrides the truncated pseudo-inverse starting point.
ReconstructionResult mle(const InstrumentalMatrix& p, const RealVector& k, const RealVector& times,
                         int r, const MleOptions& opts = {},
                         const std::optional<Matrix>& start = {});
ReconstructionResult mle(const InstrumentalMatrix& p, const CountRecord& rec, int r,
                         const MleOptions& opts = {}, const std::optional<Matrix>& start = {});

// Fits increasing ranks and picks the smallest one the residual test accepts;
// falls back to the full-rank fit flagged inadequate.
AutoReconstruction reconstruct_auto(const InstrumentalMatrix& p, const CountRecord& rec,
                                    const AutoOptions& opts = {});

// Simulate `runs` count records at sample size n and reconstruct each at rank
// r. Child seeds are counter-derived, so the output is independent of worker
// count and run order. Per-run failures are captured, not thrown.
std::vector<BatchRun> run_batch(const InstrumentalMatrix& p, const DensityMatrix& rho, int r,
                                double n, int runs, std::uint64_t seed, int workers = 1,
                                const MleOptions& opts = {});

}  // namespace qtomo
