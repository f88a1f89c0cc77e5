#pragma once

#include "qtomo/reconstruct.hpp"

namespace qtomo {

struct AdequacyReport {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 0.0;
  bool adequate = false;
  double alpha = 0.05;
  int low_expectation_rows = 0;  // rows with fitted mean < 5 (asymptotics degrade)
};

// Pearson residual statistic against fitted intensities. Rows whose fitted
// mean is below 1e-9 contribute 0 when k = 0 and +inf when k > 0.
double chi2_statistic(const CountRecord& rec, const RealVector& lambda_hat);

// Residual test of a fitted model at rank result.rank. The fitted intensities
// are rescaled so predicted and observed totals match, as the likelihood
// equation enforces. Throws when dof = m - (2s - r) r is not positive.
AdequacyReport adequacy_test(const InstrumentalMatrix& p, const CountRecord& rec,
                             const ReconstructionResult& result, double alpha = 0.05);

}  // namespace qtomo
