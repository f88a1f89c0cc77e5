#include "qtomo/adequacy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qtomo/errors.hpp"
#include "qtomo/numerics.hpp"

namespace qtomo {

double chi2_statistic(const CountRecord& rec, const RealVector& lambda_hat) {
  if (lambda_hat.size() != rec.counts.size())
    throw std::invalid_argument("chi2_statistic: dimension mismatch");
  double stat = 0.0;
  for (int j = 0; j < rec.counts.size(); ++j) {
    const double mean = lambda_hat(j) * rec.times(j);
    const double k = static_cast<double>(rec.counts(j));
    if (mean < 1e-9) {
      if (k > 0.0) return std::numeric_limits<double>::infinity();
      continue;
    }
    stat += (k - mean) * (k - mean) / mean;
  }
  return stat;
}

AdequacyReport adequacy_test(const InstrumentalMatrix& p, const CountRecord& rec,
                             const ReconstructionResult& result, double alpha) {
  const AdequacyDof dof = adequacy_possible(p, result.rank);
  if (!dof.redundant)
    throw NotTestableError("adequacy_test: no degrees of freedom at rank " +
                           std::to_string(result.rank));

  RealVector lam = intensities(p, result.rho_hat);
  const double predicted = lam.dot(rec.times);
  const double observed = rec.counts.cast<double>().sum();
  if (predicted > 0.0) lam *= observed / predicted;

  AdequacyReport report;
  report.dof = dof.dof;
  report.alpha = alpha;
  report.statistic = chi2_statistic(rec, lam);
  for (int j = 0; j < rec.counts.size(); ++j)
    if (lam(j) * rec.times(j) < 5.0) ++report.low_expectation_rows;
  report.p_value =
      std::isfinite(report.statistic) ? 1.0 - chi2_cdf(report.statistic, report.dof) : 0.0;
  report.adequate = report.p_value >= alpha;
  return report;
}

}  // namespace qtomo
