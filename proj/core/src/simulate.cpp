#include "qtomo/simulate.hpp"

#include <cmath>
#include <stdexcept>

namespace qtomo {

namespace {

double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Sequential search, suitable for small means.
std::int64_t poisson_inversion(double mean, std::mt19937_64& gen) {
  const double enlam = std::exp(-mean);
  std::int64_t k = 0;
  double prod = 1.0;
  while (true) {
    prod *= uniform01(gen);
    if (prod > enlam)
      ++k;
    else
      return k;
  }
}

// Transformed rejection with squeeze (Hoermann's PTRD), for large means.
std::int64_t poisson_ptrd(double mean, std::mt19937_64& gen) {
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  while (true) {
    const double u = uniform01(gen) - 0.5;
    const double v = uniform01(gen);
    const double us = 0.5 - std::abs(u);
    const auto k = static_cast<std::int64_t>(std::floor((2.0 * a / us + b) * u + mean + 0.43));
    if (us >= 0.07 && v <= vr) return k;
    if (k < 0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
        -mean + k * loglam - std::lgamma(static_cast<double>(k) + 1.0))
      return k;
  }
}

}  // namespace

std::int64_t poisson_sample(double mean, std::mt19937_64& gen) {
  if (!std::isfinite(mean) || mean < 0.0)
    throw std::invalid_argument("poisson_sample: mean must be finite and nonnegative");
  if (mean == 0.0) return 0;
  if (mean < 30.0) return poisson_inversion(mean, gen);
  return poisson_ptrd(mean, gen);
}

RealVector expected_counts(const InstrumentalMatrix& p, const DensityMatrix& rho) {
  return intensities(p, rho).cwiseProduct(p.times);
}

CountRecord simulate_counts(const InstrumentalMatrix& p, const DensityMatrix& rho,
                            std::uint64_t seed) {
  const RealVector means = expected_counts(p, rho);
  for (int j = 0; j < means.size(); ++j)
    if (!std::isfinite(means(j)))
      throw std::invalid_argument("simulate_counts: non-finite expected count");
  CountRecord rec;
  rec.label = p.label;
  rec.seed = seed;
  rec.times = p.times;
  rec.counts = CountVector(means.size());
  auto gen = make_engine(seed);
  for (int j = 0; j < means.size(); ++j) rec.counts(j) = poisson_sample(means(j), gen);
  return rec;
}

}  // namespace qtomo
