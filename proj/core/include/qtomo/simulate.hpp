#pragma once

#include <cstdint>
#include <string>

#include "qtomo/protocol.hpp"
#include "qtomo/rng.hpp"
#include "qtomo/states.hpp"

namespace qtomo {

using CountVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

struct CountRecord {
  std::string label;
  std::uint64_t seed = 0;
  RealVector times;
  CountVector counts;

  int row_count() const { return static_cast<int>(counts.size()); }
};

// lambda_j * t_j, exactly; the Poisson means behind simulate_counts.
RealVector expected_counts(const InstrumentalMatrix& p, const DensityMatrix& rho);

// Independent k_j ~ Poisson(lambda_j t_j). Deterministic in the seed.
CountRecord simulate_counts(const InstrumentalMatrix& p, const DensityMatrix& rho,
                            std::uint64_t seed);

}  // namespace qtomo
