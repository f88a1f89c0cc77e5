#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "qtomo/adequacy.hpp"
#include "qtomo/lossdist.hpp"
#include "qtomo/reconstruct.hpp"
#include "qtomo/scan.hpp"
#include "qtomo/simulate.hpp"
#include "qtomo/states.hpp"

namespace qtomo {

// All JSON output has stable key order; all numbers survive a round trip at
// double precision. CSV uses '\n', dot decimals, 17 significant digits.

std::string state_to_json(const DensityMatrix& rho);
DensityMatrix state_from_json(const std::string& text);

// Columns row,count,time,lambda_hat. When lambda_hat is empty the empirical
// intensity k_j / t_j is written.
std::string count_record_to_csv(const CountRecord& rec, const RealVector& lambda_hat = {});
CountRecord count_record_from_csv(const std::string& text, const std::string& label = "",
                                  std::uint64_t seed = 0);

std::string result_to_json(const ReconstructionResult& result,
                           std::optional<double> fidelity_vs_truth = {});
std::string adequacy_to_json(const AdequacyReport& report);

std::string coefficients_to_csv(const LossCoefficients& c);  // columns index,d
std::string loss_summary_to_json(const LossCoefficients& c);

std::string grid_to_csv(const SphereGrid& grid);  // columns theta_deg,phi_deg,L
std::string extremes_to_json(const ExtremalLoss& extremes);

}  // namespace qtomo
