#pragma once

#include <cstdint>

#include "qtomo/protocol.hpp"
#include "qtomo/states.hpp"

namespace qtomo {

// Coefficients of the generalized chi-squared fidelity-loss distribution
// 1 - F = sum_j d_j xi_j^2 at sample size n. Descending, length (2s-r)r - 1.
struct LossCoefficients {
  RealVector d;
  double n = 0.0;
  int s = 0;
  int r = 0;

  int j_max() const { return static_cast<int>(d.size()); }
};

// Asymptotic loss coefficients for a complete protocol at a rank-r truth.
// The state must have rank exactly r; throws BoundaryStateError when some
// measured intensity vanishes at the truth (singular Fisher information).
// fd_step is the finite-difference step of the fidelity Hessian, relative to
// the purification norm.
LossCoefficients loss_coefficients(const InstrumentalMatrix& p, const DensityMatrix& rho0, int r,
                                   double n, double fd_step = 1e-4);

double mean_loss(const LossCoefficients& c);      // sum d_j
double variance_loss(const LossCoefficients& c);  // 2 sum d_j^2
double skewness(const LossCoefficients& c);       // 8 sum d_j^3 / sigma^3
double excess(const LossCoefficients& c);         // 48 sum d_j^4 / sigma^4

// Size-independent loss L = n * sum d_j.
double scaled_loss(const LossCoefficients& c);

// Draws of sum_j d_j xi_j^2 with standard normal xi.
RealVector sample_loss(const LossCoefficients& c, int count, std::uint64_t seed);

// nu^2 / (4(s-1)) with nu = (2s-r)r - 1: the best L any protocol can reach.
double optimal_min_loss(int s, int r);

// (10^l - 1)/4: the polyhedron-independent L at maximally mixed truth.
double polyhedron_mixed_min(int l);

// Loss coefficients at the maximally mixed state from the reduced singular
// spectrum of the unit-time measurement matrix.
LossCoefficients white_noise_coefficients(const InstrumentalMatrix& p, double n);

// Number of nines of a fidelity: -log10(1 - F), +inf at F = 1.
double nines(double f);

}  // namespace qtomo
