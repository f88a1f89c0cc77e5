#pragma once

#include <cstdint>

#include "qtomo/numerics.hpp"

namespace qtomo {

// Trace-one Hermitian PSD matrix. Validation tolerances: hermiticity and
// trace to 1e-10, eigenvalues above -1e-10.
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix rho);

  const Matrix& matrix() const { return rho_; }
  int dim() const { return static_cast<int>(rho_.rows()); }

  // Number of eigenvalues above tol.
  int rank(double tol = 1e-12) const;

 private:
  Matrix rho_;
};

// s x r matrix c with rho = c c^dag and unit trace. Columns are sqrt(lambda_i) v_i.
struct Purification {
  Matrix c;
  int dim() const { return static_cast<int>(c.rows()); }
  int rank() const { return static_cast<int>(c.cols()); }
};

// Fidelity (tr sqrt(sqrt(rho0) rho sqrt(rho0)))^2.
double fidelity(const DensityMatrix& rho0, const DensityMatrix& rho);

// Fidelity from purifications: squared nuclear norm of c0^dag c. Ranks may differ.
double uhlmann_fidelity(const Purification& c0, const Purification& c);

// Purification from the r largest eigenpairs. Throws RankDeficitError when
// eigenvalues above 1e-12 outnumber r.
Purification purify(const DensityMatrix& rho, int r);

// |GHZ_l> = (|0...0> + |1...1>)/sqrt(2) on l >= 2 qubits, big-endian basis order.
Vector ghz_vector(int qubits);
DensityMatrix ghz(int qubits);

// f * E/s + (1-f) |psi><psi| for f in [0, 1].
DensityMatrix white_noise_mix(const Vector& psi, double f);

// Seeded complex-Gaussian states (deterministic per seed).
Vector random_pure_vector(int s, std::uint64_t seed);
DensityMatrix random_pure(int s, std::uint64_t seed);
DensityMatrix random_mixed(int s, int r, std::uint64_t seed);

}  // namespace qtomo
