#pragma once

#include <string>
#include <vector>

#include "qtomo/geometry.hpp"
#include "qtomo/states.hpp"

namespace qtomo {

// Instrumental matrix: row j acts as the bra of the j-th measured state, so
// the intensity operator X_j^dag X_j projects onto that state. times are the
// per-row exposure durations; expected counts are tr(Lambda_j rho) * t_j.
struct InstrumentalMatrix {
  std::string label;
  int qubits = 1;
  Matrix rows;       // m x 2^qubits
  RealVector times;  // m

  int row_count() const { return static_cast<int>(rows.rows()); }
  int dim() const { return static_cast<int>(rows.cols()); }
};

struct UnityCheck {
  bool unity = false;
  double intensity = 0.0;  // I0 with sum_j t_j Lambda_j = I0 * E when unity
  double residual = 0.0;   // Frobenius distance to the nearest I0 * E
};

struct Completeness {
  int q = 0;  // singular values of B above 1e-10 * s_max
  bool complete = false;
  RealVector singular_values;
};

struct AdequacyDof {
  bool redundant = false;
  int dof = 0;  // m - (2s - r) r
};

// One projective measurement per face direction, unit exposure times.
InstrumentalMatrix single_qubit_protocol(Polyhedron kind);

// l-fold tensor power; rows enumerate index tuples lexicographically and
// times multiply. Guarded at m^l * 4^l <= 2^30 matrix entries.
InstrumentalMatrix tensor_power(const InstrumentalMatrix& p, int l);

// Lambda_j = X_j^dag X_j.
Matrix intensity_operator(const InstrumentalMatrix& p, int j);

// Amplitude matrix X c for a purification (m x r).
Matrix amplitudes(const InstrumentalMatrix& p, const Matrix& c);

// lambda_j = tr(Lambda_j rho), clipped at zero from below (tolerance 1e-12).
RealVector intensities(const InstrumentalMatrix& p, const DensityMatrix& rho);

// Copy of p with times scaled uniformly so that sum_j lambda_j t_j = n.
InstrumentalMatrix set_times_for_sample(InstrumentalMatrix p, const DensityMatrix& rho,
                                        double n);

// Does sum_j t_j Lambda_j equal I0 * E? Residual tolerance 1e-9 * I0.
UnityCheck unity_decomposition(const InstrumentalMatrix& p);

// Row j of B is t_j * conj(X_j) (x) X_j, so that B vec(rho) gives the
// expected counts (column-stacking vectorization).
Matrix measurement_matrix(const InstrumentalMatrix& p);

// Protocol informational completeness from the singular spectrum of B.
Completeness completeness(const InstrumentalMatrix& p);

// Degrees of freedom left for the residual test at model rank r.
AdequacyDof adequacy_possible(const InstrumentalMatrix& p, int r);

}  // namespace qtomo
