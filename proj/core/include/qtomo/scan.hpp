#pragma once

#include <cstdint>

#include "qtomo/lossdist.hpp"
#include "qtomo/protocol.hpp"

namespace qtomo {

struct SphereGrid {
  int theta_steps = 0;
  int phi_steps = 0;
  RealMatrix values;  // theta_steps x phi_steps, L at each direction
  double min = 0.0;
  double max = 0.0;
  Eigen::Vector3d argmin{0.0, 0.0, 1.0};
  Eigen::Vector3d argmax{0.0, 0.0, 1.0};
};

struct ExtremalLoss {
  double l_min = 0.0;
  double l_max = 0.0;
  Vector argmin_state;  // unit kets of dimension s
  Vector argmax_state;
  bool certified_min = false;  // best value re-found 10 times within 1e-6
  bool certified_max = false;
};

// L over the Bloch sphere of pure truths for a single-qubit protocol, on a
// theta x phi grid (theta 0..180 inclusive, phi 0..360 exclusive), extremes
// refined by shrinking tangent-plane steps until movement < 1e-6 rad.
// Directions where the loss is singular are evaluated 1e-7 rad off.
SphereGrid scan_bloch(Polyhedron kind, double resolution_deg, double n);

// Multi-start pattern search for the pure-state loss extremes of any complete
// protocol. restarts <= 0 picks 100 for up to two qubits, 300 above.
ExtremalLoss extremal_loss(const InstrumentalMatrix& p, int restarts, std::uint64_t seed);

}  // namespace qtomo
