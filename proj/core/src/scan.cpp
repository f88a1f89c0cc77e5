#include "qtomo/scan.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qtomo/errors.hpp"
#include "qtomo/rng.hpp"
#include "qtomo/states.hpp"

namespace qtomo {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kNudge = 1e-7;      // rad, applied at singular directions
constexpr double kMoveTol = 1e-6;    // rad, refinement termination
constexpr double kGolden = 0.618;    // step shrink factor

Eigen::Vector3d direction(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

double loss_at_direction(const InstrumentalMatrix& p, const Eigen::Vector3d& u, double n) {
  const Vector psi = direction_to_qubit(u);
  return scaled_loss(loss_coefficients(p, DensityMatrix(psi * psi.adjoint()), 1, n));
}

// Evaluate L at a direction, stepping 1e-7 rad aside when the point itself is
// singular (some protocol row orthogonal to the state).
double guarded_loss(const InstrumentalMatrix& p, const Eigen::Vector3d& u, double n) {
  try {
    return loss_at_direction(p, u, n);
  } catch (const BoundaryStateError&) {
  }
  // Tangent nudges in four directions; the singular set is isolated points.
  Eigen::Vector3d a = std::abs(u.z()) < 0.9 ? Eigen::Vector3d::UnitZ() : Eigen::Vector3d::UnitX();
  const Eigen::Vector3d e1 = (a - a.dot(u) * u).normalized();
  const Eigen::Vector3d e2 = u.cross(e1).normalized();
  for (const Eigen::Vector3d& step : {e1, Eigen::Vector3d(-e1), e2, Eigen::Vector3d(-e2)}) {
    try {
      return loss_at_direction(p, (u + kNudge * step).normalized(), n);
    } catch (const BoundaryStateError&) {
    }
  }
  throw BoundaryStateError("scan: singular loss in a whole neighborhood", -1);
}

// Shrinking compass walk on the sphere toward a local extremum.
// sign = +1 climbs, -1 descends.
std::pair<double, Eigen::Vector3d> refine(const InstrumentalMatrix& p, double n,
                                          Eigen::Vector3d u, double start_value, double step_rad,
                                          int sign) {
  double best = start_value;
  double h = step_rad;
  while (h >= kMoveTol) {
    Eigen::Vector3d a =
        std::abs(u.z()) < 0.9 ? Eigen::Vector3d::UnitZ() : Eigen::Vector3d::UnitX();
    const Eigen::Vector3d e1 = (a - a.dot(u) * u).normalized();
    const Eigen::Vector3d e2 = u.cross(e1).normalized();
    bool moved = false;
    for (const Eigen::Vector3d& step : {e1, Eigen::Vector3d(-e1), e2, Eigen::Vector3d(-e2)}) {
      const Eigen::Vector3d cand = (u + h * step).normalized();
      const double value = guarded_loss(p, cand, n);
      if (sign * (value - best) > 0.0) {
        best = value;
        u = cand;
        moved = true;
      }
    }
    if (!moved) h *= kGolden;
  }
  return {best, u};
}

}  // namespace

SphereGrid scan_bloch(Polyhedron kind, double resolution_deg, double n) {
  if (resolution_deg < 0.1 || resolution_deg > 10.0)
    throw std::invalid_argument("scan_bloch: resolution must lie in [0.1, 10] degrees");
  const InstrumentalMatrix p = single_qubit_protocol(kind);

  SphereGrid grid;
  grid.theta_steps = static_cast<int>(std::lround(180.0 / resolution_deg)) + 1;
  grid.phi_steps = static_cast<int>(std::lround(360.0 / resolution_deg));
  grid.values = RealMatrix(grid.theta_steps, grid.phi_steps);

  const double dtheta = kPi / (grid.theta_steps - 1);
  const double dphi = 2.0 * kPi / grid.phi_steps;

  grid.min = std::numeric_limits<double>::infinity();
  grid.max = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid.theta_steps; ++i) {
    for (int j = 0; j < grid.phi_steps; ++j) {
      const Eigen::Vector3d u = direction(i * dtheta, j * dphi);
      const double value = guarded_loss(p, u, n);
      grid.values(i, j) = value;
      if (value < grid.min) {
        grid.min = value;
        grid.argmin = u;
      }
      if (value > grid.max) {
        grid.max = value;
        grid.argmax = u;
      }
    }
  }

  const auto lo = refine(p, n, grid.argmin, grid.min, dtheta, -1);
  grid.min = lo.first;
  grid.argmin = lo.second;
  const auto hi = refine(p, n, grid.argmax, grid.max, dtheta, +1);
  grid.max = hi.first;
  grid.argmax = hi.second;
  return grid;
}

namespace {

Vector state_from_coords(const RealVector& x, int s) {
  Vector psi(s);
  for (int i = 0; i < s; ++i) psi(i) = Complex(x(i), x(s + i));
  return psi;
}

double state_loss(const InstrumentalMatrix& p, const Vector& psi, double n) {
  const Vector unit = psi / psi.norm();
  return scaled_loss(loss_coefficients(p, DensityMatrix(unit * unit.adjoint()), 1, n));
}

double guarded_state_loss(const InstrumentalMatrix& p, const RealVector& x, double n,
                          std::mt19937_64& gen, double fail_value) {
  const int s = p.dim();
  Vector psi = state_from_coords(x, s);
  if (psi.norm() < 1e-8) return fail_value;
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int attempt = 0; attempt < 4; ++attempt) {
    try {
      return state_loss(p, psi, n);
    } catch (const BoundaryStateError&) {
      for (int i = 0; i < s; ++i) psi(i) += kNudge * psi.norm() * Complex(gauss(gen), gauss(gen));
    }
  }
  return fail_value;
}

}  // namespace

ExtremalLoss extremal_loss(const InstrumentalMatrix& p, int restarts, std::uint64_t seed) {
  const int s = p.dim();
  if (restarts <= 0) restarts = s <= 4 ? 100 : 300;
  const double n = 1e6;

  ExtremalLoss out;
  for (int sign : {-1, +1}) {
    const double fail_value = sign > 0 ? -std::numeric_limits<double>::infinity()
                                       : std::numeric_limits<double>::infinity();
    double best = fail_value;
    Vector best_state;
    int hits = 0;
    for (int trial = 0; trial < restarts && hits < 10; ++trial) {
      auto gen = make_engine(child_seed(seed, static_cast<std::uint64_t>(2 * trial + (sign > 0))));
      const Vector start = random_pure_vector(s, gen());
      RealVector x(2 * s);
      for (int i = 0; i < s; ++i) {
        x(i) = start(i).real();
        x(s + i) = start(i).imag();
      }

      double value = guarded_state_loss(p, x, n, gen, fail_value);
      double h = 0.3;
      while (h >= 1e-7) {
        int best_coord = -1;
        double best_delta = 0.0, best_value = value;
        for (int i = 0; i < 2 * s; ++i) {
          for (double delta : {h, -h}) {
            RealVector cand = x;
            cand(i) += delta;
            cand /= cand.norm();
            const double cand_value = guarded_state_loss(p, cand, n, gen, fail_value);
            if (sign * (cand_value - best_value) > 0.0) {
              best_value = cand_value;
              best_coord = i;
              best_delta = delta;
            }
          }
        }
        if (best_coord >= 0) {
          x(best_coord) += best_delta;
          x /= x.norm();
          value = best_value;
        } else {
          h *= 0.5;
        }
      }

      if (std::isfinite(value)) {
        if (std::abs(value - best) < 1e-6) {
          ++hits;
        } else if (sign * (value - best) > 0.0 || !std::isfinite(best)) {
          best = value;
          best_state = state_from_coords(x, s).normalized();
          hits = 0;
        }
      }
    }
    if (sign > 0) {
      out.l_max = best;
      out.argmax_state = best_state;
      out.certified_max = hits >= 10;
    } else {
      out.l_min = best;
      out.argmin_state = best_state;
      out.certified_min = hits >= 10;
    }
  }
  return out;
}

}  // namespace qtomo
