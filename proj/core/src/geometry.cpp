#include "qtomo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qtomo {

namespace {

const double kGolden = (1.0 + std::sqrt(5.0)) / 2.0;

using Eigen::Vector3d;

std::vector<Vector3d> normalized(std::vector<Vector3d> dirs) {
  for (auto& d : dirs) d.normalize();
  return dirs;
}

// Icosahedron vertices: cyclic permutations of (0, +-1, +-phi). Unnormalized,
// edge length 2; adjacent vertices sit at squared distance 4.
std::vector<Vector3d> icosahedron_vertices() {
  std::vector<Vector3d> v;
  for (double s1 : {1.0, -1.0}) {
    for (double s2 : {1.0, -1.0}) {
      v.emplace_back(0.0, s1, s2 * kGolden);
      v.emplace_back(s2 * kGolden, 0.0, s1);
      v.emplace_back(s1, s2 * kGolden, 0.0);
    }
  }
  return v;
}

std::vector<std::pair<int, int>> icosahedron_edges(const std::vector<Vector3d>& v) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < static_cast<int>(v.size()); ++i) {
    for (int j = i + 1; j < static_cast<int>(v.size()); ++j) {
      if (std::abs((v[i] - v[j]).squaredNorm() - 4.0) < 1e-9) edges.emplace_back(i, j);
    }
  }
  return edges;
}

std::vector<std::array<int, 3>> icosahedron_faces(const std::vector<Vector3d>& v) {
  auto adjacent = [&](int i, int j) {
    return std::abs((v[i] - v[j]).squaredNorm() - 4.0) < 1e-9;
  };
  std::vector<std::array<int, 3>> faces;
  for (int i = 0; i < static_cast<int>(v.size()); ++i) {
    for (int j = i + 1; j < static_cast<int>(v.size()); ++j) {
      if (!adjacent(i, j)) continue;
      for (int k = j + 1; k < static_cast<int>(v.size()); ++k) {
        if (adjacent(i, k) && adjacent(j, k)) faces.push_back({i, j, k});
      }
    }
  }
  return faces;
}

std::vector<Vector3d> icosahedron_face_centers() {
  auto v = icosahedron_vertices();
  std::vector<Vector3d> centers;
  for (const auto& f : icosahedron_faces(v)) centers.push_back(v[f[0]] + v[f[1]] + v[f[2]]);
  return centers;
}

// Truncated-icosahedron vertices: each icosahedron edge cut at thirds.
std::vector<Vector3d> truncated_icosahedron_vertices() {
  auto v = icosahedron_vertices();
  std::vector<Vector3d> pts;
  for (const auto& [i, j] : icosahedron_edges(v)) {
    pts.push_back(2.0 / 3.0 * v[i] + 1.0 / 3.0 * v[j]);
    pts.push_back(1.0 / 3.0 * v[i] + 2.0 / 3.0 * v[j]);
  }
  return pts;
}

}  // namespace

int face_count(Polyhedron kind) {
  switch (kind) {
    case Polyhedron::tetrahedron: return 4;
    case Polyhedron::cube: return 6;
    case Polyhedron::octahedron: return 8;
    case Polyhedron::dodecahedron: return 12;
    case Polyhedron::icosahedron: return 20;
    case Polyhedron::fullerene: return 32;
    case Polyhedron::pentakis_dodecahedron: return 60;
  }
  throw std::invalid_argument("face_count: unknown polyhedron");
}

std::string to_string(Polyhedron kind) {
  switch (kind) {
    case Polyhedron::tetrahedron: return "tetrahedron";
    case Polyhedron::cube: return "cube";
    case Polyhedron::octahedron: return "octahedron";
    case Polyhedron::dodecahedron: return "dodecahedron";
    case Polyhedron::icosahedron: return "icosahedron";
    case Polyhedron::fullerene: return "fullerene";
    case Polyhedron::pentakis_dodecahedron: return "pentakis-dodecahedron";
  }
  throw std::invalid_argument("to_string: unknown polyhedron");
}

std::optional<Polyhedron> parse_polyhedron(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  std::replace(s.begin(), s.end(), '_', '-');
  if (s == "tetrahedron") return Polyhedron::tetrahedron;
  if (s == "cube") return Polyhedron::cube;
  if (s == "octahedron") return Polyhedron::octahedron;
  if (s == "dodecahedron") return Polyhedron::dodecahedron;
  if (s == "icosahedron") return Polyhedron::icosahedron;
  if (s == "fullerene") return Polyhedron::fullerene;
  if (s == "pentakis-dodecahedron" || s == "pentakis") return Polyhedron::pentakis_dodecahedron;
  return std::nullopt;
}

std::vector<Eigen::Vector3d> face_directions(Polyhedron kind) {
  switch (kind) {
    case Polyhedron::tetrahedron:
      return normalized({{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}});
    case Polyhedron::cube:
      return {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    case Polyhedron::octahedron: {
      std::vector<Vector3d> dirs;
      for (double sx : {1.0, -1.0})
        for (double sy : {1.0, -1.0})
          for (double sz : {1.0, -1.0}) dirs.emplace_back(sx, sy, sz);
      return normalized(dirs);
    }
    case Polyhedron::dodecahedron:
      // Dodecahedron faces point at icosahedron vertices (duality).
      return normalized(icosahedron_vertices());
    case Polyhedron::icosahedron:
      return normalized(icosahedron_face_centers());
    case Polyhedron::fullerene: {
      // 12 pentagon centers (icosahedron vertices) + 20 hexagon centers
      // (icosahedron face centers).
      auto dirs = normalized(icosahedron_vertices());
      auto hexa = normalized(icosahedron_face_centers());
      dirs.insert(dirs.end(), hexa.begin(), hexa.end());
      return dirs;
    }
    case Polyhedron::pentakis_dodecahedron:
      // Pentakis faces point at truncated-icosahedron vertices (duality).
      return normalized(truncated_icosahedron_vertices());
  }
  throw std::invalid_argument("face_directions: unknown polyhedron");
}

Eigen::Vector2cd direction_to_qubit(const Eigen::Vector3d& u) {
  double norm = u.norm();
  if (std::abs(norm - 1.0) > 1e-9) throw std::invalid_argument("direction_to_qubit: direction not unit");
  double z = std::clamp(u.z() / norm, -1.0, 1.0);
  if (z <= -1.0 + 1e-15) return {std::complex<double>(0.0, 0.0), std::complex<double>(1.0, 0.0)};
  double theta = std::acos(z);
  double phi = std::atan2(u.y(), u.x());
  return {std::complex<double>(std::cos(theta / 2), 0.0),
          std::exp(std::complex<double>(0.0, phi)) * std::sin(theta / 2)};
}

}  // namespace qtomo
