#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qtomo {

// Platonic solids plus the two higher measurement layouts. The enum value
// order matches increasing face count.
enum class Polyhedron {
  tetrahedron,
  cube,
  octahedron,
  dodecahedron,
  icosahedron,
  fullerene,
  pentakis_dodecahedron,
};

inline constexpr std::array<Polyhedron, 7> kAllPolyhedra = {
    Polyhedron::tetrahedron,  Polyhedron::cube,       Polyhedron::octahedron,
    Polyhedron::dodecahedron, Polyhedron::icosahedron, Polyhedron::fullerene,
    Polyhedron::pentakis_dodecahedron,
};

int face_count(Polyhedron kind);
std::string to_string(Polyhedron kind);
std::optional<Polyhedron> parse_polyhedron(std::string_view name);

// Unit outward face normals in a fixed orientation (icosahedral family built
// from the golden-ratio icosahedron with vertices at cyclic permutations of
// (0, +-1, +-phi)). The directions of every catalog sum to zero and satisfy
// sum_j u_j u_j^T = (m/3) I.
std::vector<Eigen::Vector3d> face_directions(Polyhedron kind);

// Bloch map: unit direction -> qubit state (cos(theta/2), e^{i phi} sin(theta/2)).
// The south pole maps to exactly (0, 1).
Eigen::Vector2cd direction_to_qubit(const Eigen::Vector3d& u);

}  // namespace qtomo
