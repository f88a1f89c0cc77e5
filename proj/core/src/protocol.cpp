#include "qtomo/protocol.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qtomo/errors.hpp"
#include "qtomo/numerics.hpp"

namespace qtomo {

InstrumentalMatrix single_qubit_protocol(Polyhedron kind) {
  const auto dirs = face_directions(kind);
  const int m = static_cast<int>(dirs.size());
  InstrumentalMatrix p;
  p.label = to_string(kind);
  p.qubits = 1;
  p.rows = Matrix(m, 2);
  p.times = RealVector::Ones(m);
  for (int j = 0; j < m; ++j) {
    // Rows act as bras: Lambda_j = row^dag row then projects onto the
    // measured state rather than its complex conjugate.
    p.rows.row(j) = direction_to_qubit(dirs[j]).conjugate().transpose();
  }
  return p;
}

InstrumentalMatrix tensor_power(const InstrumentalMatrix& p, int l) {
  if (p.dim() != 2) throw std::invalid_argument("tensor_power: base protocol must be single-qubit");
  if (l < 1) throw std::invalid_argument("tensor_power: l must be positive");
  if (l == 1) return p;

  const double entries = std::pow(static_cast<double>(p.row_count()), l) * std::pow(2.0, l);
  if (entries > static_cast<double>(1 << 30))
    throw std::invalid_argument("tensor_power: protocol matrix would exceed the memory cap");

  InstrumentalMatrix out = p;
  out.label = p.label + "^" + std::to_string(l);
  out.qubits = l;
  for (int step = 1; step < l; ++step) {
    const long mc = out.rows.rows(), sc = out.rows.cols();
    const long mb = p.rows.rows(), sb = p.rows.cols();
    Matrix rows(mc * mb, sc * sb);
    RealVector times(mc * mb);
    for (long a = 0; a < mc; ++a) {
      for (long b = 0; b < mb; ++b) {
        for (long i = 0; i < sc; ++i)
          rows.block(a * mb + b, i * sb, 1, sb) = out.rows(a, i) * p.rows.row(b);
        times(a * mb + b) = out.times(a) * p.times(b);
      }
    }
    out.rows = std::move(rows);
    out.times = std::move(times);
  }
  return out;
}

Matrix intensity_operator(const InstrumentalMatrix& p, int j) {
  if (j < 0 || j >= p.row_count()) throw std::invalid_argument("intensity_operator: row index out of range");
  return p.rows.row(j).adjoint() * p.rows.row(j);
}

Matrix amplitudes(const InstrumentalMatrix& p, const Matrix& c) {
  if (c.rows() != p.dim()) throw std::invalid_argument("amplitudes: dimension mismatch");
  return p.rows * c;
}

RealVector intensities(const InstrumentalMatrix& p, const DensityMatrix& rho) {
  if (rho.dim() != p.dim()) throw std::invalid_argument("intensities: dimension mismatch");
  const Matrix a = p.rows * rho.matrix();
  RealVector lam = (a.array() * p.rows.array().conjugate()).rowwise().sum().real();
  for (int j = 0; j < lam.size(); ++j) lam(j) = std::max(lam(j), 0.0);
  return lam;
}

InstrumentalMatrix set_times_for_sample(InstrumentalMatrix p, const DensityMatrix& rho,
                                        double n) {
  if (n <= 0.0) throw std::invalid_argument("set_times_for_sample: n must be positive");
  const RealVector lam = intensities(p, rho);
  const double total = lam.dot(p.times);
  if (total <= 0.0)
    throw std::invalid_argument("set_times_for_sample: state yields zero intensity on every row");
  p.times *= n / total;
  return p;
}

UnityCheck unity_decomposition(const InstrumentalMatrix& p) {
  const int s = p.dim();
  const Matrix sum = p.rows.adjoint() * p.times.asDiagonal() * p.rows;
  UnityCheck check;
  check.intensity = sum.trace().real() / s;
  check.residual = (sum - check.intensity * Matrix::Identity(s, s)).norm();
  check.unity = check.intensity > 0.0 && check.residual <= 1e-9 * check.intensity;
  return check;
}

Matrix measurement_matrix(const InstrumentalMatrix& p) {
  const int m = p.row_count(), s = p.dim();
  Matrix b(m, static_cast<long>(s) * s);
  for (int j = 0; j < m; ++j)
    for (int col = 0; col < s; ++col)
      for (int row = 0; row < s; ++row)
        b(j, static_cast<long>(col) * s + row) =
            p.times(j) * std::conj(p.rows(j, col)) * p.rows(j, row);
  return b;
}

Completeness completeness(const InstrumentalMatrix& p) {
  const SvdResult dec = svd(measurement_matrix(p));
  Completeness result;
  result.singular_values = dec.s;
  const double cutoff = kSingularZeroTol * dec.s(0);
  result.q = static_cast<int>((dec.s.array() > cutoff).count());
  result.complete = result.q == p.dim() * p.dim();
  return result;
}

AdequacyDof adequacy_possible(const InstrumentalMatrix& p, int r) {
  const int s = p.dim();
  if (r < 1 || r > s) throw std::invalid_argument("adequacy_possible: rank out of range");
  AdequacyDof result;
  result.dof = p.row_count() - (2 * s - r) * r;
  result.redundant = result.dof > 0;
  return result;
}

}  // namespace qtomo
