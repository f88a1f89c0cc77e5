#include "qtomo/states.hpp"

#include <cmath>
#include <random>

#include "qtomo/rng.hpp"

namespace qtomo {

DensityMatrix::DensityMatrix(Matrix rho) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols() || rho_.rows() == 0) {
    throw std::invalid_argument("DensityMatrix: matrix must be square and nonempty");
  }
  double herm_dev = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
  if (herm_dev > 1e-10) {
    throw std::invalid_argument("DensityMatrix: not Hermitian (deviation " + std::to_string(herm_dev) + ")");
  }
  double trace_dev = std::abs(rho_.trace() - Complex(1.0, 0.0));
  if (trace_dev > 1e-10) {
    throw std::invalid_argument("DensityMatrix: trace differs from one by " + std::to_string(trace_dev));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> dec(rho_, Eigen::EigenvaluesOnly);
  if (dec.eigenvalues()(0) < -kPsdClipTol) {
    throw NotPsdError("DensityMatrix: eigenvalue " + std::to_string(dec.eigenvalues()(0)) + " below zero");
  }
}

int DensityMatrix::rank(double tol) const {
  Eigen::SelfAdjointEigenSolver<Matrix> dec(rho_, Eigen::EigenvaluesOnly);
  int r = 0;
  for (Eigen::Index i = 0; i < dec.eigenvalues().size(); ++i) {
    if (dec.eigenvalues()(i) > tol) ++r;
  }
  return r;
}

namespace {

// Spectral square root with eigenvalues below 1e-14 * max clipped to exact
// zero. Rounding noise on a rank-deficient spectrum would otherwise be
// amplified to sqrt(eps) by the root.
Matrix clipped_root(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> dec(h);
  const double tol = 1e-14 * std::max(0.0, dec.eigenvalues().maxCoeff());
  RealVector roots = dec.eigenvalues();
  for (Eigen::Index i = 0; i < roots.size(); ++i)
    roots(i) = roots(i) > tol ? std::sqrt(roots(i)) : 0.0;
  return dec.eigenvectors() * roots.asDiagonal() * dec.eigenvectors().adjoint();
}

}  // namespace

double fidelity(const DensityMatrix& rho0, const DensityMatrix& rho) {
  if (rho0.dim() != rho.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
  // The singular values of sqrt(rho0) sqrt(rho) are the square roots of the
  // eigenvalues of sqrt(rho0) rho sqrt(rho0); summing them directly keeps
  // rank-deficient pairs accurate to machine precision.
  const Matrix a = clipped_root(rho0.matrix()) * clipped_root(rho.matrix());
  Eigen::JacobiSVD<Matrix> dec(a);
  const double sum = dec.singularValues().sum();
  return sum * sum;
}

double uhlmann_fidelity(const Purification& c0, const Purification& c) {
  if (c0.dim() != c.dim()) throw std::invalid_argument("uhlmann_fidelity: dimension mismatch");
  Matrix overlap = c0.c.adjoint() * c.c;
  Eigen::JacobiSVD<Matrix> dec(overlap);
  double sum = dec.singularValues().sum();
  return sum * sum;
}

Purification purify(const DensityMatrix& rho, int r) {
  if (r < 1 || r > rho.dim()) throw std::invalid_argument("purify: rank out of range");
  HermitianEig e = eigh(rho.matrix());
  int s = rho.dim();
  int above = 0;
  for (int i = 0; i < s; ++i) {
    if (e.values(i) > 1e-12) ++above;
  }
  if (above > r) {
    throw RankDeficitError("purify: state has " + std::to_string(above) +
                           " eigenvalues above 1e-12, rank " + std::to_string(r) + " requested");
  }
  Matrix c(s, r);
  for (int k = 0; k < r; ++k) {
    // k-th largest eigenpair; eigh sorts ascending.
    double lam = std::max(0.0, e.values(s - 1 - k));
    c.col(k) = e.vectors.col(s - 1 - k) * std::sqrt(lam);
  }
  return {c};
}

Vector ghz_vector(int qubits) {
  if (qubits < 2) throw std::invalid_argument("ghz: need at least 2 qubits");
  Eigen::Index dim = Eigen::Index(1) << qubits;
  Vector v = Vector::Zero(dim);
  v(0) = 1.0 / std::sqrt(2.0);
  v(dim - 1) = 1.0 / std::sqrt(2.0);
  return v;
}

DensityMatrix ghz(int qubits) {
  Vector v = ghz_vector(qubits);
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix white_noise_mix(const Vector& psi, double f) {
  if (f < 0.0 || f > 1.0) throw std::invalid_argument("white_noise_mix: f must lie in [0, 1]");
  double norm = psi.norm();
  if (std::abs(norm - 1.0) > 1e-10) throw std::invalid_argument("white_noise_mix: psi not normalized");
  Eigen::Index s = psi.size();
  Matrix rho = f / static_cast<double>(s) * Matrix::Identity(s, s) + (1.0 - f) * (psi * psi.adjoint());
  return DensityMatrix(rho);
}

Vector random_pure_vector(int s, std::uint64_t seed) {
  if (s < 1) throw std::invalid_argument("random_pure: dimension must be positive");
  std::mt19937_64 gen = make_engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(s);
  for (int i = 0; i < s; ++i) {
    double re = normal(gen);
    double im = normal(gen);
    v(i) = Complex(re, im);
  }
  v.normalize();
  return v;
}

DensityMatrix random_pure(int s, std::uint64_t seed) {
  Vector v = random_pure_vector(s, seed);
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix random_mixed(int s, int r, std::uint64_t seed) {
  if (s < 1 || r < 1 || r > s) throw std::invalid_argument("random_mixed: need 1 <= r <= s");
  std::mt19937_64 gen = make_engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix a(s, r);
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < r; ++j) {
      a(i, j) = Complex(normal(gen), normal(gen));
    }
  }
  Matrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(rho);
}

}  // namespace qtomo
