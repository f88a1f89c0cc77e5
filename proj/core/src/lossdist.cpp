#include "qtomo/lossdist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qtomo/errors.hpp"
#include "qtomo/numerics.hpp"
#include "qtomo/rng.hpp"

namespace qtomo {

namespace {

// Real coordinates of a purification: [Re vec(c); Im vec(c)], column-major.
RealVector to_theta(const Matrix& c) {
  const long sr = c.size();
  RealVector theta(2 * sr);
  const auto flat = c.reshaped();
  for (long i = 0; i < sr; ++i) {
    theta(i) = flat(i).real();
    theta(sr + i) = flat(i).imag();
  }
  return theta;
}

Matrix from_theta(const RealVector& theta, long s, long r) {
  const long sr = s * r;
  Matrix c(s, r);
  auto flat = c.reshaped();
  for (long i = 0; i < sr; ++i) flat(i) = Complex(theta(i), theta(sr + i));
  return c;
}

// Orthonormal basis of the directions that change rho: the complement of the
// r^2 right-unitary gauge tangents c (i H) and the radial direction c.
RealMatrix physical_frame(const Matrix& c) {
  const long s = c.rows(), r = c.cols();
  const long gauge = r * r + 1;
  RealMatrix g(2 * s * r, gauge);
  long col = 0;
  for (long a = 0; a < r; ++a) {
    Matrix h = Matrix::Zero(r, r);
    h(a, a) = 1.0;
    g.col(col++) = to_theta(Complex(0.0, 1.0) * (c * h));
  }
  for (long a = 0; a < r; ++a) {
    for (long b = a + 1; b < r; ++b) {
      Matrix h = Matrix::Zero(r, r);
      h(a, b) = 1.0;
      h(b, a) = 1.0;
      g.col(col++) = to_theta(Complex(0.0, 1.0) * (c * h));
      h(a, b) = Complex(0.0, 1.0);
      h(b, a) = Complex(0.0, -1.0);
      g.col(col++) = to_theta(Complex(0.0, 1.0) * (c * h));
    }
  }
  g.col(col++) = to_theta(c);

  Eigen::HouseholderQR<RealMatrix> qr(g);
  const RealMatrix q = qr.householderQ() * RealMatrix::Identity(2 * s * r, 2 * s * r);
  return q.rightCols(2 * s * r - gauge);
}

double loss_vs_truth(const Matrix& c0, const Matrix& c) {
  // Both arguments are purifications; c0 has unit trace, c need not.
  const Eigen::JacobiSVD<Matrix> dec(c0.adjoint() * c);
  const double overlap = dec.singularValues().sum();
  return 1.0 - overlap * overlap / c.squaredNorm();
}

}  // namespace

LossCoefficients loss_coefficients(const InstrumentalMatrix& p, const DensityMatrix& rho0, int r,
                                   double n, double fd_step) {
  const int s = p.dim();
  if (rho0.dim() != s) throw std::invalid_argument("loss_coefficients: dimension mismatch");
  if (r < 1 || r > s) throw std::invalid_argument("loss_coefficients: rank out of range");
  if (rho0.rank() != r)
    throw std::invalid_argument(
        "loss_coefficients: state rank must equal r; the asymptotic theory fails on the "
        "model boundary");

  const InstrumentalMatrix pn = set_times_for_sample(p, rho0, n);
  const int m = pn.row_count();

  const Matrix c0 = purify(rho0, r).c;
  const Matrix amps = pn.rows * c0;
  const RealVector lam = amps.cwiseAbs2().rowwise().sum();
  const double lam_max = lam.maxCoeff();
  for (int j = 0; j < m; ++j)
    if (pn.times(j) > 0.0 && lam(j) <= 1e-18 * lam_max)
      throw BoundaryStateError(
          "loss_coefficients: zero intensity at the true state on row " + std::to_string(j), j);

  // Poisson Fisher information over the real purification coordinates.
  const long dim = 2L * s * r;
  RealMatrix fisher = RealMatrix::Zero(dim, dim);
  for (int j = 0; j < m; ++j) {
    const Matrix grad_c = pn.rows.row(j).adjoint() * amps.row(j);
    const RealVector v = 2.0 * to_theta(grad_c);
    fisher.noalias() += (pn.times(j) / lam(j)) * (v * v.transpose());
  }

  const RealMatrix frame = physical_frame(c0);
  const long nu = frame.cols();
  const RealMatrix fisher_red = frame.transpose() * fisher * frame;

  // Pseudo-inverse square root of the reduced Fisher information.
  Eigen::SelfAdjointEigenSolver<RealMatrix> fes(fisher_red);
  if (fes.info() != Eigen::Success)
    throw NumericError("loss_coefficients: Fisher eigendecomposition failed");
  const double mu_max = fes.eigenvalues().cwiseAbs().maxCoeff();
  RealVector inv_sqrt = RealVector::Zero(nu);
  for (long i = 0; i < nu; ++i)
    if (fes.eigenvalues()(i) > kSingularZeroTol * mu_max)
      inv_sqrt(i) = 1.0 / std::sqrt(fes.eigenvalues()(i));
  const RealMatrix sigma_half =
      fes.eigenvectors() * inv_sqrt.asDiagonal() * fes.eigenvectors().transpose();

  // Half the Hessian of 1 - F along the physical frame, by central differences.
  const double h = fd_step * c0.norm();
  const RealVector theta0 = to_theta(c0);
  auto loss_at = [&](const RealVector& y) {
    return loss_vs_truth(c0, from_theta(theta0 + frame * y, s, r));
  };
  RealMatrix hess(nu, nu);
  RealVector y = RealVector::Zero(nu);
  for (long i = 0; i < nu; ++i) {
    y(i) = h;
    const double fp = loss_at(y);
    y(i) = -h;
    const double fm = loss_at(y);
    y(i) = 0.0;
    hess(i, i) = (fp + fm) / (h * h);
  }
  for (long i = 0; i < nu; ++i) {
    for (long j = i + 1; j < nu; ++j) {
      y(i) = h;
      y(j) = h;
      const double fpp = loss_at(y);
      y(j) = -h;
      const double fpm = loss_at(y);
      y(i) = -h;
      y(j) = h;
      const double fmp = loss_at(y);
      y(j) = -h;
      const double fmm = loss_at(y);
      y(i) = 0.0;
      y(j) = 0.0;
      hess(i, j) = hess(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
    }
  }
  const RealMatrix curvature = 0.5 * hess;

  RealMatrix product = sigma_half * curvature * sigma_half;
  product = ((product + product.transpose()) / 2.0).eval();
  Eigen::SelfAdjointEigenSolver<RealMatrix> des(product);
  if (des.info() != Eigen::Success)
    throw NumericError("loss_coefficients: coefficient eigendecomposition failed");

  LossCoefficients out;
  out.n = n;
  out.s = s;
  out.r = r;
  out.d = des.eigenvalues().reverse().cwiseMax(0.0);
  return out;
}

double mean_loss(const LossCoefficients& c) { return c.d.sum(); }

double variance_loss(const LossCoefficients& c) { return 2.0 * c.d.squaredNorm(); }

double skewness(const LossCoefficients& c) {
  const double var = variance_loss(c);
  if (var <= 0.0) throw UndefinedMomentError("skewness: zero variance");
  return 8.0 * c.d.array().cube().sum() / std::pow(var, 1.5);
}

double excess(const LossCoefficients& c) {
  const double var = variance_loss(c);
  if (var <= 0.0) throw UndefinedMomentError("excess: zero variance");
  return 48.0 * c.d.array().pow(4).sum() / (var * var);
}

double scaled_loss(const LossCoefficients& c) { return c.n * c.d.sum(); }

RealVector sample_loss(const LossCoefficients& c, int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample_loss: count must be >= 1");
  auto gen = make_engine(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  RealVector draws(count);
  for (int i = 0; i < count; ++i) {
    double sum = 0.0;
    for (int j = 0; j < c.d.size(); ++j) {
      const double xi = gauss(gen);
      sum += c.d(j) * xi * xi;
    }
    draws(i) = sum;
  }
  return draws;
}

double optimal_min_loss(int s, int r) {
  if (s < 2) throw std::invalid_argument("optimal_min_loss: s must be >= 2");
  if (r < 1 || r > s) throw std::invalid_argument("optimal_min_loss: rank out of range");
  const double nu = (2.0 * s - r) * r - 1.0;
  return nu * nu / (4.0 * (s - 1.0));
}

double polyhedron_mixed_min(int l) {
  if (l < 1) throw std::invalid_argument("polyhedron_mixed_min: l must be >= 1");
  return (std::pow(10.0, l) - 1.0) / 4.0;
}

LossCoefficients white_noise_coefficients(const InstrumentalMatrix& p, double n) {
  const int s = p.dim(), m = p.row_count(), l = p.qubits;
  InstrumentalMatrix unit = p;
  unit.times = RealVector::Ones(m);
  const SvdResult dec = svd(measurement_matrix(unit));
  if (dec.s.size() < 2 || dec.s(0) - dec.s(1) <= 1e-9 * dec.s(0))
    throw DegenerateSpectrumError(
        "white_noise_coefficients: largest singular value is not isolated");

  const int jmax = s * s - 1;
  LossCoefficients out;
  out.n = n;
  out.s = s;
  out.r = s;
  out.d = RealVector(jmax);
  for (int j = 0; j < jmax; ++j) {
    const double b = dec.s(j + 1);
    out.d(j) = m / (4.0 * s * n * b * b);
  }
  std::sort(out.d.begin(), out.d.end(), std::greater<double>());

  const double expected = polyhedron_mixed_min(l);
  const double total = n * out.d.sum();
  if (std::abs(total - expected) > 1e-9 * expected)
    throw NumericError("white_noise_coefficients: normalization check failed, n*sum(d) = " +
                       std::to_string(total));
  return out;
}

double nines(double f) {
  if (f < 0.0 || f > 1.0) throw std::invalid_argument("nines: fidelity out of [0,1]");
  if (f == 1.0) return std::numeric_limits<double>::infinity();
  return -std::log10(1.0 - f);
}

}  // namespace qtomo
