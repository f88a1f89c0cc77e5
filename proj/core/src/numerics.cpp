#include "qtomo/numerics.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace qtomo {

SvdResult svd(const Matrix& m, bool full_u) {
  unsigned opts = (full_u ? Eigen::ComputeFullU : Eigen::ComputeThinU) | Eigen::ComputeFullV;
  Eigen::JacobiSVD<Matrix> dec(m, opts);
  return {dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

HermitianEig eigh(const Matrix& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("eigh: matrix not square");
  double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  double herm_dev = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (herm_dev > 1e-10 * scale) {
    throw std::invalid_argument("eigh: matrix not Hermitian (deviation " + std::to_string(herm_dev) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> dec(h);
  if (dec.info() != Eigen::Success) throw NumericError("eigh: eigensolver failed");
  return {dec.eigenvalues(), dec.eigenvectors()};
}

Matrix sqrtm_psd(const Matrix& h) {
  HermitianEig e = eigh(h);
  double scale = std::max(1.0, e.values.cwiseAbs().maxCoeff());
  if (e.values(0) < -kPsdErrorTol * scale) {
    throw NotPsdError("sqrtm_psd: eigenvalue " + std::to_string(e.values(0)) + " below PSD tolerance");
  }
  RealVector root = e.values.cwiseMax(0.0).cwiseSqrt();
  return e.vectors * root.asDiagonal() * e.vectors.adjoint();
}

Matrix pinv(const Matrix& m, double rcond) {
  Eigen::JacobiSVD<Matrix> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& s = dec.singularValues();
  double cutoff = rcond * (s.size() > 0 ? s(0) : 0.0);
  RealVector inv = RealVector::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff) inv(i) = 1.0 / s(i);
  }
  return dec.matrixV() * inv.asDiagonal() * dec.matrixU().adjoint();
}

// ------------------------ incomplete gamma ------------------------

namespace {

double gamma_p_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int i = 0; i < 1000; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_continued_fraction(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double chi2_cdf(double x, double dof) {
  if (dof <= 0) throw std::invalid_argument("chi2_cdf: dof must be positive");
  if (x <= 0) return 0.0;
  double a = dof / 2.0;
  double xx = x / 2.0;
  if (xx < a + 1.0) return std::min(1.0, gamma_p_series(a, xx));
  return std::min(1.0, std::max(0.0, 1.0 - gamma_q_continued_fraction(a, xx)));
}

// ------------------------ Kolmogorov-Smirnov ------------------------

double kolmogorov_q(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    double term = 2.0 * ((j % 2 == 1) ? 1.0 : -1.0) * std::exp(-2.0 * j * j * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-12) break;
  }
  return std::min(1.0, std::max(0.0, sum));
}

double ks_test_p(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw std::invalid_argument("ks_test_p: empty sample");
  std::sort(sample.begin(), sample.end());
  double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    double f = cdf(sample[i]);
    d = std::max(d, std::max(std::abs((i + 1) / n - f), std::abs(f - i / n)));
  }
  double sq = std::sqrt(n);
  return kolmogorov_q((sq + 0.12 + 0.11 / sq) * d);
}

double ks_two_sample_p(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample_p: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  double ne = std::sqrt(static_cast<double>(a.size()) * b.size() / (a.size() + b.size()));
  return kolmogorov_q((ne + 0.12 + 0.11 / ne) * d);
}

}  // namespace qtomo
