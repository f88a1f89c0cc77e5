#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>

#include "qtomo/errors.hpp"

namespace qtomo {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Threshold (relative to the largest singular value) below which singular
// values count as zero in pinv() and rank decisions.
inline constexpr double kSingularZeroTol = 1e-10;

// Eigenvalues in [-kPsdClipTol, 0) are clipped to zero in PSD routines;
// anything below -kPsdErrorTol is a hard error.
inline constexpr double kPsdClipTol = 1e-10;
inline constexpr double kPsdErrorTol = 1e-8;

struct SvdResult {
  Matrix u;       // m x m when full_u, else m x min(m,n)
  RealVector s;   // min(m,n) singular values, descending
  Matrix v;       // n x n
};

struct HermitianEig {
  RealVector values;  // ascending
  Matrix vectors;     // columns match values
};

// Singular value decomposition m = u * diag(s) * v^dag.
SvdResult svd(const Matrix& m, bool full_u = false);

// Eigendecomposition of a Hermitian matrix (checked to 1e-10).
HermitianEig eigh(const Matrix& h);

// Principal square root of a PSD Hermitian matrix.
Matrix sqrtm_psd(const Matrix& h);

// Moore-Penrose pseudo-inverse with singular values below
// rcond * s_max treated as zero.
Matrix pinv(const Matrix& m, double rcond = kSingularZeroTol);

// Chi-squared CDF via the regularized lower incomplete gamma function.
double chi2_cdf(double x, double dof);

// ------------------------ statistics helpers ------------------------

// Complementary Kolmogorov CDF Q(lambda) = 2 sum (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_q(double lambda);

// One-sample Kolmogorov-Smirnov p-value against a reference CDF.
double ks_test_p(std::vector<double> sample, const std::function<double(double)>& cdf);

// Two-sample Kolmogorov-Smirnov p-value.
double ks_two_sample_p(std::vector<double> a, std::vector<double> b);

}  // namespace qtomo
