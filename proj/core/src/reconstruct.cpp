#include "qtomo/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "qtomo/adequacy.hpp"
#include "qtomo/errors.hpp"
#include "qtomo/numerics.hpp"

namespace qtomo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

RealVector row_intensities(const Matrix& m) {
  return m.cwiseAbs2().rowwise().sum();
}

double log_likelihood(const RealVector& k, const RealVector& means) {
  double ll = 0.0;
  for (int j = 0; j < k.size(); ++j) {
    if (k(j) > 0.0) {
      if (means(j) <= 0.0) return -kInf;
      ll += k(j) * std::log(means(j));
    }
    ll -= means(j);
  }
  return ll;
}

Matrix truncated_start(const InstrumentalMatrix& p, const RealVector& k, const RealVector& times,
                       int r) {
  const DensityMatrix rho0 = pseudo_inverse_estimate(p, k, times);
  const HermitianEig eig = eigh(rho0.matrix());
  const int s = rho0.dim();
  Matrix c(s, r);
  for (int col = 0; col < r; ++col) {
    const int idx = s - 1 - col;
    const double w = std::max(eig.values(idx), 0.0);
    c.col(col) = std::sqrt(w) * eig.vectors.col(idx);
  }
  // A zero column would stay zero under the fixed-point map; nudge it.
  const double scale = std::max(c.norm(), 1e-30);
  auto gen = make_engine(child_seed(0x9e3779b97f4a7c15ULL, static_cast<std::uint64_t>(r)));
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int col = 0; col < r; ++col) {
    if (c.col(col).norm() <= 1e-14 * scale) {
      for (int i = 0; i < s; ++i) c(i, col) = 1e-6 * scale * Complex(gauss(gen), gauss(gen));
    }
  }
  return c;
}

}  // namespace

DensityMatrix pseudo_inverse_estimate(const InstrumentalMatrix& p, const RealVector& k,
                                      const RealVector& times) {
  if (k.size() != p.row_count() || times.size() != p.row_count())
    throw std::invalid_argument("pseudo_inverse_estimate: record does not match protocol");
  InstrumentalMatrix pt = p;
  pt.times = times;
  const Completeness comp = completeness(pt);
  const int s = p.dim();
  if (!comp.complete)
    throw IncompleteProtocolError("pseudo_inverse_estimate: protocol is incomplete, q = " +
                                      std::to_string(comp.q) + " < " + std::to_string(s * s),
                                  comp.q);

  const Matrix b = measurement_matrix(pt);
  const SvdResult dec = svd(b);
  const Vector q = dec.u.adjoint() * k.cast<Complex>();
  const double cutoff = kSingularZeroTol * dec.s(0);
  Vector f = Vector::Zero(dec.s.size());
  for (int i = 0; i < dec.s.size(); ++i)
    if (dec.s(i) > cutoff) f(i) = q(i) / dec.s(i);
  const Vector vec_rho = dec.v * f;

  Matrix rho(s, s);
  for (int col = 0; col < s; ++col) rho.col(col) = vec_rho.segment(static_cast<long>(col) * s, s);
  rho = ((rho + rho.adjoint()) / 2.0).eval();

  const HermitianEig eig = eigh(rho);
  RealVector clipped = eig.values.cwiseMax(0.0);
  const double trace = clipped.sum();
  if (trace <= 0.0)
    throw NumericError("pseudo_inverse_estimate: projected estimate has zero trace");
  clipped /= trace;
  const Matrix projected =
      eig.vectors * clipped.asDiagonal() * eig.vectors.adjoint();
  return DensityMatrix(projected);
}

DensityMatrix pseudo_inverse_estimate(const InstrumentalMatrix& p, const CountRecord& rec) {
  return pseudo_inverse_estimate(p, rec.counts.cast<double>(), rec.times);
}

ReconstructionResult mle(const InstrumentalMatrix& p, const RealVector& k, const RealVector& times,
                         int r, const MleOptions& opts, const std::optional<Matrix>& start) {
  const int m = p.row_count(), s = p.dim();
  if (k.size() != m || times.size() != m)
    throw std::invalid_argument("mle: record does not match protocol");
  if (r < 1 || r > s) throw std::invalid_argument("mle: rank out of range");
  const double total = k.sum();
  if (total <= 0.0) throw std::invalid_argument("mle: record contains no events");

  // I = sum_j t_j Lambda_j is constant; factor once.
  const Matrix info = p.rows.adjoint() * times.asDiagonal() * p.rows;
  const Eigen::LDLT<Matrix> info_ldlt(info);
  if (info_ldlt.info() != Eigen::Success)
    throw NumericError("mle: failed to factor the protocol operator");

  const double floor = 1e-12 * (total / m);

  Matrix c = start ? *start : truncated_start(p, k, times, r);
  if (c.rows() != s || c.cols() != r) throw std::invalid_argument("mle: start has wrong shape");

  Matrix amps = p.rows * c;
  RealVector lam = row_intensities(amps);
  double ll = log_likelihood(k, lam.cwiseProduct(times));

  double alpha = opts.initial_damping;
  int iterations = 0;
  bool converged = false;
  double rel_resid = kInf;

  while (iterations < opts.max_iter) {
    Matrix scaled = amps;
    for (int j = 0; j < m; ++j) scaled.row(j) *= k(j) / std::max(lam(j), floor);
    const Matrix jc = p.rows.adjoint() * scaled;
    const Matrix ic = info * c;
    const double resid = (ic - jc).norm();
    rel_resid = resid / std::max(ic.norm(), 1e-300);

    const Matrix target = info_ldlt.solve(jc);
    bool accepted = false;
    double step = kInf;
    while (!accepted) {
      const Matrix c_new = (1.0 - alpha) * c + alpha * target;
      const Matrix amps_new = p.rows * c_new;
      const RealVector lam_new = row_intensities(amps_new);
      const double ll_new = log_likelihood(k, lam_new.cwiseProduct(times));
      if (ll_new >= ll - 1e-12 * std::abs(ll) || alpha < 1e-12) {
        step = (c_new - c).norm() / std::max(c_new.norm(), 1e-300);
        c = c_new;
        amps = amps_new;
        lam = lam_new;
        ll = ll_new;
        accepted = true;
        alpha = opts.initial_damping;
      } else {
        alpha /= 2.0;
      }
    }
    ++iterations;
    if (rel_resid <= opts.stationarity_tol && step <= opts.step_tol) {
      converged = true;
      break;
    }
  }

  // Exact count normalization: sum lambda_j t_j = sum k_j.
  const double flux = lam.dot(times);
  if (flux > 0.0) {
    c *= std::sqrt(total / flux);
    amps = p.rows * c;
    lam = row_intensities(amps);
    ll = log_likelihood(k, lam.cwiseProduct(times));
  }

  const Matrix c_unit = c / c.norm();
  Matrix rho = c_unit * c_unit.adjoint();
  rho = ((rho + rho.adjoint()) / 2.0).eval();
  ReconstructionResult result{Purification{c_unit}, DensityMatrix(rho)};
  result.rank = r;
  result.loglik = ll;
  result.iterations = iterations;
  result.converged = converged;
  result.gradient_norm = rel_resid;
  return result;
}

ReconstructionResult mle(const InstrumentalMatrix& p, const CountRecord& rec, int r,
                         const MleOptions& opts, const std::optional<Matrix>& start) {
  return mle(p, rec.counts.cast<double>(), rec.times, r, opts, start);
}

AutoReconstruction reconstruct_auto(const InstrumentalMatrix& p, const CountRecord& rec,
                                    const AutoOptions& opts) {
  const int s = p.dim();
  std::vector<int> ranks = opts.ranks;
  if (ranks.empty()) {
    ranks.resize(s);
    std::iota(ranks.begin(), ranks.end(), 1);
  }
  std::sort(ranks.begin(), ranks.end());

  AutoReconstruction out;
  for (int r : ranks) {
    RankCandidate cand{r, mle(p, rec, r, opts.mle)};
    const AdequacyDof dof = adequacy_possible(p, r);
    cand.testable = dof.redundant;
    cand.dof = dof.dof;
    if (cand.testable) {
      const AdequacyReport report = adequacy_test(p, rec, cand.result, opts.alpha);
      cand.statistic = report.statistic;
      cand.p_value = report.p_value;
      cand.adequate = report.adequate;
    }
    out.candidates.push_back(std::move(cand));
    if (out.candidates.back().adequate) {
      out.selected_index = static_cast<int>(out.candidates.size()) - 1;
      out.adequate = true;
      return out;
    }
  }
  out.selected_index = static_cast<int>(out.candidates.size()) - 1;
  out.adequate = false;
  return out;
}

std::vector<BatchRun> run_batch(const InstrumentalMatrix& p, const DensityMatrix& rho, int r,
                                double n, int runs, std::uint64_t seed, int workers,
                                const MleOptions& opts) {
  if (runs < 1) throw std::invalid_argument("run_batch: runs must be >= 1");
  if (workers < 1) workers = 1;
  const InstrumentalMatrix pn = set_times_for_sample(p, rho, n);

  std::vector<BatchRun> results(runs);
  auto work = [&](int begin, int stride) {
    for (int i = begin; i < runs; i += stride) {
      BatchRun& run = results[i];
      try {
        run.record = simulate_counts(pn, rho, child_seed(seed, static_cast<std::uint64_t>(i)));
        run.result = mle(pn, run.record, r, opts);
        run.loss = 1.0 - fidelity(rho, run.result->rho_hat);
      } catch (const std::exception& e) {
        run.result.reset();
        run.loss = std::numeric_limits<double>::quiet_NaN();
        run.error = e.what();
      }
    }
  };

  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    for (auto& t : pool) t.join();
  }
  return results;
}

}  // namespace qtomo
