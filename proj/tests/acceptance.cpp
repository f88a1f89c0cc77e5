// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "qtomo/adequacy.hpp"
#include "qtomo/io.hpp"
#include "qtomo/lossdist.hpp"
#include "qtomo/numerics.hpp"
#include "qtomo/reconstruct.hpp"
#include "qtomo/rng.hpp"
#include "qtomo/scan.hpp"
#include "qtomo/simulate.hpp"

using namespace qtomo;

namespace {

int g_failures = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] %s%s%s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.empty() ? "" : ": ",
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

void run(const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
  try {
    const auto [pass, detail] = body();
    report(name, pass, detail);
  } catch (const std::exception& e) {
    report(name, false, std::string("exception: ") + e.what());
  }
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::pair<bool, std::string> criterion_single_qubit_extremes() {
  struct Expect {
    Polyhedron kind;
    double max;
    double tol;
  };
  const std::vector<Expect> expects = {
      {Polyhedron::tetrahedron, 1.5, 1e-4},
      {Polyhedron::cube, 1.125, 1e-4},
      {Polyhedron::octahedron, 1.125, 1e-4},
      {Polyhedron::dodecahedron, 36.0 / 35.0, 1e-4},
      {Polyhedron::icosahedron, 45.0 / 44.0, 1e-4},
      {Polyhedron::pentakis_dodecahedron, 1.0041037488, 1e-6},
  };
  bool pass = true;
  std::string detail;
  double slowest = 0.0;
  for (const Expect& e : expects) {
    const auto t0 = std::chrono::steady_clock::now();
    const SphereGrid grid = scan_bloch(e.kind, 1.0, 1e5);
    const double sec = seconds_since(t0);
    slowest = std::max(slowest, sec);
    std::printf("  %-22s max=%.10f min=%.10f  (%.1f s)\n", to_string(e.kind).c_str(), grid.max,
                grid.min, sec);
    if (std::abs(grid.max - e.max) > e.tol) {
      pass = false;
      detail += to_string(e.kind) + " max=" + fmt(grid.max) + " want " + fmt(e.max) + "; ";
    }
    if (std::abs(grid.min - 1.0) > 1e-6) {
      pass = false;
      detail += to_string(e.kind) + " min=" + fmt(grid.min) + "; ";
    }
    if (sec >= 60.0) {
      pass = false;
      detail += to_string(e.kind) + " took " + fmt(sec) + " s; ";
    }
  }
  const auto t0 = std::chrono::steady_clock::now();
  const SphereGrid full = scan_bloch(Polyhedron::fullerene, 1.0, 1e5);
  const double sec = seconds_since(t0);
  std::printf("  %-22s max=%.10f min=%.10f  (%.1f s)\n", "fullerene", full.max, full.min, sec);
  if (full.max < 1.0042 || full.max > 1.0044) {
    pass = false;
    detail += "fullerene max=" + fmt(full.max) + " outside [1.0042,1.0044]; ";
  }
  if (std::abs(full.min - 1.0) > 1e-6) {
    pass = false;
    detail += "fullerene min=" + fmt(full.min) + "; ";
  }
  if (sec >= 60.0) {
    pass = false;
    detail += "fullerene took " + fmt(sec) + " s; ";
  }
  if (pass) detail = "seven solids, slowest " + fmt(std::max(slowest, sec)) + " s";
  return {pass, detail};
}

std::pair<bool, std::string> criterion_two_qubit_extremes() {
  struct Expect {
    Polyhedron kind;
    double max;
    double tol;
  };
  const std::vector<Expect> expects = {
      {Polyhedron::tetrahedron, 4.442971458, 1e-3},
      {Polyhedron::octahedron, 3.4708, 1e-3},
      {Polyhedron::dodecahedron, 3.42, 0.01},
  };
  bool pass = true;
  std::string detail;
  const auto t0 = std::chrono::steady_clock::now();
  for (const Expect& e : expects) {
    const InstrumentalMatrix p2 = tensor_power(single_qubit_protocol(e.kind), 2);
    const ExtremalLoss ext = extremal_loss(p2, 100, 20240);
    std::printf("  %-22s L_max=%.9f L_min=%.9f certified=%d/%d\n", to_string(e.kind).c_str(),
                ext.l_max, ext.l_min, int(ext.certified_max), int(ext.certified_min));
    if (std::abs(ext.l_max - e.max) > e.tol) {
      pass = false;
      detail += to_string(e.kind) + " L_max=" + fmt(ext.l_max) + " want " + fmt(e.max) + "; ";
    }
    if (std::abs(ext.l_min - 3.0) > 1e-6) {
      pass = false;
      detail += to_string(e.kind) + " L_min=" + fmt(ext.l_min) + "; ";
    }
  }
  const double sec = seconds_since(t0);
  if (sec > 600.0) {
    pass = false;
    detail += "runtime " + fmt(sec) + " s exceeds 10 min; ";
  }
  if (pass) detail = "three protocols in " + fmt(sec) + " s";
  return {pass, detail};
}

std::pair<bool, std::string> criterion_white_noise() {
  bool pass = true;
  std::string detail;
  for (const Polyhedron kind : kAllPolyhedra) {
    const double l = scaled_loss(white_noise_coefficients(single_qubit_protocol(kind), 1e5));
    if (std::abs(l - 2.25) > 1e-9) {
      pass = false;
      detail += to_string(kind) + " L=" + fmt(l) + "; ";
    }
  }
  for (const Polyhedron kind : {Polyhedron::tetrahedron, Polyhedron::cube}) {
    const double l = scaled_loss(
        white_noise_coefficients(tensor_power(single_qubit_protocol(kind), 2), 1e5));
    if (std::abs(l - 24.75) > 1e-6) {
      pass = false;
      detail += to_string(kind) + "^2 L=" + fmt(l) + "; ";
    }
  }
  // The generic Hessian route agrees with the spectral route at the
  // white-noise truth.
  struct Case {
    Polyhedron kind;
    int l;
  };
  double worst = 0.0;
  for (const Case& c : {Case{Polyhedron::tetrahedron, 1}, Case{Polyhedron::dodecahedron, 1},
                        Case{Polyhedron::tetrahedron, 2}}) {
    const InstrumentalMatrix p = tensor_power(single_qubit_protocol(c.kind), c.l);
    const int s = p.dim();
    const DensityMatrix mixed(Matrix::Identity(s, s) / double(s));
    const LossCoefficients generic =
        loss_coefficients(set_times_for_sample(p, mixed, 1e5), mixed, s, 1e5);
    const LossCoefficients spectral = white_noise_coefficients(p, 1e5);
    for (int j = 0; j < generic.j_max(); ++j)
      worst = std::max(worst, std::abs(generic.d(j) - spectral.d(j)) / spectral.d(0));
    if (std::abs(scaled_loss(generic) - scaled_loss(spectral)) >
        1e-6 * scaled_loss(spectral)) {
      pass = false;
      detail += to_string(c.kind) + "^" + std::to_string(c.l) + " route mismatch; ";
    }
  }
  if (worst > 1e-6) {
    pass = false;
    detail += "coefficient deviation " + fmt(worst) + "; ";
  }
  if (pass) detail = "nine protocols, route deviation " + fmt(worst);
  return {pass, detail};
}

std::pair<bool, std::string> criterion_bounds() {
  bool pass = true;
  std::string detail;
  const struct {
    int s, r;
    double want;
  } exact[] = {{2, 1, 1.0}, {2, 2, 2.25}, {4, 1, 3.0}, {8, 1, 7.0}, {4, 4, 18.75}};
  for (const auto& e : exact)
    if (optimal_min_loss(e.s, e.r) != e.want) {
      pass = false;
      detail += "optimal_min_loss(" + std::to_string(e.s) + "," + std::to_string(e.r) +
                ")=" + fmt(optimal_min_loss(e.s, e.r)) + "; ";
    }
  double l1_min = 1e300;
  for (const Polyhedron kind : kAllPolyhedra) {
    const InstrumentalMatrix p = single_qubit_protocol(kind);
    for (int i = 0; i < 200; ++i) {
      const DensityMatrix truth = random_pure(2, child_seed(505, i));
      const double l =
          scaled_loss(loss_coefficients(set_times_for_sample(p, truth, 1e5), truth, 1, 1e5));
      l1_min = std::min(l1_min, l);
      if (l < 1.0 - 1e-6) {
        pass = false;
        detail += to_string(kind) + " state " + std::to_string(i) + " L=" + fmt(l) + "; ";
      }
    }
  }
  double l2_min = 1e300;
  const InstrumentalMatrix tetra2 = tensor_power(single_qubit_protocol(Polyhedron::tetrahedron), 2);
  for (int i = 0; i < 200; ++i) {
    const DensityMatrix truth = random_pure(4, child_seed(506, i));
    const double l =
        scaled_loss(loss_coefficients(set_times_for_sample(tetra2, truth, 1e5), truth, 1, 1e5));
    l2_min = std::min(l2_min, l);
    if (l < 3.0 - 1e-6) {
      pass = false;
      detail += "tetrahedron^2 state " + std::to_string(i) + " L=" + fmt(l) + "; ";
    }
  }
  if (pass)
    detail = "exact bounds hit; min over random pure states " + fmt(l1_min) + " (1q), " +
             fmt(l2_min) + " (2q)";
  return {pass, detail};
}

std::pair<bool, std::string> criterion_distribution() {
  const InstrumentalMatrix p = single_qubit_protocol(Polyhedron::dodecahedron);
  const DensityMatrix truth = random_pure(2, 606);
  const double n = 1e5;
  const int runs = 500;
  const LossCoefficients c =
      loss_coefficients(set_times_for_sample(p, truth, n), truth, 1, n);

  const auto batch = run_batch(p, truth, 1, n, runs, 6002);
  std::vector<double> losses;
  for (const BatchRun& b : batch) {
    if (!b.error.empty()) return {false, "run failed: " + b.error};
    losses.push_back(b.loss);
  }
  double mean = 0.0;
  for (double l : losses) mean += l / runs;
  double var = 0.0;
  for (double l : losses) var += (l - mean) * (l - mean) / (runs - 1);
  const double se = std::sqrt(var / runs);

  const RealVector draws = sample_loss(c, runs, 42);
  std::vector<double> reference(draws.data(), draws.data() + draws.size());
  const double p_ks = ks_two_sample_p(losses, reference);

  const double mean_dev = std::abs(mean - mean_loss(c)) / se;
  const double var_dev = std::abs(var - variance_loss(c)) / variance_loss(c);
  std::printf("  mean=%.4g theory=%.4g (%.2f se)  var=%.4g theory=%.4g (%.1f%%)  KS p=%.3f\n",
              mean, mean_loss(c), mean_dev, var, variance_loss(c), 100.0 * var_dev, p_ks);

  bool pass = true;
  std::string detail;
  if (mean_dev > 3.0) {
    pass = false;
    detail += "mean off by " + fmt(mean_dev) + " se; ";
  }
  if (var_dev > 0.15) {
    pass = false;
    detail += "variance off by " + fmt(100 * var_dev) + "%; ";
  }
  if (p_ks <= 0.01) {
    pass = false;
    detail += "KS p=" + fmt(p_ks) + "; ";
  }
  if (pass)
    detail = "mean within " + fmt(mean_dev) + " se, variance within " + fmt(100 * var_dev) +
             "%, KS p=" + fmt(p_ks);
  return {pass, detail};
}

std::pair<bool, std::string> criterion_adequacy() {
  const InstrumentalMatrix p2 = tensor_power(single_qubit_protocol(Polyhedron::tetrahedron), 2);

  // Part 1: statistics under a pure truth at rank 1 follow chi-squared(9).
  const DensityMatrix truth = random_pure(4, 707);
  const InstrumentalMatrix timed = set_times_for_sample(p2, truth, 1e5);
  std::vector<double> stats;
  for (int i = 0; i < 1000; ++i) {
    const CountRecord rec = simulate_counts(timed, truth, child_seed(7000, i));
    const ReconstructionResult fit = mle(timed, rec, 1);
    stats.push_back(adequacy_test(timed, rec, fit).statistic);
  }
  const double p_ks = ks_test_p(stats, [](double x) { return chi2_cdf(x, 9.0); });

  // Part 2: a rank-1 fit to a rank-2 truth is rejected at n = 1e6.
  const DensityMatrix rank2 = random_mixed(4, 2, 708);
  const InstrumentalMatrix timed2 = set_times_for_sample(p2, rank2, 1e6);
  int rejected = 0;
  const int runs = 100;
  for (int i = 0; i < runs; ++i) {
    const CountRecord rec = simulate_counts(timed2, rank2, child_seed(7100, i));
    const ReconstructionResult fit = mle(timed2, rec, 1);
    if (adequacy_test(timed2, rec, fit).p_value < 0.01) ++rejected;
  }
  std::printf("  chi2(9) KS p=%.3f  rank-2 rejection %d/%d\n", p_ks, rejected, runs);

  bool pass = true;
  std::string detail;
  if (p_ks <= 0.01) {
    pass = false;
    detail += "KS p=" + fmt(p_ks) + "; ";
  }
  if (rejected < 99) {
    pass = false;
    detail += "rejected " + std::to_string(rejected) + "/" + std::to_string(runs) + "; ";
  }
  if (pass)
    detail = "KS p=" + fmt(p_ks) + ", rejection " + std::to_string(rejected) + "/" +
             std::to_string(runs);
  return {pass, detail};
}

std::pair<bool, std::string> criterion_fidelity() {
  double worst_pair = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const int s = 2 + i % 7;
    const int r0 = 1 + i % s;
    const int r1 = 1 + (i / 7) % s;
    const DensityMatrix rho0 = random_mixed(s, r0, child_seed(808, 2 * i));
    const DensityMatrix rho1 = random_mixed(s, r1, child_seed(808, 2 * i + 1));
    const double direct = fidelity(rho0, rho1);
    const double purified = uhlmann_fidelity(purify(rho0, r0), purify(rho1, r1));
    worst_pair = std::max(worst_pair, std::abs(direct - purified));
  }

  double worst_gauge = 0.0;
  auto engine = make_engine(809);
  std::normal_distribution<double> normal;
  for (int i = 0; i < 200; ++i) {
    const int s = 2 + i % 7;
    const int r = 1 + i % s;
    const Purification c0{Matrix(purify(random_mixed(s, r, child_seed(810, 2 * i)), r).c)};
    const Purification c{Matrix(purify(random_mixed(s, r, child_seed(810, 2 * i + 1)), r).c)};
    Matrix g(r, r);
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b) g(a, b) = Complex(normal(engine), normal(engine));
    const Matrix v = Eigen::HouseholderQR<Matrix>(g).householderQ();
    const Purification rotated{Matrix(c.c * v)};
    worst_gauge =
        std::max(worst_gauge, std::abs(uhlmann_fidelity(c0, rotated) - uhlmann_fidelity(c0, c)));
  }
  std::printf("  pair deviation %.3g  gauge deviation %.3g\n", worst_pair, worst_gauge);

  bool pass = true;
  std::string detail;
  if (worst_pair >= 1e-10) {
    pass = false;
    detail += "pair deviation " + fmt(worst_pair) + "; ";
  }
  if (worst_gauge >= 1e-12) {
    pass = false;
    detail += "gauge deviation " + fmt(worst_gauge) + "; ";
  }
  if (pass) detail = "pairs " + fmt(worst_pair) + ", gauge " + fmt(worst_gauge);
  return {pass, detail};
}

std::pair<bool, std::string> criterion_noiseless_mle() {
  double worst = 0.0;
  std::string worst_label;
  for (const Polyhedron kind : kAllPolyhedra)
    for (int l = 1; l <= 2; ++l) {
      const InstrumentalMatrix p = tensor_power(single_qubit_protocol(kind), l);
      const int s = p.dim();
      for (int i = 0; i < 50; ++i) {
        const DensityMatrix truth = random_pure(s, child_seed(909 + l, i));
        const InstrumentalMatrix timed = set_times_for_sample(p, truth, 1e5);
        const ReconstructionResult res = mle(timed, expected_counts(timed, truth), timed.times, 1);
        const double loss = 1.0 - fidelity(res.rho_hat, truth);
        if (loss > worst) {
          worst = loss;
          worst_label = to_string(kind) + "^" + std::to_string(l);
        }
      }
    }
  std::printf("  worst 1-F = %.3g (%s)\n", worst, worst_label.c_str());
  if (worst > 1e-9)
    return {false, "worst 1-F = " + fmt(worst) + " at " + worst_label};
  return {true, "700 reconstructions, worst 1-F = " + fmt(worst)};
}

std::pair<bool, std::string> criterion_scale_invariance() {
  struct Case {
    std::string label;
    InstrumentalMatrix p;
    DensityMatrix truth;
    int r;
  };
  const std::vector<Case> cases = {
      {"tetrahedron pure", single_qubit_protocol(Polyhedron::tetrahedron), random_pure(2, 111), 1},
      {"dodecahedron mixed", single_qubit_protocol(Polyhedron::dodecahedron),
       random_mixed(2, 2, 112), 2},
      {"tetrahedron^2 pure", tensor_power(single_qubit_protocol(Polyhedron::tetrahedron), 2),
       random_pure(4, 113), 1},
  };
  double worst = 0.0;
  for (const Case& c : cases) {
    const double l4 =
        scaled_loss(loss_coefficients(set_times_for_sample(c.p, c.truth, 1e4), c.truth, c.r, 1e4));
    const double l6 =
        scaled_loss(loss_coefficients(set_times_for_sample(c.p, c.truth, 1e6), c.truth, c.r, 1e6));
    worst = std::max(worst, std::abs(l4 - l6) / l6);
  }
  if (worst > 1e-9) return {false, "relative L drift " + fmt(worst)};
  return {true, "relative L drift " + fmt(worst)};
}

std::pair<bool, std::string> trend_white_noise_weight() {
  const InstrumentalMatrix p2 = tensor_power(single_qubit_protocol(Polyhedron::tetrahedron), 2);
  const Vector ghz = ghz_vector(2);
  std::vector<double> mean_z;
  for (const double f : {0.02, 0.05, 0.10}) {
    const DensityMatrix truth = white_noise_mix(ghz, f);
    const InstrumentalMatrix timed = set_times_for_sample(p2, truth, 1e5);
    double sum = 0.0;
    const int runs = 60;
    for (int i = 0; i < runs; ++i) {
      const CountRecord rec = simulate_counts(timed, truth, child_seed(1100 + int(f * 1000), i));
      const ReconstructionResult fit = mle(timed, rec, 1);
      const AdequacyReport rep = adequacy_test(timed, rec, fit);
      sum += (rep.statistic - rep.dof) / std::sqrt(2.0 * rep.dof);
    }
    mean_z.push_back(sum / runs);
  }
  std::printf("  mean z: f=0.02 -> %.2f, f=0.05 -> %.2f, f=0.10 -> %.2f\n", mean_z[0], mean_z[1],
              mean_z[2]);
  const bool pass = mean_z[0] < mean_z[1] && mean_z[1] < mean_z[2];
  return {pass, "mean z " + fmt(mean_z[0]) + " < " + fmt(mean_z[1]) + " < " + fmt(mean_z[2])};
}

std::pair<bool, std::string> trend_qubit_count() {
  std::vector<double> mean_f;
  for (int l = 2; l <= 4; ++l) {
    const InstrumentalMatrix p = tensor_power(single_qubit_protocol(Polyhedron::tetrahedron), l);
    const Vector ghz = ghz_vector(l);
    const DensityMatrix truth(Matrix(ghz * ghz.adjoint()));
    const auto batch = run_batch(p, truth, 1, 1e5, 30, 1200 + l);
    double sum = 0.0;
    for (const BatchRun& b : batch) {
      if (!b.error.empty()) return {false, "run failed: " + b.error};
      sum += (1.0 - b.loss) / batch.size();
    }
    mean_f.push_back(sum);
  }
  std::printf("  mean F: l=2 -> %.6f, l=3 -> %.6f, l=4 -> %.6f\n", mean_f[0], mean_f[1],
              mean_f[2]);
  const bool pass = mean_f[0] > mean_f[1] && mean_f[1] > mean_f[2];
  return {pass,
          "mean F " + fmt(mean_f[0]) + " > " + fmt(mean_f[1]) + " > " + fmt(mean_f[2])};
}

}  // namespace

int main() {
  run("1. single-qubit landscape extremes", criterion_single_qubit_extremes);
  run("2. two-qubit landscape extremes", criterion_two_qubit_extremes);
  run("4. white-noise loss identity", criterion_white_noise);
  run("5. loss lower bounds", criterion_bounds);
  run("6. Distribution validity", criterion_distribution);
  run("7. Adequacy", criterion_adequacy);
  run("8. Fidelity oracle equivalence", criterion_fidelity);
  run("9. MLE exactness on noiseless data", criterion_noiseless_mle);
  run("10. Scale invariance of L", criterion_scale_invariance);
  run("11. White-noise weight trend", trend_white_noise_weight);
  run("12. Qubit count trend", trend_qubit_count);
  std::printf("criterion 3 (three-qubit spot checks) runs in the extended suite\n");
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
