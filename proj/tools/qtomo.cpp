// qtomo: file-driven tomography experiments emitting plot-ready CSV/JSON.
// Exit codes: 0 success, 1 numeric failure, 2 usage error.
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qtomo/adequacy.hpp"
#include "qtomo/io.hpp"
#include "qtomo/lossdist.hpp"
#include "qtomo/numerics.hpp"
#include "qtomo/reconstruct.hpp"
#include "qtomo/rng.hpp"
#include "qtomo/scan.hpp"
#include "qtomo/simulate.hpp"

using namespace qtomo;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// "-" or empty writes to stdout.
void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    if (!text.empty() && text.back() != '\n') std::fputc('\n', stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Polyhedron parse_kind(const std::string& name) {
  const auto kind = parse_polyhedron(name);
  if (!kind) throw std::invalid_argument("unknown polyhedron: " + name);
  return *kind;
}

InstrumentalMatrix build_protocol(const std::string& name, int qubits) {
  const InstrumentalMatrix base = single_qubit_protocol(parse_kind(name));
  return qubits == 1 ? base : tensor_power(base, qubits);
}

// State kinds: pure-random | ghz | bell | white-noise-mix.
DensityMatrix build_state(const std::string& kind, int qubits, double f, std::uint64_t seed) {
  if (qubits < 1) throw std::invalid_argument("qubits must be >= 1");
  if (kind == "pure-random") return random_pure(1 << qubits, seed);
  if (kind == "ghz") return ghz(qubits);
  if (kind == "bell") {
    if (qubits != 2) throw std::invalid_argument("bell state requires exactly 2 qubits");
    return ghz(2);
  }
  if (kind == "white-noise-mix") return white_noise_mix(ghz_vector(qubits), f);
  throw std::invalid_argument("unknown state kind: " + kind);
}

ordered_json real_array(const RealVector& v) {
  ordered_json a = ordered_json::array();
  for (long i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

// ----- protocol -------------------------------------------------------------

struct ProtocolArgs {
  std::string kind;
  int qubits = 1;
  std::string out;
};

int cmd_protocol(const ProtocolArgs& a) {
  const InstrumentalMatrix p = build_protocol(a.kind, a.qubits);
  const Completeness comp = completeness(p);
  const UnityCheck unity = unity_decomposition(p);

  ordered_json doc;
  doc["kind"] = a.kind;
  doc["qubits"] = a.qubits;
  doc["m"] = p.row_count();
  doc["s"] = p.dim();
  doc["q"] = comp.q;
  doc["complete"] = comp.complete;
  doc["singular_values"] = real_array(comp.singular_values);
  doc["unity"] = unity.unity;
  doc["I0"] = unity.intensity;
  doc["unity_residual"] = unity.residual;
  ordered_json dof = ordered_json::array();
  for (int r = 1; r <= p.dim(); ++r) {
    const AdequacyDof d = adequacy_possible(p, r);
    ordered_json row;
    row["r"] = r;
    row["dof"] = d.dof;
    row["redundant"] = d.redundant;
    dof.push_back(row);
  }
  doc["dof"] = dof;
  write_text(a.out, doc.dump(2));
  return 0;
}

// ----- scan -----------------------------------------------------------------

struct ScanArgs {
  std::string kind;
  double resolution = 1.0;
  double n = 1e5;
  std::string grid;
  std::string out;
};

int cmd_scan(const ScanArgs& a) {
  const SphereGrid grid = scan_bloch(parse_kind(a.kind), a.resolution, a.n);
  if (!a.grid.empty()) write_text(a.grid, grid_to_csv(grid));

  ordered_json doc;
  doc["kind"] = a.kind;
  doc["resolution_deg"] = a.resolution;
  doc["n"] = a.n;
  doc["min"] = grid.min;
  doc["max"] = grid.max;
  doc["argmin"] = ordered_json::array({grid.argmin.x(), grid.argmin.y(), grid.argmin.z()});
  doc["argmax"] = ordered_json::array({grid.argmax.x(), grid.argmax.y(), grid.argmax.z()});
  write_text(a.out, doc.dump(2));
  return 0;
}

// ----- bounds ---------------------------------------------------------------

struct BoundsArgs {
  int qubits = 1;
  int rank = 0;
  std::string out;
};

int cmd_bounds(const BoundsArgs& a) {
  if (a.qubits < 1) throw std::invalid_argument("qubits must be >= 1");
  const int s = 1 << a.qubits;
  const int r = a.rank == 0 ? s : a.rank;
  const double optimal = optimal_min_loss(s, r);
  const double mixed = polyhedron_mixed_min(a.qubits);

  ordered_json doc;
  doc["l"] = a.qubits;
  doc["s"] = s;
  doc["r"] = r;
  doc["optimal_min_loss"] = optimal;
  doc["polyhedron_mixed_min"] = mixed;
  doc["ratio"] = mixed / optimal;
  write_text(a.out, doc.dump(2));
  return 0;
}

// ----- simulate -------------------------------------------------------------

struct SimulateArgs {
  std::string kind;
  int qubits = 1;
  std::string state = "pure-random";
  double f = 0.0;
  std::uint64_t state_seed = 1;
  double n = 1e5;
  std::uint64_t seed = 1;
  std::string label;
  std::string out;
  std::string truth_out;
};

int cmd_simulate(const SimulateArgs& a) {
  const DensityMatrix truth = build_state(a.state, a.qubits, a.f, a.state_seed);
  InstrumentalMatrix p = build_protocol(a.kind, a.qubits);
  p = set_times_for_sample(p, truth, a.n);
  CountRecord rec = simulate_counts(p, truth, a.seed);
  rec.label = a.label.empty() ? a.kind + "^" + std::to_string(a.qubits) : a.label;
  write_text(a.out, count_record_to_csv(rec, intensities(p, truth)));
  if (!a.truth_out.empty()) write_text(a.truth_out, state_to_json(truth));
  return 0;
}

// ----- reconstruct ----------------------------------------------------------

struct ReconstructArgs {
  std::string counts;
  std::string kind;
  int qubits = 1;
  int rank = 0;  // 0 selects the rank by the residual test
  double alpha = 0.05;
  std::string truth;
  std::string out;
};

int cmd_reconstruct(const ReconstructArgs& a) {
  const CountRecord rec = count_record_from_csv(read_text(a.counts));
  const InstrumentalMatrix p = build_protocol(a.kind, a.qubits);

  const ReconstructionResult result = [&] {
    if (a.rank > 0) return mle(p, rec, a.rank);
    AutoOptions opts;
    opts.alpha = a.alpha;
    const AutoReconstruction auto_fit = reconstruct_auto(p, rec, opts);
    for (const RankCandidate& cand : auto_fit.candidates) {
      const std::string note =
          cand.testable ? "p=" + fmt(cand.p_value) + (cand.adequate ? " adequate" : " rejected")
                        : "not testable";
      std::fprintf(stderr, "rank %d: %s\n", cand.r, note.c_str());
    }
    if (!auto_fit.adequate)
      std::fprintf(stderr, "no rank accepted; reporting the last candidate\n");
    return auto_fit.selected().result;
  }();

  std::optional<double> fidelity_vs_truth;
  if (!a.truth.empty())
    fidelity_vs_truth = fidelity(state_from_json(read_text(a.truth)), result.rho_hat);
  write_text(a.out, result_to_json(result, fidelity_vs_truth));
  return 0;
}

// ----- losscoef -------------------------------------------------------------

struct LosscoefArgs {
  std::string kind;
  int qubits = 1;
  std::string state = "pure-random";
  double f = 0.0;
  std::uint64_t state_seed = 1;
  int rank = 0;  // 0 uses the truth's rank
  double n = 1e5;
  double fd_step = 1e-4;
  bool white_noise = false;
  std::string csv;
  std::string out;
};

int cmd_losscoef(const LosscoefArgs& a) {
  const InstrumentalMatrix p = build_protocol(a.kind, a.qubits);
  LossCoefficients c;
  if (a.white_noise) {
    c = white_noise_coefficients(p, a.n);
  } else {
    const DensityMatrix truth = build_state(a.state, a.qubits, a.f, a.state_seed);
    const int r = a.rank == 0 ? truth.rank() : a.rank;
    c = loss_coefficients(p, truth, r, a.n, a.fd_step);
  }
  if (!a.csv.empty()) write_text(a.csv, coefficients_to_csv(c));
  write_text(a.out, loss_summary_to_json(c));
  return 0;
}

// ----- adequacy -------------------------------------------------------------

struct AdequacyArgs {
  std::string counts;
  std::string kind;
  int qubits = 1;
  int rank = 1;
  double alpha = 0.05;
  std::string out;
};

int cmd_adequacy(const AdequacyArgs& a) {
  const CountRecord rec = count_record_from_csv(read_text(a.counts));
  const InstrumentalMatrix p = build_protocol(a.kind, a.qubits);
  const ReconstructionResult result = mle(p, rec, a.rank);
  write_text(a.out, adequacy_to_json(adequacy_test(p, rec, result, a.alpha)));
  return 0;
}

// ----- mc -------------------------------------------------------------------

struct McArgs {
  std::string config;
  std::string kind = "tetrahedron";
  int qubits = 1;
  std::string state = "pure-random";
  double f = 0.0;
  std::uint64_t state_seed = 1;
  int rank = 1;
  double n = 1e5;
  int runs = 100;
  std::uint64_t seed = 1;
  int workers = 1;
  double alpha = 0.05;
  std::string csv;
  std::string out;
};

// Config file values fill every field the command line left untouched.
void overlay_config(McArgs& a, const CLI::App& cmd) {
  const auto doc = ordered_json::parse(read_text(a.config));
  const auto take = [&](const char* flag, const char* key, auto& slot) {
    if (cmd.count(flag) == 0 && doc.contains(key)) doc.at(key).get_to(slot);
  };
  take("--polyhedron", "polyhedron", a.kind);
  take("--qubits", "qubits", a.qubits);
  if (doc.contains("state")) {
    const auto& st = doc.at("state");
    if (cmd.count("--state-kind") == 0 && st.contains("kind")) st.at("kind").get_to(a.state);
    if (cmd.count("--f") == 0 && st.contains("f")) st.at("f").get_to(a.f);
    if (cmd.count("--state-seed") == 0 && st.contains("seed")) st.at("seed").get_to(a.state_seed);
  }
  take("--rank", "rank", a.rank);
  take("--n", "sample_size", a.n);
  take("--runs", "runs", a.runs);
  take("--seed", "seed", a.seed);
  take("--workers", "workers", a.workers);
  take("--alpha", "alpha", a.alpha);
  take("--csv", "csv_out", a.csv);
  take("--out", "json_out", a.out);
}

int cmd_mc(const McArgs& a) {
  if (a.n < 1) throw std::invalid_argument("sample_size must be >= 1");
  if (a.runs < 1) throw std::invalid_argument("runs must be >= 1");
  if (a.rank < 1) throw std::invalid_argument("rank must be >= 1");
  const InstrumentalMatrix p = build_protocol(a.kind, a.qubits);
  const DensityMatrix truth = build_state(a.state, a.qubits, a.f, a.state_seed);

  std::optional<LossCoefficients> theory;
  std::string theory_note;
  try {
    theory = loss_coefficients(p, truth, a.rank, a.n);
  } catch (const std::exception& e) {
    theory_note = e.what();
  }

  const int dof = adequacy_possible(p, a.rank).dof;
  const auto batch = run_batch(p, truth, a.rank, a.n, a.runs, a.seed, a.workers);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::ostringstream csv;
  csv << "run,loss,z,chi2,p_value,converged,iterations\n";
  std::vector<double> losses;
  std::vector<double> zs;
  int failures = 0;
  int rejections = 0;
  for (int i = 0; i < a.runs; ++i) {
    const BatchRun& run = batch[i];
    if (!run.error.empty()) {
      std::fprintf(stderr, "run %d failed: %s\n", i, run.error.c_str());
      ++failures;
      continue;
    }
    losses.push_back(run.loss);
    double z = nan, chi2 = nan, p_value = nan;
    if (dof > 0) {
      const AdequacyReport rep = adequacy_test(p, run.record, *run.result, a.alpha);
      chi2 = rep.statistic;
      p_value = rep.p_value;
      z = (rep.statistic - rep.dof) / std::sqrt(2.0 * rep.dof);
      zs.push_back(z);
      if (!rep.adequate) ++rejections;
    }
    csv << i << ',' << fmt(run.loss) << ',' << fmt(z) << ',' << fmt(chi2) << ','
        << fmt(p_value) << ',' << (run.result->converged ? 1 : 0) << ','
        << run.result->iterations << '\n';
  }
  if (!a.csv.empty()) write_text(a.csv, csv.str());
  if (losses.empty()) throw NumericError("all " + std::to_string(a.runs) + " runs failed");

  const auto count = static_cast<double>(losses.size());
  double mean = 0.0;
  for (double l : losses) mean += l / count;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double l : losses) {
    const double d = l - mean;
    m2 += d * d / count;
    m3 += d * d * d / count;
    m4 += d * d * d * d / count;
  }

  ordered_json doc;
  ordered_json config;
  config["polyhedron"] = a.kind;
  config["qubits"] = a.qubits;
  ordered_json state;
  state["kind"] = a.state;
  state["f"] = a.f;
  state["seed"] = a.state_seed;
  config["state"] = state;
  config["rank"] = a.rank;
  config["sample_size"] = a.n;
  config["runs"] = a.runs;
  config["seed"] = a.seed;
  config["workers"] = a.workers;
  config["alpha"] = a.alpha;
  doc["config"] = config;
  doc["completed"] = static_cast<int>(losses.size());
  doc["failures"] = failures;

  ordered_json empirical;
  empirical["mean_loss"] = mean;
  empirical["variance_loss"] = m2 * count / std::max(count - 1.0, 1.0);
  empirical["skewness"] = m2 > 0 ? m3 / std::pow(m2, 1.5) : nan;
  empirical["excess"] = m2 > 0 ? m4 / (m2 * m2) - 3.0 : nan;
  if (!zs.empty()) {
    double mean_z = 0.0;
    for (double z : zs) mean_z += z / static_cast<double>(zs.size());
    empirical["mean_z"] = mean_z;
  } else {
    empirical["mean_z"] = nullptr;
  }
  doc["empirical"] = empirical;

  if (theory) {
    ordered_json th;
    th["L"] = scaled_loss(*theory);
    th["j_max"] = theory->j_max();
    th["mean_loss"] = mean_loss(*theory);
    th["variance_loss"] = variance_loss(*theory);
    th["skewness"] = skewness(*theory);
    th["excess"] = excess(*theory);
    doc["theoretical"] = th;
    const RealVector draws =
        sample_loss(*theory, static_cast<int>(losses.size()), child_seed(a.seed, 0x4B53));
    std::vector<double> reference(draws.data(), draws.data() + draws.size());
    doc["ks_p"] = ks_two_sample_p(losses, reference);
  } else {
    doc["theoretical"] = nullptr;
    doc["theoretical_note"] = theory_note;
    doc["ks_p"] = nullptr;
  }

  ordered_json adequacy;
  adequacy["dof"] = dof;
  adequacy["testable"] = dof > 0;
  adequacy["rejections"] = dof > 0 ? ordered_json(rejections) : ordered_json(nullptr);
  doc["adequacy"] = adequacy;
  write_text(a.out, doc.dump(2));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum state tomography toolkit"};
  app.require_subcommand(1);

  ProtocolArgs pa;
  CLI::App* protocol = app.add_subcommand("protocol", "protocol completeness and unity report");
  protocol->add_option("kind", pa.kind, "polyhedron name")->required();
  protocol->add_option("qubits", pa.qubits, "tensor power")->check(CLI::PositiveNumber);
  protocol->add_option("--out", pa.out, "output path (default stdout)");

  ScanArgs sa;
  CLI::App* scan = app.add_subcommand("scan", "fidelity-loss landscape over the Bloch sphere");
  scan->add_option("kind", sa.kind, "polyhedron name")->required();
  scan->add_option("--resolution", sa.resolution, "grid step in degrees")
      ->check(CLI::Range(0.1, 10.0));
  scan->add_option("--n", sa.n, "sample size")->check(CLI::PositiveNumber);
  scan->add_option("--grid", sa.grid, "grid CSV path");
  scan->add_option("--out", sa.out, "extremes JSON path (default stdout)");

  BoundsArgs ba;
  CLI::App* bounds = app.add_subcommand("bounds", "optimal and polyhedron loss bounds");
  bounds->add_option("qubits", ba.qubits, "qubit count")->required()->check(CLI::PositiveNumber);
  bounds->add_option("--rank", ba.rank, "model rank (default full)")->check(CLI::PositiveNumber);
  bounds->add_option("--out", ba.out, "output path (default stdout)");

  SimulateArgs ma;
  CLI::App* simulate = app.add_subcommand("simulate", "draw one Poisson count record");
  simulate->add_option("--polyhedron", ma.kind, "polyhedron name")->required();
  simulate->add_option("--qubits", ma.qubits, "tensor power")->check(CLI::PositiveNumber);
  simulate->add_option("--state-kind", ma.state,
                       "pure-random | ghz | bell | white-noise-mix");
  simulate->add_option("--f", ma.f, "white-noise weight")->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--state-seed", ma.state_seed, "truth draw seed");
  simulate->add_option("--n", ma.n, "sample size")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", ma.seed, "count draw seed");
  simulate->add_option("--label", ma.label, "record label");
  simulate->add_option("--out", ma.out, "counts CSV path (default stdout)");
  simulate->add_option("--truth-out", ma.truth_out, "also write the truth state JSON");

  ReconstructArgs ra;
  CLI::App* reconstruct = app.add_subcommand("reconstruct", "maximum-likelihood estimate");
  reconstruct->add_option("--counts", ra.counts, "counts CSV path")->required();
  reconstruct->add_option("--polyhedron", ra.kind, "polyhedron name")->required();
  reconstruct->add_option("--qubits", ra.qubits, "tensor power")->check(CLI::PositiveNumber);
  reconstruct->add_option("--rank", ra.rank, "model rank, 0 = residual-test selection")
      ->check(CLI::NonNegativeNumber);
  reconstruct->add_option("--alpha", ra.alpha, "significance for rank selection")
      ->check(CLI::Range(0.0, 1.0));
  reconstruct->add_option("--truth", ra.truth, "truth state JSON for fidelity report");
  reconstruct->add_option("--out", ra.out, "result JSON path (default stdout)");

  LosscoefArgs la;
  CLI::App* losscoef = app.add_subcommand("losscoef", "asymptotic loss coefficients");
  losscoef->add_option("--polyhedron", la.kind, "polyhedron name")->required();
  losscoef->add_option("--qubits", la.qubits, "tensor power")->check(CLI::PositiveNumber);
  losscoef->add_option("--state-kind", la.state,
                       "pure-random | ghz | bell | white-noise-mix");
  losscoef->add_option("--f", la.f, "white-noise weight")->check(CLI::Range(0.0, 1.0));
  losscoef->add_option("--state-seed", la.state_seed, "truth draw seed");
  losscoef->add_option("--rank", la.rank, "model rank, 0 = truth rank")
      ->check(CLI::NonNegativeNumber);
  losscoef->add_option("--n", la.n, "sample size")->check(CLI::PositiveNumber);
  losscoef->add_option("--fd-step", la.fd_step, "relative Hessian step")
      ->check(CLI::PositiveNumber);
  losscoef->add_flag("--white-noise", la.white_noise,
                     "maximally mixed truth via the spectral route");
  losscoef->add_option("--csv", la.csv, "d-vector CSV path");
  losscoef->add_option("--out", la.out, "summary JSON path (default stdout)");

  AdequacyArgs aa;
  CLI::App* adequacy = app.add_subcommand("adequacy", "residual test of a rank-r fit");
  adequacy->add_option("--counts", aa.counts, "counts CSV path")->required();
  adequacy->add_option("--polyhedron", aa.kind, "polyhedron name")->required();
  adequacy->add_option("--qubits", aa.qubits, "tensor power")->check(CLI::PositiveNumber);
  adequacy->add_option("--rank", aa.rank, "model rank")->check(CLI::PositiveNumber);
  adequacy->add_option("--alpha", aa.alpha, "significance level")->check(CLI::Range(0.0, 1.0));
  adequacy->add_option("--out", aa.out, "report JSON path (default stdout)");

  McArgs ca;
  CLI::App* mc = app.add_subcommand("mc", "Monte Carlo batch with per-run CSV and summary");
  mc->add_option("--config", ca.config, "experiment config JSON");
  mc->add_option("--polyhedron", ca.kind, "polyhedron name");
  mc->add_option("--qubits", ca.qubits, "tensor power")->check(CLI::PositiveNumber);
  mc->add_option("--state-kind", ca.state, "pure-random | ghz | bell | white-noise-mix");
  mc->add_option("--f", ca.f, "white-noise weight")->check(CLI::Range(0.0, 1.0));
  mc->add_option("--state-seed", ca.state_seed, "truth draw seed");
  mc->add_option("--rank", ca.rank, "fitted rank")->check(CLI::PositiveNumber);
  mc->add_option("--n", ca.n, "sample size")->check(CLI::PositiveNumber);
  mc->add_option("--runs", ca.runs, "number of experiments")->check(CLI::PositiveNumber);
  mc->add_option("--seed", ca.seed, "master seed");
  mc->add_option("--workers", ca.workers, "thread count")->check(CLI::PositiveNumber);
  mc->add_option("--alpha", ca.alpha, "adequacy significance")->check(CLI::Range(0.0, 1.0));
  mc->add_option("--csv", ca.csv, "per-run CSV path");
  mc->add_option("--out", ca.out, "summary JSON path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*protocol) return cmd_protocol(pa);
    if (*scan) return cmd_scan(sa);
    if (*bounds) return cmd_bounds(ba);
    if (*simulate) return cmd_simulate(ma);
    if (*reconstruct) return cmd_reconstruct(ra);
    if (*losscoef) return cmd_losscoef(la);
    if (*adequacy) return cmd_adequacy(aa);
    if (*mc) {
      if (!ca.config.empty()) overlay_config(ca, *mc);
      return cmd_mc(ca);
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
