#include "qtomo/io.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qtomo {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

ordered_json complex_entry(const Complex& z) { return ordered_json::array({z.real(), z.imag()}); }

ordered_json vector_entries(const Vector& v) {
  ordered_json entries = ordered_json::array();
  for (long i = 0; i < v.size(); ++i) entries.push_back(complex_entry(v(i)));
  return entries;
}

}  // namespace

std::string state_to_json(const DensityMatrix& rho) {
  const int s = rho.dim();
  ordered_json doc;
  doc["s"] = s;
  doc["r"] = rho.rank();
  ordered_json entries = ordered_json::array();
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) entries.push_back(complex_entry(rho.matrix()(i, j)));
  doc["entries"] = entries;
  return doc.dump();
}

DensityMatrix state_from_json(const std::string& text) {
  const auto doc = ordered_json::parse(text);
  const int s = doc.at("s").get<int>();
  const auto& entries = doc.at("entries");
  if (static_cast<int>(entries.size()) != s * s)
    throw std::invalid_argument("state_from_json: entry count does not match dimension");
  Matrix m(s, s);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) {
      const auto& e = entries.at(i * s + j);
      m(i, j) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
    }
  return DensityMatrix(m);
}

std::string count_record_to_csv(const CountRecord& rec, const RealVector& lambda_hat) {
  if (lambda_hat.size() != 0 && lambda_hat.size() != rec.counts.size())
    throw std::invalid_argument("count_record_to_csv: lambda_hat length mismatch");
  std::ostringstream out;
  out << "row,count,time,lambda_hat\n";
  for (int j = 0; j < rec.counts.size(); ++j) {
    const double lam = lambda_hat.size() != 0
                           ? lambda_hat(j)
                           : (rec.times(j) > 0.0 ? rec.counts(j) / rec.times(j) : 0.0);
    out << j << ',' << rec.counts(j) << ',' << fmt(rec.times(j)) << ',' << fmt(lam) << '\n';
  }
  return out.str();
}

CountRecord count_record_from_csv(const std::string& text, const std::string& label,
                                  std::uint64_t seed) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("row,count,time", 0) != 0)
    throw std::invalid_argument("count_record_from_csv: missing header");
  std::vector<std::int64_t> counts;
  std::vector<double> times;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream cells(line);
    std::string cell;
    std::getline(cells, cell, ',');  // row index, positional
    if (!std::getline(cells, cell, ','))
      throw std::invalid_argument("count_record_from_csv: short line");
    counts.push_back(std::stoll(cell));
    if (!std::getline(cells, cell, ','))
      throw std::invalid_argument("count_record_from_csv: short line");
    times.push_back(std::stod(cell));
  }
  CountRecord rec;
  rec.label = label;
  rec.seed = seed;
  rec.counts = Eigen::Map<const CountVector>(counts.data(), static_cast<long>(counts.size()));
  rec.times = Eigen::Map<const RealVector>(times.data(), static_cast<long>(times.size()));
  return rec;
}

std::string result_to_json(const ReconstructionResult& result,
                           std::optional<double> fidelity_vs_truth) {
  ordered_json doc;
  doc["rho_hat"] = ordered_json::parse(state_to_json(result.rho_hat));
  doc["r"] = result.rank;
  doc["loglik"] = result.loglik;
  doc["iterations"] = result.iterations;
  doc["converged"] = result.converged;
  doc["gradient_norm"] = result.gradient_norm;
  if (fidelity_vs_truth) doc["fidelity_vs_truth"] = *fidelity_vs_truth;
  return doc.dump();
}

std::string adequacy_to_json(const AdequacyReport& report) {
  ordered_json doc;
  doc["statistic"] = report.statistic;
  doc["dof"] = report.dof;
  doc["p_value"] = report.p_value;
  doc["adequate"] = report.adequate;
  doc["alpha"] = report.alpha;
  doc["low_expectation_rows"] = report.low_expectation_rows;
  return doc.dump();
}

std::string coefficients_to_csv(const LossCoefficients& c) {
  std::ostringstream out;
  out << "index,d\n";
  for (int j = 0; j < c.d.size(); ++j) out << j << ',' << fmt(c.d(j)) << '\n';
  return out.str();
}

std::string loss_summary_to_json(const LossCoefficients& c) {
  ordered_json doc;
  doc["L"] = scaled_loss(c);
  doc["mean"] = mean_loss(c);
  doc["variance"] = variance_loss(c);
  try {
    doc["skewness"] = skewness(c);
    doc["excess"] = excess(c);
  } catch (const UndefinedMomentError&) {
    doc["skewness"] = nullptr;
    doc["excess"] = nullptr;
  }
  doc["j_max"] = c.j_max();
  ordered_json bounds;
  bounds["optimal_min"] = optimal_min_loss(c.s, c.r);
  if (c.r == c.s && (c.s & (c.s - 1)) == 0 && c.s >= 2) {
    int l = 0;
    for (int s = c.s; s > 1; s /= 2) ++l;
    bounds["polyhedron_mixed_min"] = polyhedron_mixed_min(l);
  }
  doc["bounds"] = bounds;
  return doc.dump();
}

std::string grid_to_csv(const SphereGrid& grid) {
  std::ostringstream out;
  out << "theta_deg,phi_deg,L\n";
  const double dtheta = 180.0 / (grid.theta_steps - 1);
  const double dphi = 360.0 / grid.phi_steps;
  for (int i = 0; i < grid.theta_steps; ++i)
    for (int j = 0; j < grid.phi_steps; ++j)
      out << fmt(i * dtheta) << ',' << fmt(j * dphi) << ',' << fmt(grid.values(i, j)) << '\n';
  return out.str();
}

std::string extremes_to_json(const ExtremalLoss& extremes) {
  ordered_json doc;
  doc["L_min"] = extremes.l_min;
  doc["L_max"] = extremes.l_max;
  doc["argmin"] = vector_entries(extremes.argmin_state);
  doc["argmax"] = vector_entries(extremes.argmax_state);
  doc["certified_min"] = extremes.certified_min;
  doc["certified_max"] = extremes.certified_max;
  return doc.dump();
}

}  // namespace qtomo
