#include "report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

namespace clustvar::cli {

namespace {

std::string cluster_name(std::size_t k) { return "cluster" + std::to_string(k + 1); }

// CSV field quoting for names that contain separators or quotes.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_number(double x) { return std::isfinite(x) ? shortest(x) : "NA"; }

double pearson(const std::vector<double>& x, const Eigen::VectorXd& y) {
  const auto n = static_cast<double>(x.size());
  const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
  const Eigen::VectorXd xc = xv.array() - xv.sum() / n;
  const Eigen::VectorXd yc = y.array() - y.sum() / n;
  return xc.dot(yc) / std::sqrt(xc.squaredNorm() * yc.squaredNorm());
}

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Json quantiles(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  // Type-7 quantiles, as in R's default.
  auto q = [&](double p) {
    const double h = (static_cast<double>(v.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  Json out;
  out["min"] = v.front();
  out["q1"] = q(0.25);
  out["median"] = q(0.5);
  out["q3"] = q(0.75);
  out["max"] = v.back();
  return out;
}

}  // namespace

std::string shortest(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string sig7(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.7g", x);
  return buf;
}

Json RunReport::to_json() const {
  Json j;
  j["tool"] = "clustvar";
  j["version"] = "0.1.0";
  j["command"] = command;
  j["dataset"] = dataset;
  j["result"] = result;
  j["warnings"] = warnings;
  return j;
}

Json dataset_summary(const VariableSet& raw) {
  Json j;
  j["n"] = raw.n_obs();
  j["p1"] = raw.quantitative_count();
  j["p2"] = raw.qualitative_count();
  std::size_t imputed = 0, missing_quali = 0;
  Json vars = Json::array();
  for (const auto& v : raw.variables()) {
    Json e;
    e["name"] = v.name;
    e["kind"] = v.is_quantitative() ? "quanti" : "quali";
    e["missing"] = v.missing_count();
    if (v.is_qualitative()) {
      e["levels"] = v.levels;
      missing_quali += v.missing_count();
    } else {
      imputed += v.missing_count();
    }
    vars.push_back(e);
  }
  j["imputation"] = {{"quantitative_mean_imputed", imputed},
                     {"qualitative_missing", missing_quali}};
  j["variables"] = vars;
  return j;
}

Json partition_json(const VariableSet& vs, const ClusterPartition& part) {
  Json j;
  j["k"] = part.k();
  j["wss"] = part.wss;
  j["E"] = part.gain;
  j["one_cluster_homogeneity"] = part.one_cluster_homogeneity;
  j["variables"] = part.variable_names;
  Json cluster = Json::array();
  for (std::size_t l : part.membership) cluster.push_back(l + 1);
  j["cluster"] = cluster;
  j["size"] = part.sizes();

  Json var, eig, sim;
  for (std::size_t k = 0; k < part.k(); ++k) {
    const auto& c = part.clusters[k];
    Json rows = Json::array();
    for (std::size_t m = 0; m < c.members.size(); ++m) {
      const auto& v = vs.variable(c.members[m]);
      Json row;
      row["variable"] = v.name;
      row["squared_loading"] = c.synthetic.squared_loadings[m];
      if (v.is_quantitative()) row["correlation"] = pearson(v.values, c.synthetic.scores);
      rows.push_back(row);
    }
    var[cluster_name(k)] = rows;
    eig[cluster_name(k)] = to_vector(c.synthetic.spectrum);
    if (c.similarity) {
      Json values = Json::array();
      for (Eigen::Index r = 0; r < c.similarity->values.rows(); ++r) {
        values.push_back(to_vector(c.similarity->values.row(r).transpose()));
      }
      sim[cluster_name(k)] = {{"variables", c.similarity->names}, {"values", values}};
    }
  }
  j["var"] = var;
  j["eigenvalues"] = eig;
  if (!sim.is_null()) j["sim"] = sim;

  Json columns = Json::array();
  for (std::size_t k = 0; k < part.k(); ++k) columns.push_back(cluster_name(k));
  Json values = Json::array();
  for (Eigen::Index r = 0; r < part.scores.rows(); ++r) {
    values.push_back(to_vector(part.scores.row(r).transpose()));
  }
  j["scores"] = {{"observations", part.obs_labels}, {"columns", columns}, {"values", values}};
  return j;
}

Json hierarchy_json(const Hierarchy& h) {
  Json j;
  j["leaves"] = h.leaves();
  Json merges = Json::array();
  for (const auto& m : h.merges()) {
    merges.push_back({{"left", m.left}, {"right", m.right}, {"height", m.height}, {"members", m.members}});
  }
  j["merges"] = merges;
  Json levels = Json::array();
  for (const auto& l : aggregation_levels(h)) levels.push_back({{"K", l.clusters}, {"height", l.height}});
  j["levels"] = levels;
  Json inv = Json::array();
  for (const auto& i : h.inversions()) {
    inv.push_back({{"merge", i.merge}, {"height", i.height}, {"child_height", i.child_height}});
  }
  j["inversions"] = inv;
  return j;
}

std::vector<std::string> hierarchy_warnings(const Hierarchy& h) {
  std::vector<std::string> out;
  for (const auto& i : h.inversions()) {
    out.push_back("inversion at merge " + std::to_string(i.merge + 1) + ": height " + shortest(i.height) +
                  " below child height " + shortest(i.child_height));
  }
  return out;
}

Json stability_json(const StabilityResult& r) {
  Json j;
  j["B"] = r.replicates;
  j["seed"] = r.seed;
  j["cluster_counts"] = r.cluster_counts;
  j["mean_adjusted_rand"] = r.mean_adjusted_rand;
  j["retries"] = r.retries;
  Json dispersion = Json::array();
  for (std::size_t c = 0; c < r.cluster_counts.size(); ++c) {
    std::vector<double> col;
    for (Eigen::Index b = 0; b < r.adjusted_rand.rows(); ++b) {
      const double x = r.adjusted_rand(b, static_cast<Eigen::Index>(c));
      if (!std::isnan(x)) col.push_back(x);
    }
    Json d = quantiles(std::move(col));
    d["K"] = r.cluster_counts[c];
    dispersion.push_back(d);
  }
  j["dispersion"] = dispersion;
  Json failures = Json::array();
  for (const auto& f : r.failures) {
    failures.push_back({{"replicate", f.replicate + 1},
                        {"attempts", f.attempts},
                        {"variable", f.variable},
                        {"reason", f.reason}});
  }
  j["failures"] = failures;
  return j;
}

Json kmeans_json(const VariableSet& vs, const KmeansResult& r) {
  Json j = partition_json(vs, r.partition);
  Json conv;
  conv["converged"] = r.best.converged;
  conv["iterations"] = r.best.iterations;
  conv["repairs"] = r.best.repairs;
  conv["homogeneity_trace"] = r.best.homogeneity;
  conv["objective_trace"] = r.best.objective;
  conv["best_start"] = r.best_start + 1;
  conv["start_homogeneity"] = r.start_homogeneity;
  j["convergence"] = conv;
  if (r.seed) {
    j["seed"] = *r.seed;
  } else {
    j["seed"] = nullptr;
  }
  return j;
}

void write_scores_csv(std::ostream& out, const ClusterPartition& part) {
  const bool labelled = !part.obs_labels.empty();
  if (labelled) out << ',';
  for (std::size_t k = 0; k < part.k(); ++k) out << (k ? "," : "") << cluster_name(k);
  out << '\n';
  for (Eigen::Index r = 0; r < part.scores.rows(); ++r) {
    if (labelled) out << csv_field(part.obs_labels[static_cast<std::size_t>(r)]) << ',';
    for (Eigen::Index k = 0; k < part.scores.cols(); ++k) {
      out << (k ? "," : "") << csv_number(part.scores(r, k));
    }
    out << '\n';
  }
}

void write_levels_csv(std::ostream& out, const Hierarchy& h) {
  out << "K,height\n";
  for (const auto& l : aggregation_levels(h)) out << l.clusters << ',' << csv_number(l.height) << '\n';
}

void write_curve_csv(std::ostream& out, const StabilityResult& r) {
  out << "K,mean_ARI\n";
  for (std::size_t c = 0; c < r.cluster_counts.size(); ++c) {
    out << r.cluster_counts[c] << ',' << csv_number(r.mean_adjusted_rand[c]) << '\n';
  }
}

void write_matcr_csv(std::ostream& out, const StabilityResult& r) {
  for (std::size_t c = 0; c < r.cluster_counts.size(); ++c) {
    out << (c ? "," : "") << 'K' << r.cluster_counts[c];
  }
  out << '\n';
  for (Eigen::Index b = 0; b < r.adjusted_rand.rows(); ++b) {
    for (Eigen::Index c = 0; c < r.adjusted_rand.cols(); ++c) {
      out << (c ? "," : "") << csv_number(r.adjusted_rand(b, c));
    }
    out << '\n';
  }
}

void write_failures_csv(std::ostream& out, const StabilityResult& r) {
  out << "replicate,attempts,variable,reason\n";
  for (const auto& f : r.failures) {
    out << f.replicate + 1 << ',' << f.attempts << ',' << csv_field(f.variable) << ','
        << csv_field(f.reason) << '\n';
  }
}

std::vector<std::size_t> labels_from_report(const Json& report, const VariableSet& vs) {
  const Json* result = &report;
  if (report.contains("result")) result = &report["result"];
  if (!result->contains("variables") || !result->contains("cluster")) {
    throw DataError("partition file has no 'variables' / 'cluster' fields");
  }
  const auto names = (*result)["variables"].get<std::vector<std::string>>();
  const auto cluster = (*result)["cluster"].get<std::vector<std::size_t>>();
  if (names.size() != cluster.size()) throw DataError("partition file: 'variables' and 'cluster' differ in length");
  std::map<std::string, std::size_t> by_name;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (cluster[i] < 1) throw DataError("partition file: cluster numbers start at 1");
    by_name[names[i]] = cluster[i] - 1;
  }
  std::vector<std::size_t> labels;
  for (const auto& name : vs.names()) {
    const auto it = by_name.find(name);
    if (it == by_name.end()) throw DataError("partition file does not assign variable '" + name + "'");
    labels.push_back(it->second);
  }
  if (by_name.size() != vs.n_vars()) throw DataError("partition file assigns variables missing from the data");
  return labels;
}

}  // namespace clustvar::cli
