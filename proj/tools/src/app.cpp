#include "app.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "report.hpp"
#include "svg.hpp"

namespace clustvar::cli {

namespace fs = std::filesystem;

namespace {

struct Globals {
  std::vector<std::string> quali;
  std::string na_token = "NA";
  std::string schema;
  std::string out = ".";
  std::uint64_t seed = 0;
  std::vector<std::string> drop;
  unsigned threads = 1;
};

struct Loaded {
  VariableSet data;
  Json summary;
  std::vector<std::string> warnings;
};

Json read_json(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw DataError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

std::map<std::string, VariableKind> read_schema(const fs::path& path) {
  const Json j = read_json(path);
  if (!j.is_object()) throw DataError("schema '" + path.string() + "' must map column names to \"quanti\" or \"quali\"");
  std::map<std::string, VariableKind> kinds;
  for (const auto& [name, kind] : j.items()) {
    if (kind == "quanti") {
      kinds[name] = VariableKind::Quantitative;
    } else if (kind == "quali") {
      kinds[name] = VariableKind::Qualitative;
    } else {
      throw DataError("schema entry for column '" + name + "' must be \"quanti\" or \"quali\"");
    }
  }
  return kinds;
}

Loaded load(const Globals& g, const std::string& csv) {
  LoadOptions opts;
  if (!g.quali.empty()) opts.quali = g.quali;
  opts.na_token = g.na_token;
  if (!g.schema.empty()) opts.kinds = read_schema(g.schema);
  VariableSet raw = load_csv(csv, opts);
  if (!g.drop.empty()) raw = raw.drop(g.drop);
  // Quantitative variables first, then qualitative, each in file order.
  std::vector<std::size_t> order;
  for (std::size_t j = 0; j < raw.n_vars(); ++j)
    if (raw.variable(j).is_quantitative()) order.push_back(j);
  for (std::size_t j = 0; j < raw.n_vars(); ++j)
    if (raw.variable(j).is_qualitative()) order.push_back(j);
  raw = raw.select(order);

  Loaded l;
  l.summary = dataset_summary(raw);
  for (const auto& v : raw.variables()) {
    if (v.missing_count() == 0) continue;
    l.warnings.push_back(std::to_string(v.missing_count()) + " missing value(s) in '" + v.name + "' " +
                         (v.is_quantitative() ? "replaced by the column mean" : "left with no category"));
  }
  l.data = impute_missing(raw);
  return l;
}

Json command_echo(const std::string& name, const Globals& g, const std::string& csv) {
  Json c;
  c["name"] = name;
  c["input"] = csv;
  c["quali"] = g.quali;
  c["na_token"] = g.na_token;
  c["schema"] = g.schema.empty() ? Json(nullptr) : Json(g.schema);
  c["drop"] = g.drop;
  return c;
}

fs::path prepare_out(const Globals& g) {
  std::error_code ec;
  fs::create_directories(g.out, ec);
  if (ec) throw DataError("cannot create output directory '" + g.out + "': " + ec.message());
  return g.out;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write '" + path.string() + "'");
  f << text;
  if (!f) throw DataError("cannot write '" + path.string() + "'");
}

template <typename Fn>
std::string render(Fn&& fn) {
  std::ostringstream s;
  fn(s);
  return s.str();
}

void write_report(const fs::path& path, const RunReport& report, const std::string& command) {
  write_file(path, report.to_json().dump(2) + "\n");
  Json timing;
  timing["command"] = command;
  timing["seconds"] = report.seconds;
  write_file(path.parent_path() / "timing.json", timing.dump(2) + "\n");
}

double elapsed(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void print_partition(std::ostream& out, const VariableSet& vs, const ClusterPartition& part) {
  out << "K = " << part.k() << "  wss = " << sig7(part.wss) << "  E = " << sig7(part.gain) << '\n';
  for (std::size_t k = 0; k < part.k(); ++k) {
    const auto& c = part.clusters[k];
    out << "cluster" << k + 1 << " (eigenvalue " << sig7(c.synthetic.eigenvalue) << ")\n";
    for (std::size_t m = 0; m < c.members.size(); ++m) {
      out << "  " << vs.variable(c.members[m]).name << "  " << sig7(c.synthetic.squared_loadings[m]) << '\n';
    }
  }
}

// ------------------------------------------------------------------ commands

struct HclustArgs {
  std::string csv;
  bool newick = false, json = false, levels = false, svg = false;
};

void cmd_hclust(const Globals& g, const HclustArgs& a, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  auto l = load(g, a.csv);
  HclustOptions opts;
  opts.threads = g.threads;
  const auto tree = hclustvar(l.data, opts);

  const bool any = a.newick || a.json || a.levels || a.svg;
  const auto dir = prepare_out(g);
  RunReport report;
  report.command = command_echo("hclust", g, a.csv);
  report.dataset = l.summary;
  report.result = hierarchy_json(tree);
  report.warnings = l.warnings;
  for (auto& w : hierarchy_warnings(tree)) report.warnings.push_back(std::move(w));

  if (!any || a.levels) {
    write_file(dir / "levels.csv", render([&](std::ostream& s) { write_levels_csv(s, tree); }));
    out << "wrote " << (dir / "levels.csv").string() << '\n';
  }
  if (a.newick) {
    write_file(dir / "tree.nwk", to_newick(tree) + "\n");
    out << "wrote " << (dir / "tree.nwk").string() << '\n';
  }
  if (a.svg) {
    write_file(dir / "dendrogram.svg", dendrogram_svg(tree));
    out << "wrote " << (dir / "dendrogram.svg").string() << '\n';
  }
  if (!any || a.json) {
    report.seconds = elapsed(start);
    write_report(dir / "hierarchy.json", report, "hclust");
    out << "wrote " << (dir / "hierarchy.json").string() << '\n';
  }
}

struct CutArgs {
  std::string csv;
  std::size_t k = 0;
  bool matsim = false;
};

void cmd_cut(const Globals& g, const CutArgs& a, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  auto l = load(g, a.csv);
  if (a.k < 1 || a.k > l.data.n_vars()) {
    throw DataError("K must be between 1 and " + std::to_string(l.data.n_vars()) + ", got " + std::to_string(a.k));
  }
  HclustOptions opts;
  opts.threads = g.threads;
  const auto tree = hclustvar(l.data, opts);
  const auto part = cut(tree, l.data, a.k, a.matsim);

  const auto dir = prepare_out(g);
  RunReport report;
  report.command = command_echo("cut", g, a.csv);
  report.command["k"] = a.k;
  report.command["matsim"] = a.matsim;
  report.dataset = l.summary;
  report.result = partition_json(l.data, part);
  report.result["scores_csv"] = "scores.csv";
  report.warnings = l.warnings;
  for (auto& w : hierarchy_warnings(tree)) report.warnings.push_back(std::move(w));
  write_file(dir / "scores.csv", render([&](std::ostream& s) { write_scores_csv(s, part); }));
  report.seconds = elapsed(start);
  write_report(dir / "partition.json", report, "cut");
  print_partition(out, l.data, part);
}

struct KmeansArgs {
  std::string csv;
  std::optional<std::size_t> k;
  std::size_t nstart = 1;
  std::size_t max_iter = 150;
  std::string init_from;
  bool matsim = false;
};

void cmd_kmeans(const Globals& g, const KmeansArgs& a, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  auto l = load(g, a.csv);
  KmeansConfig cfg;
  cfg.max_iter = a.max_iter;
  cfg.with_sim = a.matsim;
  cfg.threads = g.threads;
  Json echo = command_echo("kmeans", g, a.csv);
  if (!a.init_from.empty()) {
    auto labels = labels_from_report(read_json(a.init_from), l.data);
    const auto canon = canonical_labels(labels);
    const std::size_t found = *std::max_element(canon.begin(), canon.end()) + 1;
    cfg.k = a.k.value_or(found);
    if (cfg.k != found) {
      throw DataError("--init-from holds " + std::to_string(found) + " clusters but K = " + std::to_string(cfg.k));
    }
    cfg.init = GivenPartition{std::move(labels)};
    echo["init_from"] = a.init_from;
  } else {
    if (!a.k) throw DataError("kmeans needs -k (or --init-from)");
    cfg.k = *a.k;
    cfg.init = RandomInit{a.nstart, g.seed};
    echo["nstart"] = a.nstart;
    echo["seed"] = g.seed;
  }
  if (cfg.k < 1 || cfg.k > l.data.n_vars()) {
    throw DataError("K must be between 1 and " + std::to_string(l.data.n_vars()) + ", got " + std::to_string(cfg.k));
  }
  echo["k"] = cfg.k;
  echo["max_iter"] = a.max_iter;
  const auto result = kmeansvar(l.data, cfg);

  const auto dir = prepare_out(g);
  RunReport report;
  report.command = echo;
  report.dataset = l.summary;
  report.result = kmeans_json(l.data, result);
  report.result["scores_csv"] = "scores.csv";
  report.warnings = l.warnings;
  if (!result.best.converged) {
    report.warnings.push_back("no convergence within " + std::to_string(a.max_iter) + " iterations");
  }
  if (result.best.repairs > 0) {
    report.warnings.push_back(std::to_string(result.best.repairs) + " empty cluster(s) refilled during iterations");
  }
  write_file(dir / "scores.csv", render([&](std::ostream& s) { write_scores_csv(s, result.partition); }));
  report.seconds = elapsed(start);
  write_report(dir / "kmeans.json", report, "kmeans");
  print_partition(out, l.data, result.partition);
  out << (result.best.converged ? "converged" : "not converged") << " after " << result.best.iterations
      << " iteration(s)\n";
}

struct StabilityArgs {
  std::string csv;
  std::size_t replicates = 100;
  bool strict = false;
  std::size_t max_retries = 10;
  bool svg = false;
};

void cmd_stability(const Globals& g, const StabilityArgs& a, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  auto l = load(g, a.csv);
  if (a.replicates < 1) throw DataError("--B must be at least 1");
  StabilityOptions opts;
  opts.replicates = a.replicates;
  opts.seed = g.seed;
  opts.strict_rare = a.strict;
  opts.max_retries = a.max_retries;
  opts.threads = g.threads;
  HclustOptions hopts;
  hopts.threads = g.threads;
  const auto tree = hclustvar(l.data, hopts);
  const auto result = bootstrap_stability(l.data, tree, opts);

  const auto dir = prepare_out(g);
  RunReport report;
  report.command = command_echo("stability", g, a.csv);
  report.command["B"] = a.replicates;
  report.command["seed"] = g.seed;
  report.command["strict_rare"] = a.strict;
  report.command["max_retries"] = a.max_retries;
  report.dataset = l.summary;
  report.result = stability_json(result);
  report.result["curve_csv"] = "curve.csv";
  report.result["matcr_csv"] = "matcr.csv";
  report.result["failures_csv"] = "failures.csv";
  report.warnings = l.warnings;
  for (const auto& f : result.failures) {
    report.warnings.push_back("replicate " + std::to_string(f.replicate + 1) + " failed after " +
                              std::to_string(f.attempts) + " draw(s): " + f.reason);
  }
  if (result.retries > 0) {
    report.warnings.push_back(std::to_string(result.retries) + " replicate(s) redrawn after losing a category");
  }
  write_file(dir / "curve.csv", render([&](std::ostream& s) { write_curve_csv(s, result); }));
  write_file(dir / "matcr.csv", render([&](std::ostream& s) { write_matcr_csv(s, result); }));
  write_file(dir / "failures.csv", render([&](std::ostream& s) { write_failures_csv(s, result); }));
  if (a.svg) write_file(dir / "stability.svg", stability_curve_svg(result));
  report.seconds = elapsed(start);
  write_report(dir / "stability.json", report, "stability");

  out << "K  mean ARI\n";
  for (std::size_t c = 0; c < result.cluster_counts.size(); ++c) {
    out << result.cluster_counts[c] << "  " << sig7(result.mean_adjusted_rand[c]) << '\n';
  }
  if (!result.failures.empty()) out << result.failures.size() << " replicate(s) failed\n";
}

struct SimArgs {
  std::string csv, a, b;
};

void cmd_sim(const Globals& g, const SimArgs& a, std::ostream& out) {
  auto l = load(g, a.csv);
  const auto i = l.data.index_of(a.a);
  if (!i) throw DataError("unknown variable '" + a.a + "'");
  const auto j = l.data.index_of(a.b);
  if (!j) throw DataError("unknown variable '" + a.b + "'");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.7f", mixed_var_sim(l.data, *i, *j));
  out << buf << '\n';
}

void cmd_inspect(const Globals& g, const std::string& csv, std::ostream& out) {
  auto l = load(g, csv);
  const auto& s = l.summary;
  out << "n = " << s["n"].get<std::size_t>() << "  quantitative = " << s["p1"].get<std::size_t>()
      << "  qualitative = " << s["p2"].get<std::size_t>() << '\n';
  for (const auto& v : s["variables"]) {
    out << "  " << v["name"].get<std::string>() << "  " << v["kind"].get<std::string>();
    if (v.contains("levels")) out << "  levels=" << v["levels"].size();
    if (v["missing"].get<std::size_t>() > 0) out << "  missing=" << v["missing"].get<std::size_t>();
    out << '\n';
  }
  for (const auto& w : l.warnings) out << "warning: " << w << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Clustering of quantitative and qualitative variables", "clustvar"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", "clustvar 0.1.0");

  Globals g;
  app.add_option("--quali", g.quali, "Qualitative column names (comma separated)")->delimiter(',');
  app.add_option("--na-token", g.na_token, "Token marking a missing value")->capture_default_str();
  app.add_option("--schema", g.schema, "JSON file mapping column names to \"quanti\" or \"quali\"");
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--drop", g.drop, "Columns to leave out (comma separated)")->delimiter(',');
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores)")->capture_default_str();

  HclustArgs ha;
  auto* hc = app.add_subcommand("hclust", "Hierarchical clustering of the variables");
  hc->add_option("csv", ha.csv, "Input CSV")->required();
  hc->add_flag("--newick", ha.newick, "Write tree.nwk");
  hc->add_flag("--json", ha.json, "Write hierarchy.json");
  hc->add_flag("--levels-csv", ha.levels, "Write levels.csv (K,height)");
  hc->add_flag("--svg", ha.svg, "Write dendrogram.svg");

  CutArgs ca;
  auto* ct = app.add_subcommand("cut", "Partition into K clusters from the hierarchy");
  ct->add_option("csv", ca.csv, "Input CSV")->required();
  ct->add_option("-k,--clusters", ca.k, "Number of clusters")->required();
  ct->add_flag("--matsim", ca.matsim, "Add within-cluster similarity matrices");

  KmeansArgs ka;
  auto* km = app.add_subcommand("kmeans", "k-means type partitioning of the variables");
  km->add_option("csv", ka.csv, "Input CSV")->required();
  km->add_option("-k,--clusters", ka.k, "Number of clusters");
  km->add_option("--nstart", ka.nstart, "Random starts")->capture_default_str();
  km->add_option("--max-iter", ka.max_iter, "Iteration limit")->capture_default_str();
  km->add_option("--init-from", ka.init_from, "Start from the partition in a partition or kmeans JSON");
  km->add_flag("--matsim", ka.matsim, "Add within-cluster similarity matrices");

  StabilityArgs sa;
  auto* st = app.add_subcommand("stability", "Bootstrap stability of the hierarchy's partitions");
  st->add_option("csv", sa.csv, "Input CSV")->required();
  st->add_option("--B", sa.replicates, "Bootstrap replicates")->capture_default_str();
  st->add_flag("--strict-rare", sa.strict, "Fail when a category vanishes from a replicate");
  st->add_option("--max-retries", sa.max_retries, "Redraws per replicate after a lost category")
      ->capture_default_str();
  st->add_flag("--svg", sa.svg, "Write stability.svg");

  SimArgs sm;
  auto* si = app.add_subcommand("sim", "Similarity between two variables");
  si->add_option("csv", sm.csv, "Input CSV")->required();
  si->add_option("var1", sm.a, "First variable")->required();
  si->add_option("var2", sm.b, "Second variable")->required();

  std::string inspect_csv;
  auto* in = app.add_subcommand("inspect", "Summarize a dataset");
  in->add_option("csv", inspect_csv, "Input CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*hc) cmd_hclust(g, ha, out);
    if (*ct) cmd_cut(g, ca, out);
    if (*km) cmd_kmeans(g, ka, out);
    if (*st) cmd_stability(g, sa, out);
    if (*si) cmd_sim(g, sm, out);
    if (*in) cmd_inspect(g, inspect_csv, out);
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const RareCategoryError& e) {
    err << "error: " << e.what() << " (variable '" << e.variable() << "')\n";
    return 3;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace clustvar::cli
