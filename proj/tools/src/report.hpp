#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "clustvar/clustvar.hpp"

namespace clustvar::cli {

using Json = nlohmann::ordered_json;

/// Everything a command writes about one run. Timing is kept apart so that
/// the report itself is byte-identical across reruns.
struct RunReport {
  Json command;
  Json dataset;
  Json result;
  std::vector<std::string> warnings;
  double seconds = 0.0;

  Json to_json() const;
};

Json dataset_summary(const VariableSet& raw);

Json partition_json(const VariableSet& vs, const ClusterPartition& part);
Json hierarchy_json(const Hierarchy& h);
Json stability_json(const StabilityResult& r);
Json kmeans_json(const VariableSet& vs, const KmeansResult& r);

std::vector<std::string> hierarchy_warnings(const Hierarchy& h);

/// Shortest text that reads back to the same double.
std::string shortest(double x);
/// Seven significant digits, for tables read by people.
std::string sig7(double x);

void write_scores_csv(std::ostream& out, const ClusterPartition& part);
void write_levels_csv(std::ostream& out, const Hierarchy& h);
void write_curve_csv(std::ostream& out, const StabilityResult& r);
void write_matcr_csv(std::ostream& out, const StabilityResult& r);
void write_failures_csv(std::ostream& out, const StabilityResult& r);

/// Cluster labels (0-based, in `vs` order) read from a partition or kmeans
/// report written by this tool.
std::vector<std::size_t> labels_from_report(const Json& report, const VariableSet& vs);

}  // namespace clustvar::cli
