#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace clustvar {

enum class VariableKind { Quantitative, Qualitative };

/// One column of a mixed data table.
///
/// Quantitative variables keep their values in `values`, with NaN marking an
/// entry that is missing and not yet imputed. Qualitative variables keep a
/// level code per observation in `codes` (-1 for missing) and the level names
/// in first-appearance order. `missing` records the original missing mask and
/// survives imputation.
struct Variable {
  std::string name;
  VariableKind kind = VariableKind::Quantitative;
  std::vector<double> values;
  std::vector<int> codes;
  std::vector<std::string> levels;
  std::vector<std::uint8_t> missing;

  static Variable quantitative(std::string name, std::vector<double> values);
  static Variable qualitative(std::string name,
                              const std::vector<std::optional<std::string>>& labels);
  /// Builds a qualitative variable from codes into an existing level list.
  /// Levels are kept even when no observation uses them.
  static Variable from_codes(std::string name, std::vector<int> codes,
                             std::vector<std::string> levels);

  bool is_quantitative() const noexcept { return kind == VariableKind::Quantitative; }
  bool is_qualitative() const noexcept { return kind == VariableKind::Qualitative; }
  std::size_t size() const noexcept { return missing.size(); }
  std::size_t missing_count() const noexcept;
  /// Number of observations per level (qualitative only).
  std::vector<std::size_t> level_counts() const;
  /// Levels with at least one observation.
  std::size_t observed_levels() const;

  friend bool operator==(const Variable& a, const Variable& b);
};

/// An n x p table of quantitative and qualitative variables.
class VariableSet {
 public:
  VariableSet() = default;
  /// Throws DataError when column lengths differ or names are empty or repeated.
  explicit VariableSet(std::vector<Variable> variables,
                       std::vector<std::string> obs_labels = {});

  std::size_t n_obs() const noexcept { return n_obs_; }
  std::size_t n_vars() const noexcept { return variables_.size(); }
  std::size_t quantitative_count() const noexcept;
  std::size_t qualitative_count() const noexcept;

  const Variable& variable(std::size_t i) const { return variables_.at(i); }
  const std::vector<Variable>& variables() const noexcept { return variables_; }
  const std::vector<std::string>& obs_labels() const noexcept { return obs_labels_; }
  std::vector<std::string> names() const;
  std::optional<std::size_t> index_of(std::string_view name) const;

  /// Keeps the given variables, in the given order.
  VariableSet select(std::span<const std::size_t> columns) const;
  /// Drops the named variables; throws DataError on an unknown name.
  VariableSet drop(std::span<const std::string> names) const;
  /// Rows drawn by index (with repetition allowed). Qualitative level lists
  /// are preserved so that vanished levels stay visible to recoding.
  VariableSet resample(std::span<const std::size_t> rows) const;

  friend bool operator==(const VariableSet& a, const VariableSet& b);

 private:
  std::size_t n_obs_ = 0;
  std::vector<Variable> variables_;
  std::vector<std::string> obs_labels_;
};

struct IndicatorMatrix {
  Eigen::MatrixXd matrix;
  std::vector<std::size_t> level_counts;
  std::vector<std::string> level_names;
};

struct LoadOptions {
  /// Qualitative column names; std::nullopt infers them (any non-numeric,
  /// non-missing token makes a column qualitative).
  std::optional<std::vector<std::string>> quali;
  std::string na_token = "NA";
  /// Per-column overrides, applied after `quali` / inference.
  std::map<std::string, VariableKind> kinds;
};

/// Reads an RFC-4180 CSV with a header row. An empty first header cell marks
/// the first column as observation labels.
VariableSet load_csv(const std::filesystem::path& path, const LoadOptions& options = {});
VariableSet parse_csv(std::istream& in, const LoadOptions& options = {});

/// Writes the table back in the format `load_csv` reads. Missing entries
/// (including imputed ones) are written as `na_token`.
void write_csv(const VariableSet& vs, std::ostream& out, const std::string& na_token = "NA");

/// Throws DataError if the variable cannot be standardized: a qualitative
/// variable with fewer than two observed levels or a constant quantitative one.
void check_variable(const Variable& v);

/// Mean imputation for quantitative entries; qualitative entries stay coded
/// -1 so their indicator rows are all zero.
VariableSet impute_missing(const VariableSet& vs);

IndicatorMatrix build_indicator(const Variable& z);

}  // namespace clustvar
