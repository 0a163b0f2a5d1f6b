#include "clustvar/data_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "clustvar/errors.hpp"

namespace clustvar {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(std::string_view token) {
  if (token.empty()) return std::nullopt;
  if (token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

using Record = std::vector<std::string>;

// RFC-4180 records: quoted fields may hold separators, doubled quotes and
// line breaks. Blank lines are skipped.
std::vector<Record> read_records(std::istream& in) {
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (text.starts_with("\xEF\xBB\xBF")) text.erase(0, 3);

  std::vector<Record> records;
  Record current;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  auto end_field = [&] {
    current.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    if (!(current.size() == 1 && current.front().empty())) records.push_back(std::move(current));
    current.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started && !trim(field).empty()) {
          throw DataError("CSV record " + std::to_string(records.size() + 1) +
                          ": stray quote inside unquoted field");
        }
        field.clear();
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        end_record();
        break;
      case '\n':
        end_record();
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (in_quotes) throw DataError("CSV: unterminated quoted field");
  if (field_started || !field.empty() || !current.empty()) end_record();
  return records;
}

bool needs_quotes(std::string_view s) {
  return s.find_first_of(",\"\r\n") != std::string_view::npos || s != trim(s);
}

void write_field(std::ostream& out, std::string_view s) {
  if (!needs_quotes(s)) {
    out << s;
    return;
  }
  out << '"';
  for (char c : s) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

// ---------------------------------------------------------------- Variable

Variable Variable::quantitative(std::string name, std::vector<double> values) {
  Variable v;
  v.name = std::move(name);
  v.kind = VariableKind::Quantitative;
  v.missing.resize(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::isnan(values[i])) v.missing[i] = 1;
  }
  v.values = std::move(values);
  return v;
}

Variable Variable::qualitative(std::string name,
                               const std::vector<std::optional<std::string>>& labels) {
  Variable v;
  v.name = std::move(name);
  v.kind = VariableKind::Qualitative;
  v.codes.resize(labels.size(), -1);
  v.missing.resize(labels.size());
  std::unordered_map<std::string, int> index;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!labels[i]) {
      v.missing[i] = 1;
      continue;
    }
    auto [it, inserted] = index.try_emplace(*labels[i], static_cast<int>(v.levels.size()));
    if (inserted) v.levels.push_back(*labels[i]);
    v.codes[i] = it->second;
  }
  return v;
}

Variable Variable::from_codes(std::string name, std::vector<int> codes,
                              std::vector<std::string> levels) {
  Variable v;
  v.name = std::move(name);
  v.kind = VariableKind::Qualitative;
  v.missing.resize(codes.size());
  for (std::size_t i = 0; i < codes.size(); ++i) {
    if (codes[i] < 0) {
      v.missing[i] = 1;
      codes[i] = -1;
    } else if (static_cast<std::size_t>(codes[i]) >= levels.size()) {
      throw DataError("variable '" + v.name + "': level code out of range");
    }
  }
  v.codes = std::move(codes);
  v.levels = std::move(levels);
  return v;
}

std::size_t Variable::missing_count() const noexcept {
  return static_cast<std::size_t>(std::count(missing.begin(), missing.end(), 1));
}

std::vector<std::size_t> Variable::level_counts() const {
  std::vector<std::size_t> counts(levels.size(), 0);
  for (int c : codes) {
    if (c >= 0) ++counts[static_cast<std::size_t>(c)];
  }
  return counts;
}

std::size_t Variable::observed_levels() const {
  const auto counts = level_counts();
  return static_cast<std::size_t>(
      std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }));
}

bool operator==(const Variable& a, const Variable& b) {
  if (a.name != b.name || a.kind != b.kind || a.missing != b.missing) return false;
  if (a.is_qualitative()) return a.codes == b.codes && a.levels == b.levels;
  if (a.values.size() != b.values.size()) return false;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const bool na = std::isnan(a.values[i]);
    if (na != std::isnan(b.values[i])) return false;
    if (!na && a.values[i] != b.values[i]) return false;
  }
  return true;
}

// ------------------------------------------------------------- VariableSet

VariableSet::VariableSet(std::vector<Variable> variables, std::vector<std::string> obs_labels)
    : variables_(std::move(variables)), obs_labels_(std::move(obs_labels)) {
  n_obs_ = variables_.empty() ? obs_labels_.size() : variables_.front().size();
  std::set<std::string_view> seen;
  for (const auto& v : variables_) {
    if (v.name.empty()) throw DataError("variable with empty name");
    if (!seen.insert(v.name).second) throw DataError("duplicate variable name '" + v.name + "'");
    const std::size_t len = v.is_quantitative() ? v.values.size() : v.codes.size();
    if (len != n_obs_ || v.missing.size() != n_obs_) {
      throw DataError("variable '" + v.name + "' has " + std::to_string(len) +
                      " entries, expected " + std::to_string(n_obs_));
    }
  }
  if (!obs_labels_.empty() && obs_labels_.size() != n_obs_) {
    throw DataError("observation label count does not match the number of rows");
  }
}

std::size_t VariableSet::quantitative_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(
      variables_.begin(), variables_.end(), [](const Variable& v) { return v.is_quantitative(); }));
}

std::size_t VariableSet::qualitative_count() const noexcept {
  return n_vars() - quantitative_count();
}

std::vector<std::string> VariableSet::names() const {
  std::vector<std::string> out;
  out.reserve(variables_.size());
  for (const auto& v : variables_) out.push_back(v.name);
  return out;
}

std::optional<std::size_t> VariableSet::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (variables_[i].name == name) return i;
  }
  return std::nullopt;
}

VariableSet VariableSet::select(std::span<const std::size_t> columns) const {
  std::vector<Variable> out;
  out.reserve(columns.size());
  for (std::size_t c : columns) out.push_back(variables_.at(c));
  return VariableSet(std::move(out), obs_labels_);
}

VariableSet VariableSet::drop(std::span<const std::string> names) const {
  std::set<std::string, std::less<>> to_drop;
  for (const auto& name : names) {
    if (!index_of(name)) throw DataError("unknown variable '" + name + "'");
    to_drop.insert(name);
  }
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (!to_drop.contains(variables_[i].name)) keep.push_back(i);
  }
  return select(keep);
}

VariableSet VariableSet::resample(std::span<const std::size_t> rows) const {
  std::vector<Variable> out;
  out.reserve(variables_.size());
  for (const auto& v : variables_) {
    Variable r;
    r.name = v.name;
    r.kind = v.kind;
    r.levels = v.levels;
    r.missing.reserve(rows.size());
    for (std::size_t row : rows) {
      r.missing.push_back(v.missing.at(row));
      if (v.is_quantitative()) {
        r.values.push_back(v.values[row]);
      } else {
        r.codes.push_back(v.codes[row]);
      }
    }
    out.push_back(std::move(r));
  }
  std::vector<std::string> labels;
  if (!obs_labels_.empty()) {
    labels.reserve(rows.size());
    for (std::size_t row : rows) labels.push_back(obs_labels_[row]);
  }
  return VariableSet(std::move(out), std::move(labels));
}

bool operator==(const VariableSet& a, const VariableSet& b) {
  return a.n_obs_ == b.n_obs_ && a.variables_ == b.variables_ && a.obs_labels_ == b.obs_labels_;
}

// --------------------------------------------------------------------- I/O

void check_variable(const Variable& v) {
  if (v.is_qualitative()) {
    if (v.observed_levels() < 2) {
      throw DataError("qualitative variable '" + v.name + "' has fewer than 2 observed levels");
    }
    return;
  }
  std::optional<double> first;
  bool constant = true;
  for (std::size_t i = 0; i < v.values.size(); ++i) {
    if (v.missing[i] && std::isnan(v.values[i])) continue;
    if (!first) {
      first = v.values[i];
    } else if (v.values[i] != *first) {
      constant = false;
      break;
    }
  }
  if (!first) throw DataError("quantitative variable '" + v.name + "' has no observed values");
  if (constant) {
    throw DataError("quantitative variable '" + v.name + "' is constant (zero variance)");
  }
}

VariableSet parse_csv(std::istream& in, const LoadOptions& options) {
  const auto records = read_records(in);
  if (records.empty()) throw DataError("CSV has no header row");
  const Record& header = records.front();
  const bool has_labels = !header.empty() && trim(header.front()).empty();
  const std::size_t first_col = has_labels ? 1 : 0;

  std::vector<std::string> names;
  std::set<std::string, std::less<>> seen;
  for (std::size_t c = first_col; c < header.size(); ++c) {
    std::string name(trim(header[c]));
    if (name.empty()) throw DataError("CSV header: column " + std::to_string(c + 1) + " has no name");
    if (!seen.insert(name).second) throw DataError("CSV header: duplicate column name '" + name + "'");
    names.push_back(std::move(name));
  }

  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != header.size()) {
      throw DataError("CSV record " + std::to_string(r + 1) + " has " +
                      std::to_string(records[r].size()) + " fields, expected " +
                      std::to_string(header.size()));
    }
  }
  const std::size_t n = records.size() - 1;
  auto cell = [&](std::size_t row, std::size_t col) {
    return trim(records[row + 1][col + first_col]);
  };
  auto is_na = [&](std::string_view token) { return token.empty() || token == options.na_token; };

  std::vector<VariableKind> kinds(names.size(), VariableKind::Quantitative);
  if (options.quali) {
    for (const auto& q : *options.quali) {
      if (!seen.contains(q)) throw DataError("qualitative column '" + q + "' not found in header");
      const auto pos = std::find(names.begin(), names.end(), q) - names.begin();
      kinds[static_cast<std::size_t>(pos)] = VariableKind::Qualitative;
    }
  } else {
    for (std::size_t c = 0; c < names.size(); ++c) {
      for (std::size_t r = 0; r < n; ++r) {
        const auto token = cell(r, c);
        if (!is_na(token) && !parse_number(token)) {
          kinds[c] = VariableKind::Qualitative;
          break;
        }
      }
    }
  }
  for (const auto& [name, kind] : options.kinds) {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw DataError("schema column '" + name + "' not found in header");
    kinds[static_cast<std::size_t>(it - names.begin())] = kind;
  }

  std::vector<Variable> variables;
  variables.reserve(names.size());
  for (std::size_t c = 0; c < names.size(); ++c) {
    if (kinds[c] == VariableKind::Quantitative) {
      std::vector<double> values(n, kNaN);
      for (std::size_t r = 0; r < n; ++r) {
        const auto token = cell(r, c);
        if (is_na(token)) continue;
        if (auto x = parse_number(token)) values[r] = *x;
      }
      variables.push_back(Variable::quantitative(names[c], std::move(values)));
    } else {
      std::vector<std::optional<std::string>> labels(n);
      for (std::size_t r = 0; r < n; ++r) {
        const auto token = cell(r, c);
        if (!is_na(token)) labels[r] = std::string(token);
      }
      variables.push_back(Variable::qualitative(names[c], labels));
    }
    check_variable(variables.back());
  }

  std::vector<std::string> obs_labels;
  if (has_labels) {
    obs_labels.reserve(n);
    for (std::size_t r = 0; r < n; ++r) obs_labels.emplace_back(trim(records[r + 1][0]));
  }
  return VariableSet(std::move(variables), std::move(obs_labels));
}

VariableSet load_csv(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return parse_csv(in, options);
}

void write_csv(const VariableSet& vs, std::ostream& out, const std::string& na_token) {
  const bool labels = !vs.obs_labels().empty();
  bool first = true;
  auto sep = [&] {
    if (!first) out << ',';
    first = false;
  };
  if (labels) {
    sep();
    out << "\"\"";
  }
  for (const auto& v : vs.variables()) {
    sep();
    write_field(out, v.name);
  }
  out << '\n';
  for (std::size_t r = 0; r < vs.n_obs(); ++r) {
    first = true;
    if (labels) {
      sep();
      write_field(out, vs.obs_labels()[r]);
    }
    for (const auto& v : vs.variables()) {
      sep();
      if (v.missing[r]) {
        out << na_token;
      } else if (v.is_quantitative()) {
        out << format_double(v.values[r]);
      } else {
        write_field(out, v.levels[static_cast<std::size_t>(v.codes[r])]);
      }
    }
    out << '\n';
  }
}

// -------------------------------------------------------------- imputation

VariableSet impute_missing(const VariableSet& vs) {
  std::vector<Variable> out = vs.variables();
  for (auto& v : out) {
    if (v.missing_count() == v.size() && v.size() > 0) {
      throw DataError("variable '" + v.name + "' has no observed values");
    }
    if (!v.is_quantitative()) continue;
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < v.values.size(); ++i) {
      if (!v.missing[i]) {
        sum += v.values[i];
        ++count;
      }
    }
    const double mean = sum / static_cast<double>(count);
    for (std::size_t i = 0; i < v.values.size(); ++i) {
      if (v.missing[i]) v.values[i] = mean;
    }
  }
  return VariableSet(std::move(out), vs.obs_labels());
}

IndicatorMatrix build_indicator(const Variable& z) {
  if (!z.is_qualitative()) throw DataError("variable '" + z.name + "' is not qualitative");
  if (z.observed_levels() < 2) {
    throw DataError("qualitative variable '" + z.name + "' has fewer than 2 observed levels");
  }
  IndicatorMatrix g;
  g.level_names = z.levels;
  g.level_counts = z.level_counts();
  g.matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(z.size()),
                                   static_cast<Eigen::Index>(z.levels.size()));
  for (std::size_t i = 0; i < z.codes.size(); ++i) {
    if (z.codes[i] >= 0) g.matrix(static_cast<Eigen::Index>(i), z.codes[i]) = 1.0;
  }
  return g;
}

}  // namespace clustvar
