#pragma once

#include <array>
#include <filesystem>
#include <string>

#include "clustvar/data_model.hpp"

namespace clustvar::fixtures {

inline std::filesystem::path data_dir() { return CLUSTVAR_DATA_DIR; }

inline VariableSet decathlon() { return load_csv(data_dir() / "decathlon.csv"); }

/// All 31 wine variables (Label and Soil qualitative).
inline VariableSet wine() {
  LoadOptions opts;
  opts.quali = std::vector<std::string>{"Label", "Soil"};
  return load_csv(data_dir() / "wine.csv", opts);
}

/// The 29-variable wine selection: Label, Soil and
/// the 27 sensory descriptors before Overall.quality.
inline VariableSet wine_29() {
  const std::array<std::string, 2> dropped{"Overall.quality", "Typical"};
  return wine().drop(dropped);
}

}  // namespace clustvar::fixtures
