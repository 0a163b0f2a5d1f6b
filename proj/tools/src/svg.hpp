#pragma once

#include <string>

#include "clustvar/hierarchy.hpp"
#include "clustvar/stability.hpp"

namespace clustvar::cli {

/// Static dendrogram: leaves along the bottom, merges drawn at their heights.
std::string dendrogram_svg(const Hierarchy& h);

/// Mean adjusted Rand index against the number of clusters.
std::string stability_curve_svg(const StabilityResult& r);

}  // namespace clustvar::cli
