#pragma once

// Figure-reproduction pipelines: canned sweep + fit campaigns that emit
// plot-ready CSV bundles and a JSON summary with fitted exponents next to
// published reference values.

#include <string>
#include <vector>

namespace qpt {

struct FigureBundle {
  std::vector<std::string> csv_paths;
  std::string summary_path;
  std::string summary_json;
};

/// figure: one of "fig1".."fig5"; scale: "desk" or "full".
/// Desk scale keeps runtimes in the minutes range; full scale mirrors the
/// published campaign (sizes to 987/1597, 100 phases).
FigureBundle reproduce_figure(const std::string& figure, const std::string& scale,
                              const std::string& out_dir, int threads = 0,
                              bool cache = true, bool verbose = false);

}  // namespace qpt
