#pragma once

// Output plumbing: run manifests, CSV tables and static SVG plots.

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "stripbound/quadrature.hpp"

namespace stripbound::cli {

using nlohmann::json;

/// Shortest decimal that reads back to the same double; "nan"/"inf" otherwise.
std::string format_real(double v);

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Line plot; the x axis is logarithmic when all x > 0 and they span more
/// than two decades. Non-finite points break the line.
std::string svg_line_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                          const std::vector<Series>& series);

void write_text(const std::filesystem::path& path, const std::string& text);

/// Everything needed to reproduce a run. `argv` excludes the program name
/// and the --out / --manifest options.
struct RunRecord {
  std::vector<std::string> argv;
  std::string command;
  json parameters = json::object();
  QuadratureSpec quadrature;
  std::vector<std::string> outputs;
};

json manifest_json(const RunRecord& run);

}  // namespace stripbound::cli
