#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "tentlab/decomp.hpp"
#include "tentlab/dyadic.hpp"
#include "tentlab/hardy.hpp"
#include "tentlab/space.hpp"
#include "tentlab/tent.hpp"

namespace tentlab {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

/// Reads and parses a JSON file; missing files and parse errors raise InvalidInput.
Json read_json(const std::filesystem::path& path);

/// Writes to a sibling temporary and renames over the target.
void write_atomic(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const Json& doc);

// Space document: {points | distances, measure, metric: "euclidean" | "explicit"}.
MetricMeasureSpace space_from_json(const Json& doc);
Json space_to_json(const MetricMeasureSpace& space);

// Weight document: array of positive reals in point order.
std::vector<double> weight_from_json(const Json& doc, std::size_t points);

// Tent-function document: {grid: {t_min, ratio, count}, values: row-major N x count}.
TentFunction tent_from_json(const Json& doc, std::size_t points);
Json tent_to_json(const TentFunction& f);
TGrid grid_from_json(const Json& doc);
Json grid_to_json(const TGrid& g);

// Graph document: {kind: "path" | "grid2d" | "edges", weight, rows, cols, edges: [[i, j, w], ...]}.
GraphSpec graph_from_json(const Json& doc);

// Vector document: array of reals in point order.
std::vector<double> vector_from_json(const Json& doc, std::size_t points, const char* what);

Json dyadic_to_json(const DyadicCubeSystem& sys);
DyadicCubeSystem dyadic_from_json(const Json& doc);
Json dyadic_report_to_json(const DyadicReport& r);

Json decomposition_to_json(const AtomicDecomposition& d);
Json coefficient_report_to_json(const CoefficientReport& r);
Json hardy_to_json(const HardyDecomposition& d);

std::string mode_name(DecompMode m);
DecompMode parse_mode(const std::string& s);

}  // namespace tentlab
