#pragma once

// File formats:
//   graph JSON    {"n_vertices": int, "edges": [[src, tgt], ...]}
//   graph CSV     header `source,target`, one edge per line
//   signal CSV    header `vertex,value`
//   samples       one outcome id per line, or CSV with an `outcome` column
//   result JSON   {"beta", "edge_dual", "iterations", "objective",
//                  "primal_residual", "dual_residual"}
//   law CSV       one row per replicate, one column per vertex, plus a JSON
//                 sidecar at <path>.json
// Floats are written in shortest round-trip form with '.' as separator.

#include <optional>
#include <string>

#include <json.hpp>

#include "dagfuse/asymptotics.hpp"
#include "dagfuse/certificate.hpp"
#include "dagfuse/distribution.hpp"
#include "dagfuse/verify.hpp"

namespace dagfuse::io {

/// Shortest decimal string that parses back to exactly x.
std::string format_double(double x);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& contents);

/// JSON when the path ends in .json, CSV otherwise. For CSV the vertex count
/// is max id + 1 unless n_vertices is given.
Dag read_graph(const std::string& path, std::optional<Index> n_vertices = std::nullopt);
Dag parse_graph_json(const std::string& text, const std::string& origin);
Dag parse_graph_csv(const std::string& text, const std::string& origin,
                    std::optional<Index> n_vertices = std::nullopt);
nlohmann::json graph_to_json(const Dag& dag);

Signal<double> read_signal_csv(const std::string& path);
Signal<double> parse_signal_csv(const std::string& text, const std::string& origin);
std::string signal_to_csv(const Signal<double>& values);

CategoricalSample read_samples(const std::string& path);
CategoricalSample parse_samples(const std::string& text, const std::string& origin);

nlohmann::json to_json(const SolveResult<double>& result);
SolveResult<double> solve_result_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FusedPartition<double>& part);
nlohmann::json to_json(const KktReport<double>& report);
nlohmann::json to_json(const SmoothedHistogram& smoothed);
nlohmann::json to_json(const LawComparison& cmp);
nlohmann::json to_json(const LawMeta& meta, std::uint64_t seed);
nlohmann::json to_json(const verify::SuiteReport& report);

std::string law_to_csv(const EmpiricalLaw& law);
/// Writes the CSV at path and the sidecar at path + ".json".
void write_law(const std::string& path, const EmpiricalLaw& law);

/// Pretty-printed with a trailing newline.
std::string dump(const nlohmann::json& j);

}  // namespace dagfuse::io
