#include "dagfuse/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

namespace dagfuse::io {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

struct Line {
  std::size_t number;
  std::string text;
};

// Non-blank lines with their 1-based line numbers.
std::vector<Line> content_lines(const std::string& text) {
  std::vector<Line> out;
  std::stringstream ss(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(ss, line)) {
    ++number;
    std::string t = trim(line);
    if (!t.empty()) out.push_back({number, std::move(t)});
  }
  return out;
}

template <typename T>
bool parse_number(const std::string& s, T& out) {
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (begin != end && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

Index parse_index(const std::string& s, const std::string& origin, std::size_t line,
                  const char* what) {
  Index v = 0;
  if (!parse_number(s, v)) throw ParseError(origin, line, std::string("invalid ") + what + " '" + s + "'");
  return v;
}

double parse_real(const std::string& s, const std::string& origin, std::size_t line) {
  double v = 0;
  if (!parse_number(s, v)) throw ParseError(origin, line, "invalid number '" + s + "'");
  return v;
}

void expect_header(const std::vector<Line>& lines, const std::vector<std::string>& header,
                   const std::string& origin) {
  if (lines.empty()) throw ParseError(origin, 1, "file is empty");
  if (split_fields(lines.front().text) != header) {
    std::string want;
    for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
    throw ParseError(origin, lines.front().number, "expected header '" + want + "'");
  }
}

Dag build_graph(Index n, std::vector<Edge> edges, const std::string& origin) {
  try {
    return Dag::from_edge_list(n, std::move(edges));
  } catch (const GraphError& err) {
    throw ParseError(origin, 0, err.what());
  }
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError(path, 0, "cannot open file for writing");
  out << contents;
  if (!out) throw ParseError(path, 0, "write failed");
}

Dag read_graph(const std::string& path, std::optional<Index> n_vertices) {
  const std::string text = read_text(path);
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
    Dag dag = parse_graph_json(text, path);
    if (n_vertices && *n_vertices != dag.n_vertices())
      throw ParseError(path, 0, "n_vertices in file disagrees with the requested vertex count");
    return dag;
  }
  return parse_graph_csv(text, path, n_vertices);
}

Dag parse_graph_json(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& err) {
    throw ParseError(origin, 0, err.what());
  }
  try {
    const Index n = j.at("n_vertices").get<Index>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw ParseError(origin, 0, "each edge must be [source, target]");
      edges.push_back({e[0].get<Index>(), e[1].get<Index>()});
    }
    return build_graph(n, std::move(edges), origin);
  } catch (const json::exception& err) {
    throw ParseError(origin, 0, err.what());
  }
}

Dag parse_graph_csv(const std::string& text, const std::string& origin,
                    std::optional<Index> n_vertices) {
  const auto lines = content_lines(text);
  expect_header(lines, {"source", "target"}, origin);
  std::vector<Edge> edges;
  Index max_id = -1;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split_fields(lines[i].text);
    if (fields.size() != 2) throw ParseError(origin, lines[i].number, "expected 2 fields");
    const Index s = parse_index(fields[0], origin, lines[i].number, "vertex id");
    const Index t = parse_index(fields[1], origin, lines[i].number, "vertex id");
    if (s < 0 || t < 0) throw ParseError(origin, lines[i].number, "negative vertex id");
    max_id = std::max({max_id, s, t});
    edges.push_back({s, t});
  }
  const Index n = n_vertices.value_or(max_id + 1);
  if (n < 1) throw ParseError(origin, 0, "cannot infer the vertex count from an empty edge list");
  return build_graph(n, std::move(edges), origin);
}

json graph_to_json(const Dag& dag) {
  json edges = json::array();
  for (const Edge& e : dag.edges()) edges.push_back({e.source, e.target});
  return json{{"n_vertices", dag.n_vertices()}, {"edges", edges}};
}

Signal<double> read_signal_csv(const std::string& path) {
  return parse_signal_csv(read_text(path), path);
}

Signal<double> parse_signal_csv(const std::string& text, const std::string& origin) {
  const auto lines = content_lines(text);
  expect_header(lines, {"vertex", "value"}, origin);
  const auto n = static_cast<Index>(lines.size() - 1);
  if (n < 1) throw ParseError(origin, lines.front().number, "signal has no values");
  Signal<double> values(n);
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split_fields(lines[i].text);
    if (fields.size() != 2) throw ParseError(origin, lines[i].number, "expected 2 fields");
    const Index v = parse_index(fields[0], origin, lines[i].number, "vertex id");
    if (v < 0 || v >= n)
      throw ParseError(origin, lines[i].number, "vertex id " + fields[0] + " outside [0, " + std::to_string(n) + ")");
    if (seen[static_cast<std::size_t>(v)]++)
      throw ParseError(origin, lines[i].number, "vertex " + fields[0] + " listed twice");
    values(v) = parse_real(fields[1], origin, lines[i].number);
  }
  return values;
}

std::string signal_to_csv(const Signal<double>& values) {
  std::string out = "vertex,value\n";
  for (Index i = 0; i < values.size(); ++i)
    out += std::to_string(i) + "," + format_double(values(i)) + "\n";
  return out;
}

CategoricalSample read_samples(const std::string& path) {
  return parse_samples(read_text(path), path);
}

CategoricalSample parse_samples(const std::string& text, const std::string& origin) {
  const auto lines = content_lines(text);
  if (lines.empty()) throw ParseError(origin, 1, "sample file is empty");
  CategoricalSample sample;
  Index probe = 0;
  const bool has_header = !parse_number(lines.front().text, probe);
  std::size_t column = 0;
  std::size_t width = 1;
  std::size_t first = 0;
  if (has_header) {
    const auto header = split_fields(lines.front().text);
    const auto it = std::find(header.begin(), header.end(), "outcome");
    if (it == header.end())
      throw ParseError(origin, lines.front().number, "CSV sample file needs an 'outcome' column");
    column = static_cast<std::size_t>(it - header.begin());
    width = header.size();
    first = 1;
  }
  for (std::size_t i = first; i < lines.size(); ++i) {
    const auto fields = has_header ? split_fields(lines[i].text) : std::vector<std::string>{lines[i].text};
    if (fields.size() != width)
      throw ParseError(origin, lines[i].number, "expected " + std::to_string(width) + " fields");
    sample.outcomes.push_back(parse_index(fields[column], origin, lines[i].number, "outcome"));
  }
  return sample;
}

namespace {

template <typename Vec>
json vector_json(const Vec& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Signal<double> vector_from_json(const json& j) {
  Signal<double> v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = j[i].get<double>();
  return v;
}

}  // namespace

json to_json(const SolveResult<double>& result) {
  return json{{"beta", vector_json(result.beta)},
              {"edge_dual", vector_json(result.edge_dual)},
              {"iterations", result.iterations},
              {"objective", result.objective},
              {"primal_residual", result.primal_residual},
              {"dual_residual", result.dual_residual},
              {"converged", result.converged}};
}

SolveResult<double> solve_result_from_json(const json& j) {
  SolveResult<double> r;
  r.beta = vector_from_json(j.at("beta"));
  r.edge_dual = vector_from_json(j.at("edge_dual"));
  r.iterations = j.at("iterations").get<std::size_t>();
  r.objective = j.at("objective").get<double>();
  r.primal_residual = j.at("primal_residual").get<double>();
  r.dual_residual = j.at("dual_residual").get<double>();
  r.converged = j.value("converged", true);
  return r;
}

json to_json(const FusedPartition<double>& part) {
  json regions = json::array();
  for (std::size_t r = 0; r < part.regions.size(); ++r)
    regions.push_back({{"vertices", part.regions[r]}, {"value", part.region_values[r]}});
  return regions;
}

json to_json(const KktReport<double>& report) {
  return json{{"stationarity_gap", report.stationarity_gap},
              {"box_violation", report.box_violation},
              {"complementarity_violation", report.complementarity_violation},
              {"pass", report.pass}};
}

json to_json(const SmoothedHistogram& smoothed) {
  json j = to_json(smoothed.fit);
  j["empirical_pmf"] = vector_json(smoothed.empirical);
  j["regions"] = to_json(smoothed.regions);
  j["certificate"] = to_json(smoothed.certificate);
  return j;
}

json to_json(const LawComparison& cmp) {
  return json{{"ks_resolution", cmp.ks_resolution},
              {"per_coord_ks", cmp.per_coord_ks},
              {"mean_gap", cmp.mean_gap},
              {"cov_gap", cmp.cov_gap}};
}

json to_json(const LawMeta& meta, std::uint64_t seed) {
  return json{{"kind", meta.kind},
              {"seed", seed},
              {"sample_size", meta.sample_size},
              {"q", meta.q},
              {"lambda_f0", meta.lambda_f0},
              {"lambda_ni0", meta.lambda_ni0},
              {"reps_requested", meta.reps_requested},
              {"replicates", meta.replicate_ids.size()},
              {"failures", meta.failures},
              {"failed_replicates", meta.failed_replicates}};
}

json to_json(const verify::SuiteReport& report) {
  json checks = json::object();
  for (const auto& [name, value] : report.worst)
    checks[name] = {{"worst", value}, {"threshold", report.thresholds.at(name)}, {"pass", report.checks.at(name)}};
  return json{{"suite", report.suite},
              {"pass", report.pass},
              {"instances", report.instances},
              {"checks", checks},
              {"failures", report.failures}};
}

std::string law_to_csv(const EmpiricalLaw& law) {
  std::string out;
  for (Index c = 0; c < law.samples.cols(); ++c) out += (c ? ",v" : "v") + std::to_string(c);
  out += "\n";
  for (Index r = 0; r < law.samples.rows(); ++r) {
    for (Index c = 0; c < law.samples.cols(); ++c) {
      if (c) out += ",";
      out += format_double(law.samples(r, c));
    }
    out += "\n";
  }
  return out;
}

void write_law(const std::string& path, const EmpiricalLaw& law) {
  write_text(path, law_to_csv(law));
  write_text(path + ".json", dump(to_json(law.meta, law.seed)));
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace dagfuse::io
