#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "latmds/error.hpp"
#include "latmds/geometry.hpp"
#include "latmds/graph.hpp"
#include "latmds/sequential.hpp"

namespace latmds::io {

/// %.17g: shortest text that round-trips an IEEE double exactly.
inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  detail::require(os.good(), errc::io_failure, "cannot open for write: " + path);
  os << content;
  detail::require(os.good(), errc::io_failure, "write failed: " + path);
}

inline std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  detail::require(is.good(), errc::io_failure, "cannot open for read: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return std::move(ss).str();
}

namespace detail {

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

inline double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  latmds::detail::require(end != s.c_str(), errc::io_failure,
                          "not a number: '" + s + "'");
  return v;
}

inline long parse_long(const std::string& s) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  latmds::detail::require(end != s.c_str(), errc::io_failure,
                          "not an integer: '" + s + "'");
  return v;
}

// Splits into non-empty lines, tolerating trailing newlines and CR.
inline std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

}  // namespace detail

/// Configuration CSV: header `id,x1,...,xp`, one row per point.
inline std::string config_to_csv(const Configuration& config) {
  std::ostringstream os;
  os << "id";
  for (int k = 0; k < config.dim(); ++k) os << ",x" << (k + 1);
  os << "\n";
  for (int i = 0; i < config.size(); ++i) {
    os << i;
    for (int k = 0; k < config.dim(); ++k)
      os << ',' << fmt_double(config.points()(i, k));
    os << "\n";
  }
  return std::move(os).str();
}

inline Configuration config_from_csv(const std::string& text) {
  const auto lines = detail::lines_of(text);
  latmds::detail::require(lines.size() >= 2, errc::io_failure,
                          "configuration CSV needs a header and rows");
  const auto header = detail::split(lines[0], ',');
  latmds::detail::require(header.size() >= 2 && header[0] == "id",
                          errc::io_failure, "bad configuration CSV header");
  const int p = static_cast<int>(header.size()) - 1;
  const int n = static_cast<int>(lines.size()) - 1;
  Eigen::MatrixXd pts(n, p);
  for (int i = 0; i < n; ++i) {
    const auto cells = detail::split(lines[i + 1], ',');
    latmds::detail::require(static_cast<int>(cells.size()) == p + 1,
                            errc::io_failure, "ragged configuration CSV row");
    latmds::detail::require(detail::parse_long(cells[0]) == i, errc::io_failure,
                            "configuration CSV ids must be 0..n-1 in order");
    for (int k = 0; k < p; ++k) pts(i, k) = detail::parse_double(cells[k + 1]);
  }
  return Configuration(std::move(pts));
}

/// Graph CSV: `# n=<n> p=<p>` comment, `i,j,d2` header, one row per edge.
/// p is metadata for downstream tools (a graph has no intrinsic dimension).
inline std::string graph_to_csv(const DissimilarityGraph& graph, int p) {
  std::ostringstream os;
  os << "# n=" << graph.size() << " p=" << p << "\n";
  os << "i,j,d2\n";
  for (int k = 0; k < graph.edge_count(); ++k)
    os << graph.edges()[k].first << ',' << graph.edges()[k].second << ','
       << fmt_double(graph.squared()[k]) << "\n";
  return std::move(os).str();
}

struct GraphFile {
  DissimilarityGraph graph;
  int p = 0;
};

inline GraphFile graph_from_csv(const std::string& text) {
  const auto lines = detail::lines_of(text);
  latmds::detail::require(lines.size() >= 2, errc::io_failure,
                          "graph CSV needs the metadata and header lines");
  int n = -1, p = -1;
  {
    std::istringstream meta(lines[0]);
    std::string hash, tok;
    meta >> hash;
    latmds::detail::require(hash == "#", errc::io_failure,
                            "graph CSV must start with '# n=<n> p=<p>'");
    while (meta >> tok) {
      if (tok.rfind("n=", 0) == 0) n = static_cast<int>(detail::parse_long(tok.substr(2)));
      if (tok.rfind("p=", 0) == 0) p = static_cast<int>(detail::parse_long(tok.substr(2)));
    }
  }
  latmds::detail::require(n >= 1 && p >= 1, errc::io_failure,
                          "graph CSV metadata missing n or p");
  latmds::detail::require(lines[1] == "i,j,d2", errc::io_failure,
                          "bad graph CSV header");
  std::vector<std::pair<int, int>> edges;
  std::vector<double> d2;
  for (std::size_t li = 2; li < lines.size(); ++li) {
    const auto cells = detail::split(lines[li], ',');
    latmds::detail::require(cells.size() == 3, errc::io_failure,
                            "ragged graph CSV row");
    edges.emplace_back(static_cast<int>(detail::parse_long(cells[0])),
                       static_cast<int>(detail::parse_long(cells[1])));
    d2.push_back(detail::parse_double(cells[2]));
  }
  return GraphFile{DissimilarityGraph(n, std::move(edges), std::move(d2)), p};
}

/// Diagnostics sidecar for an EmbeddingResult (JSON object, one line each).
inline std::string result_sidecar_json(const EmbeddingResult& result) {
  int seed_scaled = 0;
  for (const auto src : result.provenance)
    if (src == node_source::seed_scaled) ++seed_scaled;
  std::ostringstream os;
  os << "{\n"
     << "  \"stress\": " << fmt_double(result.stress) << ",\n"
     << "  \"seed_scaled\": " << seed_scaled << ",\n"
     << "  \"laterated\": "
     << (static_cast<int>(result.provenance.size()) - seed_scaled) << ",\n"
     << "  \"wall_time_s\": " << fmt_double(result.wall_time) << "\n"
     << "}\n";
  return std::move(os).str();
}

}  // namespace latmds::io
