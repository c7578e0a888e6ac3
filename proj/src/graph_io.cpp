#include "bisectlp/graph_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "bisectlp/error.hpp"

namespace bisectlp {

void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.num_nodes() << ' ' << g.num_edges() << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

Graph read_edge_list(std::istream& in) {
  long long n = -1, m = -1;
  if (!(in >> n >> m) || n < 0 || m < 0) throw ConfigError("edge list: bad header, expected 'n m'");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long k = 0; k < m; ++k) {
    int i = 0, j = 0;
    if (!(in >> i >> j)) throw ConfigError("edge list: expected " + std::to_string(m) + " edges");
    if (!(0 <= i && i < j && j < n)) {
      throw ConfigError("edge list: line " + std::to_string(k + 2) + " violates 0 <= i < j < n");
    }
    edges.push_back({i, j});
  }
  std::string trailing;
  if (in >> trailing) throw ConfigError("edge list: trailing content after edge " + std::to_string(m));
  return Graph(static_cast<int>(n), std::move(edges));
}

void write_partition(std::ostream& out, const Bisection& b) {
  for (int v = 0; v < b.size(); ++v) {
    if (v) out << ' ';
    out << static_cast<int>(b[v]);
  }
  out << '\n';
}

Bisection read_partition(std::istream& in) {
  std::string line;
  std::getline(in, line);
  std::istringstream ls(line);
  std::vector<std::uint8_t> side;
  std::string tok;
  while (ls >> tok) {
    if (tok != "0" && tok != "1") throw ConfigError("partition: label '" + tok + "' is not 0 or 1");
    side.push_back(tok == "1" ? 1 : 0);
  }
  if (side.empty()) throw ConfigError("partition: no labels");
  return Bisection(std::move(side));
}

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open '" + path + "' for reading");
  return f;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot open '" + path + "' for writing");
  return f;
}

}  // namespace

void save_edge_list(const std::string& path, const Graph& g) {
  auto f = open_out(path);
  write_edge_list(f, g);
}

Graph load_edge_list(const std::string& path) {
  auto f = open_in(path);
  return read_edge_list(f);
}

void save_partition(const std::string& path, const Bisection& b) {
  auto f = open_out(path);
  write_partition(f, b);
}

Bisection load_partition(const std::string& path) {
  auto f = open_in(path);
  return read_partition(f);
}

}  // namespace bisectlp
