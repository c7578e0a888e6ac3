#pragma once

#include <iosfwd>
#include <string>

#include "bisectlp/graph.hpp"

namespace bisectlp {

/// Edge-list text: first line "n m", then m lines "i j" with 0 <= i < j < n.
void write_edge_list(std::ostream& out, const Graph& g);
Graph read_edge_list(std::istream& in);

/// Partition text: one line of n space-separated labels in {0,1}.
void write_partition(std::ostream& out, const Bisection& b);
Bisection read_partition(std::istream& in);

/// File wrappers; throw ConfigError when the file cannot be opened or parsed.
void save_edge_list(const std::string& path, const Graph& g);
Graph load_edge_list(const std::string& path);
void save_partition(const std::string& path, const Bisection& b);
Bisection load_partition(const std::string& path);

}  // namespace bisectlp
