#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "netsync/fim.hpp"
#include "netsync/topology.hpp"

namespace netsync {

/// Shortest %.{15,16,17}g text that reads back to the same double.
std::string format_double(double v);

std::vector<std::string> split_csv_line(const std::string& line);

/// Topology CSV: a block of "# key = value" header lines (r_max, region,
/// generator metadata) followed by node_id,kind,x,y rows, agents first.
void write_topology_csv(const Topology& topology, std::ostream& out);
Topology read_topology_csv(std::istream& in, const std::string& origin = "<stream>");
void save_topology(const Topology& topology, const std::string& path);
Topology load_topology(const std::string& path);

enum class MatrixFormat { Dense, Triplet };
MatrixFormat parse_matrix_format(const std::string& s);

/// Dense: one CSV row per matrix row. Triplet: row,col,value for nonzeros.
void write_matrix_csv(const FimMatrix& fim, std::ostream& out, MatrixFormat format);

/// Writes `content` to `path` through a temporary file and rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace netsync
