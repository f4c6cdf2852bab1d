#include "netsync/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "netsync/errors.hpp"

namespace netsync {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(where + ": expected a number, got '" + s + "'");
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  for (int prec = 15; prec < 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

void write_topology_csv(const Topology& topology, std::ostream& out) {
  out << "# r_max = " << format_double(topology.r_max()) << '\n';
  if (const auto& r = topology.region())
    out << "# region = " << format_double(r->x0) << ' ' << format_double(r->y0) << ' ' << format_double(r->x1) << ' '
        << format_double(r->y1) << '\n';
  for (const auto& [k, v] : topology.metadata)
    if (k != "r_max" && k != "region") out << "# " << k << " = " << v << '\n';
  out << "node_id,kind,x,y\n";
  for (NodeId i = 0; i < topology.num_nodes(); ++i) {
    const auto& p = topology.position(i);
    out << i << ',' << (topology.is_agent(i) ? "agent" : "reference") << ',' << format_double(p.x) << ','
        << format_double(p.y) << '\n';
  }
}

Topology read_topology_csv(std::istream& in, const std::string& origin) {
  std::map<std::string, std::string> meta;
  std::vector<Position> pos;
  std::size_t n_agents = 0;
  bool seen_reference = false, seen_header = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = origin + ":" + std::to_string(lineno);
    const std::string s = trim(line);
    if (s.empty()) continue;
    if (s.front() == '#') {
      const auto eq = s.find('=');
      if (eq != std::string::npos) meta[trim(s.substr(1, eq - 1))] = trim(s.substr(eq + 1));
      continue;
    }
    const auto cols = split_csv_line(s);
    if (!seen_header) {
      if (cols.size() != 4 || cols[0] != "node_id" || cols[1] != "kind" || cols[2] != "x" || cols[3] != "y")
        throw ParseError(where + ": expected header node_id,kind,x,y");
      seen_header = true;
      continue;
    }
    if (cols.size() != 4) throw ParseError(where + ": expected 4 columns");
    if (cols[0] != std::to_string(pos.size())) throw ParseError(where + ": node ids must be dense and ascending from 0");
    if (cols[1] == "agent") {
      if (seen_reference) throw ParseError(where + ": agents must precede reference nodes");
      ++n_agents;
    } else if (cols[1] == "reference") {
      seen_reference = true;
    } else {
      throw ParseError(where + ": kind must be 'agent' or 'reference'");
    }
    pos.push_back({parse_number(cols[2], where), parse_number(cols[3], where)});
  }
  if (!seen_header) throw ParseError(origin + ": missing node_id,kind,x,y header");
  auto r = meta.find("r_max");
  if (r == meta.end()) throw ParseError(origin + ": missing '# r_max = ...' header line");
  const double r_max = parse_number(r->second, origin + ": r_max");
  std::optional<Rect> region;
  if (auto g = meta.find("region"); g != meta.end()) {
    std::istringstream rs(g->second);
    Rect rect;
    if (!(rs >> rect.x0 >> rect.y0 >> rect.x1 >> rect.y1)) throw ParseError(origin + ": malformed region header");
    region = rect;
  }
  Topology t(std::move(pos), n_agents, r_max, region);
  meta.erase("r_max");
  meta.erase("region");
  t.metadata = std::move(meta);
  return t;
}

void save_topology(const Topology& topology, const std::string& path) {
  std::ostringstream os;
  write_topology_csv(topology, os);
  write_file_atomic(path, os.str());
}

Topology load_topology(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open topology file '" + path + "'");
  return read_topology_csv(f, path);
}

MatrixFormat parse_matrix_format(const std::string& s) {
  if (s == "dense") return MatrixFormat::Dense;
  if (s == "triplet") return MatrixFormat::Triplet;
  throw InvalidArgument("matrix format must be 'dense' or 'triplet', got '" + s + "'");
}

void write_matrix_csv(const FimMatrix& fim, std::ostream& out, MatrixFormat format) {
  if (format == MatrixFormat::Triplet) {
    out << "row,col,value\n";
    // Row-major order regardless of the sparse storage order.
    const linalg::SparseMatrix rows = fim.data.transpose();
    for (Eigen::Index k = 0; k < rows.outerSize(); ++k)
      for (linalg::SparseMatrix::InnerIterator it(rows, k); it; ++it)
        out << it.col() << ',' << it.row() << ',' << format_double(it.value()) << '\n';
    return;
  }
  const Eigen::MatrixXd d = fim.dense();
  for (Eigen::Index r = 0; r < d.rows(); ++r) {
    for (Eigen::Index c = 0; c < d.cols(); ++c) out << (c ? "," : "") << format_double(d(r, c));
    out << '\n';
  }
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write '" + tmp + "'");
    f << content;
    if (!f) throw IoError("write failed for '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
}

}  // namespace netsync
