#include "netsync/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "netsync/csv.hpp"
#include "netsync/errors.hpp"

namespace netsync {

namespace fs = std::filesystem;

const char* library_version() { return "0.1.0"; }

std::uint64_t stable_hash(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("fit_line: need at least two paired points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw InvalidArgument("fit_line: x values are all equal");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

const ResultRow& ExperimentResult::find(const std::string& statistic,
                                        const std::vector<std::pair<std::string, std::string>>& where) const {
  std::vector<std::pair<std::size_t, std::string>> idx;
  for (const auto& [name, value] : where) {
    auto it = std::find(param_names.begin(), param_names.end(), name);
    if (it == param_names.end()) throw InvalidArgument("result lookup: unknown parameter '" + name + "'");
    idx.emplace_back(static_cast<std::size_t>(it - param_names.begin()), value);
  }
  for (const auto& r : rows) {
    if (r.statistic != statistic) continue;
    bool ok = true;
    for (const auto& [i, v] : idx) ok = ok && r.params[i] == v;
    if (ok) return r;
  }
  std::string what = statistic;
  for (const auto& [name, value] : where) what += " " + name + "=" + value;
  throw InvalidArgument("result lookup: no row for " + what);
}

std::string result_header(const std::vector<std::string>& param_names) {
  std::string h = "cell";
  for (const auto& p : param_names) h += "," + p;
  return h + ",statistic,value,stderr,n_samples,resample_count";
}

std::string format_result_row(const ResultRow& row) {
  std::string s = std::to_string(row.cell);
  for (const auto& p : row.params) s += "," + p;
  s += "," + row.statistic + "," + format_double(row.value) + "," + format_double(row.std_error) + "," +
       std::to_string(row.n_samples) + "," + std::to_string(row.resample_count);
  return s;
}

namespace {

ResultRow parse_result_row(const std::string& line, std::size_t n_params, const std::string& where) {
  const auto cols = split_csv_line(line);
  if (cols.size() != n_params + 6) throw ParseError(where + ": wrong column count");
  ResultRow r;
  try {
    r.cell = std::stoull(cols[0]);
    r.params.assign(cols.begin() + 1, cols.begin() + 1 + static_cast<std::ptrdiff_t>(n_params));
    r.statistic = cols[n_params + 1];
    r.value = std::stod(cols[n_params + 2]);
    r.std_error = std::stod(cols[n_params + 3]);
    r.n_samples = std::stoull(cols[n_params + 4]);
    r.resample_count = std::stoull(cols[n_params + 5]);
  } catch (const std::exception&) {
    throw ParseError(where + ": malformed row");
  }
  return r;
}

std::string summary_csv(const SummaryTable& t) {
  std::ostringstream os;
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << '\n';
  }
  return os.str();
}

}  // namespace

ExperimentResult run_experiment(const Experiment& experiment, unsigned jobs) {
  ExperimentResult res;
  res.id = experiment.id();
  res.param_names = experiment.param_names();
  const auto cells = experiment.cells();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    auto rows = experiment.run_cell(i, cells[i], jobs);
    res.rows.insert(res.rows.end(), rows.begin(), rows.end());
  }
  res.summary = experiment.summarize(res.rows);
  return res;
}

RunReport run_experiment_to_dir(const Experiment& experiment, const Config& config, std::uint64_t master_seed,
                                const std::string& out_dir, unsigned jobs) {
  const auto t0 = std::chrono::steady_clock::now();
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + out_dir + "': " + ec.message());

  RunReport rep;
  rep.result.id = experiment.id();
  rep.result.param_names = experiment.param_names();
  const auto cells = experiment.cells();
  rep.cells_total = cells.size();
  rep.csv_path = (fs::path(out_dir) / (experiment.id() + ".csv")).string();
  rep.summary_path = (fs::path(out_dir) / (experiment.id() + "_summary.csv")).string();
  rep.manifest_path = (fs::path(out_dir) / (experiment.id() + "_manifest.json")).string();
  const std::string header = result_header(rep.result.param_names);
  const std::size_t n_params = rep.result.param_names.size();

  // Keep the longest prefix of complete cells already on disk.
  std::string kept = header + "\n";
  std::size_t next_cell = 0;
  if (fs::exists(rep.csv_path)) {
    std::ifstream f(rep.csv_path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    const std::string text = ss.str();
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (true) {
      const auto nl = text.find('\n', pos);
      if (nl == std::string::npos) break;  // an unterminated tail is a torn write
      lines.push_back(text.substr(pos, nl - pos));
      pos = nl + 1;
    }
    if (lines.empty() || lines[0] != header)
      throw IoError("'" + rep.csv_path + "' exists with a different header; refusing to resume into it");
    std::size_t li = 1;
    while (next_cell < cells.size()) {
      const Cell& c = cells[next_cell];
      if (li + c.rows > lines.size()) break;
      std::vector<ResultRow> rows;
      bool ok = true;
      for (std::size_t r = 0; r < c.rows && ok; ++r) {
        try {
          ResultRow row = parse_result_row(lines[li + r], n_params, rep.csv_path);
          ok = row.cell == next_cell && row.params == c.params;
          rows.push_back(std::move(row));
        } catch (const ParseError&) {
          ok = false;
        }
      }
      if (!ok) break;
      for (std::size_t r = 0; r < c.rows; ++r) kept += lines[li + r] + "\n";
      rep.result.rows.insert(rep.result.rows.end(), rows.begin(), rows.end());
      li += c.rows;
      ++next_cell;
    }
  }
  write_file_atomic(rep.csv_path, kept);
  rep.cells_resumed = next_cell;

  {
    std::ofstream out(rep.csv_path, std::ios::binary | std::ios::app);
    if (!out) throw IoError("cannot append to '" + rep.csv_path + "'");
    for (std::size_t i = next_cell; i < cells.size(); ++i) {
      auto rows = experiment.run_cell(i, cells[i], jobs);
      if (rows.size() != cells[i].rows)
        throw Error("experiment " + experiment.id() + ": cell " + std::to_string(i) + " produced " +
                    std::to_string(rows.size()) + " rows, expected " + std::to_string(cells[i].rows));
      std::string chunk;
      for (const auto& r : rows) chunk += format_result_row(r) + "\n";
      out << chunk;
      out.flush();
      if (!out) throw IoError("write failed for '" + rep.csv_path + "'");
      rep.result.rows.insert(rep.result.rows.end(), rows.begin(), rows.end());
      ++rep.cells_computed;
    }
  }

  rep.result.summary = experiment.summarize(rep.result.rows);
  write_file_atomic(rep.summary_path, summary_csv(rep.result.summary));
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  nlohmann::ordered_json m;
  m["experiment"] = experiment.id();
  m["version"] = library_version();
  m["master_seed"] = master_seed;
  m["jobs"] = jobs;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& name : config.sections()) {
    nlohmann::ordered_json sec = nlohmann::ordered_json::object();
    for (const auto& [k, v] : config.section(name)) sec[k] = v;
    cfg[name.empty() ? "global" : name] = sec;
  }
  m["config"] = cfg;
  m["cells_total"] = rep.cells_total;
  m["cells_resumed"] = rep.cells_resumed;
  m["cells_computed"] = rep.cells_computed;
  std::size_t resamples = 0;
  for (const auto& r : rep.result.rows) resamples += r.resample_count;
  m["resamples_total"] = resamples;
  m["outputs"] = {fs::path(rep.csv_path).filename().string(), fs::path(rep.summary_path).filename().string()};
  m["wall_time_s"] = rep.wall_seconds;
  write_file_atomic(rep.manifest_path, m.dump(2) + "\n");
  return rep;
}

}  // namespace netsync
