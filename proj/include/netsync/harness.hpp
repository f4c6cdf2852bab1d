#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "netsync/config.hpp"

namespace netsync {

/// One grid point of an experiment. `params` line up with the experiment's
/// param_names(); `rows` is the number of result rows the cell emits.
struct Cell {
  std::vector<std::string> params;
  std::size_t rows = 1;
};

struct ResultRow {
  std::size_t cell = 0;
  std::vector<std::string> params;
  std::string statistic;
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 1;
  std::size_t resample_count = 0;
};

/// Derived table (fits, plateaus, slopes, gaps).
struct SummaryTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

class Experiment {
 public:
  virtual ~Experiment() = default;
  virtual std::string id() const = 0;
  virtual std::vector<std::string> param_names() const = 0;
  virtual std::vector<Cell> cells() const = 0;
  /// Rows for one cell; `jobs` threads may be used inside the cell.
  virtual std::vector<ResultRow> run_cell(std::size_t index, const Cell& cell, unsigned jobs) const = 0;
  virtual SummaryTable summarize(const std::vector<ResultRow>& rows) const = 0;
};

/// Registered ids: extended_rseb, extended_aseb, dense_scaling,
/// lattice_cdi_study, stochastic_convergence.
std::vector<std::string> experiment_ids();

/// Builds an experiment from the config section named after it (and the
/// shared [link] section). Throws InvalidArgument for unknown ids.
std::unique_ptr<Experiment> make_experiment(const std::string& id, const Config& config, std::uint64_t master_seed);

struct ExperimentResult {
  std::string id;
  std::vector<std::string> param_names;
  std::vector<ResultRow> rows;
  SummaryTable summary;

  /// First row matching the statistic and every (name, value) pair; throws
  /// InvalidArgument when absent.
  const ResultRow& find(const std::string& statistic,
                        const std::vector<std::pair<std::string, std::string>>& where) const;
};

/// Runs every cell in memory.
ExperimentResult run_experiment(const Experiment& experiment, unsigned jobs = 1);

ExperimentResult run_extended_rseb(const Config& config, std::uint64_t seed, unsigned jobs = 1);
ExperimentResult run_extended_aseb(const Config& config, std::uint64_t seed, unsigned jobs = 1);
/// `which` overrides dense_scaling.which ("rseb" or "aseb").
ExperimentResult run_dense_scaling(const Config& config, const std::string& which, std::uint64_t seed,
                                   unsigned jobs = 1);
ExperimentResult run_lattice_cdi_study(const Config& config, std::uint64_t seed, unsigned jobs = 1);
ExperimentResult run_stochastic_convergence(const Config& config, std::uint64_t seed, unsigned jobs = 1);

struct RunReport {
  std::string csv_path;
  std::string summary_path;
  std::string manifest_path;
  std::size_t cells_total = 0;
  std::size_t cells_resumed = 0;
  std::size_t cells_computed = 0;
  double wall_seconds = 0.0;
  ExperimentResult result;
};

/// Resumable run into out_dir/<id>.csv. Complete leading cells already on
/// disk are kept; computation resumes at the first missing cell. Also writes
/// <id>_summary.csv and <id>_manifest.json.
RunReport run_experiment_to_dir(const Experiment& experiment, const Config& config, std::uint64_t master_seed,
                                const std::string& out_dir, unsigned jobs = 1);

/// CSV header and row encoding shared by the runner and readers.
std::string result_header(const std::vector<std::string>& param_names);
std::string format_result_row(const ResultRow& row);

/// Least-squares line y = a + b x with coefficient of determination.
struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r2 = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

const char* library_version();

/// Stable 64-bit hash (FNV-1a) used to key per-cell seed streams.
std::uint64_t stable_hash(const std::string& s);

}  // namespace netsync
