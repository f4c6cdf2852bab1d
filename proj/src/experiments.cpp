#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>

#include "netsync/bounds.hpp"
#include "netsync/cdi.hpp"
#include "netsync/csv.hpp"
#include "netsync/errors.hpp"
#include "netsync/fim.hpp"
#include "netsync/harness.hpp"
#include "netsync/lattice.hpp"
#include "netsync/parallel.hpp"
#include "netsync/rng.hpp"
#include "netsync/topology.hpp"

namespace netsync {

namespace {

constexpr std::size_t kMaxRedraws = 1000;

LinkModel link_from(const Config& c) {
  LinkModel l;
  l.n_rounds = static_cast<int>(c.get_int("link", "n_rounds", 1));
  l.sigma2 = c.get_double("link", "sigma2", 2.0);
  l.validate();
  return l;
}

std::string fmt(double v) { return format_double(v); }

std::vector<double> positive_list(const Config& c, const std::string& sec, const std::string& key,
                                  const std::vector<double>& fallback) {
  auto v = c.get_doubles(sec, key, fallback);
  if (v.empty()) throw InvalidArgument(sec + "." + key + ": grid must not be empty");
  for (double x : v)
    if (!(x > 0.0)) throw InvalidArgument(sec + "." + key + ": values must be positive");
  return v;
}

std::vector<std::size_t> count_list(const Config& c, const std::string& sec, const std::string& key,
                                    const std::vector<std::int64_t>& fallback) {
  std::vector<std::size_t> out;
  for (auto v : c.get_ints(sec, key, fallback)) {
    if (v <= 0) throw InvalidArgument(sec + "." + key + ": values must be positive");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw InvalidArgument(sec + "." + key + ": grid must not be empty");
  return out;
}

std::size_t realizations_from(const Config& c, const std::string& sec, std::int64_t fallback) {
  const auto r = c.get_int(sec, "realizations", fallback);
  if (r < 1) throw InvalidArgument(sec + ".realizations must be >= 1");
  return static_cast<std::size_t>(r);
}

std::uint64_t cell_seed(std::uint64_t master, const std::string& id, const Cell& cell) {
  std::string key = id;
  for (const auto& p : cell.params) key += "|" + p;
  return derive_seed(master, stable_hash(key), 0);
}

// Mean and standard error of f over independent realizations; f returns
// nullopt to request a fresh draw (counted as a resample).
template <class F>
EnsembleStat ensemble(std::size_t reps, std::uint64_t seed, unsigned jobs, F&& f) {
  std::vector<double> val(reps);
  std::vector<std::size_t> redraw(reps, 0);
  parallel_for(reps, jobs, [&](std::size_t r) {
    for (std::size_t a = 0;; ++a) {
      if (a == kMaxRedraws)
        throw Diverged("no valid realization after " + std::to_string(kMaxRedraws) + " draws");
      if (auto v = f(derive_seed(seed, r, a))) {
        val[r] = *v;
        return;
      }
      ++redraw[r];
    }
  });
  EnsembleStat s;
  s.n_samples = reps;
  for (std::size_t r = 0; r < reps; ++r) {
    s.mean += val[r];
    s.resamples += redraw[r];
  }
  s.mean /= static_cast<double>(reps);
  if (reps > 1) {
    double ss = 0.0;
    for (double v : val) ss += (v - s.mean) * (v - s.mean);
    s.std_error = std::sqrt(ss / static_cast<double>(reps - 1) / static_cast<double>(reps));
  }
  return s;
}

ResultRow make_row(std::size_t cell, const Cell& c, const std::string& stat, const EnsembleStat& s) {
  return ResultRow{cell, c.params, stat, s.mean, s.std_error, s.n_samples, s.resamples};
}

ResultRow make_row(std::size_t cell, const Cell& c, const std::string& stat, double value, std::size_t n = 1) {
  return ResultRow{cell, c.params, stat, value, 0.0, n, 0};
}

std::string flag(bool b) { return b ? "true" : "false"; }

// Rows of one statistic grouped by every parameter except `axis`, each group
// ordered along the axis (numerically).
std::map<std::vector<std::string>, std::vector<std::pair<double, const ResultRow*>>> series(
    const std::vector<ResultRow>& rows, const std::string& statistic, std::size_t axis) {
  std::map<std::vector<std::string>, std::vector<std::pair<double, const ResultRow*>>> out;
  for (const auto& r : rows) {
    if (r.statistic != statistic) continue;
    auto key = r.params;
    key.erase(key.begin() + static_cast<std::ptrdiff_t>(axis));
    out[key].emplace_back(std::stod(r.params[axis]), &r);
  }
  for (auto& [k, v] : out) std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

// ---------------------------------------------------------------------------

class ExtendedRseb : public Experiment {
 public:
  ExtendedRseb(const Config& c, std::uint64_t seed)
      : seed_(seed), link_(link_from(c)),
        intensity_(c.get_double(kId, "intensity", 0.01)),
        r_max_(positive_list(c, kId, "r_max", {20.0})),
        n_agents_(count_list(c, kId, "n_agents", {200, 300, 400, 500, 600, 700, 800})),
        reps_(realizations_from(c, kId, 200)) {
    if (!(intensity_ > 0.0)) throw InvalidArgument("extended_rseb.intensity must be positive");
  }
  static constexpr const char* kId = "extended_rseb";
  std::string id() const override { return kId; }
  std::vector<std::string> param_names() const override { return {"r_max", "n_agents"}; }
  std::vector<Cell> cells() const override {
    std::vector<Cell> out;
    for (double r : r_max_)
      for (auto n : n_agents_) out.push_back({{fmt(r), std::to_string(n)}, 1});
    return out;
  }
  std::vector<ResultRow> run_cell(std::size_t index, const Cell& cell, unsigned jobs) const override {
    const double r = std::stod(cell.params[0]);
    const std::size_t n = std::stoull(cell.params[1]);
    const auto fam = ScalingFamily::extended(intensity_);
    const auto s = ensemble(reps_, cell_seed(seed_, kId, cell), jobs, [&](std::uint64_t sd) -> std::optional<double> {
      const Topology t = gen_scaling_family(fam, n, r, sd);
      if (!is_connected(t)) return std::nullopt;
      return rseb_grounded(build_relative_fim(t, link_)).rseb;
    });
    return {make_row(index, cell, "rseb", s)};
  }
  SummaryTable summarize(const std::vector<ResultRow>& rows) const override {
    SummaryTable t;
    t.columns = {"r_max", "grid_points", "fit_points", "slope_vs_ln_n", "intercept", "r2", "strictly_increasing", "fit_status"};
    for (const auto& [key, pts] : series(rows, "rseb", 1)) {
      bool inc = true;
      for (std::size_t i = 1; i < pts.size(); ++i) inc = inc && pts[i].second->value > pts[i - 1].second->value;
      std::vector<std::string> row = {key[0], std::to_string(pts.size())};
      if (pts.size() < 4) {
        row.insert(row.end(), {"0", "", "", "", flag(inc), "skipped: fewer than 4 grid points"});
      } else {
        const std::size_t first = pts.size() / 2;
        std::vector<double> x, y;
        for (std::size_t i = first; i < pts.size(); ++i) {
          x.push_back(std::log(pts[i].first));
          y.push_back(pts[i].second->value);
        }
        const LineFit f = fit_line(x, y);
        row.insert(row.end(), {std::to_string(x.size()), fmt(f.slope), fmt(f.intercept), fmt(f.r2), flag(inc), "ok"});
      }
      t.rows.push_back(std::move(row));
    }
    return t;
  }

 private:
  std::uint64_t seed_;
  LinkModel link_;
  double intensity_;
  std::vector<double> r_max_;
  std::vector<std::size_t> n_agents_;
  std::size_t reps_;
};

std::optional<double> mean_aseb_bernoulli(const Topology& t, double p_a, double n_p, const LinkModel& link,
                                          std::uint64_t seed) {
  if (!is_connected(t)) return std::nullopt;
  const PriorSpec pr = assign_priors(t, BernoulliPriors{p_a, n_p, mix64(seed ^ 0x5eedULL)}, link);
  try {
    return aseb_direct(build_absolute_fim(t, pr, link)).mean();
  } catch (const NotSynchronizable&) {
    return std::nullopt;  // no agent drew a prior
  }
}

class ExtendedAseb : public Experiment {
 public:
  ExtendedAseb(const Config& c, std::uint64_t seed)
      : seed_(seed), link_(link_from(c)),
        intensity_(c.get_double(kId, "intensity", 0.01)),
        r_max_(positive_list(c, kId, "r_max", {20.0})),
        n_agents_(count_list(c, kId, "n_agents", {200, 400, 600, 800})),
        p_a_(c.get_doubles(kId, "p_a", {0.3, 1.0})),
        n_p_(c.get_double(kId, "n_p", 5.0)),
        reps_(realizations_from(c, kId, 200)) {
    if (!(intensity_ > 0.0)) throw InvalidArgument("extended_aseb.intensity must be positive");
    if (p_a_.empty()) throw InvalidArgument("extended_aseb.p_a: grid must not be empty");
    for (double p : p_a_)
      if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("extended_aseb.p_a values must lie in [0, 1]");
  }
  static constexpr const char* kId = "extended_aseb";
  std::string id() const override { return kId; }
  std::vector<std::string> param_names() const override { return {"p_a", "r_max", "n_agents"}; }
  std::vector<Cell> cells() const override {
    std::vector<Cell> out;
    for (double p : p_a_)
      for (double r : r_max_)
        for (auto n : n_agents_) out.push_back({{fmt(p), fmt(r), std::to_string(n)}, 1});
    return out;
  }
  std::vector<ResultRow> run_cell(std::size_t index, const Cell& cell, unsigned jobs) const override {
    const double p = std::stod(cell.params[0]);
    const double r = std::stod(cell.params[1]);
    const std::size_t n = std::stoull(cell.params[2]);
    if (!(p > 0.0) || !(n_p_ > 0.0))
      throw NotSynchronizable("extended_aseb: p_a = " + cell.params[0] + ", n_p = " + fmt(n_p_) +
                                  " leaves every agent without prior information and there are no reference nodes",
                              {});
    const auto fam = ScalingFamily::extended(intensity_);
    const auto s = ensemble(reps_, cell_seed(seed_, kId, cell), jobs, [&](std::uint64_t sd) {
      return mean_aseb_bernoulli(gen_scaling_family(fam, n, r, sd), p, n_p_, link_, sd);
    });
    return {make_row(index, cell, "mean_aseb", s)};
  }
  SummaryTable summarize(const std::vector<ResultRow>& rows) const override {
    SummaryTable t;
    t.columns = {"p_a", "r_max", "n_prev", "n_last", "plateau_rel_change", "nonincreasing"};
    for (const auto& [key, pts] : series(rows, "mean_aseb", 2)) {
      bool dec = true;
      for (std::size_t i = 1; i < pts.size(); ++i) dec = dec && pts[i].second->value <= pts[i - 1].second->value;
      if (pts.size() < 2) {
        t.rows.push_back({key[0], key[1], "", fmt(pts.back().first), "", flag(dec)});
        continue;
      }
      const double prev = pts[pts.size() - 2].second->value, last = pts.back().second->value;
      t.rows.push_back({key[0], key[1], fmt(pts[pts.size() - 2].first), fmt(pts.back().first),
                        fmt(std::abs(last - prev) / prev), flag(dec)});
    }
    return t;
  }

 private:
  std::uint64_t seed_;
  LinkModel link_;
  double intensity_;
  std::vector<double> r_max_;
  std::vector<std::size_t> n_agents_;
  std::vector<double> p_a_;
  double n_p_;
  std::size_t reps_;
};

class DenseScaling : public Experiment {
 public:
  DenseScaling(const Config& c, std::uint64_t seed, std::string which)
      : seed_(seed), link_(link_from(c)), which_(std::move(which)),
        area_(c.get_double(kId, "area", 10000.0)),
        r_max_(positive_list(c, kId, "r_max", {20.0})),
        n_agents_(count_list(c, kId, "n_agents", {200, 400, 600, 800})),
        p_a_(c.get_doubles(kId, "p_a", {1.0})),
        n_p_(c.get_double(kId, "n_p", 5.0)),
        reps_(realizations_from(c, kId, 200)) {
    if (which_ != "rseb" && which_ != "aseb") throw InvalidArgument("dense_scaling.which must be 'rseb' or 'aseb'");
    if (!(area_ > 0.0)) throw InvalidArgument("dense_scaling.area must be positive");
    if (which_ == "rseb") p_a_ = {};
  }
  static constexpr const char* kId = "dense_scaling";
  std::string id() const override { return kId; }
  std::vector<std::string> param_names() const override {
    if (which_ == "rseb") return {"r_max", "n_agents"};
    return {"p_a", "r_max", "n_agents"};
  }
  std::vector<Cell> cells() const override {
    std::vector<Cell> out;
    if (which_ == "rseb") {
      for (double r : r_max_)
        for (auto n : n_agents_) out.push_back({{fmt(r), std::to_string(n)}, 1});
    } else {
      for (double p : p_a_)
        for (double r : r_max_)
          for (auto n : n_agents_) out.push_back({{fmt(p), fmt(r), std::to_string(n)}, 1});
    }
    return out;
  }
  std::vector<ResultRow> run_cell(std::size_t index, const Cell& cell, unsigned jobs) const override {
    const auto fam = ScalingFamily::dense(area_);
    const std::uint64_t seed = cell_seed(seed_, kId + std::string(":") + which_, cell);
    if (which_ == "rseb") {
      const double r = std::stod(cell.params[0]);
      const std::size_t n = std::stoull(cell.params[1]);
      const auto s = ensemble(reps_, seed, jobs, [&](std::uint64_t sd) -> std::optional<double> {
        const Topology t = gen_scaling_family(fam, n, r, sd);
        if (!is_connected(t)) return std::nullopt;
        return rseb_grounded(build_relative_fim(t, link_)).rseb;
      });
      return {make_row(index, cell, "rseb", s)};
    }
    const double p = std::stod(cell.params[0]);
    const double r = std::stod(cell.params[1]);
    const std::size_t n = std::stoull(cell.params[2]);
    if (!(p > 0.0) || !(n_p_ > 0.0))
      throw NotSynchronizable("dense_scaling: p_a = " + cell.params[0] + " leaves every agent without prior information", {});
    const auto s = ensemble(reps_, seed, jobs, [&](std::uint64_t sd) {
      return mean_aseb_bernoulli(gen_scaling_family(fam, n, r, sd), p, n_p_, link_, sd);
    });
    return {make_row(index, cell, "mean_aseb", s)};
  }
  SummaryTable summarize(const std::vector<ResultRow>& rows) const override {
    SummaryTable t;
    const std::string stat = which_ == "rseb" ? "rseb" : "mean_aseb";
    const std::size_t axis = which_ == "rseb" ? 1 : 2;
    t.columns = which_ == "rseb" ? std::vector<std::string>{"r_max"} : std::vector<std::string>{"p_a", "r_max"};
    t.columns.insert(t.columns.end(), {"statistic", "grid_points", "loglog_slope", "r2"});
    for (const auto& [key, pts] : series(rows, stat, axis)) {
      std::vector<std::string> row = key;
      row.push_back(stat);
      row.push_back(std::to_string(pts.size()));
      if (pts.size() >= 2) {
        std::vector<double> x, y;
        for (const auto& [n, r] : pts) {
          x.push_back(std::log(n));
          y.push_back(std::log(r->value));
        }
        const LineFit f = fit_line(x, y);
        row.insert(row.end(), {fmt(f.slope), fmt(f.r2)});
      } else {
        row.insert(row.end(), {"", ""});
      }
      t.rows.push_back(std::move(row));
    }
    return t;
  }

 private:
  std::uint64_t seed_;
  LinkModel link_;
  std::string which_;
  double area_;
  std::vector<double> r_max_;
  std::vector<std::size_t> n_agents_;
  std::vector<double> p_a_;
  double n_p_;
  std::size_t reps_;
};

class LatticeCdiStudy : public Experiment {
 public:
  LatticeCdiStudy(const Config& c, std::uint64_t)
      : r_max_(positive_list(c, kId, "r_max", {2, 3, 4, 5, 6, 7, 8, 9, 10})),
        n_p_(positive_list(c, kId, "n_p", {1e-6, 1e-2, 1.0})),
        sides_(c.get_doubles(kId, "side_b", {50.0, 100.0})),
        finite_n_p_(c.get_double(kId, "finite_n_p", 5.0)),
        tol_(c.get_double(kId, "rel_err_tol", 1e-3)),
        max_steps_(static_cast<std::size_t>(c.get_int(kId, "max_steps", 5000))) {
    if (!(finite_n_p_ > 0.0)) throw InvalidArgument("lattice_cdi_study.finite_n_p must be positive");
    for (double b : sides_)
      if (!(b > 0.0)) throw InvalidArgument("lattice_cdi_study.side_b values must be positive");
    all_n_p_ = n_p_;
    if (!sides_.empty() && std::find(all_n_p_.begin(), all_n_p_.end(), finite_n_p_) == all_n_p_.end())
      all_n_p_.push_back(finite_n_p_);
  }
  static constexpr const char* kId = "lattice_cdi_study";
  std::string id() const override { return kId; }
  std::vector<std::string> param_names() const override { return {"kind", "side_b", "r_max", "n_p"}; }
  std::vector<Cell> cells() const override {
    std::vector<Cell> out;
    for (double r : r_max_)
      for (double np : all_n_p_) out.push_back({{"infinite", "inf", fmt(r), fmt(np)}, 5});
    for (double b : sides_)
      for (double r : r_max_) out.push_back({{"finite", fmt(b), fmt(r), fmt(finite_n_p_)}, 2});
    return out;
  }
  std::vector<ResultRow> run_cell(std::size_t index, const Cell& cell, unsigned) const override {
    const double r = std::stod(cell.params[2]);
    const double np = std::stod(cell.params[3]);
    if (cell.params[0] == "infinite") {
      const LatticeCdiResult num = infinite_lattice_cdi_numerical(r, np, tol_, max_steps_);
      return {make_row(index, cell, "numerical", num.value, num.truncation_n),
              make_row(index, cell, "asymptotic_full", infinite_lattice_cdi_asymptotic(r, np, AsymptoticForm::Full)),
              make_row(index, cell, "asymptotic_simplified",
                       infinite_lattice_cdi_asymptotic(r, np, AsymptoticForm::Simplified)),
              make_row(index, cell, "neighbor_degree", static_cast<double>(num.degree)),
              make_row(index, cell, "gauss_circle_count", static_cast<double>(gauss_circle_degree(r)))};
    }
    const FiniteLatticeCdi f = finite_lattice_cdi(std::stod(cell.params[1]), r, np);
    return {make_row(index, cell, "finite_interior", f.interior_mean, f.interior_count),
            make_row(index, cell, "finite_overall", f.overall_mean, f.n_agents)};
  }
  SummaryTable summarize(const std::vector<ResultRow>& rows) const override {
    std::map<std::pair<std::string, std::string>, std::map<std::string, double>> inf;
    std::map<std::tuple<std::string, std::string, std::string>, double> fin;
    for (const auto& r : rows) {
      if (r.params[0] == "infinite") inf[{r.params[2], r.params[3]}][r.statistic] = r.value;
      else if (r.statistic == "finite_interior") fin[{r.params[1], r.params[2], r.params[3]}] = r.value;
    }
    SummaryTable t;
    t.columns = {"r_max", "n_p", "numerical", "asymptotic_full", "asymptotic_simplified", "rel_discrepancy_full",
                 "rel_discrepancy_simplified"};
    for (double b : sides_) {
      t.columns.push_back("finite_interior_B" + fmt(b));
      t.columns.push_back("gap_B" + fmt(b));
    }
    for (double r : r_max_)
      for (double np : all_n_p_) {
        auto it = inf.find({fmt(r), fmt(np)});
        if (it == inf.end()) continue;
        auto& m = it->second;
        const double num = m["numerical"];
        std::vector<std::string> row = {fmt(r),
                                        fmt(np),
                                        fmt(num),
                                        fmt(m["asymptotic_full"]),
                                        fmt(m["asymptotic_simplified"]),
                                        fmt(std::abs(num - m["asymptotic_full"]) / num),
                                        fmt(std::abs(num - m["asymptotic_simplified"]) / num)};
        for (double b : sides_) {
          auto f = fin.find({fmt(b), fmt(r), fmt(np)});
          if (f == fin.end()) {
            row.insert(row.end(), {"", ""});
          } else {
            row.insert(row.end(), {fmt(f->second), fmt(f->second - num)});
          }
        }
        t.rows.push_back(std::move(row));
      }
    return t;
  }

 private:
  std::vector<double> r_max_, n_p_, sides_, all_n_p_;
  double finite_n_p_, tol_;
  std::size_t max_steps_;
};

class StochasticConvergence : public Experiment {
 public:
  StochasticConvergence(const Config& c, std::uint64_t seed)
      : seed_(seed),
        sides_(positive_list(c, kId, "side_b", {50.0, 100.0})),
        r_max_(positive_list(c, kId, "r_max", {2, 3, 4, 5, 6, 7, 8, 9, 10})),
        intensity_(c.get_double(kId, "intensity", 1.0)),
        n_p_(c.get_double(kId, "n_p", 5.0)),
        snapshots_(static_cast<std::size_t>(c.get_int(kId, "snapshots", 100))) {
    if (snapshots_ < 1) throw InvalidArgument("stochastic_convergence.snapshots must be >= 1");
    if (!(intensity_ > 0.0) || !(n_p_ > 0.0)) throw InvalidArgument("stochastic_convergence: intensity and n_p must be positive");
  }
  static constexpr const char* kId = "stochastic_convergence";
  std::string id() const override { return kId; }
  std::vector<std::string> param_names() const override { return {"side_b", "r_max"}; }
  std::vector<Cell> cells() const override {
    std::vector<Cell> out;
    for (double b : sides_)
      for (double r : r_max_) out.push_back({{fmt(b), fmt(r)}, 3});
    return out;
  }
  std::vector<ResultRow> run_cell(std::size_t index, const Cell& cell, unsigned jobs) const override {
    const double b = std::stod(cell.params[0]);
    const double r = std::stod(cell.params[1]);
    const EnsembleStat s = expected_cdi_stochastic(b, intensity_, r, n_p_, snapshots_, cell_seed(seed_, kId, cell), jobs);
    const double lat = matched_lattice_cdi(b, intensity_, r, n_p_);
    ResultRow gap{index, cell.params, "relative_gap", std::abs(s.mean - lat) / lat, s.std_error / lat, s.n_samples,
                  s.resamples};
    return {make_row(index, cell, "stochastic_cdi", s), make_row(index, cell, "matched_lattice_cdi", lat),
            std::move(gap)};
  }
  SummaryTable summarize(const std::vector<ResultRow>& rows) const override {
    SummaryTable t;
    t.columns = {"side_b", "r_max", "stochastic_cdi", "stderr", "matched_lattice_cdi", "relative_gap",
                 "gap_ratio_to_first"};
    auto stoch = series(rows, "stochastic_cdi", 1);
    auto latt = series(rows, "matched_lattice_cdi", 1);
    for (const auto& [key, gaps] : series(rows, "relative_gap", 1)) {
      const double first = gaps.front().second->value;
      for (std::size_t i = 0; i < gaps.size(); ++i) {
        const ResultRow* s = stoch[key][i].second;
        const ResultRow* l = latt[key][i].second;
        t.rows.push_back({key[0], fmt(gaps[i].first), fmt(s->value), fmt(s->std_error), fmt(l->value),
                          fmt(gaps[i].second->value), first > 0.0 ? fmt(gaps[i].second->value / first) : ""});
      }
    }
    return t;
  }

 private:
  std::uint64_t seed_;
  std::vector<double> sides_, r_max_;
  double intensity_, n_p_;
  std::size_t snapshots_;
};

}  // namespace

std::vector<std::string> experiment_ids() {
  return {"extended_rseb", "extended_aseb", "dense_scaling", "lattice_cdi_study", "stochastic_convergence"};
}

std::unique_ptr<Experiment> make_experiment(const std::string& id, const Config& config, std::uint64_t master_seed) {
  if (id == "extended_rseb") return std::make_unique<ExtendedRseb>(config, master_seed);
  if (id == "extended_aseb") return std::make_unique<ExtendedAseb>(config, master_seed);
  if (id == "dense_scaling")
    return std::make_unique<DenseScaling>(config, master_seed, config.get_string("dense_scaling", "which", "rseb"));
  if (id == "lattice_cdi_study") return std::make_unique<LatticeCdiStudy>(config, master_seed);
  if (id == "stochastic_convergence") return std::make_unique<StochasticConvergence>(config, master_seed);
  throw InvalidArgument("unknown experiment '" + id + "'");
}

ExperimentResult run_extended_rseb(const Config& config, std::uint64_t seed, unsigned jobs) {
  return run_experiment(ExtendedRseb(config, seed), jobs);
}

ExperimentResult run_extended_aseb(const Config& config, std::uint64_t seed, unsigned jobs) {
  return run_experiment(ExtendedAseb(config, seed), jobs);
}

ExperimentResult run_dense_scaling(const Config& config, const std::string& which, std::uint64_t seed, unsigned jobs) {
  return run_experiment(DenseScaling(config, seed, which), jobs);
}

ExperimentResult run_lattice_cdi_study(const Config& config, std::uint64_t seed, unsigned jobs) {
  return run_experiment(LatticeCdiStudy(config, seed), jobs);
}

ExperimentResult run_stochastic_convergence(const Config& config, std::uint64_t seed, unsigned jobs) {
  return run_experiment(StochasticConvergence(config, seed), jobs);
}

}  // namespace netsync
