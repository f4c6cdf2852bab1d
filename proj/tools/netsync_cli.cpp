// netsync command-line front end. Talks to the library only through netsync.h.
#include <netsync/netsync.h>

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

struct CliError : std::runtime_error {
  CliError(ns_status s, const std::string& what) : std::runtime_error(what), status(s) {}
  ns_status status;
};

void check(ns_status s, const char* call) {
  if (s != NS_OK)
    throw CliError(s, std::string(call) + ": " + ns_status_string(s) + ": " + ns_last_error_message());
}

struct TopologyDeleter {
  void operator()(ns_topology* p) const { ns_topology_free(p); }
};
struct PriorsDeleter {
  void operator()(ns_priors* p) const { ns_priors_free(p); }
};
struct FimDeleter {
  void operator()(ns_fim* p) const { ns_fim_free(p); }
};
struct ConfigDeleter {
  void operator()(ns_config* p) const { ns_config_free(p); }
};
using TopologyPtr = std::unique_ptr<ns_topology, TopologyDeleter>;
using PriorsPtr = std::unique_ptr<ns_priors, PriorsDeleter>;
using FimPtr = std::unique_ptr<ns_fim, FimDeleter>;
using ConfigPtr = std::unique_ptr<ns_config, ConfigDeleter>;

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 1;
  unsigned jobs = 0;
  std::string topology_path;
};

// Thin typed view over the config handle.
class Settings {
 public:
  explicit Settings(const std::string& path) {
    ns_config* c = nullptr;
    if (path.empty())
      check(ns_config_parse("", &c), "ns_config_parse");
    else
      check(ns_config_load(path.c_str(), &c), "ns_config_load");
    cfg_.reset(c);
  }

  const ns_config* get() const { return cfg_.get(); }
  bool has(const char* s, const char* k) const { return ns_config_has(cfg_.get(), s, k) != 0; }

  double num(const char* s, const char* k, double fallback) const {
    double v = 0;
    check(ns_config_get_double(cfg_.get(), s, k, fallback, &v), "ns_config_get_double");
    return v;
  }
  std::int64_t integer(const char* s, const char* k, std::int64_t fallback) const {
    std::int64_t v = 0;
    check(ns_config_get_int(cfg_.get(), s, k, fallback, &v), "ns_config_get_int");
    return v;
  }
  std::string str(const char* s, const char* k, const char* fallback) const {
    std::size_t needed = 0;
    check(ns_config_get_string(cfg_.get(), s, k, fallback, nullptr, 0, &needed), "ns_config_get_string");
    std::string out(needed, '\0');
    check(ns_config_get_string(cfg_.get(), s, k, fallback, out.data(), needed, &needed), "ns_config_get_string");
    out.resize(needed - 1);
    return out;
  }
  std::vector<double> nums(const char* s, const char* k, std::vector<double> fallback) const {
    if (!has(s, k)) return fallback;
    std::size_t count = 0;
    check(ns_config_get_doubles(cfg_.get(), s, k, nullptr, 0, &count), "ns_config_get_doubles");
    std::vector<double> v(count);
    check(ns_config_get_doubles(cfg_.get(), s, k, v.data(), v.size(), &count), "ns_config_get_doubles");
    return v;
  }
  ns_link_model link() const {
    return ns_link_model{static_cast<int>(integer("link", "n_rounds", 1)), num("link", "sigma2", 2.0)};
  }

 private:
  ConfigPtr cfg_;
};

std::string fmt(double v) {
  char buf[64];
  for (int prec : {15, 16, 17}) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::stod(buf) == v) break;
  }
  return buf;
}

std::filesystem::path out_file(const Options& o, const std::string& name) {
  std::filesystem::create_directories(o.out_dir);
  return std::filesystem::path(o.out_dir) / name;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw CliError(NS_ERR_IO, "cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw CliError(NS_ERR_IO, "write failed: " + path.string());
  std::cout << path.string() << "\n";
}

TopologyPtr generate_topology(const Settings& s, std::uint64_t seed) {
  const std::string gen = s.str("topology", "generator", "lattice");
  const double r_max = s.num("topology", "r_max", 2.0);
  const auto topo_seed = static_cast<std::uint64_t>(s.integer("topology", "seed", static_cast<std::int64_t>(seed)));
  ns_topology* t = nullptr;
  if (gen == "lattice") {
    check(ns_topology_lattice(s.num("topology", "side_b", 10.0), s.num("topology", "spacing", 1.0), r_max, &t),
          "ns_topology_lattice");
  } else if (gen == "matched_lattice") {
    check(ns_topology_matched_lattice(s.num("topology", "side_b", 10.0), s.num("topology", "intensity", 1.0), r_max,
                                      &t),
          "ns_topology_matched_lattice");
  } else if (gen == "stochastic") {
    check(ns_topology_stochastic(s.num("topology", "side_b", 10.0), s.num("topology", "intensity", 1.0), r_max,
                                 topo_seed, &t),
          "ns_topology_stochastic");
  } else if (gen == "scaling") {
    const std::string mode = s.str("topology", "mode", "extended");
    const double base = mode == "dense" ? s.num("topology", "area", 1e4) : s.num("topology", "intensity", 0.01);
    check(ns_topology_scaling(mode.c_str(), static_cast<std::size_t>(s.integer("topology", "n_agents", 200)), base,
                              r_max, topo_seed, &t),
          "ns_topology_scaling");
  } else {
    throw CliError(NS_ERR_INVALID_ARGUMENT, "unknown topology generator '" + gen + "'");
  }
  return TopologyPtr(t);
}

TopologyPtr obtain_topology(const Options& o, const Settings& s) {
  if (o.topology_path.empty()) return generate_topology(s, o.seed);
  ns_topology* t = nullptr;
  check(ns_topology_load(o.topology_path.c_str(), &t), "ns_topology_load");
  return TopologyPtr(t);
}

PriorsPtr make_priors(const Settings& s, const ns_topology* t, std::uint64_t seed) {
  const std::string scheme = s.str("priors", "scheme", "uniform");
  const double n_p = s.num("priors", "n_p", 1.0);
  const ns_link_model link = s.link();
  ns_priors* p = nullptr;
  if (scheme == "uniform") {
    check(ns_priors_uniform(t, n_p, link, &p), "ns_priors_uniform");
  } else if (scheme == "none") {
    check(ns_priors_uniform(t, 0.0, link, &p), "ns_priors_uniform");
  } else if (scheme == "bernoulli") {
    auto pseed = static_cast<std::uint64_t>(s.integer("priors", "seed", static_cast<std::int64_t>(seed)));
    check(ns_priors_bernoulli(t, s.num("priors", "p_a", 1.0), n_p, pseed, link, &p), "ns_priors_bernoulli");
  } else if (scheme == "region") {
    auto rect = s.nums("priors", "rect", {});
    if (rect.size() != 4) throw CliError(NS_ERR_INVALID_ARGUMENT, "priors.rect needs [x0, y0, x1, y1]");
    check(ns_priors_region(t, rect[0], rect[1], rect[2], rect[3], n_p, link, &p), "ns_priors_region");
  } else {
    throw CliError(NS_ERR_INVALID_ARGUMENT, "unknown prior scheme '" + scheme + "'");
  }
  return PriorsPtr(p);
}

int cmd_generate(const Options& o) {
  Settings s(o.config_path);
  auto t = generate_topology(s, o.seed);
  auto path = out_file(o, "topology.csv");
  check(ns_topology_save(t.get(), path.string().c_str()), "ns_topology_save");
  std::cout << path.string() << "\n";
  std::cerr << ns_topology_num_agents(t.get()) << " agents, " << ns_topology_num_nodes(t.get()) << " nodes, "
            << ns_topology_num_edges(t.get()) << " links\n";
  return 0;
}

int cmd_fim(const Options& o, const std::string& variant, const std::string& format) {
  Settings s(o.config_path);
  auto t = obtain_topology(o, s);
  ns_fim_variant v = NS_FIM_ABSOLUTE;
  if (variant == "relative")
    v = NS_FIM_RELATIVE;
  else if (variant == "extended")
    v = NS_FIM_EXTENDED;
  else if (variant != "absolute")
    throw CliError(NS_ERR_INVALID_ARGUMENT, "unknown FIM variant '" + variant + "'");
  PriorsPtr p;
  if (v != NS_FIM_RELATIVE) p = make_priors(s, t.get(), o.seed);
  ns_fim* f = nullptr;
  check(ns_fim_build(t.get(), p.get(), s.link(), v, s.num("fim", "xi_inf", 0.0), &f), "ns_fim_build");
  FimPtr fim(f);
  auto path = out_file(o, "fim_" + variant + ".csv");
  check(ns_fim_save(fim.get(), path.string().c_str(), format.c_str()), "ns_fim_save");
  std::cout << path.string() << "\n";
  return 0;
}

int cmd_bounds(const Options& o) {
  Settings s(o.config_path);
  auto t = obtain_topology(o, s);
  auto p = make_priors(s, t.get(), o.seed);
  const std::size_t n = ns_topology_num_agents(t.get());
  std::vector<double> aseb(n);
  ns_bounds_summary sum{};
  check(ns_bounds_compute(t.get(), p.get(), s.link(), aseb.data(), n, &sum), "ns_bounds_compute");

  std::ostringstream rows;
  rows << "node_id,aseb\n";
  for (std::size_t i = 0; i < n; ++i) rows << i << "," << fmt(aseb[i]) << "\n";
  write_text(out_file(o, "bounds.csv"), rows.str());

  std::ostringstream summary;
  summary << "rseb,rseb_trace,methods,max_method_deviation,aseb_max_deviation,condition_number\n";
  summary << (sum.has_rseb ? fmt(sum.rseb) : "nan") << "," << (sum.has_rseb ? fmt(sum.rseb_trace) : "nan") << ","
          << sum.methods << "," << fmt(std::max(sum.aseb_max_deviation, sum.rseb_max_deviation)) << ","
          << fmt(sum.aseb_max_deviation) << "," << fmt(sum.condition_number) << "\n";
  write_text(out_file(o, "bounds_summary.csv"), summary.str());
  return 0;
}

int cmd_cdi(const Options& o, std::string method) {
  Settings s(o.config_path);
  if (method.empty()) method = s.str("cdi", "method", "exact");
  auto t = obtain_topology(o, s);
  auto p = make_priors(s, t.get(), o.seed);
  const std::size_t n = ns_topology_num_agents(t.get());
  std::ostringstream rows;
  rows << "agent,value,method,stderr,tail_bound\n";
  if (method == "exact") {
    std::vector<double> d(n);
    check(ns_cdi_exact(t.get(), p.get(), s.link(), d.data(), n), "ns_cdi_exact");
    for (std::size_t i = 0; i < n; ++i) rows << i << "," << fmt(d[i]) << ",exact,0,0\n";
  } else if (method == "series") {
    std::vector<double> d(n);
    std::size_t terms = 0;
    double tail = 0;
    check(ns_cdi_series(t.get(), p.get(), s.link(), s.num("cdi", "tol", 1e-10), d.data(), n, &terms, &tail),
          "ns_cdi_series");
    for (std::size_t i = 0; i < n; ++i) rows << i << "," << fmt(d[i]) << ",series,0," << fmt(tail) << "\n";
    std::cerr << "series truncated after " << terms << " terms\n";
  } else if (method == "walk") {
    const auto walks = static_cast<std::size_t>(s.integer("cdi", "walks", 100000));
    const auto max_steps = static_cast<std::size_t>(s.integer("cdi", "max_steps", 0));
    std::vector<std::size_t> agents;
    if (s.has("cdi", "agents")) {
      for (double a : s.nums("cdi", "agents", {})) agents.push_back(static_cast<std::size_t>(a));
    } else {
      for (std::size_t i = 0; i < n; ++i) agents.push_back(i);
    }
    for (std::size_t a : agents) {
      ns_walk_result w{};
      check(ns_cdi_walk(t.get(), p.get(), s.link(), a, walks, max_steps, o.seed, o.jobs, &w), "ns_cdi_walk");
      rows << a << "," << fmt(w.value) << ",walk," << fmt(w.std_error) << "," << fmt(w.tail_bound) << "\n";
    }
  } else {
    throw CliError(NS_ERR_INVALID_ARGUMENT, "unknown CDI method '" + method + "'");
  }
  write_text(out_file(o, "cdi.csv"), rows.str());
  return 0;
}

int cmd_lattice_cdi(const Options& o) {
  Settings s(o.config_path);
  auto radii = s.nums("lattice_cdi", "r_max", {2, 3, 4, 5, 6, 7, 8, 9, 10});
  auto priors = s.nums("lattice_cdi", "n_p", {1e-6, 1e-2, 1});
  const double tol = s.num("lattice_cdi", "rel_err_tol", 1e-3);
  const auto max_steps = static_cast<std::size_t>(s.integer("lattice_cdi", "max_steps", 5000));
  std::ostringstream rows;
  rows << "r_max,n_p,value,method,stderr,tail_bound,truncation_n,degree\n";
  for (double r : radii) {
    for (double np : priors) {
      ns_lattice_cdi res{};
      check(ns_lattice_cdi_numerical(r, np, tol, max_steps, &res), "ns_lattice_cdi_numerical");
      double full = 0, simple = 0;
      check(ns_lattice_cdi_asymptotic(r, np, 0, &full), "ns_lattice_cdi_asymptotic");
      check(ns_lattice_cdi_asymptotic(r, np, 1, &simple), "ns_lattice_cdi_asymptotic");
      const std::string key = fmt(r) + "," + fmt(np) + ",";
      rows << key << fmt(res.value) << ",numerical,0," << fmt(res.tail) << "," << res.truncation_n << ","
           << res.degree << "\n";
      rows << key << fmt(full) << ",asymptotic_full,0,0,0," << res.degree << "\n";
      rows << key << fmt(simple) << ",asymptotic_simplified,0,0,0," << ns_gauss_circle_degree(r) << "\n";
    }
  }
  write_text(out_file(o, "lattice_cdi.csv"), rows.str());
  return 0;
}

int cmd_simulate(const Options& o) {
  Settings s(o.config_path);
  auto t = obtain_topology(o, s);
  auto p = make_priors(s, t.get(), o.seed);
  const std::size_t n = ns_topology_num_agents(t.get());
  const auto trials = static_cast<std::size_t>(s.integer("simulate", "trials", 1000));
  const bool per_trial = s.integer("simulate", "write_trials", 1) != 0;
  std::vector<double> mse(n), mse_se(n), aseb(n), errors(per_trial ? trials * n : 0);
  ns_tightness_summary sum{};
  check(ns_simulate(t.get(), p.get(), s.link(), trials, o.seed, o.jobs, mse.data(), mse_se.data(), aseb.data(), n,
                    per_trial ? errors.data() : nullptr, &sum),
        "ns_simulate");

  if (per_trial) {
    std::ostringstream rows;
    rows << "trial,agent,error,aseb,ratio\n";
    for (std::size_t k = 0; k < trials; ++k)
      for (std::size_t i = 0; i < n; ++i) {
        const double e = errors[k * n + i];
        rows << k << "," << i << "," << fmt(e) << "," << fmt(aseb[i]) << "," << fmt(e * e / aseb[i]) << "\n";
      }
    write_text(out_file(o, "simulate.csv"), rows.str());
  }

  std::ostringstream summary;
  summary << "agent,mse,stderr,aseb,ratio\n";
  for (std::size_t i = 0; i < n; ++i)
    summary << i << "," << fmt(mse[i]) << "," << fmt(mse_se[i]) << "," << fmt(aseb[i]) << ","
            << fmt(mse[i] / aseb[i]) << "\n";
  if (sum.has_relative) {
    summary << "relative," << fmt(sum.relative_mse) << "," << fmt(sum.relative_mse_stderr) << ","
            << fmt(sum.trace_pinv) << "," << fmt(sum.relative_mse / sum.trace_pinv) << "\n";
  }
  write_text(out_file(o, "simulate_summary.csv"), summary.str());
  return 0;
}

int cmd_experiment(const Options& o, const std::string& id) {
  Settings s(o.config_path);
  ns_run_report r{};
  check(ns_experiment_run(id.c_str(), s.get(), o.seed, o.out_dir.c_str(), o.jobs, &r), "ns_experiment_run");
  std::cerr << id << ": " << r.cells_total << " cells (" << r.cells_resumed << " resumed, " << r.cells_computed
            << " computed) in " << fmt(r.wall_seconds) << " s\n";
  std::cout << (std::filesystem::path(o.out_dir) / (id + ".csv")).string() << "\n";
  return 0;
}

int exit_code(ns_status s) { return s == NS_ERR_INVALID_ARGUMENT || s == NS_ERR_PARSE ? 2 : 1; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synchronization bounds, cooperative dilution intensity and experiments"};
  app.set_version_flag("--version", std::string(ns_version()));
  app.require_subcommand(1);

  Options o;
  auto add_common = [&o](CLI::App* sub, bool topology) {
    sub->add_option("--config", o.config_path, "Configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out_dir, "Output directory")->capture_default_str();
    sub->add_option("--seed", o.seed, "Master seed")->capture_default_str();
    sub->add_option("--jobs", o.jobs, "Worker threads (0 = all cores)")->capture_default_str();
    if (topology)
      sub->add_option("--topology", o.topology_path, "Topology CSV (default: generate from [topology])")
          ->check(CLI::ExistingFile);
  };

  auto* gen = app.add_subcommand("generate", "Generate a topology CSV from [topology]");
  add_common(gen, false);

  std::string variant = "absolute", format = "dense";
  auto* fim = app.add_subcommand("fim", "Write an information matrix");
  add_common(fim, true);
  fim->add_option("--variant", variant, "absolute, relative or extended")
      ->check(CLI::IsMember({"absolute", "relative", "extended"}))
      ->capture_default_str();
  fim->add_option("--format", format, "dense or triplet")
      ->check(CLI::IsMember({"dense", "triplet"}))
      ->capture_default_str();

  auto* bounds = app.add_subcommand("bounds", "Per-agent ASEB and network RSEB");
  add_common(bounds, true);

  std::string method;
  auto* cdi = app.add_subcommand("cdi", "Cooperative dilution intensity per agent");
  add_common(cdi, true);
  cdi->add_option("--method", method, "exact, series or walk (default: [cdi] method)")
      ->check(CLI::IsMember({"exact", "series", "walk"}));

  auto* lat = app.add_subcommand("lattice-cdi", "Infinite-lattice CDI, numerical and asymptotic");
  add_common(lat, false);

  auto* sim = app.add_subcommand("simulate", "Monte Carlo MAP error against the bounds");
  add_common(sim, true);

  std::string id;
  auto* exp = app.add_subcommand("experiment", "Run a registered experiment");
  add_common(exp, false);
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < ns_experiment_count(); ++i) ids.emplace_back(ns_experiment_id(i));
  exp->add_option("id", id, "Experiment id")->required()->check(CLI::IsMember(ids));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_generate(o);
    if (*fim) return cmd_fim(o, variant, format);
    if (*bounds) return cmd_bounds(o);
    if (*cdi) return cmd_cdi(o, method);
    if (*lat) return cmd_lattice_cdi(o);
    if (*sim) return cmd_simulate(o);
    if (*exp) return cmd_experiment(o, id);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.status);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
