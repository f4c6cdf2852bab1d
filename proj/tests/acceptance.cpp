// Acceptance run: one line per criterion, nonzero exit if any fails.

#include <netsync/bounds.hpp>
#include <netsync/cdi.hpp>
#include <netsync/config.hpp>
#include <netsync/fim.hpp>
#include <netsync/harness.hpp>
#include <netsync/lattice.hpp>
#include <netsync/rng.hpp>
#include <netsync/sim.hpp>
#include <netsync/topology.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oracle.hpp"
#include "support.hpp"

using namespace netsync;

namespace {

constexpr std::uint64_t kMasterSeed = 1;
constexpr std::uint64_t kCorpusSeed = 20261019;

struct Outcome {
  bool pass = false;
  std::string detail;
};

unsigned jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

Eigen::VectorXd agent_degrees(const Topology& t) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(t.num_agents()));
  for (std::size_t a = 0; a < t.num_agents(); ++a) d(Eigen::Index(a)) = double(t.agent_degree(a));
  return d;
}

bool agents_connected(const Topology& t) {
  const std::size_t na = t.num_agents();
  std::vector<char> seen(na, 0);
  std::vector<std::size_t> q{0};
  seen[0] = 1;
  for (std::size_t k = 0; k < q.size(); ++k)
    for (auto b : t.neighbors(q[k]))
      if (b < na && !seen[b]) seen[b] = 1, q.push_back(b);
  return q.size() == na;
}

/// Connected stochastic network with Bernoulli priors (p_a and N_p drawn per network).
Fixture stochastic_fixture(std::mt19937_64& rng, std::size_t min_agents, std::size_t max_agents) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> count(min_agents, max_agents);
  for (;;) {
    const std::size_t na = count(rng);
    const double side = std::sqrt(double(na));
    const double r = 1.6 + u(rng);
    Topology t = gen_stochastic(side, 1.0, r, rng());
    if (t.num_agents() < 2 || !agents_connected(t)) continue;
    const BernoulliPriors scheme{0.1 + 0.9 * u(rng), 0.5 + 4.5 * u(rng), rng()};
    PriorSpec p = assign_priors(t, scheme, LinkModel::unit());
    if (std::all_of(p.xi_p.begin(), p.xi_p.end(), [](double x) { return x == 0.0; })) p.xi_p[0] = scheme.n_p;
    return {std::move(t), std::move(p)};
  }
}

std::vector<Fixture> corpus() {
  std::mt19937_64 rng(kCorpusSeed);
  std::vector<Fixture> out;
  for (int i = 0; i < 100; ++i) out.push_back(stochastic_fixture(rng, 2, 100));
  return out;
}

Outcome criterion1(const std::vector<Fixture>& nets) {
  const LinkModel link = LinkModel::unit();
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (const auto& f : nets) {
    const Eigen::VectorXd direct = aseb_direct(build_absolute_fim(f.topology, f.priors, link));
    const Eigen::VectorXd cdi = cdi_exact(build_transition_matrix(build_absolute_fim(f.topology, f.priors, link)));
    worst = std::max(worst, oracle::max_rel_dev(aseb_via_cdi(f.topology, f.priors, link, cdi), direct));
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-10 && secs < 10.0, "max rel dev " + num(worst) + ", " + num(secs) + " s"};
}

Outcome criterion2(const std::vector<Fixture>& nets) {
  const LinkModel link = LinkModel::unit();
  double worst = 0.0;
  for (const auto& f : nets) {
    const FimMatrix rel = build_relative_fim(f.topology, link);
    const TransitionMatrix p = build_transition_matrix(rel);
    const Eigen::VectorXd d = agent_degrees(f.topology);
    const double pseudo = rseb_pseudo(rel).trace;
    const double z = rseb_via_z(p, d, link).trace;
    const double rc = rseb_via_relative_cdi(rel_cdi_exact(p, d), d, link).trace;
    worst = std::max({worst, std::abs(z - pseudo) / pseudo, std::abs(rc - pseudo) / pseudo});
  }
  // eigendecomposition oracle on the exact fixtures
  const Topology pair({{0, 0}, {1, 0}}, 2, 1.0);
  const Topology tri({{0, 0}, {1, 0}, {0.5, 0.8}}, 3, 1.0);
  double fixture_err = 0.0;
  for (const auto& [t, want] : {std::pair{pair, 0.5}, std::pair{tri, 2.0 / 3.0}}) {
    const FimMatrix rel = build_relative_fim(t, link);
    const TransitionMatrix p = build_transition_matrix(rel);
    const Eigen::VectorXd d = agent_degrees(t);
    const double eig = oracle::pinv(oracle::relative_fim(to_net(t), 1.0)).trace();
    for (double got : {eig, rseb_pseudo(rel).trace, rseb_via_z(p, d, link).trace,
                       rseb_via_relative_cdi(rel_cdi_exact(p, d), d, link).trace, rseb_grounded(rel).trace})
      fixture_err = std::max(fixture_err, std::abs(got - want));
  }
  return {worst < 1e-10 && fixture_err < 1e-12,
          "corpus max rel dev " + num(worst) + ", fixture max abs err " + num(fixture_err)};
}

Outcome criterion3() {
  std::mt19937_64 rng(kCorpusSeed + 3);
  const LinkModel link = LinkModel::unit();
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Fixture f = stochastic_fixture(rng, 10, 10);
    const NodeId k = std::uniform_int_distribution<NodeId>(0, 9)(rng);
    worst = std::max(worst, check_node_equivalence(f.topology, f.priors, link, k, 1e12).max_rel_deviation);
  }
  return {worst < 1e-4, "max rel dev " + num(worst)};
}

Outcome criterion4() {
  const LinkModel link = LinkModel::unit();
  const Topology pair({{0, 0}, {1, 0}}, 2, 1.0);
  const PriorSpec pair_priors{{1.0, 1.0}};
  const Topology grid = gen_lattice(4, 1, 1);
  const PriorSpec grid_priors = assign_priors(grid, UniformPriors{5}, link);
  const NodeId centre = 12;
  const double grid_exact =
      cdi_exact(build_transition_matrix(build_absolute_fim(grid, grid_priors, link)))(Eigen::Index(centre));
  int pair_ok = 0, grid_ok = 0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const auto a = cdi_random_walk(pair, pair_priors, link, 0, 100000, 0, 1000 + k, jobs());
    if (std::abs(a.delta(0) - 1.0 / 3.0) <= 4.0 * *a.std_error) ++pair_ok;
    const auto b = cdi_random_walk(grid, grid_priors, link, centre, 100000, 0, 1000 + k, jobs());
    if (std::abs(b.delta(0) - grid_exact) <= 4.0 * *b.std_error) ++grid_ok;
  }
  return {pair_ok >= 99 && grid_ok >= 99,
          "2-agent " + std::to_string(pair_ok) + "/100, 5x5 lattice " + std::to_string(grid_ok) + "/100"};
}

Outcome criterion5() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> dev;
  for (double r : {4.0, 6.0, 8.0, 10.0}) {
    const double n = infinite_lattice_cdi_numerical(r, 1).value;
    dev.push_back(std::abs(n - infinite_lattice_cdi_asymptotic(r, 1, AsymptoticForm::Full)) / n);
  }
  const bool decreasing = std::is_sorted(dev.rbegin(), dev.rend()) &&
                          std::adjacent_find(dev.begin(), dev.end()) == dev.end();
  const double secs = seconds_since(t0);
  std::string d = "rel dev";
  for (double v : dev) d += " " + num(v);
  return {decreasing && dev.back() < 0.1 && secs < 300.0, d + ", " + num(secs) + " s"};
}

std::vector<std::pair<double, double>> series(const ExperimentResult& res, const std::string& stat,
                                              const std::string& axis) {
  const auto col = std::find(res.param_names.begin(), res.param_names.end(), axis) - res.param_names.begin();
  std::vector<std::pair<double, double>> out;
  for (const auto& r : res.rows)
    if (r.statistic == stat) out.emplace_back(std::stod(r.params[std::size_t(col)]), r.value);
  std::sort(out.begin(), out.end());
  return out;
}

Outcome criterion6() {
  const auto res = run_dense_scaling(Config{}, "rseb", kMasterSeed, jobs());
  std::vector<double> x, y;
  for (const auto& [n, v] : series(res, "rseb", "n_agents")) x.push_back(std::log(n)), y.push_back(std::log(v));
  const double slope = oracle::fit(x, y).first;
  return {slope >= -1.15 && slope <= -0.85, "log-log slope " + num(slope)};
}

Outcome criterion7() {
  const auto pts = series(run_extended_rseb(Config{}, kMasterSeed, jobs()), "rseb", "n_agents");
  bool increasing = true;
  for (std::size_t i = 1; i < pts.size(); ++i) increasing = increasing && pts[i].second > pts[i - 1].second;
  std::vector<double> x, y;
  for (std::size_t i = pts.size() / 2; i < pts.size(); ++i) x.push_back(std::log(pts[i].first)), y.push_back(pts[i].second);
  const double r2 = oracle::fit(x, y).second;
  return {increasing && r2 > 0.9,
          std::string(increasing ? "strictly increasing" : "not increasing") + ", top-half R2 " + num(r2)};
}

Outcome criterion8() {
  Config c;
  c.set("extended_aseb", "p_a", "[0.3]");
  const auto pts = series(run_extended_aseb(c, kMasterSeed, jobs()), "mean_aseb", "n_agents");
  auto at = [&](double n) {
    return std::find_if(pts.begin(), pts.end(), [&](const auto& p) { return p.first == n; })->second;
  };
  const double change = std::abs(at(800) - at(600)) / at(600);
  return {change < 0.05, "relative change 600->800 " + num(change)};
}

Topology tightness_network() {
  for (std::uint64_t s = 1;; ++s) {
    Topology t = gen_stochastic(4, 1.25, 1.8, s);
    if (is_connected(t)) return t;
  }
}

Outcome criterion9() {
  const LinkModel link = LinkModel::unit();
  const Topology t = tightness_network();
  const PriorSpec p = assign_priors(t, UniformPriors{1}, link);
  const TightnessReport r = run_bound_tightness(t, p, link, 10000, kMasterSeed, jobs());
  double worst = 0.0;
  for (Eigen::Index a = 0; a < r.mse.size(); ++a) worst = std::max(worst, std::abs(r.mse(a) / r.aseb(a) - 1.0));
  const double rel = std::abs(r.relative_mse / r.trace_pinv - 1.0);
  return {t.num_agents() == 20 && worst < 0.03 && r.has_relative && rel < 0.03,
          "worst agent |mse/aseb-1| " + num(worst) + ", relative |mse/trace-1| " + num(rel)};
}

Outcome criterion10() {
  const LinkModel link = LinkModel::unit();
  const Topology t = tightness_network();
  const FimMatrix j = build_absolute_fim(t, assign_priors(t, UniformPriors{1}, link), link);
  const SkewExpectation e = skewed_bound_expectation(j, UniformSkew{0.9, 1.1}, 100000, kMasterSeed);
  const double want = 1.0 + 0.2 * 0.2 / 12.0;
  double worst_z = 0.0;
  bool at_least_one = true;
  for (Eigen::Index a = 0; a < e.ratio.size(); ++a) {
    worst_z = std::max(worst_z, std::abs(e.ratio(a) - want) / e.ratio_stderr(a));
    at_least_one = at_least_one && e.ratio(a) + 4.0 * e.ratio_stderr(a) >= 1.0;
  }
  return {worst_z <= 4.0 && at_least_one, "max |ratio - " + num(want) + "| / stderr " + num(worst_z)};
}

Outcome criterion11() {
  bool above = true, closer = true;
  std::string d;
  for (int r = 2; r <= 10; ++r) {
    const double inf = infinite_lattice_cdi_numerical(r, 5).value;
    const double b50 = finite_lattice_cdi(50, r, 5).interior_mean;
    const double b100 = finite_lattice_cdi(100, r, 5).interior_mean;
    above = above && b50 >= inf && b100 >= inf;
    closer = closer && b100 - inf < b50 - inf;
    d += " r" + std::to_string(r) + ":" + num(inf) + "/" + num(b50) + "/" + num(b100);
  }
  return {above && closer, std::string(above ? "finite >= infinite" : "finite below infinite") +
                               (closer ? ", B=100 closer" : ", B=100 not closer") + " (inf/B50/B100)" + d};
}

Outcome criterion12() {
  Config c;
  c.set("stochastic_convergence", "side_b", "[50]");
  c.set("stochastic_convergence", "r_max", "[4, 10]");
  const auto gap = series(run_stochastic_convergence(c, kMasterSeed, jobs()), "relative_gap", "r_max");
  const double ratio = gap.at(1).second / gap.at(0).second;
  return {ratio < 0.5, "gap r4 " + num(gap.at(0).second) + ", r10 " + num(gap.at(1).second) + ", ratio " + num(ratio)};
}

}  // namespace

int main() {
  const std::vector<Fixture> nets = corpus();
  const std::vector<std::function<Outcome()>> criteria = {
      [&] { return criterion1(nets); }, [&] { return criterion2(nets); }, criterion3, criterion4,
      criterion5, criterion6, criterion7, criterion8, criterion9, criterion10, criterion11, criterion12};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %zu: %s (%s) [%.1f s]\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
