#include "netsync/sim.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "netsync/bounds.hpp"
#include "netsync/errors.hpp"
#include "netsync/parallel.hpp"
#include "netsync/rng.hpp"

namespace netsync {

namespace {

using linalg::Index;

double offset_of(const Topology& t, const ClockState& c, NodeId i) { return t.is_agent(i) ? c.offsets[i] : 0.0; }

}  // namespace

ClockState draw_clock_state(const PriorSpec& priors, std::uint64_t seed, double flat_half_width) {
  Rng rng(seed);
  ClockState c;
  c.offsets.resize(priors.xi_p.size());
  c.skews.assign(priors.xi_p.size(), 1.0);
  for (std::size_t i = 0; i < priors.xi_p.size(); ++i) {
    const double xi = priors.xi_p[i];
    if (xi > 0.0) c.offsets[i] = standard_normal(rng) / std::sqrt(xi);
    else c.offsets[i] = flat_half_width * (2.0 * uniform01(rng) - 1.0);
  }
  return c;
}

double LinkObservations::mean() const {
  if (tau.empty()) return 0.0;
  return std::accumulate(tau.begin(), tau.end(), 0.0) / static_cast<double>(tau.size());
}

MeasurementSet simulate_measurements(const Topology& topology, const ClockState& clock, const LinkModel& link,
                                     std::uint64_t seed) {
  link.validate();
  if (clock.offsets.size() != topology.num_agents()) throw InvalidArgument("simulate_measurements: clock size mismatch");
  Rng rng(seed);
  const double sd = std::sqrt(2.0 * link.sigma2);
  MeasurementSet m;
  for (NodeId i = 0; i < topology.num_nodes(); ++i)
    for (NodeId j : topology.neighbors(i)) {
      if (j <= i) continue;
      if (!topology.is_agent(i) && !topology.is_agent(j)) continue;
      LinkObservations o;
      // References carry the higher ids, so a mixed link always has j as reference.
      if (!topology.is_agent(j)) {
        o.from = j;
        o.to = i;
      } else {
        o.from = i;
        o.to = j;
      }
      const double mu = 2.0 * (offset_of(topology, clock, o.to) - offset_of(topology, clock, o.from));
      o.tau.resize(static_cast<std::size_t>(link.n_rounds));
      for (auto& t : o.tau) t = mu + sd * standard_normal(rng);
      m.links.push_back(std::move(o));
    }
  return m;
}

MapEstimator::MapEstimator(const Topology& topology, const PriorSpec& priors, const LinkModel& link)
    : topology_(&topology), gamma_(link.gamma()), fim_(build_absolute_fim(topology, priors, link)) {
  try {
    solver_ = std::make_unique<linalg::SpdSolver>(fim_.data, fim_.orderings);
  } catch (const linalg::FactorizationFailure&) {
    auto nodes = unreachable_agents(fim_);
    throw NotSynchronizable("MAP estimate undefined: singular FIM; unreachable agents " + format_node_list(nodes), nodes);
  }
}

Eigen::VectorXd MapEstimator::estimate(const MeasurementSet& m) const {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Index>(topology_->num_agents()));
  for (const auto& o : m.links) {
    const double s = 0.5 * gamma_ * o.mean();
    if (topology_->is_agent(o.to)) b[static_cast<Index>(o.to)] += s;
    if (topology_->is_agent(o.from)) b[static_cast<Index>(o.from)] -= s;
  }
  return solver_->solve(b);
}

Eigen::VectorXd map_estimate(const Topology& topology, const PriorSpec& priors, const LinkModel& link,
                             const MeasurementSet& m) {
  return MapEstimator(topology, priors, link).estimate(m);
}

RelativeEstimator::RelativeEstimator(const Topology& topology, const LinkModel& link)
    : topology_(&topology), gamma_(link.gamma()) {
  const FimMatrix rel = build_relative_fim(topology, link);
  const auto n = static_cast<Index>(rel.dim());
  if (n == 0) throw InvalidArgument("relative estimator: no agents");
  if (n == 1) return;
  Index k = 0;
  rel.data.diagonal().maxCoeff(&k);
  ground_ = static_cast<std::size_t>(k);
  std::vector<Eigen::Triplet<double>> t;
  for (Index c = 0; c < rel.data.outerSize(); ++c)
    for (linalg::SparseMatrix::InnerIterator it(rel.data, c); it; ++it) {
      if (it.row() == k || it.col() == k) continue;
      t.emplace_back(it.row() - (it.row() > k), it.col() - (it.col() > k), it.value());
    }
  linalg::SparseMatrix l0(n - 1, n - 1);
  l0.setFromTriplets(t.begin(), t.end());
  try {
    solver_ = std::make_unique<linalg::SpdSolver>(l0);
  } catch (const linalg::FactorizationFailure&) {
    throw Disconnected("relative estimator: agent graph is disconnected");
  }
}

RelativeEstimate RelativeEstimator::estimate(const MeasurementSet& m, const std::vector<double>& true_offsets) const {
  const auto n = static_cast<Index>(topology_->num_agents());
  if (static_cast<Index>(true_offsets.size()) != n) throw InvalidArgument("relative estimate: truth size mismatch");
  RelativeEstimate r;
  r.estimates = Eigen::VectorXd::Zero(n);
  if (solver_) {
    const auto k = static_cast<Index>(ground_);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n - 1);
    for (const auto& o : m.links) {
      if (!topology_->is_agent(o.from) || !topology_->is_agent(o.to)) continue;
      const double s = 0.5 * gamma_ * o.mean();
      const auto to = static_cast<Index>(o.to), from = static_cast<Index>(o.from);
      if (to != k) b[to - (to > k)] += s;
      if (from != k) b[from - (from > k)] -= s;
    }
    const Eigen::VectorXd x = solver_->solve(b);
    for (Index i = 0; i < n; ++i) r.estimates[i] = i == k ? 0.0 : x[i - (i > k)];
    r.estimates.array() -= r.estimates.mean();
  }
  const Eigen::Map<const Eigen::VectorXd> truth(true_offsets.data(), n);
  r.t_star = (r.estimates - truth).mean();
  r.relative_mse = (truth.array() + r.t_star - r.estimates.array()).square().sum();
  return r;
}

RelativeEstimate relative_estimate(const Topology& topology, const LinkModel& link, const MeasurementSet& m,
                                   const std::vector<double>& true_offsets) {
  return RelativeEstimator(topology, link).estimate(m, true_offsets);
}

TightnessReport run_bound_tightness(const Topology& topology, const PriorSpec& priors, const LinkModel& link,
                                    std::size_t trials, std::uint64_t seed, unsigned jobs, bool keep_errors) {
  if (trials == 0) throw InvalidArgument("run_bound_tightness: trials must be positive");
  const auto na = static_cast<Index>(topology.num_agents());
  const MapEstimator map(topology, priors, link);
  TightnessReport rep;
  rep.trials = trials;
  rep.aseb = aseb_direct(map.fim());

  std::unique_ptr<RelativeEstimator> rel;
  const FimMatrix rel_fim = build_relative_fim(topology, link);
  if (na >= 2) {
    try {
      rel = std::make_unique<RelativeEstimator>(topology, link);
      rep.trace_pinv = rseb_grounded(rel_fim).trace;
      rep.has_relative = true;
    } catch (const Disconnected&) {
      rel.reset();
    }
  }

  Eigen::MatrixXd err(static_cast<Index>(trials), na);
  std::vector<double> rel_mse(trials, 0.0);
  parallel_for(trials, jobs, [&](std::size_t t) {
    const ClockState c = draw_clock_state(priors, derive_seed(seed, 1, t));
    const MeasurementSet m = simulate_measurements(topology, c, link, derive_seed(seed, 2, t));
    const Eigen::VectorXd est = map.estimate(m);
    for (Index i = 0; i < na; ++i) err(static_cast<Index>(t), i) = est[i] - c.offsets[static_cast<std::size_t>(i)];
    if (rel) rel_mse[t] = rel->estimate(m, c.offsets).relative_mse;
  });

  const double nt = static_cast<double>(trials);
  rep.mse = err.array().square().colwise().sum().transpose() / nt;
  rep.mean_error = err.colwise().sum().transpose() / nt;
  rep.mse_stderr = Eigen::VectorXd::Zero(na);
  rep.mean_error_stderr = Eigen::VectorXd::Zero(na);
  if (trials > 1)
    for (Index i = 0; i < na; ++i) {
      const Eigen::ArrayXd e = err.col(i).array();
      const Eigen::ArrayXd e2 = e.square();
      rep.mse_stderr[i] = std::sqrt((e2 - rep.mse[i]).square().sum() / (nt - 1.0) / nt);
      rep.mean_error_stderr[i] = std::sqrt((e - rep.mean_error[i]).square().sum() / (nt - 1.0) / nt);
    }
  if (rep.has_relative) {
    double s = 0.0;
    for (double v : rel_mse) s += v;
    rep.relative_mse = s / nt;
    if (trials > 1) {
      double ss = 0.0;
      for (double v : rel_mse) ss += (v - rep.relative_mse) * (v - rep.relative_mse);
      rep.relative_mse_stderr = std::sqrt(ss / (nt - 1.0) / nt);
    }
  }
  if (keep_errors) rep.errors = std::move(err);
  return rep;
}

}  // namespace netsync
