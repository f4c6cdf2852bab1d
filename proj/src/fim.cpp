#include "netsync/fim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>

#include "netsync/errors.hpp"

namespace netsync {

namespace {

using Triplet = Eigen::Triplet<double>;
using linalg::Index;
using linalg::Permutation;

linalg::SparseMatrix from_triplets(std::size_t dim, const std::vector<Triplet>& t) {
  linalg::SparseMatrix m(static_cast<Index>(dim), static_cast<Index>(dim));
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

// Lexicographic (x, y) and (y, x) orders of the given points.
std::vector<Permutation> coordinate_orderings(const std::vector<Position>& pts) {
  Permutation px = linalg::identity_permutation(static_cast<Index>(pts.size()));
  Permutation py = px;
  auto at = [&](Index i) -> const Position& { return pts[static_cast<std::size_t>(i)]; };
  std::sort(px.begin(), px.end(), [&](Index a, Index b) {
    return at(a).x != at(b).x ? at(a).x < at(b).x : (at(a).y != at(b).y ? at(a).y < at(b).y : a < b);
  });
  std::sort(py.begin(), py.end(), [&](Index a, Index b) {
    return at(a).y != at(b).y ? at(a).y < at(b).y : (at(a).x != at(b).x ? at(a).x < at(b).x : a < b);
  });
  return {std::move(px), std::move(py)};
}

std::vector<Position> agent_positions(const Topology& t) {
  return {t.positions().begin(), t.positions().begin() + static_cast<std::ptrdiff_t>(t.num_agents())};
}

void check_priors(const Topology& topology, const PriorSpec& priors) {
  if (priors.xi_p.size() != topology.num_agents())
    throw InvalidArgument("priors: expected " + std::to_string(topology.num_agents()) + " entries, got " +
                          std::to_string(priors.xi_p.size()));
  for (double xi : priors.xi_p)
    if (!(xi >= 0.0) || !std::isfinite(xi)) throw InvalidArgument("priors: xi_p must be finite and >= 0");
}

}  // namespace

const char* to_string(FimVariant v) {
  switch (v) {
    case FimVariant::Absolute: return "absolute";
    case FimVariant::Relative: return "relative";
    case FimVariant::Extended: return "extended";
  }
  return "?";
}

Eigen::MatrixXd FimMatrix::dense(std::size_t max_dim) const {
  if (dim() > max_dim)
    throw ResourceLimit("dense FIM of dimension " + std::to_string(dim()) + " exceeds the cap of " +
                        std::to_string(max_dim));
  return Eigen::MatrixXd(data);
}

FimMatrix build_absolute_fim(const Topology& topology, const PriorSpec& priors, const LinkModel& link) {
  link.validate();
  check_priors(topology, priors);
  const double g = link.gamma();
  const std::size_t na = topology.num_agents();
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < na; ++i) {
    t.emplace_back(i, i, g * static_cast<double>(topology.degree(i)) + priors.xi_p[i]);
    for (NodeId j : topology.neighbors(i))
      if (topology.is_agent(j)) t.emplace_back(i, j, -g);
  }
  FimMatrix f;
  f.variant = FimVariant::Absolute;
  f.gamma = g;
  f.n_agents = na;
  f.data = from_triplets(na, t);
  f.orderings = coordinate_orderings(agent_positions(topology));
  return f;
}

FimMatrix build_relative_fim(const Topology& topology, const LinkModel& link) {
  link.validate();
  const double g = link.gamma();
  const std::size_t na = topology.num_agents();
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < na; ++i) {
    t.emplace_back(i, i, g * static_cast<double>(topology.agent_degree(i)));
    for (NodeId j : topology.neighbors(i))
      if (topology.is_agent(j)) t.emplace_back(i, j, -g);
  }
  FimMatrix f;
  f.variant = FimVariant::Relative;
  f.gamma = g;
  f.n_agents = na;
  f.data = from_triplets(na, t);
  f.orderings = coordinate_orderings(agent_positions(topology));
  return f;
}

double default_xi_inf(const Topology& topology, const PriorSpec& priors, const LinkModel& link) {
  check_priors(topology, priors);
  double m = 0.0;
  for (std::size_t i = 0; i < topology.num_agents(); ++i)
    m = std::max(m, link.gamma() * static_cast<double>(topology.degree(i)) + priors.xi_p[i]);
  return 1e12 * (m > 0.0 ? m : 1.0);
}

FimMatrix build_extended_fim(const Topology& topology, const PriorSpec& priors, const LinkModel& link,
                             double xi_inf) {
  link.validate();
  check_priors(topology, priors);
  if (xi_inf <= 0.0) xi_inf = default_xi_inf(topology, priors, link);
  const double g = link.gamma();
  const std::size_t na = topology.num_agents();
  const std::size_t nr = topology.num_references();
  const std::size_t dim = 2 * na + nr;
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < na; ++i) {
    t.emplace_back(i, i, g * static_cast<double>(topology.degree(i)) + priors.xi_p[i]);
    for (NodeId j : topology.neighbors(i)) {
      t.emplace_back(i, j, -g);
      if (!topology.is_agent(j)) t.emplace_back(j, i, -g);
    }
    if (priors.xi_p[i] > 0.0) {
      const std::size_t v = na + nr + i;
      t.emplace_back(i, v, -priors.xi_p[i]);
      t.emplace_back(v, i, -priors.xi_p[i]);
    }
  }
  for (std::size_t k = na; k < dim; ++k) t.emplace_back(k, k, xi_inf);
  FimMatrix f;
  f.variant = FimVariant::Extended;
  f.gamma = g;
  f.n_agents = na;
  f.n_references = nr;
  f.data = from_triplets(dim, t);
  std::vector<Position> pts = topology.positions();
  for (std::size_t i = 0; i < na; ++i) pts.push_back(topology.position(i));
  f.orderings = coordinate_orderings(pts);
  return f;
}

Eigen::VectorXd TransitionMatrix::row_sums() const {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(data.rows());
  for (Index k = 0; k < data.outerSize(); ++k)
    for (linalg::SparseMatrix::InnerIterator it(data, k); it; ++it) s[it.row()] += it.value();
  return s;
}

TransitionMatrix build_transition_matrix(const FimMatrix& fim) {
  const std::size_t n = fim.dim();
  TransitionMatrix p;
  p.variant = fim.variant;
  p.absorbing.assign(n, 0);
  p.scale = fim.data.diagonal();
  p.orderings = fim.orderings;
  for (std::size_t i = 0; i < n; ++i) {
    p.absorbing[i] = fim.is_absorbing(i) ? 1 : 0;
    if (!p.absorbing[i] && !(p.scale[static_cast<Index>(i)] > 0.0))
      throw DegenerateNode("node " + std::to_string(i) + " has zero total information (no links, no prior)", i);
  }
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(fim.data.nonZeros()));
  for (Index k = 0; k < fim.data.outerSize(); ++k)
    for (linalg::SparseMatrix::InnerIterator it(fim.data, k); it; ++it) {
      const auto r = static_cast<std::size_t>(it.row());
      if (p.absorbing[r] || it.row() == it.col()) continue;
      t.emplace_back(it.row(), it.col(), -it.value() / p.scale[it.row()]);
    }
  for (std::size_t i = 0; i < n; ++i)
    if (p.absorbing[i]) t.emplace_back(i, i, 1.0);
  p.data = from_triplets(n, t);
  return p;
}

FimMatrix apply_skew(const FimMatrix& fim, const SkewSpec& skews) {
  if (fim.variant == FimVariant::Extended) throw InvalidArgument("apply_skew: extended FIM not supported");
  if (skews.alphas.size() != fim.dim())
    throw InvalidArgument("apply_skew: expected " + std::to_string(fim.dim()) + " skews");
  Eigen::VectorXd inv(static_cast<Index>(fim.dim()));
  for (std::size_t i = 0; i < fim.dim(); ++i) {
    const double a = skews.alphas[i];
    if (!(a > 0.0) || !std::isfinite(a)) throw InvalidArgument("apply_skew: skews must be positive");
    inv[static_cast<Index>(i)] = 1.0 / a;
  }
  FimMatrix out = fim;
  for (Index k = 0; k < out.data.outerSize(); ++k)
    for (linalg::SparseMatrix::InnerIterator it(out.data, k); it; ++it)
      it.valueRef() *= inv[it.row()] * inv[it.col()];
  return out;
}

std::vector<std::size_t> unreachable_agents(const FimMatrix& fim, double tol) {
  const std::size_t n = fim.variant == FimVariant::Extended ? fim.n_agents : fim.dim();
  std::vector<std::vector<std::size_t>> adj(n);
  std::vector<double> row_sum(n, 0.0), diag(n, 0.0);
  for (Index k = 0; k < fim.data.outerSize(); ++k)
    for (linalg::SparseMatrix::InnerIterator it(fim.data, k); it; ++it) {
      const auto r = static_cast<std::size_t>(it.row());
      const auto c = static_cast<std::size_t>(it.col());
      if (r >= n) continue;
      if (c >= n) continue;  // link to a (virtual) reference: counted below
      row_sum[r] += it.value();
      if (r == c) diag[r] = it.value();
      else if (it.value() != 0.0) adj[r].push_back(c);
    }
  std::vector<char> reached(n, 0);
  std::queue<std::size_t> q;
  for (std::size_t i = 0; i < n; ++i) {
    // Extended rows lose their source mass to absorbing columns, so the
    // agent-block row sum is the information leaving toward sources.
    if (row_sum[i] > tol * std::max(diag[i], 1e-300)) {
      reached[i] = 1;
      q.push(i);
    }
  }
  while (!q.empty()) {
    const std::size_t u = q.front();
    q.pop();
    for (std::size_t v : adj[u])
      if (!reached[v]) {
        reached[v] = 1;
        q.push(v);
      }
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i)
    if (!reached[i]) out.push_back(i);
  return out;
}

}  // namespace netsync
