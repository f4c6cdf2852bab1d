#include "netsync/cdi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "netsync/errors.hpp"
#include "netsync/parallel.hpp"
#include "netsync/rng.hpp"

namespace netsync {

namespace {

using linalg::Index;
using linalg::SparseMatrix;
using Triplet = Eigen::Triplet<double>;

struct TransientView {
  std::vector<Index> states;  // transient -> full index
  std::vector<Index> local;   // full -> transient index, -1 if absorbing
};

TransientView transient_states(const TransitionMatrix& p) {
  TransientView v;
  v.local.assign(p.dim(), -1);
  for (std::size_t i = 0; i < p.dim(); ++i)
    if (!p.absorbing[i]) {
      v.local[i] = static_cast<Index>(v.states.size());
      v.states.push_back(static_cast<Index>(i));
    }
  return v;
}

SparseMatrix transient_block(const TransitionMatrix& p, const TransientView& v) {
  std::vector<Triplet> t;
  for (Index k = 0; k < p.data.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(p.data, k); it; ++it) {
      const Index r = v.local[static_cast<std::size_t>(it.row())];
      const Index c = v.local[static_cast<std::size_t>(it.col())];
      if (r >= 0 && c >= 0) t.emplace_back(r, c, it.value());
    }
  const auto m = static_cast<Index>(v.states.size());
  SparseMatrix q(m, m);
  q.setFromTriplets(t.begin(), t.end());
  q.makeCompressed();
  return q;
}

// Transient states from which no path leads to absorption or leakage.
std::vector<std::size_t> trapped_states(const SparseMatrix& q, const TransientView& v) {
  const auto m = static_cast<std::size_t>(q.rows());
  std::vector<double> row_sum(m, 0.0);
  std::vector<std::vector<std::size_t>> reverse(m);
  for (Index k = 0; k < q.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(q, k); it; ++it) {
      row_sum[static_cast<std::size_t>(it.row())] += it.value();
      if (it.value() > 0.0) reverse[static_cast<std::size_t>(it.col())].push_back(static_cast<std::size_t>(it.row()));
    }
  std::vector<char> ok(m, 0);
  std::queue<std::size_t> bfs;
  for (std::size_t i = 0; i < m; ++i)
    if (row_sum[i] < 1.0 - 1e-12) {
      ok[i] = 1;
      bfs.push(i);
    }
  while (!bfs.empty()) {
    const std::size_t u = bfs.front();
    bfs.pop();
    for (std::size_t w : reverse[u])
      if (!ok[w]) {
        ok[w] = 1;
        bfs.push(w);
      }
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < m; ++i)
    if (!ok[i]) out.push_back(static_cast<std::size_t>(v.states[i]));
  return out;
}

[[noreturn]] void throw_not_synchronizable(std::vector<std::size_t> nodes) {
  std::string msg = "not absolutely synchronizable";
  if (!nodes.empty()) msg += ": no path to an information source from agents " + format_node_list(nodes);
  else msg += ": information matrix is numerically singular";
  throw NotSynchronizable(msg, std::move(nodes));
}

std::vector<linalg::Permutation> restrict_orderings(const std::vector<linalg::Permutation>& orderings,
                                                    const std::vector<Index>& local) {
  std::vector<linalg::Permutation> out;
  for (const auto& perm : orderings) {
    if (perm.size() != local.size()) continue;
    linalg::Permutation r;
    for (Index i : perm)
      if (local[static_cast<std::size_t>(i)] >= 0) r.push_back(local[static_cast<std::size_t>(i)]);
    out.push_back(std::move(r));
  }
  return out;
}

// A state with no transient successor can never return: its CDI is exactly 0.
Eigen::VectorXd zero_isolated(const SparseMatrix& q, Eigen::VectorXd delta) {
  std::vector<char> has_out(static_cast<std::size_t>(q.rows()), 0);
  for (Index k = 0; k < q.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(q, k); it; ++it)
      if (it.value() != 0.0) has_out[static_cast<std::size_t>(it.row())] = 1;
  for (Index i = 0; i < delta.size(); ++i)
    if (!has_out[static_cast<std::size_t>(i)]) delta[i] = 0.0;
  return delta;
}

bool chain_irreducible(const TransitionMatrix& p) {
  const auto n = static_cast<std::size_t>(p.dim());
  if (n == 0) return true;
  std::vector<std::vector<std::size_t>> adj(n);
  for (Index k = 0; k < p.data.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(p.data, k); it; ++it)
      if (it.value() > 0.0 && it.row() != it.col()) {
        adj[static_cast<std::size_t>(it.row())].push_back(static_cast<std::size_t>(it.col()));
        adj[static_cast<std::size_t>(it.col())].push_back(static_cast<std::size_t>(it.row()));
      }
  std::vector<char> seen(n, 0);
  std::queue<std::size_t> q;
  q.push(0);
  seen[0] = 1;
  std::size_t count = 1;
  while (!q.empty()) {
    const std::size_t u = q.front();
    q.pop();
    for (std::size_t w : adj[u])
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        q.push(w);
      }
  }
  return count == n;
}

}  // namespace

const char* to_string(CdiMethod m) {
  switch (m) {
    case CdiMethod::Exact: return "exact";
    case CdiMethod::Series: return "series";
    case CdiMethod::Walk: return "walk";
    case CdiMethod::Asymptotic: return "asymptotic";
  }
  return "?";
}

Eigen::VectorXd cdi_exact(const TransitionMatrix& transition) {
  const TransientView v = transient_states(transition);
  const SparseMatrix q = transient_block(transition, v);
  const auto m = static_cast<Index>(v.states.size());
  if (transition.variant == FimVariant::Relative) throw_not_synchronizable(trapped_states(q, v));
  if (transition.scale.size() == static_cast<Index>(transition.dim())) {
    // J_TT = diag(s) (I - Q) is symmetric positive definite when synchronizable.
    Eigen::VectorXd s(m);
    for (Index a = 0; a < m; ++a) s[a] = transition.scale[v.states[static_cast<std::size_t>(a)]];
    std::vector<Triplet> t;
    for (Index a = 0; a < m; ++a) t.emplace_back(a, a, s[a]);
    for (Index k = 0; k < q.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(q, k); it; ++it) t.emplace_back(it.row(), it.col(), -s[it.row()] * it.value());
    SparseMatrix j(m, m);
    j.setFromTriplets(t.begin(), t.end());
    try {
      linalg::SpdSolver solver(j, restrict_orderings(transition.orderings, v.local));
      return zero_isolated(q, (s.array() * solver.inverse_diagonal().array() - 1.0).matrix());
    } catch (const linalg::FactorizationFailure&) {
      throw_not_synchronizable(trapped_states(q, v));
    }
  }
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(m, m) - Eigen::MatrixXd(q);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) throw_not_synchronizable(trapped_states(q, v));
  return zero_isolated(q, (lu.inverse().diagonal().array() - 1.0).matrix());
}

CdiReport cdi_series(const TransitionMatrix& transition, double tol, std::size_t max_terms) {
  if (!(tol > 0.0)) throw InvalidArgument("cdi_series: tol must be positive");
  if (transition.variant == FimVariant::Relative)
    throw InvalidArgument("cdi_series: relative transition matrices are row-stochastic; use rel_cdi_exact");
  const TransientView v = transient_states(transition);
  const SparseMatrix q = transient_block(transition, v);
  const Index m = q.rows();
  if (auto trapped = trapped_states(q, v); !trapped.empty()) throw_not_synchronizable(std::move(trapped));

  // s_n = max row sum of Q^n is submultiplicative, so with a block length b
  // where s_b < 1 the terms beyond M are bounded by b s_b^floor((M+1)/b) / (1 - s_b).
  // b = 1 is the plain max-row-sum geometric bound.
  Eigen::MatrixXd x = Eigen::MatrixXd::Identity(m, m);
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(m);
  std::size_t block = 0;
  double s_block = 1.0, best_rate = 0.0;
  auto tail = [&](std::size_t terms) {
    if (block == 0) return std::numeric_limits<double>::infinity();
    if (s_block == 0.0) return 0.0;
    const double reps = std::floor(static_cast<double>(terms + 1) / static_cast<double>(block));
    return static_cast<double>(block) * std::pow(s_block, reps) / (1.0 - s_block);
  };
  std::size_t n = 0;
  double bound = m == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  while (!(bound < tol)) {
    if (n >= max_terms)
      throw Diverged("cdi_series: tail bound " + std::to_string(bound) + " still above tol after " +
                     std::to_string(max_terms) + " terms");
    ++n;
    x = q * x;
    acc += x.diagonal();
    const double s = m > 0 ? x.rowwise().sum().maxCoeff() : 0.0;
    if (s < 1.0) {
      const double rate = s > 0.0 ? std::log(s) / static_cast<double>(n) : -std::numeric_limits<double>::infinity();
      if (block == 0 || rate < best_rate) {
        block = n;
        s_block = s;
        best_rate = rate;
      }
    }
    bound = tail(n);
  }
  CdiReport r;
  r.delta = acc;
  r.method = CdiMethod::Series;
  r.truncation_n = n;
  r.tail_bound = bound;
  return r;
}

Eigen::MatrixXd fundamental_matrix(const TransitionMatrix& relative, const Eigen::VectorXd& degrees) {
  const auto n = static_cast<Index>(relative.dim());
  if (degrees.size() != n) throw InvalidArgument("fundamental_matrix: degree vector size mismatch");
  if (!chain_irreducible(relative)) throw Disconnected("agent graph is disconnected; relative bounds are undefined");
  const double total = degrees.sum();
  if (!(total > 0.0)) throw Disconnected("agent graph has no links");
  const Eigen::VectorXd pi = degrees / total;
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd(relative.data);
  a.rowwise() += pi.transpose();
  return a.partialPivLu().inverse();
}

Eigen::VectorXd rel_cdi_exact(const TransitionMatrix& relative, const Eigen::VectorXd& degrees) {
  const Eigen::MatrixXd z = fundamental_matrix(relative, degrees);
  const double n = static_cast<double>(z.rows());
  const Eigen::VectorXd col_mean = z.colwise().mean().transpose();
  return (z.diagonal() - col_mean).array() - (1.0 - 1.0 / n);
}

AbelCheck rel_cdi_abel(const TransitionMatrix& relative) {
  const auto n = static_cast<Index>(relative.dim());
  if (!chain_irreducible(relative)) throw Disconnected("agent graph is disconnected; relative bounds are undefined");
  AbelCheck out;
  out.z = {0.9, 0.99, 0.999};
  const Eigen::MatrixXd p(relative.data);
  for (double z : out.z) {
    const Eigen::MatrixXd inv = (Eigen::MatrixXd::Identity(n, n) - z * p).partialPivLu().inverse();
    const Eigen::VectorXd col_mean = inv.colwise().mean().transpose();
    out.partial.push_back(((inv.diagonal() - col_mean).array() - (1.0 - 1.0 / static_cast<double>(n))).matrix());
  }
  // Error expands in powers of h = 1 - z; h shrinks tenfold per level.
  const Eigen::VectorXd r1a = (10.0 * out.partial[1] - out.partial[0]) / 9.0;
  const Eigen::VectorXd r1b = (10.0 * out.partial[2] - out.partial[1]) / 9.0;
  out.extrapolated = (100.0 * r1b - r1a) / 99.0;
  return out;
}

CdiReport cdi_random_walk(const Topology& topology, const PriorSpec& priors, const LinkModel& link, NodeId agent,
                          std::size_t n_walks, std::size_t max_steps, std::uint64_t seed, unsigned jobs) {
  link.validate();
  if (!topology.is_agent(agent)) throw InvalidArgument("cdi_random_walk: node " + std::to_string(agent) + " is not an agent");
  if (n_walks == 0) throw InvalidArgument("cdi_random_walk: n_walks must be positive");
  if (priors.xi_p.size() != topology.num_agents()) throw InvalidArgument("cdi_random_walk: prior size mismatch");
  const std::vector<double> np = priors.n_p(link);
  const std::size_t na = topology.num_agents();

  double a_min = 1.0;
  for (std::size_t a = 0; a < na; ++a) {
    const double total = static_cast<double>(topology.degree(a)) + np[a];
    if (!(total > 0.0)) throw DegenerateNode("agent " + std::to_string(a) + " has no links and no prior", a);
    a_min = std::min(a_min, (np[a] + static_cast<double>(topology.reference_degree(a))) / total);
  }
  double tail = 0.0;
  if (max_steps == 0) max_steps = a_min > 0.0 ? static_cast<std::size_t>(std::ceil(10.0 / a_min)) : 1000000;
  tail = a_min > 0.0 ? std::pow(1.0 - a_min, static_cast<double>(max_steps)) / a_min
                     : std::numeric_limits<double>::infinity();

  constexpr std::size_t kChunks = 64;
  const std::size_t chunks = std::min(kChunks, n_walks);
  struct Acc {
    double sum = 0.0, sum2 = 0.0;
    std::size_t truncated = 0;
  };
  std::vector<Acc> acc(chunks);
  parallel_for(chunks, jobs, [&](std::size_t c) {
    Rng rng(derive_seed(seed, agent, c));
    const std::size_t lo = c * n_walks / chunks, hi = (c + 1) * n_walks / chunks;
    Acc a;
    for (std::size_t w = lo; w < hi; ++w) {
      NodeId at = agent;
      std::uint64_t returns = 0;
      std::size_t step = 0;
      for (; step < max_steps; ++step) {
        const auto nb = topology.neighbors(at);
        const double d = static_cast<double>(nb.size());
        const double u = uniform01(rng) * (d + np[at]);
        if (u < np[at]) break;
        const auto idx = std::min(nb.size() - 1, static_cast<std::size_t>(u - np[at]));
        at = nb[idx];
        if (!topology.is_agent(at)) break;
        if (at == agent) ++returns;
      }
      if (step == max_steps) ++a.truncated;
      const double r = static_cast<double>(returns);
      a.sum += r;
      a.sum2 += r * r;
    }
    acc[c] = a;
  });
  double sum = 0.0, sum2 = 0.0;
  std::size_t truncated = 0;
  for (const auto& a : acc) {
    sum += a.sum;
    sum2 += a.sum2;
    truncated += a.truncated;
  }
  const double n = static_cast<double>(n_walks);
  const double mean = sum / n;
  const double var = n_walks > 1 ? std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0)) : 0.0;
  CdiReport r;
  r.delta = Eigen::VectorXd::Constant(1, mean);
  r.method = CdiMethod::Walk;
  r.truncation_n = max_steps;
  r.tail_bound = tail;
  r.std_error = std::sqrt(var / n);
  r.truncated_walks = truncated;
  return r;
}

Eigen::VectorXd cdi_by_factorization(const Topology& topology, const PriorSpec& priors, const LinkModel& link) {
  const FimMatrix j = build_absolute_fim(topology, priors, link);
  try {
    linalg::SpdSolver solver(j.data, j.orderings);
    return (j.data.diagonal().array() * solver.inverse_diagonal().array() - 1.0).matrix();
  } catch (const linalg::FactorizationFailure&) {
    throw_not_synchronizable(unreachable_agents(j));
  }
}

EnsembleStat expected_cdi_stochastic(double side_b, double intensity, double r_max, double n_p,
                                     std::size_t snapshots, std::uint64_t seed, unsigned jobs) {
  if (snapshots == 0) throw InvalidArgument("expected_cdi_stochastic: snapshots must be >= 1");
  if (!(n_p > 0.0)) throw InvalidArgument("expected_cdi_stochastic: n_p must be positive");
  constexpr std::size_t kMaxAttempts = 1000;
  std::vector<double> value(snapshots);
  std::vector<std::size_t> redraws(snapshots, 0);
  const LinkModel link = LinkModel::unit();
  parallel_for(snapshots, jobs, [&](std::size_t s) {
    for (std::size_t attempt = 0;; ++attempt) {
      if (attempt == kMaxAttempts)
        throw Diverged("expected_cdi_stochastic: no connected snapshot after " + std::to_string(kMaxAttempts) + " draws");
      Topology t = gen_stochastic(side_b, intensity, r_max, derive_seed(seed, s, attempt));
      if (!is_connected(t)) {
        ++redraws[s];
        continue;
      }
      const PriorSpec pr = assign_priors(t, UniformPriors{n_p}, link);
      value[s] = cdi_by_factorization(t, pr, link).mean();
      return;
    }
  });
  EnsembleStat st;
  st.n_samples = snapshots;
  for (std::size_t s = 0; s < snapshots; ++s) {
    st.mean += value[s];
    st.resamples += redraws[s];
  }
  st.mean /= static_cast<double>(snapshots);
  if (snapshots > 1) {
    double ss = 0.0;
    for (double v : value) ss += (v - st.mean) * (v - st.mean);
    st.std_error = std::sqrt(ss / static_cast<double>(snapshots - 1) / static_cast<double>(snapshots));
  }
  return st;
}

double matched_lattice_cdi(double side_b, double intensity, double r_max, double n_p) {
  const Topology t = gen_matched_lattice(side_b, intensity, r_max);
  const LinkModel link = LinkModel::unit();
  return cdi_by_factorization(t, assign_priors(t, UniformPriors{n_p}, link), link).mean();
}

}  // namespace netsync
