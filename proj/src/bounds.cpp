#include "netsync/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include "netsync/cdi.hpp"
#include "netsync/errors.hpp"
#include "netsync/rng.hpp"

namespace netsync {

namespace {

using linalg::Index;
using linalg::SparseMatrix;

constexpr std::size_t kDenseLimit = 2000;

[[noreturn]] void throw_singular(const FimMatrix& fim) {
  auto nodes = unreachable_agents(fim);
  std::string msg = "not absolutely synchronizable";
  if (!nodes.empty()) msg += ": no path to an information source from agents " + format_node_list(nodes);
  else msg += ": information matrix is numerically singular";
  throw NotSynchronizable(msg, std::move(nodes));
}

bool pattern_connected(const SparseMatrix& m) {
  const auto n = static_cast<std::size_t>(m.rows());
  if (n == 0) return true;
  std::vector<std::vector<std::size_t>> adj(n);
  for (Index k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it)
      if (it.row() != it.col() && it.value() != 0.0) adj[static_cast<std::size_t>(it.row())].push_back(static_cast<std::size_t>(it.col()));
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

double rel_dev(double a, double b) {
  const double d = std::abs(a - b);
  return d == 0.0 ? 0.0 : d / std::max(std::abs(b), 1e-300);
}

void require_variant(const FimMatrix& fim, FimVariant v, const char* what) {
  if (fim.variant != v) throw InvalidArgument(std::string(what) + ": expected a " + to_string(v) + " FIM");
}

}  // namespace

Eigen::VectorXd aseb_direct(const FimMatrix& fim) {
  require_variant(fim, FimVariant::Absolute, "aseb_direct");
  try {
    linalg::SpdSolver solver(fim.data, fim.orderings);
    return solver.inverse_diagonal();
  } catch (const linalg::FactorizationFailure&) {
    throw_singular(fim);
  }
}

Eigen::VectorXd aseb_via_cdi(const Topology& topology, const PriorSpec& priors, const LinkModel& link,
                             const Eigen::VectorXd& cdi) {
  const std::size_t na = topology.num_agents();
  if (static_cast<std::size_t>(cdi.size()) != na || priors.xi_p.size() != na)
    throw InvalidArgument("aseb_via_cdi: size mismatch");
  Eigen::VectorXd out(static_cast<Index>(na));
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < na; ++i) {
    const double c = cdi[static_cast<Index>(i)];
    const double den = link.gamma() * static_cast<double>(topology.degree(i)) + priors.xi_p[i];
    if (!std::isfinite(c) || !(den > 0.0)) bad.push_back(i);
    out[static_cast<Index>(i)] = (1.0 + c) / den;
  }
  if (!bad.empty())
    throw NotSynchronizable("not absolutely synchronizable: infinite CDI at agents " + format_node_list(bad), bad);
  return out;
}

RsebValue rseb_pseudo(const FimMatrix& relative_fim, Eigen::VectorXd* diag_out) {
  require_variant(relative_fim, FimVariant::Relative, "rseb_pseudo");
  const Index n = relative_fim.data.rows();
  if (n == 0) throw InvalidArgument("rseb_pseudo: empty network");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(relative_fim.dense());
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double tol = 1e-10 * std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  if (n > 1 && !(ev[1] > tol)) throw Disconnected("agent graph is disconnected; relative bounds are undefined");
  // ev[0] belongs to the 1/sqrt(N) direction and is projected out.
  RsebValue r;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  for (Index k = 1; k < n; ++k) {
    r.trace += 1.0 / ev[k];
    diag += es.eigenvectors().col(k).cwiseAbs2() / ev[k];
  }
  r.rseb = r.trace / static_cast<double>(n);
  if (diag_out) *diag_out = diag;
  return r;
}

RsebValue rseb_via_z(const TransitionMatrix& relative, const Eigen::VectorXd& degrees, const LinkModel& link) {
  if (relative.variant != FimVariant::Relative) throw InvalidArgument("rseb_via_z: expected a relative transition matrix");
  const Eigen::MatrixXd z = fundamental_matrix(relative, degrees);
  const double n = static_cast<double>(z.rows());
  // tr(C M C) = tr M - 1^T M 1 / N with M = Z D^{-1}.
  const Eigen::MatrixXd m = z * degrees.cwiseInverse().asDiagonal();
  RsebValue r;
  r.trace = (m.trace() - m.sum() / n) / link.gamma();
  r.rseb = r.trace / n;
  return r;
}

RsebValue rseb_via_relative_cdi(const Eigen::VectorXd& rel_cdi, const Eigen::VectorXd& degrees,
                                const LinkModel& link, RelCdiNumerator numerator) {
  if (rel_cdi.size() != degrees.size()) throw InvalidArgument("rseb_via_relative_cdi: size mismatch");
  const double n = static_cast<double>(rel_cdi.size());
  if (n == 0) throw InvalidArgument("rseb_via_relative_cdi: empty network");
  const double base = numerator == RelCdiNumerator::Corrected ? 1.0 - 1.0 / n : 1.0;
  RsebValue r;
  r.trace = ((base + rel_cdi.array()) / (link.gamma() * degrees.array())).sum();
  r.rseb = r.trace / n;
  return r;
}

RsebValue rseb_grounded(const FimMatrix& relative_fim) {
  require_variant(relative_fim, FimVariant::Relative, "rseb_grounded");
  const Index n = relative_fim.data.rows();
  if (n == 0) throw InvalidArgument("rseb_grounded: empty network");
  if (n == 1) return {};
  if (!pattern_connected(relative_fim.data)) throw Disconnected("agent graph is disconnected; relative bounds are undefined");
  Index k = 0;
  relative_fim.data.diagonal().maxCoeff(&k);
  std::vector<Index> local(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) local[static_cast<std::size_t>(i)] = i < k ? i : (i == k ? -1 : i - 1);
  std::vector<Eigen::Triplet<double>> t;
  for (Index c = 0; c < relative_fim.data.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(relative_fim.data, c); it; ++it) {
      const Index r = local[static_cast<std::size_t>(it.row())], cc = local[static_cast<std::size_t>(it.col())];
      if (r >= 0 && cc >= 0) t.emplace_back(r, cc, it.value());
    }
  SparseMatrix l0(n - 1, n - 1);
  l0.setFromTriplets(t.begin(), t.end());
  std::vector<linalg::Permutation> orderings;
  for (const auto& perm : relative_fim.orderings) {
    if (static_cast<Index>(perm.size()) != n) continue;
    linalg::Permutation p;
    for (Index i : perm)
      if (local[static_cast<std::size_t>(i)] >= 0) p.push_back(local[static_cast<std::size_t>(i)]);
    orderings.push_back(std::move(p));
  }
  try {
    linalg::SpdSolver solver(l0, orderings);
    const double tr = solver.inverse_diagonal().sum();
    const double quad = solver.solve(Eigen::VectorXd::Ones(n - 1)).sum();
    RsebValue r;
    r.trace = tr - quad / static_cast<double>(n);
    r.rseb = r.trace / static_cast<double>(n);
    return r;
  } catch (const linalg::FactorizationFailure&) {
    throw Disconnected("grounded Laplacian is singular; agent graph is disconnected");
  }
}

EquivalenceReport check_node_equivalence(const Topology& topology, const PriorSpec& priors, const LinkModel& link,
                                         NodeId agent_k, double xi_inf) {
  if (!topology.is_agent(agent_k)) throw InvalidArgument("check_node_equivalence: node " + std::to_string(agent_k) + " is not an agent");
  if (!(xi_inf > 0.0)) throw InvalidArgument("check_node_equivalence: xi_inf must be positive");
  PriorSpec boosted = priors;
  boosted.xi_p.at(agent_k) = xi_inf;
  const FimMatrix j = build_absolute_fim(topology, boosted, link);
  const Topology promoted = topology.promote_to_reference(agent_k);
  PriorSpec reduced_priors;
  for (std::size_t i = 0; i < priors.xi_p.size(); ++i)
    if (i != agent_k) reduced_priors.xi_p.push_back(priors.xi_p[i]);
  const FimMatrix jr = build_absolute_fim(promoted, reduced_priors, link);

  const Eigen::MatrixXd jd = j.dense(kDenseLimit);
  const Eigen::MatrixXd jrd = jr.dense(kDenseLimit);
  const Index n = jd.rows();
  const auto k = static_cast<Index>(agent_k);
  auto reduce = [&](const Eigen::MatrixXd& m) {
    Eigen::MatrixXd out(n - 1, n - 1);
    for (Index r = 0, rr = 0; r < n; ++r) {
      if (r == k) continue;
      for (Index c = 0, cc = 0; c < n; ++c) {
        if (c == k) continue;
        out(rr, cc++) = m(r, c);
      }
      ++rr;
    }
    return out;
  };

  EquivalenceReport rep;
  if (n <= 1) return rep;
  const Eigen::MatrixXd block = reduce(jd);
  const double scale = std::max(jrd.cwiseAbs().maxCoeff(), 1e-300);
  rep.structural_deviation = (block - jrd).cwiseAbs().maxCoeff() / scale;

  Eigen::MatrixXd full_inv, ref_inv;
  try {
    full_inv = linalg::dense_spd_inverse(jd);
  } catch (const linalg::FactorizationFailure&) {
    throw_singular(j);
  }
  try {
    ref_inv = linalg::dense_spd_inverse(jrd);
  } catch (const linalg::FactorizationFailure&) {
    throw_singular(jr);
  }
  const Eigen::MatrixXd reduced_inv = reduce(full_inv);
  for (Index r = 0; r < n - 1; ++r)
    for (Index c = 0; c < n - 1; ++c)
      rep.max_rel_deviation = std::max(rep.max_rel_deviation, rel_dev(reduced_inv(r, c), ref_inv(r, c)));
  return rep;
}

Eigen::VectorXd skewed_bound(const FimMatrix& fim, const SkewSpec& skews) {
  const Eigen::VectorXd base = aseb_direct(fim);
  if (skews.alphas.size() != static_cast<std::size_t>(base.size())) throw InvalidArgument("skewed_bound: size mismatch");
  Eigen::VectorXd out = base;
  for (Index i = 0; i < base.size(); ++i) {
    const double a = skews.alphas[static_cast<std::size_t>(i)];
    if (!(a > 0.0)) throw InvalidArgument("skewed_bound: skews must be positive");
    out[i] *= a * a;
  }
  return out;
}

SkewExpectation skewed_bound_expectation(const FimMatrix& fim, const UniformSkew& dist, std::size_t trials,
                                         std::uint64_t seed) {
  if (!(dist.lo > 0.0) || !(dist.hi >= dist.lo)) throw InvalidArgument("skew distribution: need 0 < lo <= hi");
  if (std::abs(0.5 * (dist.lo + dist.hi) - 1.0) > 1e-12) throw InvalidArgument("skew distribution must have mean 1");
  if (trials == 0) throw InvalidArgument("skewed_bound_expectation: trials must be positive");
  SkewExpectation out;
  out.base = aseb_direct(fim);
  const Index n = out.base.size();
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(n), sum2 = Eigen::VectorXd::Zero(n);
  SkewSpec s;
  s.alphas.resize(static_cast<std::size_t>(n));
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, 0, t));
    for (auto& a : s.alphas) a = dist.lo + (dist.hi - dist.lo) * uniform01(rng);
    // diag(B J^{-1} B) per draw; J^{-1} itself does not change.
    for (Index i = 0; i < n; ++i) {
      const double a = s.alphas[static_cast<std::size_t>(i)];
      const double v = a * out.base[i] * a;
      sum[i] += v;
      sum2[i] += v * v;
    }
  }
  const double nt = static_cast<double>(trials);
  out.expected = sum / nt;
  out.ratio = out.expected.cwiseQuotient(out.base);
  out.ratio_stderr = Eigen::VectorXd::Zero(n);
  if (trials > 1)
    for (Index i = 0; i < n; ++i) {
      const double var = std::max(0.0, (sum2[i] - nt * out.expected[i] * out.expected[i]) / (nt - 1.0));
      out.ratio_stderr[i] = std::sqrt(var / nt) / out.base[i];
    }
  return out;
}

BoundReport compute_bounds(const Topology& topology, const PriorSpec& priors, const LinkModel& link) {
  BoundReport rep;
  const std::size_t na = topology.num_agents();
  const FimMatrix j = build_absolute_fim(topology, priors, link);
  rep.aseb = aseb_direct(j);
  rep.aseb_methods = {"direct"};
  const Eigen::VectorXd cdi = cdi_exact(build_transition_matrix(j));
  const Eigen::VectorXd via = aseb_via_cdi(topology, priors, link, cdi);
  rep.aseb_methods.push_back("cdi");
  for (Index i = 0; i < rep.aseb.size(); ++i) rep.aseb_max_deviation = std::max(rep.aseb_max_deviation, rel_dev(via[i], rep.aseb[i]));
  if (na <= kDenseLimit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j.dense(), Eigen::EigenvaluesOnly);
    if (na > 0) rep.condition_number = es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
  }

  const FimMatrix rel = build_relative_fim(topology, link);
  if (na >= 2 && pattern_connected(rel.data)) {
    rep.has_rseb = true;
    rep.rseb = rseb_grounded(rel);
    rep.rseb_methods = {"grounded"};
    if (na <= kDenseLimit) {
      const RsebValue pseudo = rseb_pseudo(rel);
      const TransitionMatrix p = build_transition_matrix(rel);
      Eigen::VectorXd deg(static_cast<Index>(na));
      for (std::size_t i = 0; i < na; ++i) deg[static_cast<Index>(i)] = static_cast<double>(topology.agent_degree(i));
      const RsebValue z = rseb_via_z(p, deg, link);
      const RsebValue rc = rseb_via_relative_cdi(rel_cdi_exact(p, deg), deg, link);
      rep.rseb_max_deviation = std::max({rel_dev(rep.rseb.trace, pseudo.trace), rel_dev(z.trace, pseudo.trace),
                                         rel_dev(rc.trace, pseudo.trace)});
      rep.rseb = pseudo;
      rep.rseb_methods = {"pseudo", "z", "relative_cdi", "grounded"};
    }
  }
  return rep;
}

}  // namespace netsync
