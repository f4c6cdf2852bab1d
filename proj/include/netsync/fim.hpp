#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cstddef>
#include <vector>

#include "netsync/linalg.hpp"
#include "netsync/topology.hpp"

namespace netsync {

enum class FimVariant { Absolute, Relative, Extended };
const char* to_string(FimVariant v);

/// Symmetric information matrix. Always held sparse; `dense()` materializes
/// a copy. Extended matrices are laid out as agents, references, then one
/// virtual reference per agent (agent i -> n_agents + n_references + i).
class FimMatrix {
 public:
  FimVariant variant = FimVariant::Absolute;
  double gamma = 1.0;
  std::size_t n_agents = 0;
  std::size_t n_references = 0;  // extended only
  linalg::SparseMatrix data;
  /// Candidate band orderings derived from node coordinates (x-sort, y-sort).
  std::vector<linalg::Permutation> orderings;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(data.rows()); }
  /// Throws ResourceLimit beyond `max_dim`.
  Eigen::MatrixXd dense(std::size_t max_dim = 20000) const;
  /// True for reference and virtual-reference rows of an extended matrix.
  bool is_absorbing(std::size_t i) const noexcept { return variant == FimVariant::Extended && i >= n_agents; }
};

/// J = gamma (D^C + D^R - A) + Xi^P over the agents.
FimMatrix build_absolute_fim(const Topology& topology, const PriorSpec& priors, const LinkModel& link);

/// gamma (D^C - A) over the agent-agent links; references are ignored.
FimMatrix build_relative_fim(const Topology& topology, const LinkModel& link);

/// Default xi_inf: 1e12 times the largest absolute-FIM diagonal entry.
double default_xi_inf(const Topology& topology, const PriorSpec& priors, const LinkModel& link);

/// Extended FIM over agents, references and virtual references. xi_inf <= 0
/// selects default_xi_inf.
FimMatrix build_extended_fim(const Topology& topology, const PriorSpec& priors, const LinkModel& link,
                             double xi_inf = 0.0);

/// P_ab = -J_ab / J_aa on non-absorbing rows; absorbing rows are unit rows.
struct TransitionMatrix {
  FimVariant variant = FimVariant::Absolute;
  linalg::SparseMatrix data;
  std::vector<char> absorbing;
  /// Row scaling J_aa of the source matrix (so that J = diag(scale) (I - P)).
  Eigen::VectorXd scale;
  std::vector<linalg::Permutation> orderings;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(data.rows()); }
  Eigen::VectorXd row_sums() const;
};

/// Throws DegenerateNode when a non-absorbing row has a zero diagonal.
TransitionMatrix build_transition_matrix(const FimMatrix& fim);

/// Per-agent clock skews alpha_i > 0.
struct SkewSpec {
  std::vector<double> alphas;
};

/// B^{-1} J B^{-1} with B = diag(alpha). Absolute or relative input only.
FimMatrix apply_skew(const FimMatrix& fim, const SkewSpec& skews);

/// Agents that cannot reach an information source (a prior, a reference
/// neighbour) through agent-agent links, judged from the matrix pattern:
/// a row is a source when its entries sum to more than tol * diag.
std::vector<std::size_t> unreachable_agents(const FimMatrix& fim, double tol = 1e-12);

}  // namespace netsync
