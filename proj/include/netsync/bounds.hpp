#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "netsync/fim.hpp"
#include "netsync/topology.hpp"

namespace netsync {

/// diag(J^{-1}) of an absolute FIM. Throws NotSynchronizable (listing the
/// agents with no path to an information source) when J is singular.
Eigen::VectorXd aseb_direct(const FimMatrix& fim);

/// (1 + Delta_ii) / (gamma d_i + xi_P,i). Throws NotSynchronizable on a
/// non-finite CDI.
Eigen::VectorXd aseb_via_cdi(const Topology& topology, const PriorSpec& priors, const LinkModel& link,
                             const Eigen::VectorXd& cdi);

struct RsebValue {
  double trace = 0.0;  // tr(J^dagger)
  double rseb = 0.0;   // trace / N_a
};

/// Eigendecomposition route. `diag_out`, when given, receives diag(J^dagger).
/// Throws Disconnected when the null space has dimension > 1.
RsebValue rseb_pseudo(const FimMatrix& relative_fim, Eigen::VectorXd* diag_out = nullptr);

/// Fundamental-matrix route: tr(J^dagger) = gamma^{-1} tr(C Z D^{-1} C).
RsebValue rseb_via_z(const TransitionMatrix& relative, const Eigen::VectorXd& degrees, const LinkModel& link);

enum class RelCdiNumerator { Corrected, Printed };

/// sum_i (1 - 1/N_a + rel_cdi_i) / (gamma d_i); the printed numerator
/// (1 + rel_cdi_i) is kept for comparison.
RsebValue rseb_via_relative_cdi(const Eigen::VectorXd& rel_cdi, const Eigen::VectorXd& degrees,
                                const LinkModel& link,
                                RelCdiNumerator numerator = RelCdiNumerator::Corrected);

/// Banded route for large networks: ground one node, X = L_0^{-1},
/// tr(J^dagger) = tr X - 1^T X 1 / N. Throws Disconnected.
RsebValue rseb_grounded(const FimMatrix& relative_fim);

struct EquivalenceReport {
  double max_rel_deviation = 0.0;  // virtual-infinite agent vs promoted reference
  double structural_deviation = 0.0;  // [J]_kbar vs FIM of the promoted topology
};

/// Compares the reduced inverse of J with xi_P,k = xi_inf against the inverse
/// FIM of the topology where agent k is a true reference node.
EquivalenceReport check_node_equivalence(const Topology& topology, const PriorSpec& priors, const LinkModel& link,
                                         NodeId agent_k, double xi_inf = 1e12);

/// alpha_i ~ uniform(lo, hi); mean (lo + hi)/2 must be 1.
struct UniformSkew {
  double lo = 0.9;
  double hi = 1.1;
};

struct SkewExpectation {
  Eigen::VectorXd base;            // diag(J^{-1})
  Eigen::VectorXd expected;        // mean of diag(B J^{-1} B)
  Eigen::VectorXd ratio;           // expected / base
  Eigen::VectorXd ratio_stderr;
};

/// Exact bound with known skews: diag(B J^{-1} B).
Eigen::VectorXd skewed_bound(const FimMatrix& fim, const SkewSpec& skews);

/// Monte Carlo average of diag(B J^{-1} B) over independent skew draws.
SkewExpectation skewed_bound_expectation(const FimMatrix& fim, const UniformSkew& dist, std::size_t trials,
                                         std::uint64_t seed);

/// Per-agent bounds with cross-checked methods.
struct BoundReport {
  Eigen::VectorXd aseb;
  std::vector<std::string> aseb_methods;
  double aseb_max_deviation = 0.0;
  bool has_rseb = false;
  RsebValue rseb;
  std::vector<std::string> rseb_methods;
  double rseb_max_deviation = 0.0;
  double condition_number = 0.0;  // 2-norm, dense path only (0 when skipped)
};

/// ASEB by direct inversion and via CDI; RSEB (agent graph connected) by
/// every route that fits the problem size.
BoundReport compute_bounds(const Topology& topology, const PriorSpec& priors, const LinkModel& link);

}  // namespace netsync
