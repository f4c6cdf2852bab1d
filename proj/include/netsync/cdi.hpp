#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "netsync/fim.hpp"
#include "netsync/topology.hpp"

namespace netsync {

enum class CdiMethod { Exact, Series, Walk, Asymptotic };
const char* to_string(CdiMethod m);

struct CdiReport {
  Eigen::VectorXd delta;
  CdiMethod method = CdiMethod::Exact;
  std::optional<std::size_t> truncation_n;
  std::optional<double> tail_bound;
  std::optional<double> std_error;
  std::size_t truncated_walks = 0;
};

/// Delta_ii = [(I - P)^{-1}]_ii - 1 over the non-absorbing states. Throws
/// NotSynchronizable (listing the states with no route to absorption or
/// leakage) when I - P is singular.
Eigen::VectorXd cdi_exact(const TransitionMatrix& transition);

/// sum_{n=1}^{M} diag(P^n), M the first point where the geometric tail bound
/// drops below tol. The bound uses rho = max row sum of P^b for the block
/// length b with the fastest decay (b = 1 gives rho^{M+1}/(1 - rho)).
/// Relative (row-stochastic) input is rejected; states with no route to
/// absorption throw NotSynchronizable; M beyond `max_terms` throws Diverged.
CdiReport cdi_series(const TransitionMatrix& transition, double tol, std::size_t max_terms = 1000000);

/// Z = (I - P + 1 pi^T)^{-1} with pi_i = d_i / sum d. Throws Disconnected
/// when the chain is reducible.
Eigen::MatrixXd fundamental_matrix(const TransitionMatrix& relative, const Eigen::VectorXd& degrees);

/// Relative CDI from the fundamental matrix Z = (I - P + 1 pi^T)^{-1},
/// pi_i = d_i / sum d: Z_ii - mean_j Z_ji - (1 - 1/N).
Eigen::VectorXd rel_cdi_exact(const TransitionMatrix& relative, const Eigen::VectorXd& degrees);

struct AbelCheck {
  std::vector<double> z;
  std::vector<Eigen::VectorXd> partial;  // Abel means at each z
  Eigen::VectorXd extrapolated;          // Richardson limit z -> 1
};

/// Abel-summed relative CDI series sum_n z^n ([P^n]_ii - mean_j [P^n]_ji)
/// at z in {0.9, 0.99, 0.999}, extrapolated to z = 1. Cross-check only.
AbelCheck rel_cdi_abel(const TransitionMatrix& relative);

/// Absorbing random walk from agent i: at agent a the walk is absorbed with
/// probability N_p,a / (d_a + N_p,a), otherwise it moves to a uniform
/// neighbour (a reference absorbs it). Returns the mean number of returns.
/// max_steps == 0 picks 10 / a_min, a_min the smallest per-step absorption
/// probability over agents.
CdiReport cdi_random_walk(const Topology& topology, const PriorSpec& priors, const LinkModel& link, NodeId agent,
                          std::size_t n_walks, std::size_t max_steps, std::uint64_t seed, unsigned jobs = 1);

/// Delta_ii for every agent through the symmetric factorization of J
/// (band or dense). Suited to large lattices and snapshots.
Eigen::VectorXd cdi_by_factorization(const Topology& topology, const PriorSpec& priors, const LinkModel& link);

struct EnsembleStat {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  std::size_t resamples = 0;
};

/// Mean over snapshots of the agent-averaged CDI of gen_stochastic networks
/// with uniform priors n_p (gamma = 1). Disconnected snapshots are redrawn
/// and counted.
EnsembleStat expected_cdi_stochastic(double side_b, double intensity, double r_max, double n_p,
                                     std::size_t snapshots, std::uint64_t seed, unsigned jobs = 1);

/// Agent-averaged CDI of the count-matched lattice for the same parameters.
double matched_lattice_cdi(double side_b, double intensity, double r_max, double n_p);

}  // namespace netsync
