#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <vector>

#include "netsync/fim.hpp"
#include "netsync/linalg.hpp"
#include "netsync/topology.hpp"

namespace netsync {

struct ClockState {
  std::vector<double> offsets;  // theta_i, agents only (references are 0)
  std::vector<double> skews;    // alpha_i
};

/// theta_i ~ N(0, 1/xi_P,i); agents without a prior draw from
/// uniform(-flat_half_width, flat_half_width).
ClockState draw_clock_state(const PriorSpec& priors, std::uint64_t seed, double flat_half_width = 1.0);

/// N observations tau = 2 (theta_to - theta_from) + nu, nu ~ N(0, 2 sigma^2).
/// `from` is the reference when the link has one, else the lower id.
struct LinkObservations {
  NodeId from = 0;
  NodeId to = 0;
  std::vector<double> tau;

  double mean() const;
};

struct MeasurementSet {
  std::vector<LinkObservations> links;
};

/// One entry per unordered link with at least one agent endpoint.
MeasurementSet simulate_measurements(const Topology& topology, const ClockState& clock, const LinkModel& link,
                                     std::uint64_t seed);

/// MAP (= MMSE) estimator for the linear-Gaussian model with zero-mean priors.
/// Factors J once; estimate() solves J theta = b.
class MapEstimator {
 public:
  MapEstimator(const Topology& topology, const PriorSpec& priors, const LinkModel& link);
  Eigen::VectorXd estimate(const MeasurementSet& m) const;
  const FimMatrix& fim() const noexcept { return fim_; }

 private:
  const Topology* topology_;
  double gamma_;
  FimMatrix fim_;
  std::unique_ptr<linalg::SpdSolver> solver_;
};

Eigen::VectorXd map_estimate(const Topology& topology, const PriorSpec& priors, const LinkModel& link,
                             const MeasurementSet& m);

struct RelativeEstimate {
  Eigen::VectorXd estimates;  // J^dagger b (zero mean)
  double t_star = 0.0;        // common shift aligning truth to the estimate
  double relative_mse = 0.0;  // ||theta + t* - theta_hat||^2
};

/// Minimum-norm least-squares estimator from agent-agent links.
class RelativeEstimator {
 public:
  RelativeEstimator(const Topology& topology, const LinkModel& link);
  RelativeEstimate estimate(const MeasurementSet& m, const std::vector<double>& true_offsets) const;

 private:
  const Topology* topology_;
  double gamma_;
  std::size_t ground_ = 0;
  std::unique_ptr<linalg::SpdSolver> solver_;
};

RelativeEstimate relative_estimate(const Topology& topology, const LinkModel& link, const MeasurementSet& m,
                                   const std::vector<double>& true_offsets);

struct TightnessReport {
  std::size_t trials = 0;
  Eigen::VectorXd aseb;
  Eigen::VectorXd mse;
  Eigen::VectorXd mse_stderr;
  Eigen::VectorXd mean_error;
  Eigen::VectorXd mean_error_stderr;
  bool has_relative = false;
  double trace_pinv = 0.0;
  double relative_mse = 0.0;
  double relative_mse_stderr = 0.0;
  /// Per-trial agent errors (trials x agents) when requested.
  Eigen::MatrixXd errors;
};

/// Monte Carlo comparison of the MAP and relative estimators with their
/// bounds. Trial t draws its clock and noise from seeds derived from (seed, t).
TightnessReport run_bound_tightness(const Topology& topology, const PriorSpec& priors, const LinkModel& link,
                                    std::size_t trials, std::uint64_t seed, unsigned jobs = 1,
                                    bool keep_errors = false);

}  // namespace netsync
