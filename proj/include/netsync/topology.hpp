#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace netsync {

using NodeId = std::size_t;

struct Position {
  double x = 0.0;
  double y = 0.0;
};

enum class NodeKind { Agent, Reference };

/// Axis-aligned rectangle [x0, x1] x [y0, y1].
struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
  bool contains(const Position& p) const noexcept {
    return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
  }
};

/// Two-way timing link parameters: N rounds with observation-noise variance
/// sigma^2. gamma = 2N/sigma^2 is the Fisher information carried by one link.
struct LinkModel {
  int n_rounds = 1;
  double sigma2 = 2.0;

  double gamma() const noexcept { return 2.0 * n_rounds / sigma2; }
  void validate() const;
  /// Link model with gamma == 1 (N = 1, sigma^2 = 2).
  static LinkModel unit() { return LinkModel{1, 2.0}; }
};

/// Per-agent prior Fisher information xi_P (1/s^2).
struct PriorSpec {
  std::vector<double> xi_p;

  /// Equivalent prior observations N_p = sigma^2 xi_P / (2N) = xi_P / gamma.
  std::vector<double> n_p(const LinkModel& link) const;
  static PriorSpec none(std::size_t n_agents) { return PriorSpec{std::vector<double>(n_agents, 0.0)}; }
};

/// Node set with a symmetric range-limited adjacency. Agents occupy ids
/// 0..n_agents-1, reference nodes n_agents..n_nodes-1. Edge (i, j) exists iff
/// 0 < |p_i - p_j| <= r_max.
class Topology {
 public:
  Topology() = default;
  Topology(std::vector<Position> positions, std::size_t n_agents, double r_max,
           std::optional<Rect> region = std::nullopt);

  std::size_t num_nodes() const noexcept { return positions_.size(); }
  std::size_t num_agents() const noexcept { return n_agents_; }
  std::size_t num_references() const noexcept { return positions_.size() - n_agents_; }
  bool is_agent(NodeId i) const noexcept { return i < n_agents_; }
  NodeKind kind(NodeId i) const noexcept { return is_agent(i) ? NodeKind::Agent : NodeKind::Reference; }

  double r_max() const noexcept { return r_max_; }
  const std::vector<Position>& positions() const noexcept { return positions_; }
  const Position& position(NodeId i) const { return positions_.at(i); }
  const std::optional<Rect>& region() const noexcept { return region_; }

  /// Sorted neighbour ids of node i.
  std::span<const NodeId> neighbors(NodeId i) const;
  bool has_edge(NodeId i, NodeId j) const;
  std::size_t degree(NodeId i) const { return neighbors(i).size(); }
  std::size_t agent_degree(NodeId i) const;      // d_A,i
  std::size_t reference_degree(NodeId i) const;  // d_R,i
  std::size_t num_edges() const noexcept { return neighbor_ids_.size() / 2; }

  /// Generator provenance carried into the CSV header block.
  std::map<std::string, std::string> metadata;

  /// Copy of this topology where agent k becomes a reference node. Agents
  /// after k shift down by one; the former agent is appended as the last
  /// reference.
  Topology promote_to_reference(NodeId k) const;

 private:
  void build_adjacency();

  std::vector<Position> positions_;
  std::size_t n_agents_ = 0;
  double r_max_ = 0.0;
  std::optional<Rect> region_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> neighbor_ids_;
};

// ---------------------------------------------------------------------------
// Generators

/// Every integer-multiple-of-spacing point in [0, side_b]^2 becomes an agent.
Topology gen_lattice(double side_b, double spacing, double r_max);

/// Lattice with the node count of a binomial process of the given intensity:
/// round(intensity * side_b^2) points at cell centres of a square grid with
/// spacing 1/sqrt(intensity). This is the minimax-matched comparison lattice
/// for gen_stochastic(side_b, intensity, r_max, .).
Topology gen_matched_lattice(double side_b, double intensity, double r_max);

/// round(intensity * side_b^2) agents placed i.i.d. uniform on [0, side_b]^2.
Topology gen_stochastic(double side_b, double intensity, double r_max, std::uint64_t seed);

enum class ScalingMode { Dense, Extended };

/// Extended: area = n_agents / intensity (intensity fixed).
/// Dense: area fixed, intensity = n_agents / area.
struct ScalingFamily {
  ScalingMode mode = ScalingMode::Extended;
  double intensity = 0.01;  // used by Extended
  double area = 10000.0;    // used by Dense

  static ScalingFamily extended(double intensity) { return {ScalingMode::Extended, intensity, 0.0}; }
  static ScalingFamily dense(double area) { return {ScalingMode::Dense, 0.0, area}; }
  double side(std::size_t n_agents) const;
};

ScalingMode parse_scaling_mode(const std::string& s);
const char* to_string(ScalingMode m);

Topology gen_scaling_family(const ScalingFamily& family, std::size_t n_agents, double r_max, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Priors

struct UniformPriors {
  double n_p = 0.0;
};
struct BernoulliPriors {
  double p_a = 1.0;
  double n_p = 0.0;
  std::uint64_t seed = 0;
};
struct RegionPriors {
  Rect rect;
  double n_p = 0.0;
};
using PriorScheme = std::variant<UniformPriors, BernoulliPriors, RegionPriors>;

/// Converts the scheme's equivalent-observation counts into xi_P = N_p * gamma.
PriorSpec assign_priors(const Topology& topology, const PriorScheme& scheme, const LinkModel& link);

// ---------------------------------------------------------------------------
// Connectivity and lattice geometry

/// True iff the agent+reference graph has exactly one component.
bool is_connected(const Topology& topology);

/// Connected-component label for every node (labels are dense from 0).
std::vector<std::size_t> component_labels(const Topology& topology);

/// Gauss circle count 1 + 4 floor(R) + 4 sum_{n=1}^{floor R} floor(sqrt(R^2 - n^2)).
/// Counts the origin, so a lattice node's neighbour count is this minus one.
long gauss_circle_degree(double r_max);

/// Agents at distance >= r_max from the boundary of the topology's region.
std::vector<NodeId> interior_agents(const Topology& topology);

}  // namespace netsync
