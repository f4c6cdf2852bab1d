#include "netsync/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>
#include <unordered_map>

#include "netsync/errors.hpp"
#include "netsync/rng.hpp"

namespace netsync {

namespace {

// Squared-distance test with a relative slack so that lattice distances equal
// to r_max (computed from scaled coordinates) stay inside the range.
bool within_range(double d2, double r2) { return d2 > 0.0 && d2 <= r2 * (1.0 + 1e-12); }

std::string to_str(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

void LinkModel::validate() const {
  if (n_rounds <= 0) throw InvalidArgument("link model: n_rounds must be positive");
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw InvalidArgument("link model: sigma2 must be positive");
}

std::vector<double> PriorSpec::n_p(const LinkModel& link) const {
  const double g = link.gamma();
  std::vector<double> out(xi_p.size());
  std::transform(xi_p.begin(), xi_p.end(), out.begin(), [g](double xi) { return xi / g; });
  return out;
}

Topology::Topology(std::vector<Position> positions, std::size_t n_agents, double r_max, std::optional<Rect> region)
    : positions_(std::move(positions)), n_agents_(n_agents), r_max_(r_max), region_(region) {
  if (n_agents_ > positions_.size()) throw InvalidArgument("topology: more agents than nodes");
  if (!(r_max_ >= 0.0) || !std::isfinite(r_max_)) throw InvalidArgument("topology: r_max must be finite and >= 0");
  for (const auto& p : positions_)
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw InvalidArgument("topology: non-finite position");
  build_adjacency();
}

void Topology::build_adjacency() {
  const std::size_t n = positions_.size();
  std::vector<std::vector<NodeId>> adj(n);
  if (n > 1 && r_max_ > 0.0) {
    double xmin = positions_[0].x, xmax = xmin, ymin = positions_[0].y, ymax = ymin;
    for (const auto& p : positions_) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
    // Cells no smaller than r_max; bounded count keeps the key space small.
    const double extent = std::max(xmax - xmin, ymax - ymin);
    const double cell = std::max(r_max_, extent / 4096.0);
    auto cell_of = [&](const Position& p) {
      return std::pair<std::int64_t, std::int64_t>{static_cast<std::int64_t>(std::floor((p.x - xmin) / cell)),
                                                   static_cast<std::int64_t>(std::floor((p.y - ymin) / cell))};
    };
    auto key = [](std::int64_t cx, std::int64_t cy) {
      return (static_cast<std::uint64_t>(cx + 1) << 32) ^ static_cast<std::uint64_t>(cy + 1);
    };
    std::unordered_map<std::uint64_t, std::vector<NodeId>> buckets;
    buckets.reserve(n);
    for (NodeId i = 0; i < n; ++i) {
      auto [cx, cy] = cell_of(positions_[i]);
      buckets[key(cx, cy)].push_back(i);
    }
    const double r2 = r_max_ * r_max_;
    for (NodeId i = 0; i < n; ++i) {
      auto [cx, cy] = cell_of(positions_[i]);
      for (std::int64_t dx = -1; dx <= 1; ++dx) {
        for (std::int64_t dy = -1; dy <= 1; ++dy) {
          auto it = buckets.find(key(cx + dx, cy + dy));
          if (it == buckets.end()) continue;
          for (NodeId j : it->second) {
            if (j <= i) continue;
            const double ex = positions_[i].x - positions_[j].x;
            const double ey = positions_[i].y - positions_[j].y;
            if (within_range(ex * ex + ey * ey, r2)) {
              adj[i].push_back(j);
              adj[j].push_back(i);
            }
          }
        }
      }
    }
  }
  offsets_.assign(n + 1, 0);
  neighbor_ids_.clear();
  for (NodeId i = 0; i < n; ++i) {
    std::sort(adj[i].begin(), adj[i].end());
    offsets_[i + 1] = offsets_[i] + adj[i].size();
  }
  neighbor_ids_.reserve(offsets_[n]);
  for (auto& list : adj) neighbor_ids_.insert(neighbor_ids_.end(), list.begin(), list.end());
}

std::span<const NodeId> Topology::neighbors(NodeId i) const {
  if (i >= positions_.size()) throw InvalidArgument("topology: node id out of range");
  return {neighbor_ids_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
}

bool Topology::has_edge(NodeId i, NodeId j) const {
  auto nb = neighbors(i);
  return std::binary_search(nb.begin(), nb.end(), j);
}

std::size_t Topology::agent_degree(NodeId i) const {
  auto nb = neighbors(i);
  // Neighbour lists are sorted and agents have the low ids.
  return static_cast<std::size_t>(std::lower_bound(nb.begin(), nb.end(), n_agents_) - nb.begin());
}

std::size_t Topology::reference_degree(NodeId i) const { return degree(i) - agent_degree(i); }

Topology Topology::promote_to_reference(NodeId k) const {
  if (k >= n_agents_) throw InvalidArgument("promote_to_reference: not an agent");
  std::vector<Position> pos;
  pos.reserve(positions_.size());
  for (NodeId i = 0; i < n_agents_; ++i)
    if (i != k) pos.push_back(positions_[i]);
  for (NodeId i = n_agents_; i < positions_.size(); ++i) pos.push_back(positions_[i]);
  pos.push_back(positions_[k]);
  Topology out(std::move(pos), n_agents_ - 1, r_max_, region_);
  out.metadata = metadata;
  return out;
}

// ---------------------------------------------------------------------------

Topology gen_lattice(double side_b, double spacing, double r_max) {
  if (!(side_b > 0.0) || !(spacing > 0.0)) throw InvalidArgument("gen_lattice: side_b and spacing must be positive");
  if (!(r_max > 0.0)) throw InvalidArgument("gen_lattice: r_max must be positive");
  const auto per_side = static_cast<std::size_t>(std::floor(side_b / spacing + 1e-9)) + 1;
  std::vector<Position> pos;
  pos.reserve(per_side * per_side);
  for (std::size_t ix = 0; ix < per_side; ++ix)
    for (std::size_t iy = 0; iy < per_side; ++iy)
      pos.push_back({static_cast<double>(ix) * spacing, static_cast<double>(iy) * spacing});
  const std::size_t n = pos.size();
  Topology t(std::move(pos), n, r_max, Rect{0.0, 0.0, side_b, side_b});
  t.metadata = {{"generator", "lattice"}, {"side_b", to_str(side_b)}, {"spacing", to_str(spacing)}};
  return t;
}

Topology gen_matched_lattice(double side_b, double intensity, double r_max) {
  if (!(side_b > 0.0) || !(intensity > 0.0)) throw InvalidArgument("gen_matched_lattice: side_b and intensity must be positive");
  if (!(r_max > 0.0)) throw InvalidArgument("gen_matched_lattice: r_max must be positive");
  const double spacing = 1.0 / std::sqrt(intensity);
  const auto per_side = static_cast<std::size_t>(std::llround(side_b / spacing));
  if (per_side == 0) throw InvalidArgument("gen_matched_lattice: region holds no lattice cell");
  std::vector<Position> pos;
  pos.reserve(per_side * per_side);
  for (std::size_t ix = 0; ix < per_side; ++ix)
    for (std::size_t iy = 0; iy < per_side; ++iy)
      pos.push_back({(static_cast<double>(ix) + 0.5) * spacing, (static_cast<double>(iy) + 0.5) * spacing});
  const std::size_t n = pos.size();
  Topology t(std::move(pos), n, r_max, Rect{0.0, 0.0, side_b, side_b});
  t.metadata = {{"generator", "matched_lattice"}, {"side_b", to_str(side_b)}, {"intensity", to_str(intensity)}};
  return t;
}

namespace {

Topology uniform_square(std::size_t n, double side, double r_max, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Position> pos(n);
  for (auto& p : pos) {
    p.x = side * uniform01(rng);
    p.y = side * uniform01(rng);
  }
  return Topology(std::move(pos), n, r_max, Rect{0.0, 0.0, side, side});
}

}  // namespace

Topology gen_stochastic(double side_b, double intensity, double r_max, std::uint64_t seed) {
  if (!(side_b > 0.0)) throw InvalidArgument("gen_stochastic: side_b must be positive");
  if (!(intensity > 0.0)) throw InvalidArgument("gen_stochastic: intensity must be positive");
  if (!(r_max > 0.0)) throw InvalidArgument("gen_stochastic: r_max must be positive");
  const auto n = static_cast<std::size_t>(std::llround(intensity * side_b * side_b));
  Topology t = uniform_square(n, side_b, r_max, seed);
  t.metadata = {{"generator", "stochastic"},
                {"side_b", to_str(side_b)},
                {"intensity", to_str(intensity)},
                {"seed", std::to_string(seed)}};
  return t;
}

double ScalingFamily::side(std::size_t n_agents) const {
  switch (mode) {
    case ScalingMode::Extended:
      if (!(intensity > 0.0)) throw InvalidArgument("extended family: intensity must be positive");
      return std::sqrt(static_cast<double>(n_agents) / intensity);
    case ScalingMode::Dense:
      if (!(area > 0.0)) throw InvalidArgument("dense family: area must be positive");
      return std::sqrt(area);
  }
  throw InvalidArgument("scaling family: invalid mode");
}

ScalingMode parse_scaling_mode(const std::string& s) {
  if (s == "dense") return ScalingMode::Dense;
  if (s == "extended") return ScalingMode::Extended;
  throw InvalidArgument("invalid scaling mode '" + s + "' (expected dense|extended)");
}

const char* to_string(ScalingMode m) { return m == ScalingMode::Dense ? "dense" : "extended"; }

Topology gen_scaling_family(const ScalingFamily& family, std::size_t n_agents, double r_max, std::uint64_t seed) {
  if (family.mode != ScalingMode::Dense && family.mode != ScalingMode::Extended)
    throw InvalidArgument("gen_scaling_family: invalid mode");
  if (n_agents == 0) throw InvalidArgument("gen_scaling_family: n_agents must be positive");
  if (!(r_max > 0.0)) throw InvalidArgument("gen_scaling_family: r_max must be positive");
  const double side = family.side(n_agents);
  Topology t = uniform_square(n_agents, side, r_max, seed);
  t.metadata = {{"generator", to_string(family.mode)},
                {"side_b", to_str(side)},
                {"intensity", to_str(static_cast<double>(n_agents) / (side * side))},
                {"seed", std::to_string(seed)}};
  return t;
}

PriorSpec assign_priors(const Topology& topology, const PriorScheme& scheme, const LinkModel& link) {
  link.validate();
  const std::size_t na = topology.num_agents();
  const double g = link.gamma();
  PriorSpec spec = PriorSpec::none(na);
  auto check_np = [](double n_p) {
    if (!(n_p >= 0.0) || !std::isfinite(n_p)) throw InvalidArgument("assign_priors: n_p must be finite and >= 0");
  };
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        check_np(s.n_p);
        if constexpr (std::is_same_v<S, UniformPriors>) {
          std::fill(spec.xi_p.begin(), spec.xi_p.end(), s.n_p * g);
        } else if constexpr (std::is_same_v<S, BernoulliPriors>) {
          if (!(s.p_a >= 0.0 && s.p_a <= 1.0)) throw InvalidArgument("assign_priors: p_a must lie in [0, 1]");
          Rng rng(s.seed);
          for (auto& xi : spec.xi_p) xi = uniform01(rng) < s.p_a ? s.n_p * g : 0.0;
        } else {
          for (NodeId i = 0; i < na; ++i)
            if (s.rect.contains(topology.position(i))) spec.xi_p[i] = s.n_p * g;
        }
      },
      scheme);
  return spec;
}

std::vector<std::size_t> component_labels(const Topology& topology) {
  const std::size_t n = topology.num_nodes();
  constexpr auto unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> label(n, unset);
  std::size_t next = 0;
  std::queue<NodeId> q;
  for (NodeId s = 0; s < n; ++s) {
    if (label[s] != unset) continue;
    label[s] = next;
    q.push(s);
    while (!q.empty()) {
      NodeId u = q.front();
      q.pop();
      for (NodeId v : topology.neighbors(u)) {
        if (label[v] == unset) {
          label[v] = next;
          q.push(v);
        }
      }
    }
    ++next;
  }
  return label;
}

bool is_connected(const Topology& topology) {
  if (topology.num_nodes() == 0) return false;
  auto labels = component_labels(topology);
  return std::all_of(labels.begin(), labels.end(), [](std::size_t l) { return l == 0; });
}

long gauss_circle_degree(double r_max) {
  if (!(r_max > 0.0) || !std::isfinite(r_max)) throw InvalidArgument("gauss_circle_degree: r_max must be positive");
  const auto r = static_cast<long>(std::floor(r_max));
  const double r2 = r_max * r_max;
  long sum = 0;
  for (long n = 1; n <= r; ++n) {
    const double rem = r2 - static_cast<double>(n * n);
    auto f = static_cast<long>(std::floor(std::sqrt(rem)));
    while (static_cast<double>((f + 1) * (f + 1)) <= rem) ++f;
    while (f > 0 && static_cast<double>(f * f) > rem) --f;
    sum += f;
  }
  return 1 + 4 * r + 4 * sum;
}

std::vector<NodeId> interior_agents(const Topology& topology) {
  if (!topology.region()) throw InvalidArgument("interior_agents: topology has no region");
  const Rect& reg = *topology.region();
  const double r = topology.r_max();
  // Same relative slack as the range test so lattice points at exactly r_max
  // from the boundary count as interior.
  const double tol = 1e-12 * std::max(1.0, r);
  std::vector<NodeId> out;
  for (NodeId i = 0; i < topology.num_agents(); ++i) {
    const auto& p = topology.position(i);
    const double dist = std::min({p.x - reg.x0, reg.x1 - p.x, p.y - reg.y0, reg.y1 - p.y});
    if (dist >= r - tol) out.push_back(i);
  }
  return out;
}

}  // namespace netsync
